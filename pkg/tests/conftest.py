import time

import numpy as np
import pytest

from ctxlex.config import load_config
from ctxlex.synthgen import CONFIG_NAME, SyntheticSpec, generate

SUITE_BUDGET_S = 180.0
_results: list[tuple[str, bool, str]] = []
_started = time.perf_counter()


def record(name: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
    _results.append((name, ok, detail))
    print(line)


@pytest.fixture
def acceptance():
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    elapsed = time.perf_counter() - _started
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for name, ok, detail in _results:
        tr.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    ok = elapsed < SUITE_BUDGET_S
    tr.write_line(f"[{'PASS' if ok else 'FAIL'}] full suite runtime: {elapsed:.1f} s (budget {SUITE_BUDGET_S:.0f} s)")


def pytest_sessionfinish(session, exitstatus):
    if _results and time.perf_counter() - _started >= SUITE_BUDGET_S and exitstatus == 0:
        session.exitstatus = 1


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def small_bundle(tmp_path_factory):
    """A small synthetic bundle directory, generated once per session."""
    out = tmp_path_factory.mktemp("bundle")
    generate(SyntheticSpec(n_pairs=16, n_reviews=120, seed=3), out)
    return out


@pytest.fixture
def bundle_config(small_bundle, tmp_path):
    """Config for the shared bundle, writing into a fresh output directory."""
    return load_config(small_bundle / CONFIG_NAME, {"output": str(tmp_path / "out")})
