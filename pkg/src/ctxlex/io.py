"""Plain-text artifacts: sparse coordinate matrices, TSV tables, traces."""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp

from .extraction import FOPair, PairOccurrence


def _fmt(x: float) -> str:
    return repr(float(x))


def write_coo(path: str | Path, M) -> None:
    """``# shape rows cols`` header, then one ``row<TAB>col<TAB>value`` line per stored entry."""
    C = sp.coo_matrix(M)
    order = np.lexsort((C.col, C.row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# shape {C.shape[0]} {C.shape[1]}\n")
        for k in order:
            fh.write(f"{C.row[k]}\t{C.col[k]}\t{_fmt(C.data[k])}\n")


def read_coo(path: str | Path) -> sp.csr_matrix:
    rows, cols, vals, shape = [], [], [], None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                parts = line[1:].split()
                if parts and parts[0] == "shape":
                    shape = (int(parts[1]), int(parts[2]))
                continue
            r, c, v = line.split("\t")
            rows.append(int(r))
            cols.append(int(c))
            vals.append(float(v))
    if shape is None:
        raise ValueError(f"{path}: missing '# shape rows cols' header")
    return sp.csr_matrix((vals, (rows, cols)), shape=shape)


def write_dense(path: str | Path, X: np.ndarray, header: Sequence[str] = ("positive", "negative")) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\t".join(header) + "\n")
        for row in np.atleast_2d(X):
            fh.write("\t".join(_fmt(v) for v in row) + "\n")


def read_dense(path: str | Path) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        next(fh)
        rows = [[float(v) for v in line.split("\t")] for line in fh if line.strip()]
    return np.array(rows, dtype=np.float64).reshape(-1, 2)


def _writer(fh):
    return csv.writer(fh, delimiter="\t", lineterminator="\n", quoting=csv.QUOTE_MINIMAL)


def _rows(path: str | Path) -> list[list[str]]:
    with open(path, encoding="utf-8", newline="") as fh:
        return [r for r in csv.reader(fh, delimiter="\t") if r and not r[0].startswith("#")]


def write_pairs(path: str | Path, pairs: Iterable[FOPair]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = _writer(fh)
        w.writerow(["pair_id", "feature", "opinion", "cor"])
        for p in pairs:
            w.writerow([p.pair_id, p.feature, p.opinion, _fmt(p.cor)])


def read_pairs(path: str | Path) -> list[FOPair]:
    rows = _rows(path)[1:]
    return [FOPair(int(r[0]), r[1], r[2], float(r[3])) for r in rows]


_OCC_FIELDS = ("pair_id", "review_index", "review_id", "subsentence", "sentence", "feature_begin",
               "feature_end", "opinion_begin", "opinion_end", "negated")


def write_occurrences(path: str | Path, occurrences: Iterable[PairOccurrence]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = _writer(fh)
        w.writerow(_OCC_FIELDS)
        for o in occurrences:
            w.writerow([getattr(o, f) if f != "negated" else int(o.negated) for f in _OCC_FIELDS])


def read_occurrences(path: str | Path) -> list[PairOccurrence]:
    out = []
    for r in _rows(path)[1:]:
        vals = dict(zip(_OCC_FIELDS, r))
        out.append(PairOccurrence(
            int(vals["pair_id"]), int(vals["review_index"]), vals["review_id"], int(vals["subsentence"]),
            int(vals["sentence"]), int(vals["feature_begin"]), int(vals["feature_end"]),
            int(vals["opinion_begin"]), int(vals["opinion_end"]), vals["negated"] == "1"))
    return out


def write_labels(path: str | Path, ids: Sequence[str], labels: Sequence[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = _writer(fh)
        w.writerow(["review_id", "label"])
        w.writerows(zip(ids, labels))


def read_labels(path: str | Path) -> dict[str, str]:
    rows = _rows(path)
    if rows and rows[0] == ["review_id", "label"]:
        rows = rows[1:]
    out = {}
    for r in rows:
        if r[1] not in ("positive", "negative"):
            raise ValueError(f"{path}: label must be positive or negative, got {r[1]!r}")
        out[r[0]] = r[1]
    return out


def write_lexicon(path: str | Path, pairs: Sequence[FOPair], scores: np.ndarray, labels: Sequence[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = _writer(fh)
        w.writerow(["pair_id", "feature", "opinion", "score", "label"])
        for p in pairs:
            w.writerow([p.pair_id, p.feature, p.opinion, f"{scores[p.pair_id]:.12g}", labels[p.pair_id]])


def write_labeled_lexicon(path: str | Path, entries: Mapping[tuple[str, str], str]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = _writer(fh)
        w.writerow(["feature", "opinion", "label"])
        for (f, o), label in sorted(entries.items()):
            w.writerow([f, o, label])


def read_labeled_lexicon(path: str | Path) -> dict[tuple[str, str], str]:
    """(feature, opinion, label) rows; a ``pair_id feature opinion score label`` lexicon also reads."""
    rows = _rows(path)
    if not rows:
        return {}
    header = rows[0]
    if "feature" in header and "label" in header:
        fi, oi, li = header.index("feature"), header.index("opinion"), header.index("label")
        rows = rows[1:]
    else:
        fi, oi, li = 0, 1, 2
    out = {}
    for r in rows:
        key = (r[fi], r[oi])
        if key in out:
            raise ValueError(f"{path}: duplicate entry {key}")
        if r[li] not in ("positive", "negative"):
            raise ValueError(f"{path}: label must be positive or negative, got {r[li]!r}")
        out[key] = r[li]
    return out


def write_trace(path: str | Path, trace: Sequence[float]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("iteration,objective\n")
        for i, v in enumerate(trace):
            fh.write(f"{i},{_fmt(v)}\n")


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([f"{v:.6f}" if isinstance(v, float) else v for v in r])
