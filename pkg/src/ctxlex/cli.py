"""Command-line entry point.

Every config key can be given as ``--key value`` on any stage command and
beats the config file. Exit status: 0 success, 1 runtime failure, 2 usage
or configuration error.
"""

from __future__ import annotations

import functools
import logging
import sys
from dataclasses import fields
from pathlib import Path

import click

from . import kernels, pipeline
from .config import ENV_VAR, KEYS, ConfigError, load_config
from .synthgen import SyntheticSpec, generate, spec_from_dict

EXIT_RUNTIME = 1
EXIT_USAGE = 2


def config_options(fn):
    """Attach ``--config`` plus one override option per config key."""
    for key in reversed(KEYS):
        names = [f"--{key}"]
        if "_" in key:
            names.append(f"--{key.replace('_', '-')}")
        fn = click.option(*names, key, default=None, metavar="VALUE", help=f"override config '{key}'")(fn)
    fn = click.option("--config", "-c", "config_path", type=click.Path(dir_okay=False), envvar=ENV_VAR,
                      help=f"config file (default: ${ENV_VAR})")(fn)

    @functools.wraps(fn)
    def wrapper(config_path, **kwargs):
        overrides = {k: kwargs.pop(k) for k in KEYS}
        cfg = load_config(config_path, overrides)
        return fn(cfg, **kwargs)

    return wrapper


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("-v", "--verbose", count=True, help="more logging (repeatable)")
def cli(verbose: int) -> None:
    """Build a contextual feature-opinion sentiment lexicon from reviews."""
    level = logging.WARNING - 10 * min(verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    logging.getLogger(__name__).debug("kernel backend: %s", kernels.backend())


@cli.command()
@config_options
def stats(cfg):
    """Rating statistics report."""
    click.echo(pipeline.run_stats(cfg))


@cli.command()
@config_options
def classify(cfg):
    """Review-level sentiment labels."""
    click.echo(pipeline.run_classify(cfg))


@cli.command()
@config_options
def extract(cfg):
    """Features, feature-opinion pairs, occurrences and the review-pair matrix."""
    click.echo(pipeline.run_extract(cfg))


@cli.command()
@config_options
@click.option("--matrices", type=click.Path(file_okay=False, exists=True), default=None,
              help="solve from matrix dumps in this directory instead of rebuilding them")
def solve(cfg, matrices):
    """Label every pair; writes lexicon.tsv and trace.csv."""
    click.echo(pipeline.run_solve(cfg, matrices=Path(matrices) if matrices else None))


@cli.command(name="eval")
@config_options
@click.option("--knockout", is_flag=True, help="also run the one-lambda-off table")
@click.option("--sweep", default=None, metavar="GRID", help="lambda grid, e.g. 'lambda1=1,2,4,8;lambda2=1,2'")
@click.option("--sweep-mode", type=click.Choice(["one-at-a-time", "cartesian"]), default="one-at-a-time")
def evaluate(cfg, knockout, sweep, sweep_mode):
    """Score the lexicon and review labelling against gold/pool/annotation files."""
    for p in pipeline.run_eval(cfg, knockout=knockout, sweep=sweep, sweep_mode=sweep_mode):
        click.echo(p)


@cli.command(name="pipeline")
@config_options
def run_all(cfg):
    """stats, classify, extract, solve, then eval when gold or annotations are configured."""
    click.echo(pipeline.run_pipeline(cfg))


_SPEC_FIELDS = [f.name for f in fields(SyntheticSpec)]


def _synth_options(fn):
    for name in reversed(_SPEC_FIELDS):
        names = dict.fromkeys([f"--{name.replace('_', '-')}", f"--{name}"])
        fn = click.option(*names, name, default=None, metavar="VALUE")(fn)
    return fn


@cli.command()
@click.option("--out", "-o", "outdir", required=True, type=click.Path(file_okay=False), help="bundle directory")
@_synth_options
def synth(outdir, **values):
    """Write a synthetic bundle with planted pair polarities and a ready config."""
    try:
        spec = spec_from_dict({k: v for k, v in values.items() if v is not None})
        spec.validate()
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None
    for p in generate(spec, outdir):
        click.echo(p)


def main(argv: list[str] | None = None) -> None:
    try:
        code = cli.main(args=argv, prog_name="ctxlex", standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        code = exc.exit_code
    except click.Abort:
        click.echo("aborted", err=True)
        code = EXIT_RUNTIME
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        code = EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - every other failure is a runtime error
        logging.getLogger(__name__).debug("failure", exc_info=True)
        click.echo(f"error: {exc}", err=True)
        code = EXIT_RUNTIME
    sys.exit(code or 0)


if __name__ == "__main__":
    main()
