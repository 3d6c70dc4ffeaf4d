"""Command-line front end: ``specmeas sample | verify | ldp``.

Every output file embeds the run configuration and the package version, and
the same seed reproduces the same file.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 statistical failure.
"""

import argparse
import json
import logging
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from . import __version__
from .exceptions import ConfigError, SpecmeasError, StatisticalFailure
from .ldp import DEFAULT_GRID_SIZE, TestFunction, mc_tail
from .matrix_models import sample_dual_spectral, sample_haar_spectral
from .measures import project_R
from .samplers import FAMILIES, EnsembleSpec, sample_ensemble
from .stats import DEFAULT_ALPHA
from .suites import SUITES, SuiteConfig, run_suite

logger = logging.getLogger(__name__)

MATRIX_ROUTES = ("cue-matrix", "unif2")
ENSEMBLES = FAMILIES + MATRIX_ROUTES
FORMATS = ("json", "csv")
SAMPLE_CSV_COLUMNS = ["draw", "atom", "position", "weight"]
LDP_CSV_COLUMNS = ["inv_N", "estimate"]


@dataclass(frozen=True)
class RunConfig:
    """Validated command-line configuration; ``to_dict`` is the config echo."""

    command: str
    seed: int
    out: Optional[str] = None
    format: str = "json"
    ensemble: Optional[str] = None
    n: Optional[int] = None
    n_list: Optional[Tuple[int, ...]] = None
    beta: float = 2.0
    a: Optional[float] = None
    b: Optional[float] = None
    case: Optional[int] = None
    samples: int = 1
    suite: Optional[str] = None
    alpha: float = DEFAULT_ALPHA
    negative_control: bool = False
    x: Optional[float] = None
    test_function: str = "re"
    grid_size: int = DEFAULT_GRID_SIZE

    def __post_init__(self):
        if self.seed is None:
            raise ConfigError("--seed is required")
        if self.format not in FORMATS:
            raise ConfigError(f"--format must be one of {FORMATS}, got {self.format!r}")
        if self.samples < 1:
            raise ConfigError(f"--samples must be positive, got {self.samples}")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError(f"--alpha must lie in (0, 1), got {self.alpha}")
        if self.command in ("sample", "verify") and self.n is None:
            raise ConfigError(f"{self.command} needs --n")
        if self.command == "verify" and self.suite not in SUITES:
            raise ConfigError(
                f"unknown suite {self.suite!r}; expected one of {sorted(SUITES)}"
            )
        if self.command == "ldp":
            if not self.n_list:
                raise ConfigError("ldp needs --n-list")
            if self.x is None:
                raise ConfigError("ldp needs --x")
            if self.ensemble in MATRIX_ROUTES:
                raise ConfigError(f"ldp does not support {self.ensemble!r}")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        n_list = None
        if getattr(args, "n_list", None):
            try:
                n_list = tuple(int(v) for v in args.n_list.split(","))
            except ValueError:
                raise ConfigError(
                    f"--n-list must be comma-separated integers, got {args.n_list!r}"
                ) from None
        a = args.a
        if getattr(args, "weight_shape", None) is not None:
            a = args.weight_shape
        return cls(
            command=args.command,
            seed=args.seed,
            out=args.out,
            format=args.format,
            ensemble=getattr(args, "ensemble", None),
            n=args.n,
            n_list=n_list,
            beta=args.beta,
            a=a,
            b=args.b,
            case=args.case,
            samples=args.samples,
            suite=getattr(args, "suite", None),
            alpha=args.alpha,
            negative_control=getattr(args, "negative_control", False),
            x=getattr(args, "x", None),
            test_function=getattr(args, "test_function", "re"),
            grid_size=args.grid_size,
        )

    def ensemble_spec(self, N: Optional[int] = None) -> EnsembleSpec:
        return EnsembleSpec(
            self.ensemble, N or self.n, self.beta, self.a, self.b, self.case
        )

    def to_dict(self):
        record = asdict(self)
        if self.n_list is not None:
            record["n_list"] = list(self.n_list)
        return record


def parse_test_function(text: str, grid_size: int = DEFAULT_GRID_SIZE) -> TestFunction:
    """Test function from its command-line name.

    ``re`` is ``cos theta``, ``cosK`` is ``cos(K theta)``, ``x`` is the
    pullback of the identity on [0, 1] and ``poly:a0,a1,...`` the pullback of
    ``sum a_k x**k``.
    """
    if text == "re":
        return TestFunction.real_part(grid_size=grid_size)
    if text.startswith("cos") and text[3:].isdigit():
        return TestFunction.cosine(int(text[3:]), grid_size=grid_size)
    if text == "x":
        return TestFunction.pullback_polynomial(
            [0.0, 1.0], name="x", grid_size=grid_size
        )
    if text.startswith("poly:"):
        try:
            coefficients = [float(v) for v in text[5:].split(",")]
        except ValueError:
            raise ConfigError(f"bad polynomial coefficients in {text!r}") from None
        return TestFunction.pullback_polynomial(coefficients, text, grid_size=grid_size)
    raise ConfigError(
        f"unknown test function {text!r}; expected re, cosK, x or poly:a0,a1,..."
    )


def _header(config):
    return {"config": config.to_dict(), "version": __version__}


def _write(config, text):
    if config.out is None:
        sys.stdout.write(text)
        return
    path = Path(config.out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    logger.info("wrote %s", path)


def _write_json(config, payload):
    _write(config, json.dumps({**_header(config), **payload}, indent=2) + "\n")


def _write_csv(config, frame):
    header = f"# {json.dumps(_header(config), sort_keys=True)}\n"
    _write(config, header + frame.to_csv(index=False))


def _draw(rng, config):
    if config.ensemble == "cue-matrix":
        return {"measure": sample_haar_spectral(rng, config.n).to_dict()}
    if config.ensemble == "unif2":
        measure = sample_dual_spectral(rng, config.n)
        return {
            "measure": measure.to_dict(),
            "projected": project_R(measure).to_dict(),
        }
    return sample_ensemble(rng, config.ensemble_spec()).to_dict()


def _atom_rows(draw, measure):
    positions = measure.get("angles", measure.get("points"))
    return [
        (draw, i, position, weight)
        for i, (position, weight) in enumerate(zip(positions, measure["weights"]))
    ]


def cmd_sample(config: RunConfig) -> int:
    """Write one record per draw of the configured ensemble."""
    rng = np.random.default_rng(config.seed)
    records = [_draw(rng, config) for _ in range(config.samples)]
    logger.info("sampled %d draws of %s", len(records), config.ensemble)
    if config.format == "json":
        _write_json(config, {"records": records})
        return 0
    if any("measure" not in record for record in records):
        raise ConfigError(f"{config.ensemble} draws have no atoms to write as csv")
    rows = [row for i, r in enumerate(records) for row in _atom_rows(i, r["measure"])]
    _write_csv(config, pd.DataFrame(rows, columns=SAMPLE_CSV_COLUMNS))
    return 0


def cmd_verify(config: RunConfig) -> int:
    """Run a named suite and write its reports.

    Raises
    ------
    StatisticalFailure
        After the reports are written, if any test failed.
    """
    rng = np.random.default_rng(config.seed)
    suite_config = SuiteConfig(config.n, config.samples, config.negative_control)
    report = run_suite(config.suite, rng, suite_config, config.alpha)
    if config.format == "json":
        _write_json(config, report.to_dict())
    else:
        frame = pd.DataFrame([r.to_dict() for r in report.reports])
        _write_csv(config, frame)
    if not report.passed:
        failed = sum(not r.passed for r in report.reports)
        raise StatisticalFailure(
            f"suite {config.suite}: {failed} of {len(report.reports)} tests failed"
        )
    return 0


def cmd_ldp(config: RunConfig) -> int:
    """Monte Carlo tail estimates over ``--n-list`` with the fitted rate."""
    rng = np.random.default_rng(config.seed)
    f = parse_test_function(config.test_function, config.grid_size)
    estimate = mc_tail(
        rng,
        config.ensemble_spec(config.n_list[0]),
        f,
        config.x,
        config.n_list,
        config.samples,
        seed=config.seed,
    )
    if config.format == "json":
        _write_json(
            config,
            {"records": estimate.to_records(), "summary": estimate.summary()},
        )
    else:
        _write_csv(config, estimate.to_frame()[LDP_CSV_COLUMNS])
    return 0


COMMANDS = {"sample": cmd_sample, "verify": cmd_verify, "ldp": cmd_ldp}


def _add_common(parser):
    parser.add_argument("--seed", type=int, required=True)
    parser.add_argument("--out", help="output file (default: stdout)")
    parser.add_argument("--format", choices=FORMATS, default="json")
    parser.add_argument("--samples", type=int, default=1)
    parser.add_argument("--n", type=int)
    parser.add_argument("--beta", type=float, default=2.0)
    parser.add_argument("--a", type=float)
    parser.add_argument("--b", type=float)
    parser.add_argument("--case", type=int, choices=(1, 2, 3, 4))
    parser.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    parser.add_argument("--grid-size", type=int, default=DEFAULT_GRID_SIZE)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specmeas",
        description="Random moment problems and spectral measures of random matrices.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="count", default=0)
    verbosity.add_argument("-q", "--quiet", action="store_true")
    commands = parser.add_subparsers(dest="command", required=True)

    sample = commands.add_parser("sample", help="draw random spectral measures")
    sample.add_argument("--ensemble", choices=ENSEMBLES, required=True)
    _add_common(sample)

    verify = commands.add_parser("verify", help="run a statistical suite")
    verify.add_argument("--suite", choices=sorted(SUITES), required=True)
    verify.add_argument(
        "--negative-control",
        action="store_true",
        help="sample a deliberately wrong law; the suite is expected to fail",
    )
    _add_common(verify)

    ldp = commands.add_parser("ldp", help="estimate a large-deviation rate")
    ldp.add_argument("--ensemble", choices=FAMILIES, required=True)
    ldp.add_argument("--n-list", required=True, help="comma-separated sizes")
    ldp.add_argument("--x", type=float, required=True, help="threshold")
    ldp.add_argument("--test-function", default="re")
    ldp.add_argument("--weight-shape", type=float, help="dirichlet weight a")
    _add_common(ldp)
    return parser


def _log_level(args):
    if args.quiet:
        return logging.ERROR
    return {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=_log_level(args), format="%(levelname)s %(name)s: %(message)s"
    )
    try:
        config = RunConfig.from_args(args)
        return COMMANDS[config.command](config)
    except SpecmeasError as exc:
        logger.error("%s", exc)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
