"""
polylog-lipschitz: command-line entry point

Usage:
    polylog-lipschitz appell --desc bernoulli --max 6 --emit r-poly
    polylog-lipschitz eval --fn delta --n -1 --q 0.5
    polylog-lipschitz verify --suite classical-lipschitz --k 2..6 --z i --tol 1e-8
    polylog-lipschitz verify --suite congruences --max-n 14
    polylog-lipschitz formal-group --order 6 --bernoulli 8 --specialize classical
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .appell import (
    AppellDescriptor,
    appell_polys,
    get_descriptor,
    load_registry,
    phi_vector,
    r_table,
)
from .commons import (
    TOLERANCE_ENV_VAR,
    ConfigError,
    PolylogLipschitzError,
    default_tolerance,
    format_rational,
    parse_complex,
    parse_int_range,
    setup_logging,
)
from .formal_group import (
    MAX_BERNOULLI,
    build_formal_group,
    check_law_axioms,
    classical_values,
    descriptor_exponential,
    group_law,
    specialization_from_exponential,
    specialized_bernoulli,
    universal_bernoulli,
)
from .reports import FORMATS, summarize, write_records
from .suites import (
    DEFAULT_BOUNDARY_X,
    SUITE_TOLERANCES,
    SUITES,
    SuiteOptions,
    eval_tasks,
    parse_grid,
    run_suite,
    run_tasks,
)

COMMANDS = ("appell", "eval", "verify", "formal-group")
EMIT_CHOICES = ("polys", "phi", "r-poly", "all")
FN_CHOICES = ("delta", "extended")
REPORT_EXTENSIONS = {"json": "jsonl", "csv": "csv", "pretty": "txt"}

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2


@dataclass(frozen=True)
class RunConfig:
    command: str
    descriptor: str = "bernoulli"
    n_values: Tuple[int, ...] = ()
    grid: Tuple[complex, ...] = ()
    K: Optional[int] = None
    tolerance: Optional[float] = None
    fmt: str = "json"
    out: Optional[str] = None
    jobs: int = 1
    registry: Optional[str] = None
    # appell
    max_degree: int = 6
    emit: str = "all"
    # eval
    fn: str = "delta"
    # verify
    suite: str = "all"
    k_values: Tuple[int, ...] = (2, 3, 4, 5, 6)
    x_values: Tuple[float, ...] = ()
    epsilon: float = 1e-3
    max_n: int = MAX_BERNOULLI
    # formal-group
    order: int = 6
    bernoulli: Optional[int] = None
    specialize: Optional[str] = None
    law: bool = False

    def validate(self, registry: Dict[str, AppellDescriptor]) -> "RunConfig":
        if self.command not in COMMANDS:
            raise ConfigError(f"Unknown command '{self.command}'")
        if self.fmt not in FORMATS:
            raise ConfigError(f"Unknown format '{self.fmt}' (expected one of {', '.join(FORMATS)})")
        if self.tolerance is not None and not self.tolerance > 0:
            raise ConfigError(f"Tolerance must be positive, got {self.tolerance}")
        if self.K is not None and self.K < 1:
            raise ConfigError(f"K must be >= 1, got {self.K}")
        if self.jobs < 1:
            raise ConfigError(f"--jobs must be >= 1, got {self.jobs}")
        descriptor = get_descriptor(self.descriptor, registry)

        if self.command == "appell":
            if not 0 <= self.max_degree <= descriptor.max_degree:
                raise ConfigError(
                    f"--max {self.max_degree} outside 0..{descriptor.max_degree} for '{descriptor.label}'"
                )
            if self.emit not in EMIT_CHOICES:
                raise ConfigError(f"Unknown --emit '{self.emit}'")
        elif self.command == "eval":
            if self.fn not in FN_CHOICES:
                raise ConfigError(f"Unknown --fn '{self.fn}'")
            if not self.n_values:
                raise ConfigError("eval needs --n")
            if not self.grid:
                raise ConfigError("eval needs a non-empty --q or --grid")
        elif self.command == "verify":
            if self.suite not in SUITES + ("all",):
                raise ConfigError(f"Unknown suite '{self.suite}' (expected one of {', '.join(SUITES)}, all)")
            if any(k < 2 for k in self.k_values):
                raise ConfigError(f"--k values must be >= 2, got {list(self.k_values)}")
            if not 2 <= self.max_n <= MAX_BERNOULLI:
                raise ConfigError(f"--max-n must be in 2..{MAX_BERNOULLI}, got {self.max_n}")
            if not 0 < self.epsilon <= 0.1:
                raise ConfigError(f"--epsilon must be in (0, 0.1], got {self.epsilon}")
            if any(not 0 < x < 1 for x in self.x_values):
                raise ConfigError(f"--x values must lie in (0, 1), got {list(self.x_values)}")
        elif self.command == "formal-group":
            if not 2 <= self.order <= 16:
                raise ConfigError(f"--order must be in 2..16, got {self.order}")
            if self.bernoulli is not None and not 0 <= self.bernoulli <= MAX_BERNOULLI:
                raise ConfigError(f"--bernoulli must be in 0..{MAX_BERNOULLI}, got {self.bernoulli}")
            if self.specialize not in (None, "classical"):
                get_descriptor(self.specialize, registry)
        return self

    def resolved_tolerance(self, suite: Optional[str] = None) -> float:
        """--tol, then the environment variable, then the suite default."""
        if self.tolerance is not None:
            return self.tolerance
        if os.environ.get(TOLERANCE_ENV_VAR, "").strip():
            return default_tolerance()
        if suite is not None and SUITE_TOLERANCES.get(suite):
            return SUITE_TOLERANCES[suite]
        return default_tolerance()

    def report_path(self, suite: str) -> Path:
        if self.out:
            return Path(self.out)
        return Path("reports") / f"verify_{suite}.{REPORT_EXTENSIONS[self.fmt]}"


def _parse_list(spec: Optional[str], parse) -> Tuple:
    if spec is None:
        return ()
    values = tuple(parse(part) for part in str(spec).split(",") if part.strip())
    if not values:
        raise ConfigError(f"Empty value list '{spec}'")
    return values


def _parse_float(text: str) -> float:
    try:
        return float(text)
    except ValueError as e:
        raise ConfigError(f"Invalid number '{text}'") from e


def config_from_args(args: argparse.Namespace) -> RunConfig:
    command = args.command
    n_values = tuple(parse_int_range(args.n)) if getattr(args, "n", None) is not None else ()
    if getattr(args, "n", None) is not None and not n_values:
        raise ConfigError(f"Empty n range '{args.n}'")

    grid: Tuple[complex, ...] = ()
    if getattr(args, "q", None) is not None:
        grid += _parse_list(args.q, parse_complex)
    if getattr(args, "z", None) is not None:
        grid += _parse_list(args.z, parse_complex)
    if getattr(args, "tau", None) is not None:
        grid += _parse_list(args.tau, parse_complex)
    if getattr(args, "grid", None) is not None:
        grid += tuple(parse_grid(args.grid))

    fields = dict(
        command=command,
        descriptor=args.desc,
        n_values=n_values,
        grid=grid,
        K=getattr(args, "K", None),
        tolerance=args.tol,
        fmt=args.format,
        out=args.out,
        jobs=args.jobs,
        registry=args.registry,
    )
    if command == "appell":
        fields.update(max_degree=args.max, emit=args.emit)
    elif command == "eval":
        fields.update(fn=args.fn)
    elif command == "verify":
        fields.update(
            suite=args.suite,
            k_values=tuple(parse_int_range(args.k)),
            x_values=_parse_list(args.x, _parse_float),
            epsilon=args.epsilon,
            max_n=args.max_n,
        )
    elif command == "formal-group":
        fields.update(
            order=args.order, bernoulli=args.bernoulli, specialize=args.specialize, law=args.law
        )
    return RunConfig(**fields)


# commands


def cmd_appell(config: RunConfig, registry: Dict[str, AppellDescriptor]) -> int:
    """Appell polynomials, φ vector with its parity class, and the R_n table."""
    descriptor = get_descriptor(config.descriptor, registry)
    n = config.max_degree
    rows: List[dict] = []
    if config.emit in ("polys", "all"):
        for k, p in enumerate(appell_polys(descriptor, n)):
            rows.append(
                {"kind": "appell", "n": k, "polynomial": str(p), "coefficients": p.to_json()}
            )
    if config.emit in ("phi", "all"):
        phi = phi_vector(descriptor, n)
        for j, value in enumerate(phi.values, start=1):
            rows.append(
                {"kind": "phi", "n": j, "value": format_rational(value), "parity_class": phi.parity_class}
            )
    if config.emit in ("r-poly", "all"):
        for k, p in enumerate(r_table(descriptor, n), start=1):
            rows.append({"kind": "r-poly", "n": k, "polynomial": str(p), "coefficients": p.to_json()})
    write_records(rows, config.fmt, config.out)
    logging.info(f"appell: {len(rows)} row(s) for '{descriptor.label}' up to degree {n}")
    return EXIT_OK


def cmd_eval(config: RunConfig, registry: Dict[str, AppellDescriptor]) -> int:
    """Evaluate δ_n or Δ_n over the grid; excluded points become rows with an error."""
    descriptor = get_descriptor(config.descriptor, registry)
    tasks = eval_tasks(config.fn, config.n_values, config.grid, descriptor)
    rows = run_tasks(tasks, config.jobs, desc="eval")
    write_records(rows, config.fmt, config.out)
    errors = sum(1 for r in rows if r.error)
    logging.info(f"eval: {len(rows)} value(s), {errors} excluded point(s)")
    return EXIT_OK


def cmd_verify(config: RunConfig, registry: Dict[str, AppellDescriptor]) -> int:
    """Run one suite (or all) and always write the report file."""
    descriptor = get_descriptor(config.descriptor, registry)
    suites = SUITES if config.suite == "all" else (config.suite,)
    records = []
    for suite in suites:
        options = SuiteOptions(
            descriptor=descriptor,
            tolerance=config.resolved_tolerance(suite),
            n_values=config.n_values or None,
            grid=config.grid or None,
            k_values=config.k_values,
            K=config.K,
            x_values=config.x_values or DEFAULT_BOUNDARY_X,
            epsilon=config.epsilon,
            max_n=config.max_n,
        )
        records.extend(run_suite(suite, options, config.jobs))
    path = write_records(records, config.fmt, config.report_path(config.suite))
    totals = summarize(records)
    logging.info(f"verify {config.suite}: {totals['passed']}/{totals['total']} passed, report in {path}")
    for record in records:
        if not record.passed:
            logging.warning(f"FAILED {record.to_row()}")
    return EXIT_OK if totals["failed"] == 0 else EXIT_FAILED


def cmd_formal_group(config: RunConfig, registry: Dict[str, AppellDescriptor]) -> int:
    """Logarithm and exponential of the universal formal group, optionally the law and B̂_n."""
    fg = build_formal_group(config.order)
    rows: List[dict] = []
    for name, series in (("F", fg.F), ("G", fg.G)):
        for k, c in enumerate(series.coefficients):
            if not c.is_zero():
                rows.append({"kind": name, "k": k, "coefficient": str(c)})
    status = EXIT_OK
    if config.law:
        for (i, j), c in sorted(group_law(fg).items()):
            rows.append({"kind": "law", "k": f"{i},{j}", "coefficient": str(c)})
        axioms = check_law_axioms(fg)
        for name, holds in axioms.items():
            rows.append({"kind": "axiom", "k": name, "coefficient": str(holds)})
        if not all(axioms.values()):
            status = EXIT_FAILED
    if config.bernoulli is not None:
        ub = universal_bernoulli(config.bernoulli)
        for k, b in enumerate(ub.numbers):
            rows.append({"kind": "universal-bernoulli", "k": k, "coefficient": str(b)})
    if config.specialize is not None:
        N = config.bernoulli if config.bernoulli is not None else config.order
        values = _specialization_values(config.specialize, N, registry)
        for k, c in enumerate(values, start=1):
            rows.append({"kind": "c", "k": k, "coefficient": format_rational(c)})
        for k, b in enumerate(specialized_bernoulli(values, N)):
            rows.append({"kind": f"bernoulli[{config.specialize}]", "k": k, "coefficient": format_rational(b)})
    write_records(rows, config.fmt, config.out)
    return status


def _specialization_values(name: str, N: int, registry) -> Sequence[Fraction]:
    if name == "classical":
        return [Fraction(v) for v in classical_values(N)]
    descriptor = get_descriptor(name, registry)
    return specialization_from_exponential(descriptor_exponential(descriptor, N + 1))


COMMAND_HANDLERS = {
    "appell": cmd_appell,
    "eval": cmd_eval,
    "verify": cmd_verify,
    "formal-group": cmd_formal_group,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--desc", default="bernoulli", help="Appell descriptor label")
    common.add_argument("--registry", default=None, help="JSON file of extra descriptors")
    common.add_argument("--out", default=None, help="Output file (stdout when omitted)")
    common.add_argument("--format", default="json", choices=FORMATS)
    common.add_argument("--jobs", type=int, default=1, help="Worker processes")
    common.add_argument(
        "--tol", type=float, default=None, help=f"Tolerance (default: ${TOLERANCE_ENV_VAR} or per suite)"
    )
    common.add_argument("--log-file", default=None)
    common.add_argument("--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="polylog-lipschitz",
        description="Bernoulli-type polynomials, polylogarithms and Lipschitz summation checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("appell", parents=[common], help="Appell polynomials, φ vector, R_n table")
    p.add_argument("--max", type=int, default=6, help="Highest degree")
    p.add_argument("--emit", default="all", choices=EMIT_CHOICES)

    p = sub.add_parser("eval", parents=[common], help="Evaluate δ_n / Δ_n")
    p.add_argument("--fn", default="delta", choices=FN_CHOICES)
    p.add_argument("--n", required=True, help="n, a..b or a comma list")
    p.add_argument("--q", default=None, help="Comma list of complex q values")
    p.add_argument("--grid", default=None, help="r0:r1:nr@t0:t1:nt or a comma list")

    p = sub.add_parser("verify", parents=[common], help="Run a verification suite")
    p.add_argument("--suite", default="all", choices=SUITES + ("all",))
    p.add_argument("--n", default=None, help="n range for the numerical suites")
    p.add_argument("--grid", default=None, help="q grid (inversion) or τ list")
    p.add_argument("--tau", default=None, help="Comma list of τ values")
    p.add_argument("--z", default=None, help="Comma list of z values (classical-lipschitz)")
    p.add_argument("--k", default="2..6", help="Exponents k for classical-lipschitz")
    p.add_argument("--K", type=int, default=None, help="Truncation of the translate sums")
    p.add_argument("--x", default=None, help="Comma list of boundary points in (0,1)")
    p.add_argument("--epsilon", type=float, default=1e-3)
    p.add_argument("--max-n", dest="max_n", type=int, default=MAX_BERNOULLI)

    p = sub.add_parser("formal-group", parents=[common], help="Universal formal group and B̂_n")
    p.add_argument("--order", type=int, default=6)
    p.add_argument("--bernoulli", type=int, default=None, help="Emit B̂_0..B̂_N")
    p.add_argument("--specialize", default=None, help="'classical' or a descriptor label")
    p.add_argument("--law", action="store_true", help="Emit the group law and its axioms")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_file, "DEBUG" if args.verbose else "INFO")
    try:
        registry = load_registry(args.registry)
        config = config_from_args(args).validate(registry)
        return COMMAND_HANDLERS[config.command](config, registry)
    except (ConfigError, FileNotFoundError) as e:
        logging.error(f"Configuration error: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except PolylogLipschitzError as e:
        logging.error(f"{type(e).__name__}: {e}", exc_info=True)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
