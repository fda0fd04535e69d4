"""
Verification suites: build the cases of a suite, run them (optionally on a
process pool) and return records sorted by their parameters.
"""

from __future__ import annotations

import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from tqdm import tqdm

from .algebra import Polynomial
from .appell import AppellDescriptor, bernoulli_descriptor
from .commons import PolylogLipschitzError, format_complex, parse_complex, parse_polar_grid
from .congruences import congruence_suite
from .delta import (
    ExtendedDeltaSpec,
    delta_eval,
    extended_delta_eval,
    extended_inversion_sides,
    inversion_sides,
    root_of_unity_check,
)
from .lipschitz import (
    boundary_value_check,
    classical_lipschitz_check,
    contour_pairing_report,
    kernel_check,
    lipschitz_defect,
    periodic_pairing_report,
    representing_function,
)
from .reports import DefectReport

SUITES = (
    "inversion",
    "lipschitz",
    "classical-lipschitz",
    "boundary",
    "pairing",
    "congruences",
)

SUITE_TOLERANCES = {
    "inversion": 1e-10,
    "lipschitz": 1e-3,
    "classical-lipschitz": 1e-8,
    "boundary": 1e-6,
    "pairing": 1e-9,
    "congruences": 0.0,
}

DEFAULT_INVERSION_GRID = "0.3:0.7:10@0.05:0.95:10"
DEFAULT_TAUS = ("i", "1/4+i", "1/2+2i", "-i", "1/4-i", "1/2-2i")
DEFAULT_CLASSICAL_Z = ("i", "1/2+i", "0.3+0.7i")
DEFAULT_BOUNDARY_X = (0.25, 0.5, 0.75)
ALTERNATE_CONTOUR = (-0.3, 1.3, -0.25, 0.35)

# (function, positional args, keyword args); functions must be module level
Task = Tuple[Callable, tuple, dict]


@dataclass(frozen=True)
class EvalRow:
    fn: str
    n: int
    q: complex
    descriptor: str = "bernoulli"
    value: Optional[complex] = None
    truncation: int = 0
    tail_bound: float = math.nan
    method: str = ""
    error: str = ""

    @property
    def passed(self) -> bool:
        return True

    def sort_key(self):
        return (self.fn, self.descriptor, self.n, self.q.real, self.q.imag)

    def to_json(self) -> dict:
        return {
            "fn": self.fn,
            "descriptor": self.descriptor,
            "n": self.n,
            "q": self.q,
            "value": self.value,
            "truncation": self.truncation,
            "tail_bound": self.tail_bound,
            "method": self.method,
            "error": self.error,
        }

    def to_row(self) -> dict:
        value = complex(self.value) if self.value is not None else complex(math.nan, math.nan)
        return {
            "fn": self.fn,
            "descriptor": self.descriptor,
            "n": self.n,
            "re_q": self.q.real,
            "im_q": self.q.imag,
            "re_value": value.real,
            "im_value": value.imag,
            "truncation": self.truncation,
            "tail_bound": self.tail_bound,
            "method": self.method,
            "error": self.error,
        }


def parse_grid(spec: str) -> List[complex]:
    """A polar grid "r0:r1:nr@t0:t1:nt" or a comma list of complex values."""
    text = str(spec).strip()
    if "@" in text:
        return parse_polar_grid(text)
    return [parse_complex(part) for part in text.split(",") if part.strip()] or [parse_complex(text)]


# single-case workers


def eval_case(fn: str, n: int, q: complex, descriptor: AppellDescriptor) -> EvalRow:
    try:
        if fn == "delta":
            result = delta_eval(n, q)
        else:
            result = extended_delta_eval(ExtendedDeltaSpec.from_descriptor(descriptor, n), q)
    except PolylogLipschitzError as e:
        logging.warning(f"{fn} n={n} q={format_complex(q)}: {e}")
        reason = getattr(e, "reason", str(e))
        return EvalRow(fn, n, q, descriptor.label, error=reason)
    return EvalRow(
        fn, n, q, descriptor.label, result.value, result.truncation, result.tail_bound, result.method
    )


def inversion_case(n: int, q: complex, descriptor: AppellDescriptor, tolerance: float) -> DefectReport:
    if descriptor.label == "bernoulli":
        lhs, rhs, tail = inversion_sides(n, q)
        identity = "inversion"
    else:
        lhs, rhs, tail = extended_inversion_sides(ExtendedDeltaSpec.from_descriptor(descriptor, n), q)
        identity = "extended-inversion"
    return DefectReport(identity, n, lhs, rhs, tolerance, q=q, tail_estimate=tail, descriptor=descriptor.label)


def root_of_unity_case(n: int, k: int, q: complex, tolerance: float) -> DefectReport:
    defect = root_of_unity_check(n, k, q)
    return DefectReport("root-of-unity", n, complex(defect), 0j, tolerance, q=q, parameters={"k": k})


def lipschitz_case(n: int, tau: complex, K: int, descriptor: AppellDescriptor, tolerance: float) -> DefectReport:
    rf = representing_function(descriptor, n)
    return lipschitz_defect(rf, tau, K, descriptor, tolerance)


def kernel_case(n: int, tau: complex, K: int, descriptor: AppellDescriptor, tolerance: float) -> DefectReport:
    return kernel_check(representing_function(descriptor, n), tau, K, tolerance)


def contour_case(n: int, m: int, contour, descriptor: AppellDescriptor, tolerance: float) -> DefectReport:
    psi = Polynomial(tuple([0] * m + [1]))
    return contour_pairing_report(representing_function(descriptor, n), psi, contour, tolerance)


def contour_independence_case(n: int, m: int, descriptor: AppellDescriptor, tolerance: float) -> DefectReport:
    rf = representing_function(descriptor, n)
    psi = Polynomial(tuple([0] * m + [1]))
    first = contour_pairing_report(rf, psi, tolerance=tolerance)
    second = contour_pairing_report(rf, psi, ALTERNATE_CONTOUR, tolerance)
    return DefectReport(
        "contour-independence",
        n,
        first.lhs,
        second.lhs,
        tolerance,
        descriptor=rf.label,
        parameters={"psi": psi.to_json(), "contour": list(ALTERNATE_CONTOUR)},
    )


def periodic_case(n: int, m: int, descriptor: AppellDescriptor, tolerance: float) -> DefectReport:
    rf = representing_function(descriptor, n)
    return periodic_pairing_report(rf, m, descriptor=descriptor, tolerance=tolerance)


def _error_report(task: Task, error: Exception, tolerance: float) -> DefectReport:
    fn, args, _ = task
    n = next((a for a in args if isinstance(a, int)), 0)
    return DefectReport(
        fn.__name__.replace("_case", "").replace("_", "-"),
        n,
        complex(math.nan, math.nan),
        0j,
        tolerance,
        parameters={
            "error": str(error),
            "args": [format_complex(a) if isinstance(a, complex) else str(a) for a in args],
        },
    )


def _run_task(task: Task):
    fn, args, kwargs = task
    return fn(*args, **kwargs)


def run_tasks(tasks: Sequence[Task], jobs: int = 1, tolerance: float = 0.0, desc: str = "cases") -> List:
    """Run tasks, serially or on a process pool, and return the records sorted."""
    records = []
    progress = tqdm(total=len(tasks), desc=desc, disable=not sys.stderr.isatty())
    if jobs <= 1:
        for task in tasks:
            try:
                records.append(_run_task(task))
            except PolylogLipschitzError as e:
                logging.warning(f"{task[0].__name__}{task[1]}: {e}")
                records.append(_error_report(task, e, tolerance))
            progress.update(1)
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = {pool.submit(_run_task, task): task for task in tasks}
            for future in as_completed(futures):
                task = futures[future]
                try:
                    records.append(future.result())
                except PolylogLipschitzError as e:
                    logging.warning(f"{task[0].__name__}{task[1]}: {e}")
                    records.append(_error_report(task, e, tolerance))
                progress.update(1)
    progress.close()
    return sorted(records, key=lambda r: r.sort_key())


# suite builders


@dataclass(frozen=True)
class SuiteOptions:
    descriptor: AppellDescriptor = field(default_factory=bernoulli_descriptor)
    tolerance: float = 1e-8
    n_values: Optional[Tuple[int, ...]] = None
    grid: Optional[Tuple[complex, ...]] = None
    k_values: Tuple[int, ...] = (2, 3, 4, 5, 6)
    K: Optional[int] = None
    x_values: Tuple[float, ...] = DEFAULT_BOUNDARY_X
    epsilon: float = 1e-3
    max_n: int = 14


def inversion_tasks(opts: SuiteOptions) -> List[Task]:
    grid = opts.grid or tuple(parse_grid(DEFAULT_INVERSION_GRID))
    n_values = opts.n_values or tuple(range(-3, 4))
    tasks: List[Task] = [
        (inversion_case, (n, q, opts.descriptor, opts.tolerance), {}) for n in n_values for q in grid
    ]
    if opts.descriptor.label == "bernoulli":
        for n in (n for n in n_values if n <= 0):
            for k in (2, 3):
                tasks.append((root_of_unity_case, (n, k, complex(0.4, 0.3), opts.tolerance), {}))
    return tasks


def lipschitz_tasks(opts: SuiteOptions) -> List[Task]:
    taus = opts.grid or tuple(parse_complex(t) for t in DEFAULT_TAUS)
    n_values = opts.n_values or (-2, -1, 0, 1, 2)
    K = opts.K or 100_000
    tasks: List[Task] = [
        (lipschitz_case, (n, tau, K, opts.descriptor, opts.tolerance), {})
        for n in n_values
        for tau in taus
        if tau.imag != 0
    ]
    for n in (n for n in n_values if n >= 0):
        tasks.append((kernel_case, (n, taus[0], min(K, 10_000), opts.descriptor, opts.tolerance), {}))
    return tasks


def classical_tasks(opts: SuiteOptions) -> List[Task]:
    zs = opts.grid or tuple(parse_complex(z) for z in DEFAULT_CLASSICAL_Z)
    K = opts.K or 1000
    return [(classical_lipschitz_check, (k, z, K, opts.tolerance), {}) for k in opts.k_values for z in zs]


def boundary_tasks(opts: SuiteOptions) -> List[Task]:
    n_values = tuple(n for n in (opts.n_values or (-3, -2, -1)) if n <= -1)
    return [
        (boundary_value_check, (n, x, opts.epsilon, opts.descriptor, opts.tolerance), {})
        for n in n_values
        for x in opts.x_values
    ]


def pairing_tasks(opts: SuiteOptions) -> List[Task]:
    n_values = opts.n_values or (-2, -1, 0, 1, 2, 3, 4)
    tasks: List[Task] = []
    for n in n_values:
        for m in range(0, 5):
            tasks.append((contour_case, (n, m, (-0.5, 1.5, -0.5, 0.5), opts.descriptor, opts.tolerance), {}))
            tasks.append((contour_independence_case, (n, m, opts.descriptor, opts.tolerance), {}))
        if -1 <= n <= 2:
            for m in (-2, -1, 0, 1, 2):
                tasks.append((periodic_case, (n, m, opts.descriptor, opts.tolerance), {}))
    return tasks


TASK_BUILDERS: Dict[str, Callable[[SuiteOptions], List[Task]]] = {
    "inversion": inversion_tasks,
    "lipschitz": lipschitz_tasks,
    "classical-lipschitz": classical_tasks,
    "boundary": boundary_tasks,
    "pairing": pairing_tasks,
}


def run_suite(name: str, opts: SuiteOptions, jobs: int = 1) -> List:
    logging.info(f"Running suite '{name}' ({opts.descriptor.label})")
    if name == "congruences":
        specialized = None if opts.descriptor.label == "bernoulli" else opts.descriptor
        records = congruence_suite(opts.max_n, descriptor=specialized)
    else:
        tasks = TASK_BUILDERS[name](opts)
        logging.info(f"Suite '{name}': {len(tasks)} case(s)")
        records = run_tasks(tasks, jobs, opts.tolerance, desc=name)
    failed = sum(1 for r in records if not r.passed)
    logging.info(f"Suite '{name}' finished: {len(records) - failed}/{len(records)} passed")
    return records


def eval_tasks(
    fn: str, n_values: Sequence[int], grid: Sequence[complex], descriptor: AppellDescriptor
) -> List[Task]:
    return [(eval_case, (fn, n, q, descriptor), {}) for n in n_values for q in grid]
