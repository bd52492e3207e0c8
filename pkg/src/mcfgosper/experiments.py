"""Inputs-per-output statistics for the Möbius and bilinear engines.

Each trial runs an engine to ``max_outputs`` outputs and records how many
quotient tuples had been consumed when each output appeared. The least-squares
slope of that curve is the quantity of interest.
"""

from __future__ import annotations

import csv
import io
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence, TextIO

from .bilinear import run_bilinear
from .errors import InputExhausted
from .exactnum import Matrix, det
from .mcf import Mcf
from .mobius import run
from .oracle import eval_moebius, verify_prefix
from .sources import cube_root_pair, is_cube
from .steplog import StepLog

MODES = ("cubic", "random-mcf", "random-bilinear")
CSV_COLUMNS = (
    "trial_id",
    "mode",
    "m",
    "d_or_seed",
    "matrix_id",
    "output_index",
    "cumulative_inputs",
    "max_entry_bits",
    "guard_hit",
)

# Transforms of (cbrt d, cbrt d^2). C2 has two equal rows and is singular;
# it is kept as a reference case and always stalls. C2fix maps the pair to
# (cbrt d + cbrt d^2, cbrt d - cbrt d^2).
CUBIC_MATRICES: dict[str, Matrix] = {
    "C1": ((2, 0, 0), (0, 2, 0), (0, 0, 1)),
    "C2": ((1, -1, 0), (1, -1, 0), (0, 0, 1)),
    "C2fix": ((1, 1, 0), (1, -1, 0), (0, 0, 1)),
    "C3": ((3, 5, 0), (5, 3, 0), (1, 0, 2)),
}


@dataclass(frozen=True)
class TrialConfig:
    mode: str = "random-mcf"
    m: int = 2
    trials: int = 100
    max_outputs: int = 500
    max_steps: int | None = None
    bound: int = 1000
    matrix_bound: int | None = None
    seed: int = 0
    d_min: int = 2
    d_max: int = 100
    matrices: tuple[str, ...] = tuple(CUBIC_MATRICES)
    verify_fraction: float = 0.05

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if self.m < 1:
            raise ValueError("m must be positive")
        if self.bound < 1 or (self.matrix_bound is not None and self.matrix_bound < 1):
            raise ValueError("bounds must be positive")
        if self.trials < 0 or self.max_outputs < 0:
            raise ValueError("trial and output counts must be non-negative")
        if self.mode == "cubic" and self.m != 2:
            raise ValueError("cubic mode works on (cbrt d, cbrt d^2), so m must be 2")

    @property
    def coeff_bound(self) -> int:
        return self.bound if self.matrix_bound is None else self.matrix_bound


@dataclass
class TrialResult:
    trial_id: int
    mode: str
    m: int
    d_or_seed: str
    matrix_id: str
    inputs_at_output: list[int]
    bits_at_output: list[int]
    inputs_total: int
    guard_hit: bool
    verified: bool | None = None
    verify_undecidable: bool = False
    verify_note: str = ""

    @property
    def slope(self) -> Fraction | None:
        if len(self.inputs_at_output) < 2:
            return None
        return fit_slope(self.inputs_at_output)

    def rows(self) -> list[tuple]:
        head = (self.trial_id, self.mode, self.m, self.d_or_seed, self.matrix_id)
        guard = int(self.guard_hit)
        if not self.inputs_at_output:
            return [head + (0, self.inputs_total, 0, guard)]
        return [
            head + (k + 1, inputs, bits, guard)
            for k, (inputs, bits) in enumerate(zip(self.inputs_at_output, self.bits_at_output))
        ]


@dataclass
class SuiteResult:
    config: TrialConfig
    trials: list[TrialResult] = field(default_factory=list)

    @property
    def slopes(self) -> list[Fraction]:
        """Per-trial slopes; trials that stopped short are left out."""
        return [s for s in (t.slope for t in self.trials if not t.guard_hit) if s is not None]

    @property
    def mean_slope(self) -> Fraction | None:
        slopes = self.slopes
        return sum(slopes, Fraction(0)) / len(slopes) if slopes else None

    @property
    def guard_hits(self) -> list[TrialResult]:
        return [t for t in self.trials if t.guard_hit]

    @property
    def verify_failures(self) -> list[TrialResult]:
        return [t for t in self.trials if t.verified is False and not t.verify_undecidable]

    def mean_curve(self, matrix_id: str | None = None) -> list[Fraction]:
        """Mean cumulative inputs at each output index over trials reaching it."""
        sums: dict[int, list[int]] = {}
        for t in self.trials:
            if matrix_id is not None and t.matrix_id != matrix_id:
                continue
            for k, inputs in enumerate(t.inputs_at_output):
                sums.setdefault(k, []).append(inputs)
        return [Fraction(sum(v), len(v)) for _, v in sorted(sums.items())]

    def write_csv(self, fh: TextIO) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for t in self.trials:
            writer.writerows(t.rows())

    def to_csv(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()


def fit_slope(data: StepLog | Sequence[int]) -> Fraction:
    """Exact least-squares slope of cumulative inputs against output index 1..n."""
    ys = list(data.inputs_at_output if isinstance(data, StepLog) else data)
    n = len(ys)
    if n < 2:
        raise ValueError("a slope needs at least two outputs")
    xs = range(1, n + 1)
    sx, sy = sum(xs), sum(ys)
    sxy = sum(x * y for x, y in zip(xs, ys))
    sxx = sum(x * x for x in xs)
    return Fraction(n * sxy - sx * sy, n * sxx - sx * sx)


def random_steps(rng: random.Random, m: int, bound: int) -> Iterator[tuple[int, ...]]:
    """Endless weakly admissible quotient stream with entries bounded by ``bound``."""
    yield tuple(rng.randint(0, bound) for _ in range(m))
    while True:
        lead = rng.randint(1, bound)
        yield (lead,) + tuple(rng.randint(0, lead) for _ in range(m - 1))


def random_mcf(m: int, bound: int, seed: str) -> Mcf:
    return Mcf.from_generator(m, lambda: random_steps(random.Random(seed), m, bound))


def random_matrix(rng: random.Random, m: int, bound: int) -> Matrix:
    while True:
        C = tuple(tuple(rng.randint(0, bound) for _ in range(m + 1)) for _ in range(m + 1))
        if det(C) != 0:
            return C


def random_family(rng: random.Random, m: int, bound: int) -> tuple[Matrix, ...]:
    def draw():
        return tuple(tuple(rng.randint(0, bound) for _ in range(m + 1)) for _ in range(m + 1))

    head = tuple(draw() for _ in range(m))
    last = draw()
    while not any(any(row) for row in last):
        last = draw()
    return head + (last,)


def _trial_seed(cfg: TrialConfig, trial: int) -> str:
    return f"{cfg.seed}:{trial}"


def _result_from_log(trial_id, cfg, tag, matrix_id, res, inputs_total) -> TrialResult:
    return TrialResult(
        trial_id,
        cfg.mode,
        cfg.m,
        tag,
        matrix_id,
        list(res.log.inputs_at_output),
        list(res.log.bits_at_output),
        inputs_total,
        res.guard_hit,
    )


def _random_trial(cfg: TrialConfig, trial: int) -> TrialResult:
    tag = _trial_seed(cfg, trial)
    rng = random.Random(f"{tag}:transform")
    bilinear = cfg.mode == "random-bilinear"
    if bilinear:
        forms = random_family(rng, cfg.m, cfg.coeff_bound)
        x = random_mcf(cfg.m, cfg.bound, f"{tag}:x")
        y = random_mcf(cfg.m, cfg.bound, f"{tag}:y")
        res = run_bilinear(x, y, forms, cfg.max_outputs, cfg.max_steps)
    else:
        C = random_matrix(rng, cfg.m, cfg.coeff_bound)
        res = run(random_mcf(cfg.m, cfg.bound, f"{tag}:x"), C, cfg.max_outputs, cfg.max_steps)
    return _result_from_log(trial, cfg, tag, "random", res, res.state.t)


def _cubic_jobs(cfg: TrialConfig) -> list[tuple[int, int, str]]:
    jobs = []
    for d in range(cfg.d_min, cfg.d_max + 1):
        if is_cube(d):
            continue
        for name in cfg.matrices:
            jobs.append((len(jobs), d, name))
    return jobs


def _cubic_trial(cfg: TrialConfig, job: tuple[int, int, str]) -> TrialResult:
    trial_id, d, name = job
    C = CUBIC_MATRICES[name]
    source = cube_root_pair(d)
    x = Mcf.from_source(source)
    try:
        res = run(x, C, cfg.max_outputs, cfg.max_steps, allow_singular=True)
        guard = res.guard_hit
    except InputExhausted as exc:
        # only happens if the oracle expansion of the input terminated
        res, guard = exc.result, True
    result = _result_from_log(trial_id, cfg, str(d), name, res, res.state.t)
    result.guard_hit = guard
    if random.Random(f"{cfg.seed}:verify:{trial_id}").random() < cfg.verify_fraction:
        report = verify_prefix(res.outputs, eval_moebius(source, C))
        result.verified = report.agree
        result.verify_undecidable = report.undecidable
        result.verify_note = report.note
    return result


def _run_one(args) -> TrialResult:
    cfg, job = args
    if cfg.mode == "cubic":
        return _cubic_trial(cfg, job)
    return _random_trial(cfg, job)


def _jobs(cfg: TrialConfig) -> list:
    return _cubic_jobs(cfg) if cfg.mode == "cubic" else list(range(cfg.trials))


def run_suite(cfg: TrialConfig, jobs: int = 1) -> SuiteResult:
    work = [(cfg, job) for job in _jobs(cfg)]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            trials = list(pool.map(_run_one, work, chunksize=max(1, len(work) // (4 * jobs))))
    else:
        trials = [_run_one(w) for w in work]
    trials.sort(key=lambda t: t.trial_id)
    return SuiteResult(cfg, trials)


def run_cubic_suite(cfg: TrialConfig, jobs: int = 1) -> SuiteResult:
    if cfg.mode != "cubic":
        raise ValueError("run_cubic_suite needs mode='cubic'")
    return run_suite(cfg, jobs)


def run_random_suite(cfg: TrialConfig, jobs: int = 1) -> SuiteResult:
    if cfg.mode not in ("random-mcf", "random-bilinear"):
        raise ValueError("run_random_suite needs a random mode")
    return run_suite(cfg, jobs)
