"""Named, reproducible worked examples and randomized property campaigns.

Each builder realises a small configuration as an explicit field on a grid.
The supports and cell layouts are chosen so the target counts hold exactly;
the builders assert those geometric premises before counting.

Campaign trial ``k`` under seed ``s`` draws from ``default_rng([s, k])``, so a
single failing trial can be replayed on its own.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import hilbert
from .field import DEFAULT_EPS_AMP, WaveField, born_quantity, support, weight
from .iprob import IntervalProb
from .partitioning import (
    DEFAULT_N_MAX,
    EQUIAMPLITUDE,
    EQUIVOLUME,
    Ensemble,
    equiamplitude_cells,
    equiamplitude_partition,
    equivolume_partition,
    from_boxes,
    validate,
)
from .rules import (
    DEFAULT_TOL_CONTAIN,
    RuleVariant,
    Tag,
    born_containment_check,
    classify_cell,
    consistency_check,
    generalized_additivity_check,
    graham_frequency,
    interval_probability,
    tally,
)
from .space import Box, ParameterSpace, Region, lambda_measure

DEFAULT_SEED = 20240229


@dataclass
class RunConfig:
    eps_amp: float = DEFAULT_EPS_AMP
    n_max: int = DEFAULT_N_MAX
    tol_contain: float = DEFAULT_TOL_CONTAIN
    seed: int = DEFAULT_SEED
    trials: int | None = None
    format: str = "json"

    def __post_init__(self):
        if self.eps_amp < 0 or self.tol_contain < 0:
            raise ValueError("tolerances must be non-negative")
        if self.n_max < 1:
            raise ValueError("n_max must be at least 1")
        if self.format not in ("json", "csv"):
            raise ValueError(f"unknown output format {self.format!r}")


@dataclass
class Check:
    name: str
    expected: object
    actual: object
    ok: bool

    def to_dict(self) -> dict:
        return {"name": self.name, "expected": _jsonable(self.expected),
                "actual": _jsonable(self.actual), "ok": self.ok}


@dataclass
class ScenarioReport:
    name: str
    checks: list[Check] = field(default_factory=list)
    data: dict = field(default_factory=dict)
    rows: list[dict] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def expect(self, name: str, expected, actual, ok: bool | None = None) -> bool:
        if ok is None:
            ok = expected == actual
        self.checks.append(Check(name, expected, actual, bool(ok)))
        return bool(ok)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "elapsed_s": self.elapsed,
            "checks": [c.to_dict() for c in self.checks],
            "data": _jsonable(self.data),
            "rows": _jsonable(self.rows),
        }


def _jsonable(x):
    if isinstance(x, IntervalProb):
        return {**x.to_dict(), "text": str(x), "out_of_range": x.out_of_range}
    if isinstance(x, Fraction):
        return [x.numerator, x.denominator]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if hasattr(x, "to_dict"):
        return x.to_dict()
    return x


_REGISTRY: dict[str, Callable[[RunConfig], ScenarioReport]] = {}


def scenario(name: str):
    def register(fn):
        _REGISTRY[name] = fn
        return fn
    return register


def names() -> list[str]:
    return list(_REGISTRY)


def run(name: str, config: RunConfig | None = None) -> ScenarioReport:
    if name not in _REGISTRY:
        raise KeyError(f"unknown scenario {name!r}; known: {', '.join(_REGISTRY)}")
    config = config or RunConfig()
    t0 = time.perf_counter()
    report = _REGISTRY[name](config)
    report.elapsed = time.perf_counter() - t0
    return report


def iv(m: int, r: int, n: int) -> IntervalProb:
    return IntervalProb.from_counts(m, r, n)


# --- generalised additivity on a 10 x 3 grid of microstates --------------

FIG2_SPACE = ParameterSpace(((0.0, 10.0), (0.0, 3.0)), (20, 6))
FIG2_BETA = Region.box((0.5, 3.5), (0.5, 2.5))
FIG2_BETA_PRIME = Region.box((5.0, 8.0), (0.5, 2.5))
# shares column 3 with beta: two of those cells are filled by the union, one is not
FIG2_BETA_DOUBLE_PRIME = Region(2, (
    ((3.5, 5.5), (0.5, 2.5)),
    ((3.0, 5.0), (0.0, 0.5)),
    ((4.0, 5.0), (2.5, 3.0)),
))


def fig2_setup() -> tuple[WaveField, Ensemble]:
    """Uniform-modulus field with varying phase; 30 unit cells of equal weight."""
    phases = np.exp(1j * np.linspace(0, 2 * np.pi, FIG2_SPACE.n_boxes, endpoint=False))
    f = WaveField(FIG2_SPACE, phases)
    grid = equivolume_partition(FIG2_SPACE, 30, (10, 3))
    e = from_boxes(FIG2_SPACE, [c.box for c in grid.cells], EQUIAMPLITUDE, f)
    return f, e


def _fig2_common(report: ScenarioReport, config: RunConfig):
    f, e = fig2_setup()
    report.expect("ensemble valid", True, validate(e).ok)
    mu_b = interval_probability(f, e, FIG2_BETA, eps_amp=config.eps_amp)
    report.expect("mu(beta)", iv(2, 10, 30), mu_b)
    return f, e, mu_b


@scenario("fig2a")
def _fig2a(config: RunConfig) -> ScenarioReport:
    report = ScenarioReport("fig2a")
    f, e, _ = _fig2_common(report, config)
    add = generalized_additivity_check(f, e, FIG2_BETA, FIG2_BETA_PRIME, eps_amp=config.eps_amp)
    report.expect("mu(beta')", iv(3, 6, 30), add.mu_beta_prime)
    report.expect("mu(beta u beta')", iv(5, 16, 30), add.mu_union)
    report.expect("sum", iv(5, 16, 30), add.sum)
    report.expect("subset holds", True, add.subset_holds)
    report.expect("equality", True, add.exact_additivity)
    report.expect("cells shared by beta and beta'", 0, add.shared_cells)
    report.data["additivity"] = add
    return report


@scenario("fig2b")
def _fig2b(config: RunConfig) -> ScenarioReport:
    report = ScenarioReport("fig2b")
    f, e, _ = _fig2_common(report, config)
    add = generalized_additivity_check(
        f, e, FIG2_BETA, FIG2_BETA_DOUBLE_PRIME, eps_amp=config.eps_amp
    )
    report.expect("mu(beta'')", iv(3, 6, 30), add.mu_beta_prime)
    report.expect("mu(beta u beta'')", iv(7, 11, 30), add.mu_union)
    report.expect("sum", iv(5, 16, 30), add.sum)
    report.expect("subset holds", True, add.subset_holds)
    report.expect("strict subset", False, add.exact_additivity)
    report.expect("cells shared by beta and beta''", 3, add.shared_cells)
    report.data["additivity"] = add
    return report


# --- equivolume inconsistency with a crescent support --------------------

FIG3_SPACE = ParameterSpace(((0.0, 3.0), (0.0, 1.0)), (24, 8))


def fig3_setup():
    """Crescent = disk((2, 4), 4) minus disk((2, 4.4), 4), sampled at box centres.

    Above y = 0.5 the crescent only reaches x < 1, so the field vanishes on
    the upper strip [1, 3] x [0.5, 1] while touching all three unit slabs.
    """
    def amp(x, y):
        outer = (x - 2.0) ** 2 + (y - 4.0) ** 2 < 16.0
        inner = (x - 2.0) ** 2 + (y - 4.4) ** 2 < 16.0
        return np.where(outer & ~inner, (1.0 + 0.3 * np.cos(3 * x)) * np.exp(2j * y), 0.0)

    f = WaveField.from_function(FIG3_SPACE, amp)
    first = equivolume_partition(FIG3_SPACE, 3, "slabs", field=f)
    second = from_boxes(
        FIG3_SPACE,
        [((0.0, 1.0), (0.0, 1.0)), ((1.0, 3.0), (0.0, 0.5)), ((1.0, 3.0), (0.5, 1.0))],
        EQUIVOLUME,
        f,
    )
    beta = first.cells[0].region
    return f, first, second, beta


@scenario("fig3")
def _fig3(config: RunConfig) -> ScenarioReport:
    report = ScenarioReport("fig3")
    f, first, second, beta = fig3_setup()
    for label, e in (("first", first), ("second", second)):
        report.expect(f"{label} ensemble valid", True, validate(e).ok)
    report.expect("beta is the shared first cell", True, beta == second.cells[0].region)
    zero = [classify_cell(f, c, FIG3_SPACE.full, config.eps_amp).tag == Tag.ZERO_AMPLITUDE
            for c in second.cells]
    report.expect("only the upper strip carries no amplitude", [False, False, True], zero)
    res = consistency_check(f, [first, second], beta, RuleVariant.BOLTZMANN_ORIGINAL,
                            config.eps_amp)
    report.expect("mu_first(beta)", IntervalProb.exact(Fraction(1, 3)), res.intervals[0])
    report.expect("mu_second(beta)", IntervalProb.exact(Fraction(1, 2)), res.intervals[1])
    report.expect("verdict", "inconsistent", res.verdict)
    report.data["consistency"] = res
    report.data["support_boxes"] = len(support(f, config.eps_amp).boxes)
    return report


# --- support-amended equivolume rules with an elliptical support ----------

FIG4_SPACE = ParameterSpace(((0.0, 3.0), (0.0, 3.0)), (24, 24))
FIG4_BETA = Region.box((1.0, 2.0), (1.0, 2.0))
# beta extended into the left neighbour cell, which becomes borderline on it
FIG4_BETA_EXTENDED = Region(2, (((1.0, 2.0), (1.0, 2.0)), ((0.75, 1.0), (1.25, 1.75))))


def fig4_setup():
    """Ellipse centred (1.6, 1.2) with semi-axes 1.5 and 1.0.

    The 3 x 3 partition has only its centre cell inside the support; the
    18-cell partition has exactly two cells tiling beta plus one more cell,
    ``[2, 3] x [1, 1.5]``, inside the support.
    """
    def amp(x, y):
        inside = ((x - 1.6) / 1.5) ** 2 + ((y - 1.2) / 1.0) ** 2 < 1.0
        return np.where(inside, np.sqrt(2.0 - np.hypot(x - 1.6, y - 1.2) / 2) * np.exp(1j * x * y), 0.0)

    f = WaveField.from_function(FIG4_SPACE, amp)
    nine = equivolume_partition(FIG4_SPACE, 9, (3, 3), field=f)
    boxes: list[Box] = [((2.0, 3.0), (1.0, 1.5)), ((1.0, 1.5), (1.0, 2.0)), ((1.5, 2.0), (1.0, 2.0))]
    boxes += [((2.0, 3.0), (1.5, 2.0)), ((0.0, 0.5), (1.0, 2.0)), ((0.5, 1.0), (1.0, 2.0))]
    for lo, hi in ((0.0, 1.0), (2.0, 3.0)):
        boxes += [((k / 2, k / 2 + 0.5), (lo, hi)) for k in range(6)]
    eighteen = from_boxes(FIG4_SPACE, boxes, EQUIVOLUME, f)
    return f, nine, eighteen


def _interior(f: WaveField, e: Ensemble, eps_amp: float) -> list[bool]:
    supp = support(f, eps_amp)
    return [lambda_measure(c.region - supp) == 0 for c in e.cells]


@scenario("fig4")
def _fig4(config: RunConfig) -> ScenarioReport:
    report = ScenarioReport("fig4")
    f, nine, eighteen = fig4_setup()
    for label, e in (("3x3", nine), ("18-cell", eighteen)):
        report.expect(f"{label} ensemble valid", True, validate(e).ok)
    report.expect("3x3 cells inside support", [k == 4 for k in range(9)],
                  _interior(f, nine, config.eps_amp))
    report.expect("18-cell cells inside support", [k < 3 for k in range(18)],
                  _interior(f, eighteen, config.eps_amp))
    variant = RuleVariant.BOLTZMANN_SUPPORT_EXCLUDE_BORDERLINE
    res = consistency_check(f, [nine, eighteen], FIG4_BETA, variant, config.eps_amp)
    report.expect("mu_3x3(beta)", IntervalProb.exact(1), res.intervals[0])
    report.expect("mu_18(beta)", IntervalProb.exact(Fraction(2, 3)), res.intervals[1])
    report.expect("verdict", "inconsistent", res.verdict)
    report.data["consistency"] = res
    report.data["original_rule"] = [
        interval_probability(f, e, FIG4_BETA, RuleVariant.BOLTZMANN_ORIGINAL, config.eps_amp)
        for e in (nine, eighteen)
    ]
    return report


@scenario("over_unity")
def _over_unity(config: RunConfig) -> ScenarioReport:
    report = ScenarioReport("over_unity")
    f, nine, _ = fig4_setup()
    left = nine.cells[3]
    report.expect("left neighbour straddles the extended macrostate", Tag.INDEFINITE.value,
                  classify_cell(f, left, FIG4_BETA_EXTENDED, config.eps_amp).tag.value)
    orig = interval_probability(f, nine, FIG4_BETA_EXTENDED, RuleVariant.BOLTZMANN_ORIGINAL,
                                config.eps_amp)
    t = tally(f, nine, FIG4_BETA_EXTENDED, RuleVariant.BOLTZMANN_SUPPORT_MIXED, config.eps_amp)
    mixed = t.interval()
    report.expect("original rule", iv(1, 1, 9), orig)
    report.expect("mixed lower bound", Fraction(1, 9), mixed.lo)
    report.expect("mixed upper bound", Fraction(2, 1), mixed.hi)
    report.expect("out-of-range flag", True, mixed.out_of_range)
    report.expect("mixed interval", IntervalProb(Fraction(1, 9), Fraction(2, 1)), mixed)
    report.data["mixed"] = mixed
    report.data["mixed_tally"] = t.to_dict()
    return report


# --- cells straddling a macrostate of irrational-like measure ------------

FIG1_SPACE = ParameterSpace(((0.0, 1.0), (0.0, 1.0)), (32, 32))
FIG1_BETA = Region.box((0.0, 2 ** -0.5), (0.0, 3 ** -0.5))


@scenario("fig1_straddle")
def _fig1(config: RunConfig) -> ScenarioReport:
    """Every equal-cell partition leaves an indefinite cell on beta.

    ``λ(β) = 1/√6`` (to float precision), so no n up to the tested maximum
    tiles beta exactly.  Both counting rules are tried with a field that is
    nonzero everywhere.
    """
    report = ScenarioReport("fig1_straddle")
    smooth = WaveField.from_function(FIG1_SPACE, lambda x, y: 1.2 + np.sin(3 * x + 2 * y))
    uniform = WaveField(FIG1_SPACE, np.ones(FIG1_SPACE.n_boxes))
    worst = None
    tested = 0
    for n in range(1, 65):
        ensembles = [equivolume_partition(FIG1_SPACE, n, layout, axis=a, field=uniform)
                     for layout in ("slabs", "bisect") for a in (0, 1)]
        ensembles += [equivolume_partition(FIG1_SPACE, n, (k, n // k), field=uniform)
                      for k in range(1, n + 1) if n % k == 0]
        ensembles += [equiamplitude_partition(smooth, n, a, n_max=config.n_max) for a in (0, 1)]
        for e in ensembles:
            f = e.field
            t = tally(f, e, FIG1_BETA, eps_amp=config.eps_amp)
            tested += 1
            if worst is None or t.r < worst:
                worst = t.r
    report.expect("partitions tested", True, tested > 300, tested > 300)
    report.expect("minimum indefinite count >= 1", ">= 1", worst, worst >= 1)
    report.data["partitions_tested"] = tested
    report.data["min_indefinite"] = worst
    report.data["beta_measure"] = lambda_measure(FIG1_BETA)
    return report


# --- Equiamplitude worked cases --------------------------------------------

N3_SPACE = ParameterSpace(((0.0, 1.0), (0.0, 1.0)), (16, 16))


@scenario("n3_gibbs")
def _n3(config: RunConfig) -> ScenarioReport:
    """Re-partitioning around a fixed first cell forces n' = 3."""
    report = ScenarioReport("n3_gibbs")
    f = WaveField.from_function(N3_SPACE, lambda x, y: (0.3 + x * x + y) * np.exp(1j * (x - y)))
    e = equiamplitude_partition(f, 3, axis=0, n_max=config.n_max)
    beta = e.cells[0].region
    report.expect("mu(beta)", IntervalProb.exact(Fraction(1, 3)),
                  interval_probability(f, e, beta, eps_amp=config.eps_amp))
    w_beta = weight(f, beta)
    (x0, x1), ys = e.cells[0].box
    rest = ((x1, N3_SPACE.bounds[0][1]), ys)
    admissible = []
    for n_prime in range(2, 11):
        for axis in (0, 1):
            boxes = [e.cells[0].box] + equiamplitude_cells(f, rest, n_prime - 1, axis)
            alt = from_boxes(N3_SPACE, boxes, EQUIAMPLITUDE, f)
            dev = float(np.max(np.abs(alt.cell_weights() - w_beta)))
            if dev <= 1e-9 * f.total_weight:
                admissible.append((n_prime, axis))
                report.expect(f"mu'(beta) for n'={n_prime}, axis {axis}",
                              IntervalProb.exact(Fraction(1, 3)),
                              interval_probability(f, alt, beta, eps_amp=config.eps_amp))
    report.expect("admissible sizes", [3], sorted({n for n, _ in admissible}))
    report.data["admissible"] = admissible
    return report


EQ10_SPACE = ParameterSpace(((0.0, 2.0), (0.0, 1.0)), (40, 20))


@scenario("eq10_exact")
def _eq10(config: RunConfig) -> ScenarioReport:
    report = ScenarioReport("eq10_exact")
    rng = np.random.default_rng([config.seed, 10])
    f = WaveField(EQ10_SPACE, random_samples(rng, EQ10_SPACE.resolution))
    e = equiamplitude_partition(f, 12, axis=1, n_max=config.n_max)
    chosen = [0, 3, 5, 7, 8]
    beta = Region(2, tuple(e.cells[k].box for k in chosen))
    rep = born_containment_check(f, e, beta, config.tol_contain, config.eps_amp)
    report.expect("interval", IntervalProb.exact(Fraction(5, 12)), rep.interval)
    report.expect("|n_beta/n - born| <= 1e-12", "<= 1e-12", abs(5 / 12 - rep.born),
                  abs(5 / 12 - rep.born) <= 1e-12)
    report.data["containment"] = rep
    return report


GRAHAM_SPACE = ParameterSpace(((0.0, 1.0),), (10,))


def graham_setup():
    amp = np.where(np.arange(10) < 5, np.sqrt(1.8), np.sqrt(0.2))
    f = WaveField(GRAHAM_SPACE, amp)
    outcomes = [Region.box((0.0, 0.5)), Region.box((0.5, 1.0))]
    return f, outcomes


@scenario("graham_vs_born")
def _graham(config: RunConfig) -> ScenarioReport:
    report = ScenarioReport("graham_vs_born")
    f, outcomes = graham_setup()
    e = equiamplitude_partition(f, 10, n_max=config.n_max)
    gibbs = interval_probability(f, e, outcomes[0], eps_amp=config.eps_amp)
    born = born_quantity(f, outcomes[0])
    graham = graham_frequency(f, outcomes, 0, config.eps_amp)
    report.expect("Gibbs interval", IntervalProb.exact(Fraction(9, 10)), gibbs)
    report.expect("Graham frequency", Fraction(1, 2), graham)
    report.expect("Graham outside Gibbs interval", False,
                  gibbs.contains_real(float(graham), 0.0))
    report.expect("Born 0.9 inside Gibbs interval", True,
                  gibbs.contains_real(born, config.tol_contain) and abs(born - 0.9) <= 1e-12)
    report.data.update(born=born, graham=graham, gibbs=gibbs)
    return report


# --- random inputs ---------------------------------------------------------

def random_samples(rng: np.random.Generator, shape) -> np.ndarray:
    """Complex samples with a smooth-ish envelope and, sometimes, a zero block."""
    z = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    z *= rng.uniform(0.2, 1.0)
    if rng.random() < 0.3 and np.prod(shape) > 1:
        # flat stretches in the cumulative weight
        sl = tuple(slice(*sorted(rng.integers(0, s + 1, size=2))) for s in shape)
        z[sl] = 0
    if not np.any(z):
        z.flat[0] = 1.0
    return z


def random_space(rng: np.random.Generator, dim: int) -> ParameterSpace:
    bounds = []
    for _ in range(dim):
        lo = float(rng.uniform(-2, 2))
        bounds.append((lo, lo + float(rng.uniform(0.5, 4))))
    if dim == 1:
        res = (int(rng.integers(1, 4097)),)
    else:
        res = tuple(int(v) for v in rng.integers(1, 257, size=2))
    return ParameterSpace(tuple(bounds), res)


def random_field(rng: np.random.Generator, dim: int | None = None) -> WaveField:
    dim = dim or int(rng.integers(1, 3))
    space = random_space(rng, dim)
    return WaveField(space, random_samples(rng, space.resolution))


def random_region(rng: np.random.Generator, space: ParameterSpace, k: int | None = None) -> Region:
    """Union of 1-4 random boxes with real corners inside ``space``."""
    k = k or int(rng.integers(1, 5))
    boxes = []
    for _ in range(k):
        box = []
        for lo, hi in space.bounds:
            a, b = np.sort(rng.uniform(lo, hi, size=2))
            box.append((float(a), float(b)))
        boxes.append(tuple(box))
    return Region(space.dimension, tuple(boxes))


def _trial_rng(seed: int, k: int) -> np.random.Generator:
    return np.random.default_rng([seed, k])


def _contract(e: Ensemble, n_max: int) -> dict:
    rep = validate(e, n_max=n_max)
    if e.field is not None:
        parseval = abs(e.cell_weights().sum() - e.field.total_weight) / e.field.total_weight
    else:
        parseval = 0.0
    return {
        "ok": rep.ok and parseval <= 1e-12,
        "weight_dev": (rep.max_weight_deviation or 0.0) / (e.field.total_weight if e.field else 1),
        "volume_dev": rep.max_volume_deviation / e.space.volume,
        "parseval": parseval,
        "lambda_sum": abs(e.cell_measures().sum() - e.space.volume) / e.space.volume,
    }


def gibbs_trial(seed: int, k: int, config: RunConfig) -> dict:
    """One containment trial plus the constructor contract for both rules."""
    rng = _trial_rng(seed, k)
    f = random_field(rng)
    n = int(rng.integers(1, min(256, config.n_max) + 1))
    axis = int(rng.integers(0, f.space.dimension))
    e = equiamplitude_partition(f, n, axis, n_max=config.n_max)
    ev = equivolume_partition(f.space, n, str(rng.choice(["slabs", "bisect"])), axis=axis,
                              field=f, n_max=config.n_max)
    beta = random_region(rng, f.space)
    rep = born_containment_check(f, e, beta, config.tol_contain, config.eps_amp)
    ca, cv = _contract(e, config.n_max), _contract(ev, config.n_max)
    contract_ok = (ca["ok"] and cv["ok"] and ca["weight_dev"] <= 1e-9
                   and cv["volume_dev"] <= 1e-12 and cv["lambda_sum"] <= 1e-12)
    return {
        "seed": seed, "trial": k, "dim": f.space.dimension,
        "grid": "x".join(map(str, f.space.resolution)), "n": n, "axis": axis,
        "m": rep.tally.m, "r": rep.tally.r, "born": rep.born,
        "lo": str(rep.interval.lo), "hi": str(rep.interval.hi),
        "contained": rep.contained, "exact_partition": rep.exact_partition,
        "weight_dev": ca["weight_dev"], "volume_dev": cv["volume_dev"],
        "parseval": ca["parseval"], "contract_ok": contract_ok,
    }


def exact_trial(seed: int, k: int, config: RunConfig) -> dict:
    """Macrostate built from whole cells: interval must collapse onto the Born value."""
    rng = _trial_rng(seed, k)
    f = random_field(rng)
    n = int(rng.integers(1, min(256, config.n_max) + 1))
    e = equiamplitude_partition(f, n, int(rng.integers(0, f.space.dimension)), n_max=config.n_max)
    chosen = np.flatnonzero(rng.random(n) < rng.uniform(0.1, 0.9))
    beta = Region(f.space.dimension, tuple(e.cells[i].box for i in chosen))
    rep = born_containment_check(f, e, beta, config.tol_contain, config.eps_amp)
    err = abs(len(chosen) / n - rep.born)
    return {
        "seed": seed, "trial": k, "dim": f.space.dimension, "n": n, "n_beta": len(chosen),
        "born": rep.born, "error": err, "degenerate": rep.interval.is_exact,
        "ok": rep.interval == IntervalProb(Fraction(len(chosen), n), Fraction(len(chosen), n))
        and err <= 1e-12,
    }


def consistency_trial(seed: int, k: int, config: RunConfig, family_size: int = 5) -> dict:
    rng = _trial_rng(seed, k)
    f = random_field(rng)
    family = [
        equiamplitude_partition(
            f, int(rng.integers(1, min(256, config.n_max) + 1)),
            int(rng.integers(0, f.space.dimension)), n_max=config.n_max,
        )
        for _ in range(family_size)
    ]
    beta = random_region(rng, f.space)
    res = consistency_check(f, family, beta, RuleVariant.GIBBS, config.eps_amp)
    return {
        "seed": seed, "trial": k, "dim": f.space.dimension,
        "sizes": " ".join(str(e.n) for e in family), "born": born_quantity(f, beta),
        "intersection": None if res.intersection is None else str(res.intersection),
        "consistent": res.consistent,
    }


def additivity_trial(seed: int, k: int, config: RunConfig) -> dict:
    rng = _trial_rng(seed, k)
    f = random_field(rng)
    n = int(rng.integers(1, min(256, config.n_max) + 1))
    e = equiamplitude_partition(f, n, int(rng.integers(0, f.space.dimension)), n_max=config.n_max)
    beta = random_region(rng, f.space)
    beta_prime = random_region(rng, f.space) - beta
    rep = generalized_additivity_check(f, e, beta, beta_prime, RuleVariant.GIBBS, config.eps_amp)
    return {
        "seed": seed, "trial": k, "dim": f.space.dimension, "n": n,
        "mu_union": str(rep.mu_union), "sum": str(rep.sum),
        "subset": rep.subset_holds, "equal": rep.exact_additivity, "shared": rep.shared_cells,
        "ok": rep.subset_holds and (rep.shared_cells > 0 or rep.exact_additivity),
    }


def random_projector(rng: np.random.Generator, dec: hilbert.EnsembleDecomposition) -> hilbert.Projector:
    """Projector of random rank; half the time built to make some parts definite."""
    d = dec.psi.size
    if rng.random() < 0.5:
        rank = int(rng.integers(0, d + 1))
        U = hilbert.random_unitary(d, rng)
        return hilbert.Projector.onto(U[:, :rank])
    n = dec.n
    labels = rng.integers(0, 3, size=n)  # 0 in, 1 out, 2 mixed
    cols = [dec.parts[j] for j in range(n) if labels[j] == 0]
    mixed = [j for j in range(n) if labels[j] == 2]
    for a, b in zip(mixed[::2], mixed[1::2]):
        cols.append(dec.parts[a] + rng.uniform(0.2, 2) * dec.parts[b])
    # an unpaired mixed part is simply left out of the range
    # extra directions orthogonal to every part
    Q, _ = np.linalg.qr(np.concatenate([dec.parts.T, hilbert.random_unitary(d, rng)], axis=1))
    free = Q[:, n:d]
    extra = int(rng.integers(0, free.shape[1] + 1))
    cols += list(free[:, :extra].T)
    if not cols:
        return hilbert.Projector(np.zeros((d, d)))
    return hilbert.Projector.onto(np.array(cols).T)


def hilbert_trial(seed: int, k: int, config: RunConfig) -> dict:
    rng = _trial_rng(seed, k)
    d = int(rng.integers(1, 65))
    n = int(rng.integers(1, d + 1))
    psi = (rng.standard_normal(d) + 1j * rng.standard_normal(d)) * rng.uniform(0.1, 10)
    basis = hilbert.random_unitary(d, rng)
    dec = hilbert.equiamplitude_decompose(psi, n, basis)
    P = random_projector(rng, dec)
    rep = hilbert.appendix_theorem_check(P, psi, n, basis)
    direct = float(np.vdot(psi, P.matrix @ psi).real / np.vdot(psi, psi).real)
    return {
        "seed": seed, "trial": k, "d": d, "n": n, "rank": P.rank, "m": rep.m, "r": rep.r,
        "quotient": rep.quotient, "direct": direct,
        "lo": str(rep.interval.lo), "hi": str(rep.interval.hi),
        "sum_dev": rep.decomposition["sum"], "orth_dev": rep.decomposition["orthogonality"],
        "norm_dev": rep.decomposition["equal_norm"], "contained": rep.contained,
        "bounds_hold": rep.bounds_hold,
        "ok": rep.passed and abs(direct - rep.quotient) <= 1e-12,
    }


def _campaign(report: ScenarioReport, trial, config: RunConfig, default: int, key: str):
    trials = config.trials or default
    rows = [trial(config.seed, k, config) for k in range(trials)]
    failures = [r for r in rows if not r[key]]
    report.rows = rows
    report.expect("trials", f">= {default}", trials, trials >= default or config.trials is not None)
    report.expect("failures", 0, len(failures))
    report.data.update(trials=trials, seed=config.seed,
                       failed_trials=[r["trial"] for r in failures][:50])
    return rows


@scenario("campaign_gibbs")
def _campaign_gibbs(config: RunConfig) -> ScenarioReport:
    report = ScenarioReport("campaign_gibbs")
    rows = _campaign(report, gibbs_trial, config, 1000, "contained")
    report.expect("constructor contract", 0, sum(not r["contract_ok"] for r in rows))
    cons = [consistency_trial(config.seed + 1, k, config) for k in range(max(1, len(rows) // 10))]
    report.expect("families consistent", 0, sum(not r["consistent"] for r in cons))
    report.data["max_weight_dev"] = max(r["weight_dev"] for r in rows)
    return report


@scenario("campaign_exact")
def _campaign_exact(config: RunConfig) -> ScenarioReport:
    report = ScenarioReport("campaign_exact")
    rows = _campaign(report, exact_trial, config, 200, "ok")
    report.data["max_abs_error"] = max(r["error"] for r in rows)
    return report


@scenario("campaign_consistency")
def _campaign_consistency(config: RunConfig) -> ScenarioReport:
    report = ScenarioReport("campaign_consistency")
    _campaign(report, consistency_trial, config, 200, "consistent")
    return report


@scenario("campaign_additivity")
def _campaign_additivity(config: RunConfig) -> ScenarioReport:
    report = ScenarioReport("campaign_additivity")
    rows = _campaign(report, additivity_trial, config, 1000, "ok")
    report.data["strict_subsets"] = sum(not r["equal"] for r in rows)
    return report


@scenario("campaign_hilbert")
def _campaign_hilbert(config: RunConfig) -> ScenarioReport:
    report = ScenarioReport("campaign_hilbert")
    rows = _campaign(report, hilbert_trial, config, 200, "ok")
    report.data["max_sum_dev"] = max(r["sum_dev"] for r in rows)
    report.data["definite_trials"] = sum(r["m"] > 0 for r in rows)
    return report


def cross_basis_intervals(psi, P: hilbert.Projector, n: int, bases) -> list[IntervalProb]:
    """Intervals for one projector from decompositions in several bases."""
    return [hilbert.appendix_interval(P, hilbert.equiamplitude_decompose(psi, n, B)) for B in bases]

