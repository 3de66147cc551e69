"""Transmission scans over E or V0 and resonance location on the resulting curves."""

from __future__ import annotations

import dataclasses
import enum
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
from scipy.optimize import bisect, minimize_scalar
from scipy.signal import find_peaks

from .analytic import Branch, transmission
from .errors import ParameterError, ScatteringError, SweepError
from .potential import HulthenParams

log = logging.getLogger(__name__)

MAX_FAILURE_FRACTION = 0.10
FLAT_TOLERANCE = 1e-10
UNIT_HEIGHT = 0.999
POSITION_TOL = 1e-7

DEFAULT_ENERGY_RANGE = (1.05, 10.0)
DEFAULT_STRENGTH_RANGE = (0.0, 12.0)
DEFAULT_POINTS = 1000


class SweepVariable(str, enum.Enum):
    ENERGY = "energy"
    STRENGTH = "strength"


class ParamAxis(str, enum.Enum):
    DIFFUSENESS = "a"
    SHAPE_Q = "q"


@dataclass(frozen=True)
class SweepSpec:
    """Uniform grid over E (potential fixed) or V0 (energy and a, q fixed).

    For a STRENGTH sweep, the v0 of ``fixed`` is ignored.
    """

    variable: SweepVariable
    start: float
    stop: float
    points: int
    fixed: HulthenParams
    energy: float | None = None
    branch: Branch = Branch.PLUS

    def __post_init__(self):
        object.__setattr__(self, "variable", SweepVariable(self.variable))
        object.__setattr__(self, "branch", Branch(self.branch))
        if self.points < 2:
            raise ParameterError(f"a sweep needs at least 2 points, got {self.points}")
        if not self.start < self.stop:
            raise ParameterError(f"start {self.start} must be below stop {self.stop}")
        if self.variable is SweepVariable.ENERGY and self.start <= 1.0:
            raise ParameterError(f"energy sweep must start above 1, got {self.start}")
        if self.variable is SweepVariable.STRENGTH:
            if self.start < 0:
                raise ParameterError(f"strength sweep must start at v0 >= 0, got {self.start}")
            if self.energy is None or self.energy * self.energy <= 1.0:
                raise ParameterError(f"strength sweep needs a fixed energy with E^2 > 1, got {self.energy}")

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)

    def evaluate(self, value: float) -> tuple[float, float]:
        """(R, T) at one value of the swept variable."""
        if self.variable is SweepVariable.ENERGY:
            return transmission(value, self.fixed, self.branch)
        if value == 0.0:
            # no potential at all: V0 = 0 is outside HulthenParams' domain
            return 0.0, 1.0
        pot = HulthenParams(value, self.fixed.a, self.fixed.q)
        return transmission(self.energy, pot, self.branch)


class SweepRow(NamedTuple):
    independent: float
    refl: float
    trans: float
    unitarity_defect: float


class SweepFailure(NamedTuple):
    independent: float
    message: str


@dataclass
class SweepTable:
    spec: SweepSpec
    rows: list[SweepRow]
    failures: list[SweepFailure] = field(default_factory=list)

    @property
    def independent(self) -> np.ndarray:
        return np.array([r.independent for r in self.rows])

    @property
    def trans(self) -> np.ndarray:
        return np.array([r.trans for r in self.rows])

    @property
    def refl(self) -> np.ndarray:
        return np.array([r.refl for r in self.rows])


def _sweep_point(spec: SweepSpec, value: float):
    try:
        refl, trans = spec.evaluate(value)
    except ScatteringError as exc:
        return SweepFailure(value, f"{type(exc).__name__}: {exc}")
    return SweepRow(value, refl, trans, abs(refl + trans - 1.0))


def run_sweep(spec: SweepSpec, workers: int | None = 1) -> SweepTable:
    """Evaluate (R, T) on every grid point, in grid order.

    Points that raise are kept as ``failures`` rather than dropped; more than
    10% failures aborts the sweep.  ``workers > 1`` spreads points over
    processes without changing the result.
    """
    grid = [float(v) for v in spec.grid()]
    if workers is not None and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_point, [spec] * len(grid), grid, chunksize=16))
    else:
        results = [_sweep_point(spec, v) for v in grid]
    rows = [r for r in results if isinstance(r, SweepRow)]
    failures = [r for r in results if isinstance(r, SweepFailure)]
    for fail in failures:
        log.warning("sweep point %s=%r failed: %s", spec.variable.value, fail.independent, fail.message)
    if len(failures) > MAX_FAILURE_FRACTION * len(grid):
        raise SweepError(
            f"{len(failures)} of {len(grid)} sweep points failed; first: {failures[0].message}"
        )
    return SweepTable(spec, rows, failures)


@dataclass(frozen=True)
class Resonance:
    position: float
    height: float
    fwhm: float
    prominence: float

    @property
    def reaches_unity(self) -> bool:
        """Whether the refined peak counts as a full transmission resonance."""
        return self.height > UNIT_HEIGHT


class ResonanceList(list):
    """Resonances sorted by position; ``degenerate`` marks a flat T profile."""

    def __init__(self, items=(), degenerate: bool = False):
        super().__init__(items)
        self.degenerate = degenerate


Solver = Callable[[float], "tuple[float, float]"]


def _refine_peak(solver: Solver, lo: float, mid: float, hi: float) -> float:
    # Minimising R rather than maximising T = 1 - R keeps full relative
    # precision when the peak sits at T ~ 1.
    res = minimize_scalar(
        lambda x: solver(x)[0],
        bracket=(lo, mid, hi),
        method="golden",
        options={"xtol": POSITION_TOL / max(1.0, abs(mid))},
    )
    x = float(res.x)
    return min(max(x, lo), hi)


def _half_crossing(solver: Solver, xs, ts, peak_index: int, direction: int, peak_x: float, level: float) -> float:
    """Bisect for T = level between the refined peak and the first grid point below level.

    The walk cannot run off the table: the prominence base on each side lies
    below the half level by construction.
    """
    j = peak_index
    while True:
        j += direction
        if (xs[j] - peak_x) * direction > 0 and ts[j] < level:
            break
    inner = peak_x
    k = j - direction
    if (xs[k] - peak_x) * direction > 0 and ts[k] >= level:
        inner = xs[k]
    return bisect(lambda x: solver(x)[1] - level, xs[j], inner, xtol=1e-10, maxiter=200)


def find_resonances(
    table: SweepTable, prominence: float = 0.1, solver: Solver | None = None
) -> ResonanceList:
    """Interior maxima of T with topographic prominence >= ``prominence``.

    Each peak is refined by golden-section search on the solver itself and its
    FWHM is measured by bisection at half height above the higher of the two
    bases that define the peak's prominence.  ``solver`` maps the swept
    value to (R, T) and defaults to the table's own spec.
    """
    if not table.rows:
        raise ParameterError("find_resonances needs a non-empty table")
    if not 0 < prominence < 1:
        raise ParameterError(f"prominence must lie in (0, 1), got {prominence}")
    solver = solver or table.spec.evaluate
    xs = table.independent
    ts = table.trans
    if np.ptp(ts) <= FLAT_TOLERANCE:
        return ResonanceList(degenerate=True)

    peaks, props = find_peaks(ts, prominence=prominence)
    found = []
    for idx, prom, lb, rb in zip(
        peaks, props["prominences"], props["left_bases"], props["right_bases"]
    ):
        position = _refine_peak(solver, xs[idx - 1], xs[idx], xs[idx + 1])
        height = solver(position)[1]
        base = max(ts[lb], ts[rb])
        level = 0.5 * (height + base)
        left = _half_crossing(solver, xs, ts, idx, -1, position, level)
        right = _half_crossing(solver, xs, ts, idx, +1, position, level)
        found.append(Resonance(position, height, right - left, float(height - base)))
    found.sort(key=lambda r: r.position)
    return ResonanceList(found)


def width_trend(
    param_axis: ParamAxis, settings: list[HulthenParams], fixed_sweep: SweepSpec
) -> list[tuple[float, float]]:
    """FWHM of the first full resonance (T > 0.999) for each potential setting."""
    param_axis = ParamAxis(param_axis)
    if len({s.v0 for s in settings}) > 1:
        raise ParameterError("width_trend settings must share v0")
    out = []
    for pot in settings:
        spec = dataclasses.replace(fixed_sweep, fixed=pot)
        found = [r for r in find_resonances(run_sweep(spec)) if r.reaches_unity]
        if not found:
            raise SweepError(f"no resonance with T > {UNIT_HEIGHT} for {pot}")
        out.append((getattr(pot, param_axis.value), found[0].fwhm))
    return out
