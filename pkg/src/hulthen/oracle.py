"""Reflection and transmission by direct integration of the wave equation.

Independent of the hypergeometric route: the equation

    phi'' = -[(E - V(x))^2 - 1] phi

is integrated with classical fixed-step RK4 from a pure transmitted wave at
x = +L back to x = -L, where the solution is split into incident and
reflected plane waves.  Because the equation is linear, each RK4 step is a
2x2 real matrix; the steps are built in bulk with numpy and multiplied
together by pairwise reduction.  x = 0, where V has a cusp, is always a grid
node so the method keeps its fourth order.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import GrowthError, ParameterError, ResolutionError
from .potential import HulthenParams, barrier_peak, decay_cutoff, evaluate
from .solution import AmplitudeSolution

DEFAULT_FLOOR = 1e-12
# radians per step at the largest local wavenumber
DEFAULT_RESOLUTION = 0.02
GROWTH_LIMIT = 1e12
_CHUNK = 1 << 15


@dataclass(frozen=True)
class IntegrationSpec:
    box_half_width: float
    step: float
    floor: float = DEFAULT_FLOOR

    @classmethod
    def for_problem(
        cls,
        energy: float,
        pot: HulthenParams,
        floor: float = DEFAULT_FLOOR,
        resolution: float = DEFAULT_RESOLUTION,
    ) -> "IntegrationSpec":
        """Box from the potential floor, step from the fastest local oscillation."""
        k = _momentum(energy, pot)
        # |(E - V)^2 - 1| over V in [0, peak] is largest at an end or at V = E
        peak = barrier_peak(pot)
        kmax = max(k, math.sqrt(abs((energy - peak) ** 2 - 1.0)), 1.0)
        step = min(0.01, 0.1 / k, resolution / kmax)
        # a barrier already below the floor everywhere needs only a nominal box
        width = decay_cutoff(pot, floor) if peak > floor else 1.0 / pot.a
        return cls(width, step, floor)


def _momentum(energy: float, pot: HulthenParams) -> float:
    if not math.isfinite(energy) or energy * energy <= 1.0:
        raise ParameterError(
            f"scattering requires E^2 > 1, got E={energy!r} (v0={pot.v0}, a={pot.a}, q={pot.q})"
        )
    return math.sqrt(energy * energy - 1.0)


def _step_matrices(energy, pot, x0, x1, n):
    """RK4 one-step propagators for phi' = M(x) phi on n equal steps x0 -> x1."""
    h = (x1 - x0) / n
    x = np.linspace(x0, x1, n + 1)

    def coeff(xs):
        return (energy - evaluate(pot, xs)) ** 2 - 1.0

    c0 = coeff(x[:-1])
    ch = coeff(x[:-1] + 0.5 * h)
    c1 = coeff(x[1:])

    def system(c):
        m = np.zeros((c.size, 2, 2))
        m[:, 0, 1] = 1.0
        m[:, 1, 0] = -c
        return m

    eye = np.eye(2)
    m0, mh, m1 = system(c0), system(ch), system(c1)
    k1 = m0
    k2 = mh @ (eye + 0.5 * h * k1)
    k3 = mh @ (eye + 0.5 * h * k2)
    k4 = m1 @ (eye + h * k3)
    return eye + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _ordered_product(mats: np.ndarray) -> np.ndarray:
    # mats[n-1] @ ... @ mats[0]
    eye = np.eye(2)
    while len(mats) > 1:
        if len(mats) % 2:
            mats = np.concatenate([mats, eye[None]])
        mats = mats[1::2] @ mats[0::2]
    return mats[0]


def _propagator(energy, pot, x0, x1, n):
    total = np.eye(2)
    edges = np.linspace(x0, x1, -(-n // _CHUNK) + 1)
    counts = np.diff(np.linspace(0, n, len(edges)).round().astype(int))
    for lo, hi, m in zip(edges[:-1], edges[1:], counts):
        total = _ordered_product(_step_matrices(energy, pot, lo, hi, int(m))) @ total
    return total


def _shoot(energy: float, pot: HulthenParams, half_width: float, n_half: int):
    """(phi, phi') at -L starting from exp(ikx) at +L, n_half steps per side."""
    k = _momentum(energy, pot)
    start = cmath.exp(1j * k * half_width)
    state = np.array([start, 1j * k * start])
    right = _propagator(energy, pot, half_width, 0.0, n_half)
    state = right @ state
    _check_growth(state, energy, pot)
    state = _propagator(energy, pot, 0.0, -half_width, n_half) @ state
    _check_growth(state, energy, pot)
    return complex(state[0]), complex(state[1])


def _check_growth(state, energy, pot):
    mag = float(np.max(np.abs(state)))
    if not math.isfinite(mag) or mag > GROWTH_LIMIT:
        raise GrowthError(
            f"|phi| reached {mag:g} at E={energy}, v0={pot.v0}, a={pot.a}, q={pot.q}"
        )


def _split(energy, half_width, phi, dphi):
    # phi = A e^{ikx} + B e^{-ikx} at x = -L
    k = math.sqrt(energy * energy - 1.0)
    ampA = 0.5 * (phi + dphi / (1j * k)) * cmath.exp(1j * k * half_width)
    ampB = 0.5 * (phi - dphi / (1j * k)) * cmath.exp(-1j * k * half_width)
    return ampA, ampB


def _validate(energy: float, pot: HulthenParams, spec: IntegrationSpec) -> int:
    k = _momentum(energy, pot)
    if not spec.step <= min(0.01, 0.1 / k):
        raise ResolutionError(
            f"step {spec.step} exceeds min(0.01, 0.1/k) = {min(0.01, 0.1 / k)} at E={energy}"
        )
    if spec.box_half_width <= 0:
        raise ParameterError(f"box half-width must be positive, got {spec.box_half_width}")
    return max(1, math.ceil(spec.box_half_width / spec.step))


def integrate_fixed(
    energy: float, pot: HulthenParams, spec: IntegrationSpec | None = None
) -> AmplitudeSolution:
    """Single fixed-step RK4 pass; no extrapolation."""
    if spec is None:
        spec = IntegrationSpec.for_problem(energy, pot)
    n_half = _validate(energy, pot, spec)
    phi, dphi = _shoot(energy, pot, spec.box_half_width, n_half)
    return AmplitudeSolution.from_amplitudes(*_split(energy, spec.box_half_width, phi, dphi))


def integrate_and_extract(
    energy: float, pot: HulthenParams, spec: IntegrationSpec | None = None
) -> AmplitudeSolution:
    """R and T from RK4 at step h and h/2, combined by Richardson extrapolation."""
    if spec is None:
        spec = IntegrationSpec.for_problem(energy, pot)
    n_half = _validate(energy, pot, spec)
    width = spec.box_half_width
    coarse = np.array(_shoot(energy, pot, width, n_half))
    fine = np.array(_shoot(energy, pot, width, 2 * n_half))
    phi, dphi = (16.0 * fine - coarse) / 15.0
    return AmplitudeSolution.from_amplitudes(*_split(energy, width, complex(phi), complex(dphi)))


def probability_currents(
    energy: float, pot: HulthenParams, spec: IntegrationSpec | None = None
) -> tuple[float, float]:
    """Current Im(phi* phi') at +L (imposed) and at -L (after integration)."""
    if spec is None:
        spec = IntegrationSpec.for_problem(energy, pot)
    n_half = _validate(energy, pot, spec)
    k = _momentum(energy, pot)
    phi, dphi = _shoot(energy, pot, spec.box_half_width, n_half)
    return k, (phi.conjugate() * dphi).imag
