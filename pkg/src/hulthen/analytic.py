"""Closed-form scattering states of the Klein-Gordon equation in the Hulthen barrier.

On x < 0 the substitution y = q exp(a x) and on x > 0 the substitution
z = q exp(-a x) turn the reduced equation

    phi'' + [(E - V(x))^2 - 1] phi = 0

into hypergeometric equations.  The left solution carries an incident and a
reflected wave, the right one only a transmitted wave; continuity of phi and
d(phi)/dx at x = 0 (where y = z = q) fixes the amplitudes.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

from .errors import ParameterError, SingularSystemError
from .potential import HulthenParams
from .solution import AmplitudeSolution
from .special import gauss_2f1, gauss_2f1_dy

__all__ = [
    "AmplitudeSolution",
    "Branch",
    "WaveParameters",
    "match_at_origin",
    "phi_left",
    "phi_right",
    "solve_matching",
    "transmission",
    "wave_parameters",
]

SINGULAR_DET = 1e-14


class Branch(str, enum.Enum):
    """Root of the exponent lambda at the y = 1 singular point."""

    PLUS = "plus"
    MINUS = "minus"


@dataclass(frozen=True)
class WaveParameters:
    energy: float
    k: float
    mu: complex
    lam: complex
    nu: complex
    branch: Branch
    pot: HulthenParams

    def upper_params(self, sign: int) -> tuple[complex, complex, complex]:
        """Hypergeometric triple for the y^(+mu) (sign=+1) or y^(-mu) (sign=-1) solution."""
        smu = sign * self.mu
        return smu - self.nu + self.lam, smu + self.nu + self.lam, 1.0 + 2.0 * smu


def wave_parameters(
    energy: float, pot: HulthenParams, branch: Branch = Branch.PLUS
) -> WaveParameters:
    if not math.isfinite(energy) or energy * energy <= 1.0:
        raise ParameterError(
            f"scattering requires E^2 > 1, got E={energy!r} (v0={pot.v0}, a={pot.a}, q={pot.q})"
        )
    branch = Branch(branch)
    v0, a, q = pot.v0, pot.a, pot.q
    k = math.sqrt(energy * energy - 1.0)
    mu = 1j * k / a
    root = cmath.sqrt(1.0 - (2.0 * v0 / (a * q)) ** 2)
    lam = 0.5 + 0.5 * root if branch is Branch.PLUS else 0.5 - 0.5 * root
    nu = cmath.sqrt(mu * mu + lam * lam - lam - 2.0 * energy * v0 / (a * a * q))
    return WaveParameters(energy, k, mu, lam, nu, branch, pot)


def _basis(yv: float, sign: int, wp: WaveParameters) -> tuple[complex, complex]:
    # y^(sign mu) (1-y)^lam F(...; y) and its y-derivative
    p1, p2, p3 = wp.upper_params(sign)
    envelope = cmath.exp(sign * wp.mu * math.log(yv) + wp.lam * math.log1p(-yv))
    f = gauss_2f1(p1, p2, p3, yv)
    df = gauss_2f1_dy(p1, p2, p3, yv)
    value = envelope * f
    dvalue = envelope * (f * (sign * wp.mu / yv - wp.lam / (1.0 - yv)) + df)
    return value, dvalue


def _check_domain(v: float, wp: WaveParameters, name: str) -> None:
    if not 0.0 < v <= wp.pot.q:
        raise ParameterError(f"{name} must lie in (0, q={wp.pot.q}], got {v!r}")


def phi_left(
    yv: float, coefA: complex, coefB: complex, wp: WaveParameters
) -> tuple[complex, complex]:
    """Left-region solution at y = q exp(a x) and its x-derivative."""
    _check_domain(yv, wp, "y")
    value = 0j
    dy = 0j
    if coefA != 0:
        u, du = _basis(yv, +1, wp)
        value += coefA * u
        dy += coefA * du
    if coefB != 0:
        u, du = _basis(yv, -1, wp)
        value += coefB * u
        dy += coefB * du
    return value, wp.pot.a * yv * dy


def phi_right(zv: float, coefD: complex, wp: WaveParameters) -> tuple[complex, complex]:
    """Transmitted-wave solution at z = q exp(-a x) and its x-derivative."""
    _check_domain(zv, wp, "z")
    u, du = _basis(zv, -1, wp)
    return coefD * u, -wp.pot.a * zv * coefD * du


def match_at_origin(
    energy: float, pot: HulthenParams, branch: Branch = Branch.PLUS
) -> AmplitudeSolution:
    """Solve continuity of phi and phi' at x = 0 for A and B with D = 1."""
    return solve_matching(wave_parameters(energy, pot, branch))


def solve_matching(wp: WaveParameters) -> AmplitudeSolution:
    """Matching solve for an explicit parameter set (y = z = q at x = 0)."""
    pot = wp.pot
    energy = wp.energy
    q = pot.q
    u1, du1 = phi_left(q, 1.0, 0.0, wp)
    u2, du2 = phi_left(q, 0.0, 1.0, wp)
    w, dw = phi_right(q, 1.0, wp)
    det = u1 * du2 - u2 * du1
    if not abs(det) >= SINGULAR_DET:
        raise SingularSystemError(
            f"matching determinant {det!r} at E={energy}, v0={pot.v0}, a={pot.a}, q={pot.q}"
        )
    ampA = (w * du2 - u2 * dw) / det
    ampB = (u1 * dw - w * du1) / det
    return AmplitudeSolution.from_amplitudes(ampA, ampB, 1.0)


def transmission(
    energy: float, pot: HulthenParams, branch: Branch = Branch.PLUS
) -> tuple[float, float]:
    """(R, T) at one energy."""
    sol = match_at_origin(energy, pot, branch)
    return sol.refl, sol.trans
