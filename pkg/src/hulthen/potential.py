"""Generalized Hulthen barrier V(x) = V0 / (exp(a|x|) - q)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError


@dataclass(frozen=True)
class HulthenParams:
    """Strength v0, inverse diffuseness a and shape q of the barrier.

    Natural units throughout (hbar = c = m = 1).
    """

    v0: float
    a: float
    q: float

    def __post_init__(self):
        for name in ("v0", "a", "q"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ParameterError(f"{name} must be finite, got {value!r}")
        if self.v0 <= 0:
            raise ParameterError(f"v0 must be positive, got {self.v0!r}")
        if self.a <= 0:
            raise ParameterError(f"a must be positive, got {self.a!r}")
        if not 0 < self.q < 1:
            raise ParameterError(f"q must lie in (0, 1), got {self.q!r}")


def evaluate(params: HulthenParams, x):
    """V(x); accepts scalars or numpy arrays.

    Both half-line branches reduce to V0 / (exp(a|x|) - q), so the function is
    even by construction and the x = 0 value is V0 / (1 - q).
    """
    if np.ndim(x) == 0:
        return params.v0 / (math.exp(params.a * abs(x)) - params.q)
    x = np.asarray(x, dtype=float)
    return params.v0 / (np.exp(params.a * np.abs(x)) - params.q)


def barrier_peak(params: HulthenParams) -> float:
    return params.v0 / (1.0 - params.q)


def decay_cutoff(params: HulthenParams, floor: float) -> float:
    """Smallest L > 0 with V(L) <= floor."""
    if not 0 < floor < barrier_peak(params):
        raise ParameterError(
            f"floor must lie in (0, {barrier_peak(params)}), got {floor!r}"
        )
    length = math.log(params.v0 / floor + params.q) / params.a
    # the closed form can land a few ulps short of the threshold; near x = 0
    # single ulps are subnormal, so the step doubles
    step = math.ulp(length)
    while evaluate(params, length) > floor:
        length += step
        step *= 2
    return length
