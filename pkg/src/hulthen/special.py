"""Complex gamma and Gauss hypergeometric functions on the real segment [0, 1).

Double precision is used whenever the series terms stay close to the size of
the result.  Parameters with large imaginary parts produce heavy cancellation
between terms, so every evaluation estimates its own rounding error and, when
that estimate exceeds the target, is re-run in extended precision with enough
guard bits to absorb the loss.
"""

from __future__ import annotations

import cmath
import math

import gmpy2
import mpmath

from .errors import ConvergenceError, ParameterError, PoleError

__all__ = [
    "complex_gamma",
    "complex_loggamma",
    "gauss_2f1",
    "gauss_2f1_dy",
    "series_path",
    "transformed_path",
]

EPS = 2.0**-52
POLE_TOL = 1e-12
DEGENERATE_TOL = 1e-8
SWITCH_ARG = 0.5
MAX_TERMS = 5000
MAX_PREC = 4096
STALL_TERMS = 3
TARGET_RELERR = 1e-12

# Lanczos coefficients for g = 607/128, 15 terms (Godfrey).
_LANCZOS_G = 607.0 / 128.0
_LANCZOS_C = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_LOG_PI = math.log(math.pi)


def _near_pole(z: complex, tol: float = POLE_TOL) -> bool:
    """True when z is within tol of 0, -1, -2, ..."""
    if z.real > 0.5:
        return False
    return abs(z - round(z.real)) < tol


def _log_sin_pi(z: complex) -> complex:
    # log(sin(pi z)) without overflow for large |Im z|; valid for Im z >= 0.
    w = math.pi * z
    return -1j * w + cmath.log(cmath.exp(2j * w) - 1.0) - cmath.log(2j)


def _lanczos_loggamma(z: complex) -> complex:
    # Re z >= 0.5
    z = z - 1.0
    acc = _LANCZOS_C[0]
    for i in range(1, len(_LANCZOS_C)):
        acc += _LANCZOS_C[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(acc)


def complex_loggamma(z: complex) -> complex:
    """log Gamma(z) for complex z, correct modulo 2*pi*i.

    Only exp() of the result is meaningful; the imaginary part is not tied to
    the principal branch of the continuous log-gamma.
    """
    z = complex(z)
    if _near_pole(z):
        raise PoleError(f"gamma pole at z={z!r}")
    if z.imag < 0:
        return complex_loggamma(z.conjugate()).conjugate()
    if z.real < 0.5:
        return _LOG_PI - _log_sin_pi(z) - _lanczos_loggamma(1.0 - z)
    return _lanczos_loggamma(z)


def complex_gamma(z: complex) -> complex:
    """Gamma(z) via the Lanczos approximation, reflected for Re z < 0.5."""
    z = complex(z)
    if _near_pole(z):
        raise PoleError(f"gamma pole at z={z!r}")
    if z.real < 0.5:
        return math.pi / (cmath.sin(math.pi * z) * complex_gamma(1.0 - z))
    return cmath.exp(_lanczos_loggamma(z))


def _validate(p3: complex, y: float) -> None:
    if not (0.0 <= y < 1.0) or math.isnan(y):
        raise ParameterError(f"hypergeometric argument must lie in [0, 1), got {y!r}")
    if _near_pole(complex(p3)):
        raise PoleError(f"lower parameter {p3!r} is a nonpositive integer")


def _canonical(p1: complex, p2: complex) -> tuple[complex, complex]:
    # Fixed ordering makes F(a, b) and F(b, a) run the identical code path.
    p1, p2 = complex(p1), complex(p2)
    if (p2.real, p2.imag) < (p1.real, p1.imag):
        return p2, p1
    return p1, p2


# ---------------------------------------------------------------------------
# power series


def _series_double(a: complex, b: complex, c: complex, y: float) -> tuple[complex, float]:
    """Sum of the 2F1 power series and the sum of term magnitudes."""
    term = 1.0 + 0.0j
    total = 1.0 + 0.0j
    absum = 1.0
    small = 0
    for n in range(MAX_TERMS):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * y
        total += term
        mag = abs(term)
        absum += mag
        if mag == 0.0:
            return total, absum
        if mag < 1e-16 * abs(total):
            small += 1
            if small >= STALL_TERMS:
                return total, absum
        else:
            small = 0
        if not math.isfinite(mag):
            break
    raise ConvergenceError(
        f"2F1 series for a={a}, b={b}, c={c}, y={y} did not converge in {MAX_TERMS} terms"
    )


def _series_mp(a, b, c, y, prec: int):
    """Power series in gmpy2 arithmetic at `prec` bits.

    Returns the sum and the sum of term magnitudes, both as gmpy2 numbers.
    """
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        a, b, c, y = gmpy2.mpc(a), gmpy2.mpc(b), gmpy2.mpc(c), gmpy2.mpfr(y)
        term = gmpy2.mpc(1)
        total = gmpy2.mpc(1)
        absum = gmpy2.mpfr(1)
        tol = gmpy2.mpfr(2) ** (-prec)
        small = 0
        for n in range(MAX_TERMS):
            term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * y
            total += term
            mag = abs(term)
            absum += mag
            if mag == 0:
                return total, absum
            if mag < tol * abs(total):
                small += 1
                if small >= STALL_TERMS:
                    return total, absum
            else:
                small = 0
    raise ConvergenceError(
        f"2F1 series for a={a}, b={b}, c={c}, y={y} did not converge in {MAX_TERMS} terms"
    )


def _guard_bits(relerr: float) -> int:
    # Extra bits so that an estimated relative loss of `relerr` drops below target.
    if not math.isfinite(relerr):
        return 128
    return max(0, math.ceil(math.log2(relerr / TARGET_RELERR))) + 16


def _refine(evaluate, relerr: float) -> complex:
    """Re-run `evaluate(prec) -> (value, relerr)` until its own estimate passes."""
    prec = 53
    while True:
        prec += _guard_bits(relerr)
        if prec > MAX_PREC:
            raise ConvergenceError(f"cancellation exceeds {MAX_PREC}-bit working precision")
        value, relerr = evaluate(prec)
        if relerr <= TARGET_RELERR:
            return value


def series_path(p1: complex, p2: complex, p3: complex, y: float) -> complex:
    """2F1 by its direct power series about y = 0."""
    _validate(p3, y)
    a, b = _canonical(p1, p2)
    c = complex(p3)
    try:
        total, absum = _series_double(a, b, c, y)
        relerr = 4.0 * EPS * absum / abs(total) if total != 0 else math.inf
    except (ConvergenceError, OverflowError, ZeroDivisionError):
        relerr = math.inf
    if relerr <= TARGET_RELERR:
        return total

    def evaluate(prec):
        total, absum = _series_mp(a, b, c, y, prec)
        if total == 0:
            return 0j, math.inf
        return complex(total), float(4 * absum / abs(total)) * 2.0**-prec

    return _refine(evaluate, relerr)


# ---------------------------------------------------------------------------
# y -> 1 - y connection formula


def _transformed_double(a, b, c, y):
    w = 1.0 - y
    d = c - a - b
    s1, abs1 = _series_double(a, b, 1.0 - d, w)
    s2, abs2 = _series_double(c - a, c - b, 1.0 + d, w)
    lg_c = complex_loggamma(c)
    lgs1 = [lg_c, complex_loggamma(d)]
    lgs2 = [lg_c, complex_loggamma(-d)]
    pre1 = 0j
    if not (_near_pole(c - a) or _near_pole(c - b)):
        lgs1 += [complex_loggamma(c - a), complex_loggamma(c - b)]
        pre1 = cmath.exp(lgs1[0] + lgs1[1] - lgs1[2] - lgs1[3])
    pre2 = 0j
    if not (_near_pole(a) or _near_pole(b)):
        lgs2 += [complex_loggamma(a), complex_loggamma(b)]
        pre2 = cmath.exp(lgs2[0] + lgs2[1] - lgs2[2] - lgs2[3]) * cmath.exp(d * math.log(w))
    t1 = pre1 * s1
    t2 = pre2 * s2
    total = t1 + t2
    # rounding in the log-gammas scales with their magnitude
    lg_scale = max(1.0, sum(abs(v) for v in lgs1 + lgs2))
    err = abs(pre1) * abs1 + abs(pre2) * abs2 + (abs(t1) + abs(t2)) * lg_scale
    relerr = 4.0 * EPS * err / abs(total) if total != 0 else math.inf
    return total, relerr


def _mpfr_to_mpf(x) -> mpmath.mpf:
    # exact; mpmath.mpf(mpfr) mishandles zero
    man, exp = x.as_mantissa_exp()
    return mpmath.mpf((int(man), int(exp)))


def _to_mpmath(z) -> mpmath.mpc:
    return mpmath.mpc(_mpfr_to_mpf(z.real), _mpfr_to_mpf(z.imag))


def _mp_gamma_ratio(num, den):
    # prod Gamma(num) / prod Gamma(den) at the ambient mpmath precision;
    # zero if any den is a pole
    if any(_near_pole(complex(z)) for z in den):
        return mpmath.mpc(0)
    acc = mpmath.fsum(mpmath.loggamma(z) for z in num)
    acc -= mpmath.fsum(mpmath.loggamma(z) for z in den)
    return mpmath.exp(acc)


def _transformed_mp(a, b, c, y, prec: int) -> tuple[complex, float]:
    # Derived parameters are formed at full precision: F is sensitive to them.
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        ga, gb, gc = gmpy2.mpc(a), gmpy2.mpc(b), gmpy2.mpc(c)
        gd = gc - ga - gb
        w = 1 - gmpy2.mpfr(y)
        one_minus_d, one_plus_d = 1 - gd, 1 + gd
        c_a, c_b = gc - ga, gc - gb
    with mpmath.workprec(prec):
        ma, mb, mc, md = (_to_mpmath(z) for z in (ga, gb, gc, gd))
        total = mpmath.mpc(0)
        err = mpmath.mpf(0)
        pre1 = _mp_gamma_ratio((mc, md), (_to_mpmath(c_a), _to_mpmath(c_b)))
        if pre1 != 0:
            s1, abs1 = _series_mp(ga, gb, one_minus_d, w, prec)
            t1 = pre1 * _to_mpmath(s1)
            total += t1
            err += abs(pre1) * _mpfr_to_mpf(abs1) + abs(t1) * 64
        pre2 = _mp_gamma_ratio((mc, -md), (ma, mb))
        if pre2 != 0:
            pre2 *= mpmath.power(_mpfr_to_mpf(w), md)
            s2, abs2 = _series_mp(c_a, c_b, one_plus_d, w, prec)
            t2 = pre2 * _to_mpmath(s2)
            total += t2
            err += abs(pre2) * _mpfr_to_mpf(abs2) + abs(t2) * 64
        if total == 0:
            return 0j, math.inf
        return complex(total), float(4 * err / abs(total)) * 2.0**-prec


def _is_degenerate(a: complex, b: complex, c: complex) -> bool:
    d = c - a - b
    return abs(d - round(d.real)) < DEGENERATE_TOL


def transformed_path(p1: complex, p2: complex, p3: complex, y: float) -> complex:
    """2F1 by the linear connection formula to series about y = 1.

    Undefined when p3 - p1 - p2 is an integer; raises ParameterError there.
    """
    _validate(p3, y)
    a, b = _canonical(p1, p2)
    c = complex(p3)
    if _is_degenerate(a, b, c):
        raise ParameterError(f"c - a - b = {c - a - b} is an integer; connection formula degenerate")
    try:
        total, relerr = _transformed_double(a, b, c, y)
    except (ConvergenceError, OverflowError, ZeroDivisionError):
        relerr = math.inf
    if relerr <= TARGET_RELERR:
        return total
    return _refine(lambda prec: _transformed_mp(a, b, c, y, prec), relerr)


def gauss_2f1(p1: complex, p2: complex, p3: complex, y: float) -> complex:
    """Gauss hypergeometric function 2F1(p1, p2; p3; y) for real y in [0, 1).

    Uses the power series for y <= 0.5 and the connection formula about
    y = 1 above that.  When p3 - p1 - p2 is within 1e-8 of an integer the
    connection formula degenerates and the power series is used throughout.

    >>> abs(gauss_2f1(1, 1, 2, 0.5) - 2 * math.log(2)) < 1e-15
    True
    """
    y = float(y)
    _validate(p3, y)
    if y == 0.0:
        return 1.0 + 0.0j
    a, b = _canonical(p1, p2)
    c = complex(p3)
    if y <= SWITCH_ARG or _is_degenerate(a, b, c):
        return series_path(a, b, c, y)
    return transformed_path(a, b, c, y)


def gauss_2f1_dy(p1: complex, p2: complex, p3: complex, y: float) -> complex:
    """d/dy of 2F1(p1, p2; p3; y) from (p1 p2 / p3) 2F1(p1+1, p2+1; p3+1; y)."""
    _validate(p3, y)
    a, b = _canonical(p1, p2)
    c = complex(p3)
    if _near_pole(c + 1.0):
        raise PoleError(f"shifted lower parameter {c + 1.0!r} is a nonpositive integer")
    return a * b / c * gauss_2f1(a + 1.0, b + 1.0, c + 1.0, y)
