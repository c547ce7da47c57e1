"""Closed-form leading and correction integrands near x = +-1.

Every expression below is an exact algebraic rearrangement of the printed
rational-exponential forms: dominant exponentials are factored out so that
only ``w = exp(-t)`` appears, which removes overflow at large ``t``.  The
forms are 0/0 as ``t -> 0``; below ``SMALL_T`` they are evaluated with
mpmath at a working precision that grows with ``log(1/t)``.

Naming: ``r1..r4`` and ``s1..s4`` are the leading and 1/n correction
integrands of the four intervals (1, inf), (-inf, -1), (0, 1), (-1, 0);
``g21_outer``/``g21_inner`` are the u^2 exponent coefficients on
(-inf, -1) and (-1, 0).  ``reg_*`` functions are the indicator-regularized
integrands whose integrals are tabulated; where a naive difference would
cancel catastrophically for large ``t`` they are rewritten with
``expm1``/``log1p``.
"""

from __future__ import annotations

import math
from enum import Enum

import mpmath
import numpy as np

from .errors import DomainError

__all__ = [
    "Parity",
    "SMALL_T",
    "r1", "r2", "r3", "r4",
    "s1", "s2", "s3", "s4",
    "g21_outer", "g21_inner",
    "s22", "s23", "s42", "s43",
]

#: below this the double-precision forms lose accuracy to cancellation
SMALL_T = 1.5
#: beyond this exp(-t) terms are below double resolution of the algebraic part
LARGE_T = 60.0


class Parity(str, Enum):
    EVEN = "even"
    ODD = "odd"

    @classmethod
    def of(cls, n: int) -> "Parity":
        return cls.EVEN if n % 2 == 0 else cls.ODD

    @property
    def sign(self) -> int:
        return 1 if self is Parity.EVEN else -1


class _FloatLib:
    exp = staticmethod(math.exp)
    sqrt = staticmethod(math.sqrt)
    expm1 = staticmethod(math.expm1)
    log1p = staticmethod(math.log1p)

    @staticmethod
    def num(v):
        return float(v)


class _MpLib:
    exp = staticmethod(mpmath.exp)
    sqrt = staticmethod(mpmath.sqrt)
    expm1 = staticmethod(mpmath.expm1)
    log1p = staticmethod(mpmath.log1p)

    @staticmethod
    def num(v):
        return mpmath.mpf(v)


def working_digits(t: float) -> int:
    """Decimal digits needed to evaluate the closed forms at small ``t``."""
    return 30 + int(math.ceil(14.0 * max(0.0, -math.log10(t))))


def _dispatch(form, t, *args, small_t=SMALL_T):
    t = float(t)
    if not t > 0.0:
        raise DomainError(f"closed forms require t > 0, got {t!r}")
    if math.isinf(t):
        raise DomainError("t must be finite")
    if t >= small_t:
        return float(form(t, _FloatLib, *args))
    with mpmath.workdps(working_digits(t)):
        return float(form(mpmath.mpf(t), _MpLib, *args))


def _sqrt_clamped(lib, v, scale=1.0):
    # roundoff can push an O(scale) radicand a hair below zero
    if v < 0:
        if v > -1e-12 * scale:
            return lib.num(0)
        raise DomainError(f"negative radicand {v!r}")
    return lib.sqrt(v)


# --- shared building blocks (w = exp(-t)) ---------------------------------

def _rad1(t, w):
    # e^{-4t} x radicand of R1 and of S12
    return ((4 * t - 15) + (24 * t + 32) * w
            - (8 * t**3 + 12 * t**2 + 36 * t + 18) * w**2 + 8 * t * w**3 + w**4)


def _den1(t, w):
    # e^{-2t} (2t e^{2t} - 3 e^{2t} + 4 e^t - 1)
    return 2 * t - 3 + 4 * w - w * w


def _rad2(t, w):
    # e^{-4t} x radicand numerator of R2; equals minus the G21_outer denominator
    return (1 + 4 * t) - (2 + 4 * t + 12 * t**2 + 8 * t**3) * w**2 + w**4


def _den2(t, w):
    return (1 + 2 * t) - w * w


def _rad3m1(t, v):
    # R3 radicand minus one: R1 radicand at -t, v = exp(-t)
    return ((-4 * t - 15) * v**4 + (32 - 24 * t) * v**3
            + (8 * t**3 - 12 * t**2 + 36 * t - 18) * v**2 - 8 * t * v)


def _den3m1(t, v):
    # 1 - 4v + (3 + 2t) v^2, minus one
    return -4 * v + (3 + 2 * t) * v * v


def _rad4m1(t, v):
    # R4 radicand minus one; R4 radicand is also the G21_inner denominator
    return (-2 + 4 * t - 12 * t**2 + 8 * t**3) * v**2 + (1 - 4 * t) * v**4


def _den4m1(t, v):
    return (2 * t - 1) * v * v


# --- R ---------------------------------------------------------------------

def _r1_form(t, lib):
    w = lib.exp(-t)
    return _sqrt_clamped(lib, _rad1(t, w), 4 * t) / (2 * t * _den1(t, w))


def _r2_form(t, lib):
    w = lib.exp(-t)
    return _sqrt_clamped(lib, _rad2(t, w), 4 * t) / (2 * t * _den2(t, w))


def _r3_form(t, lib):
    v = lib.exp(-t)
    return _sqrt_clamped(lib, 1 + _rad3m1(t, v)) / (2 * t * (1 + _den3m1(t, v)))


def _r4_form(t, lib):
    v = lib.exp(-t)
    return _sqrt_clamped(lib, 1 + _rad4m1(t, v)) / (2 * t * (1 + _den4m1(t, v)))


def r1(t: float) -> float:
    """Leading integrand on (1, inf) under ``x = 1 + t/n``."""
    return _dispatch(_r1_form, t)


def r2(t: float) -> float:
    """Leading integrand on (-inf, -1) under ``x = -1 - t/n``."""
    return _dispatch(_r2_form, t)


def r3(t: float) -> float:
    """Leading integrand on (0, 1); identical to ``R1(-t)``."""
    return _dispatch(_r3_form, t)


def r4(t: float) -> float:
    """Leading integrand on (-1, 0); identical to ``R2(-t)``."""
    return _dispatch(_r4_form, t)


# --- S ---------------------------------------------------------------------

def _s11_scaled(t, w):
    return -0.25 * ((4 * t**2 - 6 * t - 27)
                    + (156 - 84 * t + 116 * t**2 - 24 * t**3) * w
                    + (16 * t**5 - 72 * t**4 + 96 * t**3 - 212 * t**2 + 220 * t - 331) * w**2
                    + (328 - 168 * t + 128 * t**2 - 104 * t**3) * w**3
                    + (8 * t**4 + 8 * t**3 - 32 * t**2 + 42 * t - 153) * w**4
                    + (28 - 4 * t - 4 * t**2) * w**5
                    - w**6)


def _s1_form(t, lib):
    w = lib.exp(-t)
    s12 = _den1(t, w) ** 2 * _sqrt_clamped(lib, _rad1(t, w), 4 * t)
    return _s11_scaled(t, w) / s12


def _s21_scaled(t, w):
    return (w**6 + (-8 * t**4 + 30 * t - 8 * t**3 + 48 * t**2 - 3) * w**4
            + (3 - 12 * t + 52 * t**2 + 96 * t**3 + 40 * t**4 - 16 * t**5) * w**2
            - (18 * t + 4 * t**2 + 1))


def _s22_scaled(t, w):
    return (8 * t + 32 * t**3 + 40 * t**2) * w**3 + (-8 * t**2 - 12 * t) * w + 4 * t * w**5


def _s23_scaled(t, lib, w):
    return _sqrt_clamped(lib, _rad2(t, w), 4 * t) * _den2(t, w) ** 2


def _s2_form(t, lib, sign):
    w = lib.exp(-t)
    return (_s21_scaled(t, w) + sign * _s22_scaled(t, w)) / (4 * _s23_scaled(t, lib, w))


def _s31m(t, v):
    # S31 minus its constant 3/4
    return ((-7 * t**2 - 34.5 * t - 15.75) * v**6
            + (6 * t**3 + 35 * t - 55 * t**2 + 39) * v**5
            + (49 * t - 4 * t**5 + 22 * t**4 + 91 * t**2 - 15.75 - 12 * t**3) * v**4
            + (-6 * t**3 - 30 - 44 * t**2 - 66 * t) * v**3
            + (17.5 * t + 2 * t**4 - 6 * t**3 + 16 * t**2 + 30.75) * v**2
            + (-9 - t - t**2) * v)


def _s3_form(t, lib):
    v = lib.exp(-t)
    s32 = (1 + _den3m1(t, v)) ** 2 * _sqrt_clamped(lib, 1 + _rad3m1(t, v))
    return (lib.num(0.75) + _s31m(t, v)) / s32


def _s41m(t, v):
    # S41 minus its constant 3
    return (8 * (t**4 - 3 * t**3 + 6 * t**2 - 2.25 * t - 1.125) * v**2
            + 8 * (-2 * t**5 + 15 * t**4 - 22 * t**3 + 9.5 * t**2 - 1.5 * t + 1.125) * v**4
            + 8 * (-3.5 * t**2 + 3.75 * t - 0.375) * v**6)


def _s42(t, v):
    # S22 at -t
    return (-8 * t - 32 * t**3 + 40 * t**2) * v**3 + (12 * t - 8 * t**2) * v**5 - 4 * t * v


def _s43(t, lib, v):
    return _sqrt_clamped(lib, 1 + _rad4m1(t, v)) * (1 + _den4m1(t, v)) ** 2


def _s4_form(t, lib, sign):
    v = lib.exp(-t)
    return (lib.num(3) + _s41m(t, v) + sign * _s42(t, v)) / (4 * _s43(t, lib, v))


def s1(t: float) -> float:
    """1/n correction integrand on (1, inf)."""
    return _dispatch(_s1_form, t)


def s2(t: float, parity: Parity | str) -> float:
    """1/n correction integrand on (-inf, -1); depends on the parity of n."""
    return _dispatch(_s2_form, t, Parity(parity).sign)


def s3(t: float) -> float:
    """1/n correction integrand on (0, 1)."""
    return _dispatch(_s3_form, t)


def s4(t: float, parity: Parity | str) -> float:
    """1/n correction integrand on (-1, 0); depends on the parity of n."""
    return _dispatch(_s4_form, t, Parity(parity).sign)


# Unscaled parity components, exposed for the parity-coherence identity
# s2(even) - s2(odd) = 2 * S22 / (4 * S23) (same for s4).

def _s22_form(t, lib):
    return _s22_scaled(t, lib.exp(-t)) * lib.exp(6 * t)


def _s23_form(t, lib):
    return _s23_scaled(t, lib, lib.exp(-t)) * lib.exp(6 * t)


def s22(t: float) -> float:
    return _dispatch(_s22_form, t)


def s23(t: float) -> float:
    return _dispatch(_s23_form, t)


def s42(t: float) -> float:
    return _dispatch(lambda t, lib: _s42(t, lib.exp(-t)), t)


def s43(t: float) -> float:
    return _dispatch(lambda t, lib: _s43(t, lib, lib.exp(-t)), t)


# --- G21 -------------------------------------------------------------------

def _g21_outer_form(t, lib):
    w = lib.exp(-t)
    return -16 * t**3 * _den2(t, w) * w * w / _rad2(t, w)


def _g21_inner_form(t, lib):
    v = lib.exp(-t)
    return -16 * t**3 * (1 + _den4m1(t, v)) / (1 + _rad4m1(t, v))


def g21_outer(t: float) -> float:
    """u^2/n^3 exponent coefficient on (-inf, -1); decays like exp(-2t)."""
    return _dispatch(_g21_outer_form, t)


def g21_inner(t: float) -> float:
    """u^2/n^3 exponent coefficient on (-1, 0); grows like -16 t^3."""
    return _dispatch(_g21_inner_form, t)


# --- regularized integrands ------------------------------------------------

def _sqrt1pm1(lib, x):
    # sqrt(1 + x) - 1 without cancellation
    return x / (lib.sqrt(1 + x) + 1)


def _reg_r3_form(t, lib):
    if t <= 1:
        return _r3_form(t, lib)
    v = lib.exp(-t)
    c = 1 + _den3m1(t, v)
    return (_sqrt1pm1(lib, _rad3m1(t, v)) - _den3m1(t, v)) / (2 * t * c)


def _reg_r4_form(t, lib):
    if t <= 1:
        return _r4_form(t, lib)
    v = lib.exp(-t)
    c = 1 + _den4m1(t, v)
    return (_sqrt1pm1(lib, _rad4m1(t, v)) - _den4m1(t, v)) / (2 * t * c)


def _reg_s3_form(t, lib):
    if t <= 1:
        return _s3_form(t, lib) - 2 * t * _r3_form(t, lib)
    v = lib.exp(-t)
    cm1, mm1 = _den3m1(t, v), _rad3m1(t, v)
    c = 1 + cm1
    root = lib.sqrt(1 + mm1)
    # S3 - 3/4 and 2 t R3 - 1, each free of cancellation
    s32m1 = lib.expm1(2 * lib.log1p(cm1) + 0.5 * lib.log1p(mm1))
    s3_dev = (_s31m(t, v) - 0.75 * s32m1) / (c * c * root)
    r3_dev = (_sqrt1pm1(lib, mm1) - cm1) / c
    return s3_dev - r3_dev


def _reg_s4_form(t, lib, sign):
    if t <= 1:
        return _s4_form(t, lib, sign) - 2 * t * _r4_form(t, lib)
    v = lib.exp(-t)
    cm1, mm1 = _den4m1(t, v), _rad4m1(t, v)
    c = 1 + cm1
    root = lib.sqrt(1 + mm1)
    s43m1 = lib.expm1(2 * lib.log1p(cm1) + 0.5 * lib.log1p(mm1))
    s4_dev = (_s41m(t, v) + sign * _s42(t, v) - 3 * s43m1) / (4 * c * c * root)
    r4_dev = (_sqrt1pm1(lib, mm1) - cm1) / c
    return s4_dev - r4_dev


def _reg_r4g_form(t, lib):
    # R4 * G21_inner + 8 t^2 = 8 t^2 (1 - 1/sqrt(m4))
    mm1 = _rad4m1(t, lib.exp(-t))
    if t < 2:
        return 8 * t * t * (1 - 1 / lib.sqrt(1 + mm1))
    return 8 * t * t * _sqrt1pm1(lib, mm1) / lib.sqrt(1 + mm1)


def _reg_half_r4g2_form(t, lib):
    # R4 * G21_inner^2 / 2 - 64 t^5 = 64 t^5 (c / m4^{3/2} - 1)
    v = lib.exp(-t)
    cm1, mm1 = _den4m1(t, v), _rad4m1(t, v)
    if t < 2:
        return 64 * t**5 * ((1 + cm1) / (1 + mm1) ** 1.5 - 1)
    m32m1 = lib.expm1(1.5 * lib.log1p(mm1))
    return 64 * t**5 * (cm1 - m32m1) / (1 + mm1) ** 1.5


def _r2g_form(t, lib):
    # R2 * G21_outer = -8 t^2 w^2 / sqrt(rad2)
    w = lib.exp(-t)
    return -8 * t * t * w * w / _sqrt_clamped(lib, _rad2(t, w), 4 * t)


def _half_r2g2_form(t, lib):
    w = lib.exp(-t)
    rad = _rad2(t, w)
    return 64 * t**5 * _den2(t, w) * w**4 / (rad * _sqrt_clamped(lib, rad, 4 * t))


# Algebraic large-t tails.  For t >= LARGE_T the exp(-t) terms vanish at
# double precision and S + 1/(8 sqrt t) is formed as
#   (alpha^2 R - beta^2 t) / ((alpha sqrt R + beta sqrt t) 32 Q sqrt(R t))
# with the polynomial numerator expanded exactly in integer arithmetic.

def _poly(*c):
    return np.polynomial.Polynomial(c)


def _tail_parts(alpha, beta, rad):
    num = alpha * alpha * rad - beta * beta * _poly(0, 1)
    return alpha, beta, rad, _poly(*np.trim_zeros(num.coef, "b"))


# S1 tail: -(4t^2-6t-27) / (4 (2t-3)^2 sqrt(4t-15))
_S1_TAIL = _tail_parts(4 * _poly(-3, 2) ** 2, 8 * _poly(-27, -6, 4), _poly(-15, 4))
# S2 tail: -(4t^2+18t+1) / (4 (2t+1)^2 sqrt(4t+1))
_S2_TAIL = _tail_parts(4 * _poly(1, 2) ** 2, 8 * _poly(1, 18, 4), _poly(1, 4))


def _alg_reg(parts, t):
    alpha, beta, rad, num = parts
    a, b, r = alpha(t), beta(t), rad(t)
    return num(t) / ((a * math.sqrt(r) + b * math.sqrt(t)) * 8 * a * math.sqrt(r * t))


def _reg_s1_form(t, lib):
    if t >= LARGE_T and lib is _FloatLib:
        return _alg_reg(_S1_TAIL, t)
    return _s1_form(t, lib) + (1 / (8 * lib.sqrt(t)) if t > 1 else 0)


def _reg_s2_form(t, lib, sign):
    if t >= LARGE_T and lib is _FloatLib:
        return _alg_reg(_S2_TAIL, t)
    return _s2_form(t, lib, sign) + (1 / (8 * lib.sqrt(t)) if t > 1 else 0)


def reg_integrand(name: str):
    """Return the scalar integrand ``f(t)`` for a tabulated constant."""
    forms = {
        "int_R1": (_r1_form,),
        "int_S1_reg": (_reg_s1_form,),
        "int_R2": (_r2_form,),
        "int_R2_G21": (_r2g_form,),
        "int_half_R2_G21sq": (_half_r2g2_form,),
        "int_S2_reg_even": (_reg_s2_form, 1),
        "int_S2_reg_odd": (_reg_s2_form, -1),
        "int_R3_reg": (_reg_r3_form,),
        "int_S3_reg": (_reg_s3_form,),
        "int_R4_reg": (_reg_r4_form,),
        "int_S4_reg_even": (_reg_s4_form, 1),
        "int_S4_reg_odd": (_reg_s4_form, -1),
        "int_R4_G21_reg": (_reg_r4g_form,),
        "int_half_R4_G21sq_reg": (_reg_half_r4g2_form,),
    }
    form, *args = forms[name]
    return lambda t: _dispatch(form, t, *args)
