"""Random polynomial model with Brownian-increment coefficients.

The polynomial is ``Q(x) = sum_i A_i x**i`` with ``A_j = D_0 + ... + D_j``
and independent increments ``D_k ~ N(0, sigma_k**2)``.  Writing
``Q(x) = sum_k a_k(x) D_k`` and ``Q'(x) = sum_k b_k(x) D_k`` gives the
second-moment structure of ``(Q(x), Q'(x))`` used everywhere else.

For ``|x| > 1`` every quantity is evaluated through the reversed polynomial
``P(y) = y**n Q(1/y)``, which keeps the numbers O(1) and avoids the near
collinearity of ``Q`` and ``Q'`` at large ``|x|``.  Results then carry a
``log_scale`` so that callers can form scale-free ratios.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DegenerateModel

__all__ = [
    "CoefficientModel",
    "Moments",
    "Basis",
    "basis_at",
    "moments_at",
    "moments_direct",
    "reversed_moments",
]


@dataclass(frozen=True)
class CoefficientModel:
    """Law of the random polynomial.

    Parameters
    ----------
    n : int
        Polynomial degree.
    sigma : sequence of float
        Increment standard deviations ``sigma_0..sigma_n``.
    """

    n: int
    sigma: tuple

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 0:
            raise ValueError(f"degree must be a nonnegative integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        sigma = tuple(float(s) for s in self.sigma)
        if len(sigma) != self.n + 1:
            raise ValueError(f"expected {self.n + 1} sigma values, got {len(sigma)}")
        if any(not math.isfinite(s) or s < 0 for s in sigma):
            raise ValueError("sigma values must be finite and nonnegative")
        if not any(s > 0 for s in sigma):
            raise DegenerateModel("all increment variances are zero")
        object.__setattr__(self, "sigma", sigma)

    @classmethod
    def brownian(cls, n: int, sigma: float = 1.0, sigma0: float | None = None):
        """Uniform increments; ``sigma0`` overrides the first one."""
        s = [float(sigma)] * (n + 1)
        if sigma0 is not None:
            s[0] = float(sigma0)
        return cls(n, tuple(s))

    @property
    def variances(self) -> np.ndarray:
        return np.square(np.asarray(self.sigma, dtype=float))

    @property
    def unit_variance(self) -> bool:
        return all(s == 1.0 for s in self.sigma)


class Basis(NamedTuple):
    """Basis sums, possibly scaled: true ``a_k = a[k] * exp(log_scale)``."""

    a: np.ndarray
    b: np.ndarray
    log_scale: float


@dataclass(frozen=True)
class Moments:
    """Covariance structure of ``(Q(x), Q'(x))`` in scaled form.

    The true values are ``A^2 = a2 * exp(log_scale)`` (same factor for
    ``B^2`` and ``D``) and ``E^2 = e2 * exp(2 * log_scale)``.
    """

    a2: float
    b2: float
    d: float
    e2: float
    log_scale: float = 0.0

    @property
    def var_q(self) -> float:
        return self.a2 * math.exp(self.log_scale)

    @property
    def var_dq(self) -> float:
        return self.b2 * math.exp(self.log_scale)

    @property
    def cov(self) -> float:
        return self.d * math.exp(self.log_scale)

    @property
    def det(self) -> float:
        return self.e2 * math.exp(2.0 * self.log_scale)

    def as_tuple(self) -> tuple:
        """Unscaled ``(A^2, B^2, D, E^2)``; may overflow to inf."""
        return (self.var_q, self.var_dq, self.cov, self.det)

    @property
    def intensity(self) -> float:
        """Scale-free ratio ``E / A^2``."""
        if self.e2 <= 0.0:
            return 0.0
        return math.sqrt(self.e2) / self.a2

    @property
    def log_var_ratio(self) -> float:
        """``log(A^2 / E^2)``; ``inf`` when ``E^2 == 0``."""
        if self.e2 <= 0.0:
            return math.inf
        return math.log(self.a2) - math.log(self.e2) - self.log_scale


def _residual_det(w, a, b):
    """Return ``(A2, B2, D, E2)`` with ``E2 = A2 * |b - (D/A2) a|^2``.

    The projected form stays nonnegative and loses far less accuracy than
    ``A2*B2 - D2`` when ``a`` and ``b`` are nearly parallel.
    """
    a2 = float(np.dot(w, a * a))
    b2 = float(np.dot(w, b * b))
    d = float(np.dot(w, a * b))
    if a2 == 0.0:
        return a2, b2, d, 0.0
    r = b - (d / a2) * a
    return a2, b2, d, a2 * float(np.dot(w, r * r))


def _check(model):
    if not isinstance(model, CoefficientModel):
        raise TypeError(f"expected CoefficientModel, got {type(model).__name__}")


def _inner_basis(n, x):
    # backward recurrences a_k = a_{k+1} + x^k, b_k = b_{k+1} + k x^{k-1}
    k = np.arange(n + 1)
    pw = x ** k.astype(float)
    a = np.cumsum(pw[::-1])[::-1]
    dterm = np.zeros(n + 1)
    if n >= 1:
        dterm[1:] = k[1:] * pw[:-1]
    b = np.cumsum(dterm[::-1])[::-1]
    return a, b


def _reversed_basis(n, y):
    """Basis of ``P(y) = y**n Q(1/y)`` and of ``P'(y)``, indexed by k."""
    m = np.arange(n + 1)
    pw = y ** m.astype(float)
    # p_k = sum_{i=0}^{n-k} y^i, q_k = sum_{i=1}^{n-k} i y^(i-1)
    p_by_m = np.cumsum(pw)
    dterm = np.zeros(n + 1)
    if n >= 1:
        dterm[1:] = m[1:] * pw[:-1]
    q_by_m = np.cumsum(dterm)
    return p_by_m[::-1].copy(), q_by_m[::-1].copy()


def reversed_moments(model: CoefficientModel, y: float):
    """Moments ``(A_P^2, B_P^2, D_P, E_P^2)`` of the reversed polynomial at ``y``.

    ``P(y) = sum_i A_{n-i} y**i`` has the same real roots as ``Q`` under
    ``x = 1/y``.  Valid for any finite ``y`` including ``y = 0``.
    """
    _check(model)
    p, q = _reversed_basis(model.n, float(y))
    return _residual_det(model.variances, p, q)


def basis_at(model: CoefficientModel, x: float) -> Basis:
    """Basis sums ``a_k(x) = sum_{j>=k} x^j`` and ``b_k(x) = a_k'(x)``.

    For ``|x| <= 1`` the values are returned unscaled.  For ``|x| > 1`` they
    are divided by ``|x|**n`` and ``log_scale = n log|x|``.
    """
    _check(model)
    x = float(x)
    if not math.isfinite(x):
        raise ValueError("x must be finite")
    n = model.n
    if abs(x) <= 1.0:
        a, b = _inner_basis(n, x)
        return Basis(a, b, 0.0)
    y = 1.0 / x
    p, q = _reversed_basis(n, y)
    sgn = 1.0 if (x > 0 or n % 2 == 0) else -1.0
    return Basis(sgn * p, sgn * (n * y * p - y * y * q), n * math.log(abs(x)))


def moments_at(model: CoefficientModel, x: float) -> Moments:
    """Scaled second moments of ``(Q(x), Q'(x))``.

    Raises
    ------
    DegenerateModel
        If ``Var Q(x) = 0``, e.g. at ``x = 0`` when ``sigma_0 = 0``.
    """
    _check(model)
    x = float(x)
    if not math.isfinite(x):
        raise ValueError("x must be finite")
    n = model.n
    if abs(x) <= 1.0:
        a, b = _inner_basis(n, x)
        a2, b2, d, e2 = _residual_det(model.variances, a, b)
        out = Moments(a2, b2, d, e2, 0.0)
    else:
        y = 1.0 / x
        ap, bp, dp, ep = reversed_moments(model, y)
        # Q = x^n P,  Q' = x^n (n y P - y^2 P')
        out = Moments(
            a2=ap,
            b2=n * n * y * y * ap - 2.0 * n * y**3 * dp + y**4 * bp,
            d=n * y * ap - y * y * dp,
            e2=y**4 * ep,
            log_scale=2.0 * n * math.log(abs(x)),
        )
    if out.a2 == 0.0:
        raise DegenerateModel(f"Var Q(x) vanishes at x={x!r}")
    return out


def moments_direct(model: CoefficientModel, x: float) -> Moments:
    """Unscaled moments by exact rational term-by-term summation.

    Slow and intended as a test oracle (``n <= 50``, ``|x| <= 4``).  The
    float input is converted exactly, every power sum is expanded naively,
    and the only rounding happens in the final conversion.

    Raises
    ------
    OverflowError
        If a moment does not fit in a double.
    """
    _check(model)
    n = model.n
    xf = Fraction(float(x))
    powers = [xf**j for j in range(n + 1)]
    var = [Fraction(s) ** 2 for s in model.sigma]
    a2 = b2 = d = Fraction(0)
    for k in range(n + 1):
        ak = sum(powers[k:], Fraction(0))
        bk = sum((j * powers[j - 1] for j in range(max(k, 1), n + 1)), Fraction(0))
        a2 += var[k] * ak * ak
        b2 += var[k] * bk * bk
        d += var[k] * ak * bk
    e2 = a2 * b2 - d * d
    vals = [float(v) for v in (a2, b2, d, e2)]
    if any(math.isinf(v) for v in vals):
        raise OverflowError("moments exceed double precision range")
    if a2 == 0:
        raise DegenerateModel(f"Var Q(x) vanishes at x={x!r}")
    return Moments(*vals, 0.0)


def as_model(n: int, sigma: Sequence[float] | float | None = None,
             sigma0: float | None = None) -> CoefficientModel:
    """Convenience constructor accepting a scalar or a full sigma vector."""
    if sigma is None or np.isscalar(sigma):
        return CoefficientModel.brownian(n, 1.0 if sigma is None else float(sigma), sigma0)
    s = list(sigma)
    if sigma0 is not None:
        s[0] = float(sigma0)
    return CoefficientModel(n, tuple(s))
