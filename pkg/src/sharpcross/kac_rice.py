"""Expected number of u-sharp zero crossings via the Kac-Rice integral.

For a centered Gaussian process the intensity of crossings whose slope
exceeds ``u`` in absolute value is::

    f(x) = (E / (pi A^2)) * exp(-A^2 u^2 / (2 E^2))

with ``A^2 = Var Q(x)`` and ``E^2 = det Cov(Q(x), Q'(x))``.  The count on
an interval is the integral of ``f``.  The real line is split at -1, 0, 1
and each piece is integrated in coordinates adapted to the 1/n boundary
layer at x = +-1::

    |x| in [1, 2]     x = +-(1 + t/n)       t in [0, n]
    |x| in [1/2, 1]   x = +-n/(n + t)       t in [0, n]
    |x| in [0, 1/2]   x itself
    |x| >= 2          y = 1/x               y in [-1/2, 1/2]

so every integral is over a finite range and no truncation is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from scipy import integrate

from .errors import DegenerateOracle
from .model import CoefficientModel, moments_at, reversed_moments
from .quadrature import ZERO, QuadratureConfig, QuadResult, integrate_panels

__all__ = [
    "SharpSpec",
    "QuadratureConfig",
    "ExpectedCount",
    "density_at",
    "density_oracle",
    "expected_count",
    "expected_count_split",
    "SPLIT_INTERVALS",
]

INF = math.inf

SPLIT_INTERVALS = {
    "neg_outer": (-INF, -1.0),
    "neg_inner": (-1.0, 0.0),
    "pos_inner": (0.0, 1.0),
    "pos_outer": (1.0, INF),
}


@dataclass(frozen=True)
class SharpSpec:
    """Slope threshold; ``u = 0`` counts every zero crossing."""

    u: float = 0.0

    def __post_init__(self):
        u = float(self.u)
        if not u >= 0.0:
            raise ValueError(f"u must be >= 0, got {self.u!r}")
        object.__setattr__(self, "u", u)


@dataclass(frozen=True)
class ExpectedCount:
    value: float
    est_error: float
    interval: Tuple[float, float]
    u: float
    converged: bool = True

    def to_dict(self) -> dict:
        return {"value": self.value, "est_error": self.est_error,
                "interval": [_fmt_end(e) for e in self.interval],
                "u": self.u, "converged": self.converged}


def _fmt_end(e):
    if math.isinf(e):
        return "inf" if e > 0 else "-inf"
    return e


def _spec(spec):
    if spec is None:
        return SharpSpec()
    if isinstance(spec, SharpSpec):
        return spec
    return SharpSpec(spec)


def _exp_factor(log_ratio: float, u: float) -> float:
    # exp(-u^2/2 * A^2/E^2) with A^2/E^2 = exp(log_ratio)
    if u == 0.0:
        return 1.0
    if log_ratio == math.inf:
        return 0.0
    z = 2.0 * math.log(u) + log_ratio - math.log(2.0)
    if z > 700.0:
        return 0.0
    return math.exp(-math.exp(z))


def density_at(model: CoefficientModel, x: float, spec=None) -> float:
    """Sharp-crossing intensity ``f_n(x)``; zero where ``E^2 = 0``."""
    u = _spec(spec).u
    m = moments_at(model, x)
    if m.e2 <= 0.0:
        return 0.0
    g1 = m.intensity / math.pi
    if u == 0.0:
        return g1
    return g1 * _exp_factor(m.log_var_ratio, u)


def _density_inverted(model: CoefficientModel, y: float, u: float) -> float:
    """``f(1/y) / y^2`` from the reversed polynomial; finite at ``y = 0``."""
    ap, _, _, ep = reversed_moments(model, y)
    if ep <= 0.0 or ap <= 0.0:
        return 0.0
    g = math.sqrt(ep) / ap / math.pi
    if u == 0.0:
        return g
    # A_Q^2 / E_Q^2 = |y|^(2n-4) A_P^2 / E_P^2
    p = 2 * model.n - 4
    if y == 0.0:
        if p > 0:
            return g
        if p < 0:
            return 0.0
        log_y = 0.0
    else:
        log_y = p * math.log(abs(y))
    return g * _exp_factor(log_y + math.log(ap) - math.log(ep), u)


def density_oracle(model: CoefficientModel, x: float, spec=None, n_sd: float = 12.0) -> float:
    """Brute-force intensity: integrate ``|y| p(0, y)`` over ``|y| > u``.

    ``p(0, y) = exp(-A^2 y^2 / (2 E^2)) / (2 pi E)`` is the zero-mean joint
    density of ``(Q(x), Q'(x))`` at ``(0, y)``.  The integral is done
    numerically in the standardized slope ``z = y A / E`` and truncated
    ``n_sd`` conditional standard deviations past the threshold.
    """
    u = _spec(spec).u
    m = moments_at(model, x)
    if m.e2 <= 0.0:
        raise DegenerateOracle(f"E^2 = 0 at x={x!r}")
    # conditional sd of Q' given Q = 0, in log form to survive scaling
    log_sd = 0.5 * (math.log(m.e2) - math.log(m.a2) + m.log_scale)
    z0 = 0.0 if u == 0.0 else math.exp(math.log(u) - log_sd)
    if z0 > 40.0:
        return 0.0
    # |y| p(0,y) dy = (E / (2 pi A^2)) z exp(-z^2/2) dz; the prefactor is scale free
    pref = m.intensity / (2.0 * math.pi)

    def integrand(z):
        return z * math.exp(-0.5 * z * z)

    half, _ = integrate.quad(integrand, z0, z0 + n_sd, epsabs=0.0, epsrel=1e-13, limit=200)
    return 2.0 * pref * half


# --- interval integration ----------------------------------------------------

def _t_edges(t_hi):
    edges = [0.0]
    e = 0.5
    while e < t_hi:
        edges.append(e)
        e *= 4.0
    edges.append(t_hi)
    return edges


def _segments(n):
    """Pieces of the real line with their coordinate maps.

    Each entry: (x_lo, x_hi, to_coord, integrand_factory) where
    ``to_coord`` maps an x in the piece to the integration coordinate and the
    factory builds the transformed integrand (Jacobian included, sign folded
    so every piece integrates with lower < upper).
    """
    nf = float(n)
    segs = []

    def inv(sign):
        # x = sign/s, |dx| = ds / s^2
        return lambda model, u: (lambda y: _density_inverted(model, sign * y, u))

    def outer(sign):
        return lambda model, u: (
            lambda t: density_at(model, sign * (1.0 + t / nf), u) / nf)

    def inner(sign):
        return lambda model, u: (
            lambda t: density_at(model, sign * nf / (nf + t), u) * nf / (nf + t) ** 2)

    def direct():
        return lambda model, u: (lambda x: density_at(model, x, u))

    # |x| >= 2 uses s = 1/|x| in (0, 1/2]
    segs.append((-INF, -2.0, lambda x: 0.0 if math.isinf(x) else -1.0 / x, inv(-1.0), "s"))
    segs.append((-2.0, -1.0, lambda x: nf * (-x - 1.0), outer(-1.0), "t"))
    segs.append((-1.0, -0.5, lambda x: nf * (1.0 + x) / (-x), inner(-1.0), "t"))
    segs.append((-0.5, 0.0, lambda x: x, direct(), "x"))
    segs.append((0.0, 0.5, lambda x: x, direct(), "x"))
    segs.append((0.5, 1.0, lambda x: nf * (1.0 - x) / x, inner(1.0), "t"))
    segs.append((1.0, 2.0, lambda x: nf * (x - 1.0), outer(1.0), "t"))
    segs.append((2.0, INF, lambda x: 0.0 if math.isinf(x) else 1.0 / x, inv(1.0), "s"))
    return segs


def _integrate_segment(model, u, seg, a, b, cfg):
    lo, hi, to_coord, factory, kind = seg
    a, b = max(a, lo), min(b, hi)
    if not b > a:
        return ZERO
    ca, cb = to_coord(a), to_coord(b)
    c_lo, c_hi = min(ca, cb), max(ca, cb)
    if not c_hi > c_lo:
        return ZERO
    f = factory(model, u)
    if kind == "t":
        edges = [e for e in _t_edges(float(model.n)) if c_lo < e < c_hi]
        edges = [c_lo] + edges + [c_hi]
    else:
        edges = [c_lo, c_hi]
    return integrate_panels(f, edges, cfg)


def _as_endpoint(v):
    if isinstance(v, str):
        return float(v.replace("infinity", "inf"))
    return float(v)


def expected_count(model: CoefficientModel, interval=(-INF, INF), spec=None,
                   cfg: Optional[QuadratureConfig] = None) -> ExpectedCount:
    """Expected number of u-sharp crossings of ``Q`` in ``(a, b)``.

    Endpoints may be infinite.  A non-converged quadrature is reported via
    ``converged=False`` rather than raised.
    """
    u = _spec(spec).u
    cfg = cfg or QuadratureConfig()
    a, b = (_as_endpoint(e) for e in interval)
    if not a < b:
        raise ValueError(f"interval must satisfy a < b, got ({a}, {b})")
    if model.n == 0:
        return ExpectedCount(0.0, 0.0, (a, b), u)
    total = ZERO
    for seg in _segments(model.n):
        total = total + _integrate_segment(model, u, seg, a, b, cfg)
    return ExpectedCount(max(total.value, 0.0), total.est_error, (a, b), u, total.converged)


def expected_count_split(model: CoefficientModel, spec=None,
                         cfg: Optional[QuadratureConfig] = None) -> Dict[str, ExpectedCount]:
    """Expected counts on (-inf,-1), (-1,0), (0,1), (1,inf), keyed as in ``SPLIT_INTERVALS``."""
    return {k: expected_count(model, iv, spec, cfg) for k, iv in SPLIT_INTERVALS.items()}


def split_total(parts: Dict[str, ExpectedCount]) -> ExpectedCount:
    value = sum(p.value for p in parts.values())
    err = sum(p.est_error for p in parts.values())
    u = next(iter(parts.values())).u
    return ExpectedCount(value, err, (-INF, INF), u, all(p.converged for p in parts.values()))
