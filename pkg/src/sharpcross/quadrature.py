"""Panel-wise adaptive quadrature on top of QUADPACK (``scipy.integrate.quad``)."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

from scipy import integrate

__all__ = ["QuadratureConfig", "QuadResult", "integrate_panels", "integrate_decaying"]


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances for improper-integral evaluation.

    Parameters
    ----------
    rel_tol, abs_tol : float
        Requested relative and absolute accuracy of each integral.
    max_subdivisions : int
        Subinterval limit handed to QUADPACK per panel.
    tail_cutoff : float
        Exponentially decaying integrands are truncated once a panel
        contributes less than this fraction of the accumulated integral.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_subdivisions: int = 2000
    tail_cutoff: float = 1e-14

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0 and self.tail_cutoff > 0):
            raise ValueError("tolerances must be positive")
        if int(self.max_subdivisions) < 1:
            raise ValueError("max_subdivisions must be >= 1")


@dataclass(frozen=True)
class QuadResult:
    value: float
    est_error: float
    converged: bool = True

    def __add__(self, other: "QuadResult") -> "QuadResult":
        return QuadResult(self.value + other.value, self.est_error + other.est_error,
                          self.converged and other.converged)


ZERO = QuadResult(0.0, 0.0, True)


def _quad(f, a, b, cfg, abs_tol):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(f, a, b, epsabs=abs_tol, epsrel=cfg.rel_tol,
                             limit=int(cfg.max_subdivisions), full_output=1)
    value, err = out[0], out[1]
    # a fourth element (the QUADPACK message) is present only when ier != 0
    converged = len(out) == 3 and math.isfinite(value)
    return QuadResult(float(value), float(err), converged)


def integrate_panels(f: Callable[[float], float], edges: Sequence[float],
                     cfg: QuadratureConfig) -> QuadResult:
    """Integrate ``f`` over consecutive panels ``[edges[i], edges[i+1]]``.

    Panels are summed left to right so results are reproducible.
    """
    total = ZERO
    npan = max(len(edges) - 1, 1)
    for a, b in zip(edges[:-1], edges[1:]):
        if b > a:
            total = total + _quad(f, a, b, cfg, cfg.abs_tol / npan)
    return total


def integrate_decaying(f: Callable[[float], float], edges: Sequence[float],
                       cfg: QuadratureConfig, step: float = 20.0,
                       t_max: float = 2000.0) -> QuadResult:
    """Integrate an exponentially decaying ``f`` on ``[edges[0], inf)``.

    After the given panels, further panels of width ``step`` are added until
    one contributes less than ``cfg.tail_cutoff`` of the running total.
    """
    total = integrate_panels(f, edges, cfg)
    a = edges[-1]
    while a < t_max:
        piece = _quad(f, a, a + step, cfg, cfg.abs_tol)
        total = total + piece
        a += step
        if abs(piece.value) <= cfg.tail_cutoff * max(abs(total.value), cfg.abs_tol):
            break
    else:
        total = QuadResult(total.value, total.est_error, False)
    return total
