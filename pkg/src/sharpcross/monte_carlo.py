"""Monte Carlo estimate of the sharp-crossing count.

Coefficient paths are cumulative sums of independent Gaussian increments.
Real roots are bracketed by sign changes on a fixed grid of [-1, 1] and
refined by bisection.  Roots with ``|x| <= 1`` are searched on ``Q``
itself; roots with ``|x| > 1`` on the reversed polynomial
``P(y) = y^n Q(1/y)`` over ``|y| <= 1``, which keeps every evaluation
bounded and covers the whole real line.

Grid points cluster at +-1 through ``x = n/(n + t)``: uniform in ``t`` up to
``t_uniform`` and geometric beyond, matching the 1/n boundary layer where
roots concentrate.  Each trial draws from its own counter-based stream keyed
by ``(seed, trial index)``, so results do not depend on batching.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from .errors import GridTooCoarseWarning
from .model import CoefficientModel

__all__ = [
    "McConfig",
    "CrossingRecord",
    "McEstimate",
    "trial_generator",
    "sample_path",
    "sample_paths",
    "find_crossings",
    "estimate",
    "convergence_study",
]

REGIONS = ("neg_outer", "neg_inner", "pos_inner", "pos_outer")


@dataclass(frozen=True)
class McConfig:
    """Simulation settings.

    ``grid_points_per_unit`` is the density of the root-search grid in the
    boundary-layer coordinate ``t``; ``refine_tol`` is the final bisection
    bracket width.
    """

    trials: int = 10_000
    seed: int = 0
    grid_points_per_unit: int = 200
    refine_tol: float = 1e-12
    t_uniform: float = 40.0
    batch_size: int = 256

    def __post_init__(self):
        if int(self.trials) < 1:
            raise ValueError("trials must be >= 1")
        if int(self.grid_points_per_unit) < 16:
            raise ValueError("grid_points_per_unit must be >= 16")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if not self.refine_tol > 0:
            raise ValueError("refine_tol must be positive")


@dataclass(frozen=True)
class CrossingRecord:
    location: float
    slope: float
    kind: str
    sharp: bool


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    trials: int
    seed: int
    per_interval: Dict[str, float] = field(default_factory=dict)
    mean_total: float = 0.0
    max_count: int = 0
    close_pair_fraction: float = 0.0

    def to_dict(self) -> dict:
        return {"mean": self.mean, "std_error": self.std_error, "trials": self.trials,
                "seed": self.seed, "per_interval": dict(self.per_interval),
                "mean_total": self.mean_total, "max_count": self.max_count,
                "close_pair_fraction": self.close_pair_fraction}


# --- sampling ----------------------------------------------------------------

def trial_generator(seed: int, trial: int) -> np.random.Generator:
    """Independent Philox stream for one trial."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(trial),))
    return np.random.Generator(np.random.Philox(ss))


def sample_path(model: CoefficientModel, seed: int, trial: int = 0) -> np.ndarray:
    """Coefficients ``A_0..A_n`` for one trial: cumulative sums of increments."""
    sig = np.asarray(model.sigma, dtype=float)
    incr = trial_generator(seed, trial).standard_normal(model.n + 1) * sig
    return np.cumsum(incr)


def sample_paths(model: CoefficientModel, seed: int, start: int, stop: int) -> np.ndarray:
    return np.stack([sample_path(model, seed, i) for i in range(start, stop)])


# --- grid and polynomial evaluation ------------------------------------------

def search_grid(n: int, density: int = 200, t_uniform: float = 40.0) -> np.ndarray:
    """Sorted grid on [0, 1], dense near 1, containing 0 and 1.

    Points are ``n/(n + t)`` for ``t`` uniform on ``[0, t_uniform)`` and
    geometric (ratio ``1 + 1/density``) beyond, until ``x <= 1/4``; the
    remaining ``[0, 1/4]`` is covered uniformly.
    """
    nf = float(max(n, 1))
    t = list(np.arange(0.0, t_uniform, 1.0 / density))
    ratio = 1.0 + 1.0 / density
    tk = t_uniform
    while nf / (nf + tk) > 0.25:
        t.append(tk)
        tk *= ratio
    x = nf / (nf + np.asarray(t))
    x_low = np.linspace(0.0, 0.25, density + 1)
    return np.unique(np.concatenate([x, x_low, [0.0, 1.0]]))


@dataclass(frozen=True)
class LineGrid:
    """Search points covering the real line, in increasing ``x``.

    ``y_neg`` (x < -1, via ``y = 1/x``), ``x`` (on [-1, 1]) and ``y_pos``
    (x > 1).  Cell ``k`` lies between consecutive points and is bracketed in
    ``y`` when ``cell_rev[k]`` else in ``x``.
    """

    x: np.ndarray
    y_neg: np.ndarray
    y_pos: np.ndarray
    cell_rev: np.ndarray
    cell_lo: np.ndarray
    cell_hi: np.ndarray

    @classmethod
    def build(cls, n: int, density: int = 200, t_uniform: float = 40.0) -> "LineGrid":
        half = search_grid(n, density, t_uniform)
        x = np.unique(np.concatenate([-half, half]))
        y_neg = -half[:-1]
        y_pos = half[::-1][1:].copy()
        lo = np.concatenate([y_neg[1:], [-1.0], x[:-1], [y_pos[0]], y_pos[1:]])
        hi = np.concatenate([y_neg[:-1], [y_neg[-1]], x[1:], [1.0], y_pos[:-1]])
        rev = np.ones(lo.size, dtype=bool)
        rev[y_neg.size:y_neg.size + x.size - 1] = False
        return cls(x, y_neg, y_pos, rev, lo, hi)

    @property
    def size(self) -> int:
        return self.x.size + self.y_neg.size + self.y_pos.size


def _horner_grid(coefs: np.ndarray, grid: np.ndarray) -> np.ndarray:
    # (m, n+1) coefficients on a shared grid; elementwise so results do not
    # depend on BLAS threading
    out = np.empty((coefs.shape[0], grid.size))
    out[:] = coefs[:, -1:]
    for j in range(coefs.shape[1] - 2, -1, -1):
        out *= grid
        out += coefs[:, j:j + 1]
    return out


def _horner(coefs: np.ndarray, x: np.ndarray) -> np.ndarray:
    # row-wise: coefs (m, n+1), x (m,)
    out = coefs[:, -1].copy()
    for j in range(coefs.shape[1] - 2, -1, -1):
        out = out * x + coefs[:, j]
    return out


def _deriv(coefs: np.ndarray) -> np.ndarray:
    n = coefs.shape[1] - 1
    if n == 0:
        return np.zeros_like(coefs)
    return coefs[:, 1:] * np.arange(1, n + 1, dtype=float)


def _bisect(coefs, lo, hi, tol, max_iter=200):
    """Shrink brackets [lo, hi] whose endpoints differ in (value > 0)."""
    s_lo = _horner(coefs, lo) > 0
    for _ in range(max_iter):
        if lo.size == 0 or np.max(hi - lo) <= tol:
            break
        mid = 0.5 * (lo + hi)
        s_mid = _horner(coefs, mid) > 0
        left = s_mid != s_lo
        hi = np.where(left, mid, hi)
        lo = np.where(left, lo, mid)
        s_lo = np.where(left, s_lo, s_mid)
    return 0.5 * (lo + hi)


def _slopes_forward(c, x, u):
    slope = _horner(_deriv(c), x)
    return slope, np.abs(slope) > u


def _slopes_reversed(c_rev, y, u):
    # x = 1/y and Q'(x) = -x^(n-2) P'(y) at a root of P, kept in logs
    n = c_rev.shape[1] - 1
    dp = _horner(_deriv(c_rev), y)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        log_mag = np.log(np.abs(dp)) - (n - 2) * np.log(np.abs(y))
        odd = (y < 0) & (n % 2 == 1)
        sgn = -np.sign(dp) * np.where(odd, -1.0, 1.0)
        slope = sgn * np.exp(np.minimum(log_mag, 709.0))
        slope = np.where(log_mag > 709.0, sgn * np.inf, slope)
        mag_ok = log_mag > (math.log(u) if u > 0 else -np.inf)
    return slope, mag_ok


def _region(x):
    return np.where(x < -1.0, 0, np.where(x < 0.0, 1, np.where(x < 1.0, 2, 3)))


def _scan(coefs: np.ndarray, grid: LineGrid, u: float, tol: float):
    """Crossings of every row: (rows, x, slope, region, sharp, close_pair_rows)."""
    n = coefs.shape[1] - 1
    rev = coefs[:, ::-1].copy()
    flip = -1.0 if n % 2 else 1.0
    pos = np.concatenate([
        _horner_grid(rev, grid.y_neg) * flip > 0,
        _horner_grid(coefs, grid.x) > 0,
        _horner_grid(rev, grid.y_pos) > 0,
    ], axis=1)
    change = pos[:, 1:] != pos[:, :-1]
    close = np.any(change[:, 1:] & change[:, :-1], axis=1)
    rows, cells = np.nonzero(change)
    is_rev = grid.cell_rev[cells]

    x = np.empty(rows.size)
    slope = np.empty(rows.size)
    sharp = np.empty(rows.size, dtype=bool)
    f = ~is_rev
    if np.any(f):
        c = coefs[rows[f]]
        r = _bisect(c, grid.cell_lo[cells[f]], grid.cell_hi[cells[f]], tol)
        x[f] = r
        slope[f], sharp[f] = _slopes_forward(c, r, u)
    if np.any(is_rev):
        c = rev[rows[is_rev]]
        y = _bisect(c, grid.cell_lo[cells[is_rev]], grid.cell_hi[cells[is_rev]], tol)
        x[is_rev] = 1.0 / y
        slope[is_rev], sharp[is_rev] = _slopes_reversed(c, y, u)
    sharp &= slope != 0
    return rows, x, slope, _region(x), sharp, close


def find_crossings(coeffs, u: float = 0.0, cfg: Optional[McConfig] = None) -> List[CrossingRecord]:
    """Simple real zeros of ``sum_i coeffs[i] x^i`` with slope classification.

    A root is sharp when it is an up-crossing with slope ``> u`` or a
    down-crossing with slope ``< -u`` (strict).
    """
    cfg = cfg or McConfig(trials=1)
    c = np.atleast_2d(np.asarray(coeffs, dtype=float))
    n = c.shape[1] - 1
    if n == 0:
        return []
    grid = LineGrid.build(n, cfg.grid_points_per_unit, cfg.t_uniform)
    rows, x, slope, region, sharp, _ = _scan(c, grid, float(u), cfg.refine_tol)
    order = np.argsort(x, kind="stable")
    return [CrossingRecord(float(x[i]), float(slope[i]), "up" if slope[i] > 0 else "down",
                           bool(sharp[i])) for i in order]


def estimate(model: CoefficientModel, spec=None, cfg: Optional[McConfig] = None) -> McEstimate:
    """Mean and standard error of the sharp-crossing count over independent paths."""
    from .kac_rice import _spec

    u = _spec(spec).u
    cfg = cfg or McConfig()
    n, trials = model.n, int(cfg.trials)
    sharp_counts = np.zeros(trials, dtype=np.int64)
    total_counts = np.zeros(trials, dtype=np.int64)
    region_counts = np.zeros((trials, 4), dtype=np.int64)
    close_rows = np.zeros(trials, dtype=bool)
    if n > 0:
        grid = LineGrid.build(n, cfg.grid_points_per_unit, cfg.t_uniform)
        for start in range(0, trials, cfg.batch_size):
            stop = min(start + cfg.batch_size, trials)
            coefs = sample_paths(model, cfg.seed, start, stop)
            rows, x, slope, region, sharp, close = _scan(coefs, grid, u, cfg.refine_tol)
            idx = rows + start
            np.add.at(total_counts, idx, 1)
            np.add.at(sharp_counts, idx[sharp], 1)
            np.add.at(region_counts, (idx[sharp], region[sharp]), 1)
            close_rows[start:stop] = close
    frac = float(np.mean(close_rows))
    if frac > 0.01:
        warnings.warn(f"adjacent-cell sign changes in {frac:.1%} of trials; "
                      "increase grid_points_per_unit", GridTooCoarseWarning, stacklevel=2)
    mean = float(np.mean(sharp_counts))
    se = float(np.std(sharp_counts, ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    per = {name: float(np.mean(region_counts[:, i])) for i, name in enumerate(REGIONS)}
    return McEstimate(mean, se, trials, int(cfg.seed), per, float(np.mean(total_counts)),
                      int(total_counts.max(initial=0)), frac)


def convergence_study(ns, u_rule=0.0, quad_cfg=None, mc_cfg: Optional[McConfig] = None,
                      table=None) -> List[dict]:
    """Exact count vs both large-n approximations (and optionally Monte Carlo).

    ``u_rule`` is a constant or a callable ``n -> u``.  Unit increment
    variances are assumed, as the approximations require.
    """
    from .asymptotics import theorem_i, theorem_ii
    from .kac_rice import expected_count

    rows = []
    for n in ns:
        u = float(u_rule(n)) if callable(u_rule) else float(u_rule)
        model = CoefficientModel.brownian(n)
        exact = expected_count(model, spec=u, cfg=quad_cfg)
        ti = theorem_i(n, u, table).value
        tii = theorem_ii(n, table).value
        row = {"n": n, "u": u, "exact": exact.value, "exact_err": exact.est_error,
               "asymptotic_i": ti, "asymptotic_ii": tii,
               "diff_i": exact.value - ti, "diff_ii": exact.value - tii,
               "mc": None, "mc_std_error": None}
        if mc_cfg is not None:
            mc = estimate(model, u, mc_cfg)
            row["mc"], row["mc_std_error"] = mc.mean, mc.std_error
        rows.append(row)
    return rows
