import math

import mpmath
import numpy as np
import pytest

import oracle_forms as P
from sharpcross import closed_forms as cf
from sharpcross.closed_forms import Parity
from sharpcross.errors import DomainError

EVEN, ODD = Parity.EVEN, Parity.ODD

PAIRS = {
    "r1": (cf.r1, P.R1),
    "r2": (cf.r2, P.R2),
    "r3": (cf.r3, P.R3),
    "r4": (cf.r4, P.R4),
    "s1": (cf.s1, P.S1),
    "s2_even": (lambda t: cf.s2(t, EVEN), lambda t: P.S2(t, True)),
    "s2_odd": (lambda t: cf.s2(t, ODD), lambda t: P.S2(t, False)),
    "s3": (cf.s3, P.S3),
    "s4_even": (lambda t: cf.s4(t, EVEN), lambda t: P.S4(t, True)),
    "s4_odd": (lambda t: cf.s4(t, ODD), lambda t: P.S4(t, False)),
    "g21_outer": (cf.g21_outer, P.G_outer),
    "g21_inner": (cf.g21_inner, P.G_inner),
}


def oracle(f, t):
    with mpmath.workdps(120):
        return float(f(mpmath.mpf(t)))


# --- tail laws ----------------------------------------------------------------

def test_r1_tail():
    assert abs(cf.r1(50) * 2 * 50**1.5 - 1) < 0.05


def test_r2_tail():
    assert abs(cf.r2(50) * 2 * 50**1.5 - 1) < 0.05


def test_r4_tail():
    assert abs(cf.r4(40) * 2 * 40 - 1) < 0.02


def test_s1_tail():
    # stated bound; the next term is -27/(8t), which is 0.056 at t = 60
    assert abs(cf.s1(60) * 8 * math.sqrt(60) + 1) < 0.05


@pytest.mark.parametrize("t", [200.0, 1e3, 1e4])
def test_s1_tail_correction(t):
    rel = cf.s1(t) * 8 * math.sqrt(t) + 1
    assert rel * t == pytest.approx(-27 / 8, abs=20 / t)


def test_s3_tail():
    assert abs(cf.s3(40) - 0.75) < 0.01


@pytest.mark.parametrize("parity", [EVEN, ODD])
def test_s4_tail(parity):
    assert abs(cf.s4(40, parity) - 0.75) < 0.01


def test_g21_outer_decays():
    assert abs(cf.g21_outer(30)) < 1e-8


def test_g21_inner_cubic_growth():
    assert abs(cf.g21_inner(20) / (-16 * 20**3) - 1) < 1e-6


@pytest.mark.parametrize("g", [cf.g21_outer, cf.g21_inner])
def test_g21_small_t_limit(g):
    # both exponent coefficients tend to -48/5 as t -> 0, not to 0
    for t in (1e-3, 1e-4):
        assert g(t) == pytest.approx(oracle(P.G_inner if g is cf.g21_inner else P.G_outer, t),
                                     rel=1e-10)
    assert abs(g(1e-4) + 9.6) < 1e-2


# --- agreement with the printed forms -----------------------------------------

@pytest.mark.parametrize("name", sorted(PAIRS))
@pytest.mark.parametrize("t", [1e-4, 1e-3, 1e-2])
def test_removable_singularities(name, t):
    ours, ref = PAIRS[name]
    v = ours(t)
    assert math.isfinite(v)
    assert v == pytest.approx(oracle(ref, t), rel=1e-8)


@pytest.mark.parametrize("name", sorted(PAIRS))
@pytest.mark.parametrize("t", [0.3, 1.0, 1.49, 1.5, 2.0, 5.0, 20.0, 45.0])
def test_matches_printed_forms(name, t):
    ours, ref = PAIRS[name]
    r = oracle(ref, t)
    assert ours(t) == pytest.approx(r, rel=1e-9, abs=1e-15)


def test_threshold_continuity():
    # the double path and the mp fallback agree across the switch point
    t0 = cf.SMALL_T
    for name, (ours, _) in PAIRS.items():
        lo, hi = ours(t0 * (1 - 1e-9)), ours(t0)
        assert lo == pytest.approx(hi, rel=1e-7), name


# --- structure ----------------------------------------------------------------

def _parity_gap(f, t):
    even, odd = f(t, EVEN), f(t, ODD)
    return even - odd, max(abs(even), abs(odd))


@pytest.mark.parametrize("t", [1e-3, 0.2, 1.0, 3.0, 10.0])
def test_s2_parity_coherence(t):
    diff, _ = _parity_gap(cf.s2, t)
    assert diff == pytest.approx(2 * cf.s22(t) / (4 * cf.s23(t)), rel=1e-12)


@pytest.mark.parametrize("t", [1e-3, 0.2, 1.0, 3.0, 10.0])
def test_s4_parity_coherence(t):
    diff, _ = _parity_gap(cf.s4, t)
    assert diff == pytest.approx(2 * cf.s42(t) / (4 * cf.s43(t)), rel=1e-12)


@pytest.mark.parametrize("t", [30.0, 50.0])
def test_parity_coherence_far_tail(t):
    # the gap is below double resolution of the operands here; compare on their scale
    for f, num, den in ((cf.s2, cf.s22, cf.s23), (cf.s4, cf.s42, cf.s43)):
        diff, scale = _parity_gap(f, t)
        assert abs(diff - 2 * num(t) / (4 * den(t))) <= 1e-12 * scale


def test_radicands_nonnegative():
    for t in np.linspace(0.01, 50.0, 400):
        if t < cf.SMALL_T:
            with mpmath.workdps(cf.working_digits(t)):
                tt = mpmath.mpf(float(t))
                w = mpmath.exp(-tt)
                vals = [cf._rad1(tt, w), cf._rad2(tt, w), 1 + cf._rad3m1(tt, w),
                        1 + cf._rad4m1(tt, w)]
        else:
            w = math.exp(-t)
            vals = [cf._rad1(t, w), cf._rad2(t, w), 1 + cf._rad3m1(t, w), 1 + cf._rad4m1(t, w)]
        scale = (1 + t) ** 3
        for v in vals:
            assert v >= -1e-12 * scale


def test_g21_nonpositive():
    for t in np.geomspace(1e-3, 200, 300):
        assert cf.g21_outer(t) <= 0
        assert cf.g21_inner(t) <= 0


def test_functions_finite_on_grid():
    for t in np.geomspace(1e-4, 500, 120):
        for name, (ours, _) in PAIRS.items():
            assert math.isfinite(ours(t)), (name, t)


@pytest.mark.parametrize("t", [0.0, -1.0, math.inf, math.nan])
def test_domain_errors(t):
    for f in (cf.r1, cf.r4, cf.s1, cf.s3, cf.g21_inner):
        with pytest.raises(DomainError):
            f(t)
    with pytest.raises(DomainError):
        cf.s2(t, EVEN)


def test_parity_of():
    assert Parity.of(4) is EVEN and Parity.of(7) is ODD
    assert Parity("even") is EVEN


# --- regularized integrands -----------------------------------------------------

def _reg_oracle(name, t):
    ind = 1 if t > 1 else 0
    rs = ind / (8 * mpmath.sqrt(t))
    table = {
        "int_R1": lambda: P.R1(t),
        "int_S1_reg": lambda: P.S1(t) + rs,
        "int_R2": lambda: P.R2(t),
        "int_R2_G21": lambda: P.R2(t) * P.G_outer(t),
        "int_half_R2_G21sq": lambda: P.R2(t) * P.G_outer(t) ** 2 / 2,
        "int_S2_reg_even": lambda: P.S2(t, True) + rs,
        "int_S2_reg_odd": lambda: P.S2(t, False) + rs,
        "int_R3_reg": lambda: P.R3(t) - ind / (2 * t),
        "int_S3_reg": lambda: P.S3(t) - 2 * t * P.R3(t) + mpmath.mpf(ind) / 4,
        "int_R4_reg": lambda: P.R4(t) - ind / (2 * t),
        "int_S4_reg_even": lambda: P.S4(t, True) - 2 * t * P.R4(t) + mpmath.mpf(ind) / 4,
        "int_S4_reg_odd": lambda: P.S4(t, False) - 2 * t * P.R4(t) + mpmath.mpf(ind) / 4,
        "int_R4_G21_reg": lambda: P.R4(t) * P.G_inner(t) + 8 * t**2,
        "int_half_R4_G21sq_reg": lambda: P.R4(t) * P.G_inner(t) ** 2 / 2 - 64 * t**5,
    }
    return table[name]()


REG_NAMES = ["int_R1", "int_S1_reg", "int_R2", "int_R2_G21", "int_half_R2_G21sq",
             "int_S2_reg_even", "int_S2_reg_odd", "int_R3_reg", "int_S3_reg", "int_R4_reg",
             "int_S4_reg_even", "int_S4_reg_odd", "int_R4_G21_reg", "int_half_R4_G21sq_reg"]


@pytest.mark.parametrize("name", REG_NAMES)
@pytest.mark.parametrize("t", [0.01, 0.7, 1.2, 3.0, 12.0, 40.0, 150.0, 1e4])
def test_regularized_integrands(name, t):
    f = cf.reg_integrand(name)
    with mpmath.workdps(200):
        ref = float(_reg_oracle(name, mpmath.mpf(t)))
    # absolute floor: the scale of the unregularized pieces times double eps
    scale = max(1.0, t) ** 5 * 1e-15 if "half_R4" in name else 1e-15
    assert f(t) == pytest.approx(ref, rel=1e-9, abs=scale)
