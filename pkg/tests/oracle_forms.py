"""Independent high-precision transcription of the closed-form integrands.

Written directly in mpmath from the printed expressions with no algebraic
rearrangement, for use as a test oracle only.  Call inside
``mpmath.workdps(...)`` with enough digits for the cancellation at small t.
"""

import mpmath as mp

E = mp.exp


def R1(t):
    num = (4*t-15)*E(4*t)+(24*t+32)*E(3*t)-E(2*t)*(8*t**3+12*t**2+36*t+18)+8*E(t)*t+1
    den = 2*t*(-1-3*E(2*t)+4*E(t)+2*t*E(2*t))
    return mp.sqrt(num)/den


def R2(t):
    num = -2*E(2*t)+E(4*t)+1-12*E(2*t)*t**2-8*t**3*E(2*t)+4*t*E(4*t)-4*t*E(2*t)
    den = t**2*(E(2*t)-1+2*t*E(2*t))**2
    return mp.sqrt(num/den)/2


def R3(t):
    return R1(-t)


def R4(t):
    return R2(-t)


def S12(t):
    return (2*E(2*t)*t-1+4*E(t)-3*E(2*t))**2*mp.sqrt(
        1-8*t**3*E(2*t)-12*E(2*t)*t**2+8*E(t)*t-18*E(2*t)-36*E(2*t)*t
        - 15*E(4*t)+32*E(3*t)+24*E(3*t)*t+4*t*E(4*t))


def S11(t):
    return -mp.mpf('0.25')*(
        (4*t**2-6*t-27)*E(6*t)+(156-84*t+116*t**2-24*t**3)*E(5*t)
        + (16*t**5-72*t**4+96*t**3-212*t**2+220*t-331)*E(4*t)
        + (328-168*t+128*t**2-104*t**3)*E(3*t)
        + (8*t**4+8*t**3-32*t**2+42*t-153)*E(2*t)+(28-4*t-4*t**2)*E(t)-1)


def S1(t):
    return S11(t)/S12(t)


def S21(t):
    return (1+(-8*t**4+30*t-8*t**3+48*t**2-3)*E(2*t)
            + (3-12*t+52*t**2+96*t**3+40*t**4-16*t**5)*E(4*t)-(18*t+4*t**2+1)*E(6*t))


def S22(t):
    return (8*t+32*t**3+40*t**2)*E(3*t)+(-8*t**2-12*t)*E(5*t)+4*E(t)*t


def S23(t):
    return mp.sqrt(E(4*t)*(4*t+1)-2*E(2*t)*(1+2*t+6*t**2+4*t**3)+1)*(E(2*t)*(2*t+1)-1)**2


def S2(t, even):
    return (S21(t)+(S22(t) if even else -S22(t)))/(4*S23(t))


def S31(t):
    f = mp.mpf
    return ((-7*t**2-f(69)/2*t-f(63)/4)*E(-6*t)+(6*t**3+35*t-55*t**2+39)*E(-5*t)
            + (49*t-4*t**5+22*t**4+91*t**2-f(63)/4-12*t**3)*E(-4*t)
            + (-6*t**3-30-44*t**2-66*t)*E(-3*t)
            + (f(35)/2*t+2*t**4-6*t**3+16*t**2+f(123)/4)*E(-2*t)+(-9-t-t**2)*E(-t)+f(3)/4)


def S3(t):
    return S31(t)/S12(-t)


def S41(t):
    f = mp.mpf
    return (8*(-f(9)/4*t+6*t**2-3*t**3-f(9)/8+t**4)*E(-2*t)
            + 8*(15*t**4-f(3)/2*t-22*t**3+f(9)/8+f(19)/2*t**2-2*t**5)*E(-4*t)
            + 8*(f(15)/4*t-f(7)/2*t**2-f(3)/8)*E(-6*t)+3)


def S42(t):
    return S22(-t)


def S43(t):
    return S23(-t)


def S4(t, even):
    return (S41(t)+(S42(t) if even else -S42(t)))/(4*S43(t))


def G_outer(t):
    return 16*(2*E(2*t)*t+E(2*t)-1)*t**3/(
        2*E(2*t)-E(4*t)+12*E(2*t)*t**2-1+8*E(2*t)*t**3-4*E(4*t)*t+4*E(2*t)*t)


def G_inner(t):
    return -16*(-E(-2*t)+1+2*E(-2*t)*t)*t**3/(
        -4*E(-4*t)*t+E(-4*t)-12*E(-2*t)*t**2+4*E(-2*t)*t+1+8*E(-2*t)*t**3-2*E(-2*t))
