"""Extended-precision reference values frozen into the Rust tests.

Run with `python3 oracle_values.py`; requires mpmath. Every value printed
here is computed independently of the Rust implementation.
"""
from fractions import Fraction
import mpmath as mp

mp.mp.dps = 60


def kummer(a, c, x):
    a, c, x = mp.mpf(a), mp.mpf(c), mp.mpf(x)
    s = mp.mpf(0)
    t = mp.mpf(1)
    k = 0
    while True:
        s += t
        t = t * (a + k) * x / ((c + k) * (k + 1))
        k += 1
        if k > x + 50 and t < s * mp.mpf(10) ** -55:
            return s


def laguerre_exact(n, x):
    x = Fraction(x)
    l0, l1 = Fraction(1), 1 - x
    if n == 0:
        return l0
    for k in range(1, n):
        l0, l1 = l1, ((2 * k + 1 - x) * l1 - k * l0) / (k + 1)
    return l1


def j0_series(x):
    x = mp.mpf(x)
    return mp.nsum(lambda k: (-1) ** k * (x / 2) ** (2 * k) / mp.factorial(k) ** 2, [0, mp.inf])


def i0_series(x):
    x = mp.mpf(x)
    return mp.nsum(lambda k: (x / 2) ** (2 * k) / mp.factorial(k) ** 2, [0, mp.inf])


def show(name, v):
    print(f"{name} = {mp.nstr(v, 20)}")


show("kummer(0.5,1,2)", kummer("0.5", 1, 2))
show("kummer(0.5,2,50)", kummer("0.5", 2, 50))
show("ln kummer(0.5,2,50)", mp.log(kummer("0.5", 2, 50)))
show("kummer(1.5,2.5,10)", kummer("1.5", "2.5", 10))
show("ln kummer(0.3,0.7,400)", mp.log(kummer("0.3", "0.7", 400)))
show("j0(1)", j0_series(1))
show("j0(5)", j0_series(5))
show("j0(10)", j0_series(10))
show("j0(20)", mp.besselj(0, 20))
show("j0(37.5)", mp.besselj(0, mp.mpf("37.5")))
lo, hi = mp.mpf(2), mp.mpf(3)
for _ in range(120):
    mid = (lo + hi) / 2
    if j0_series(mid) > 0:
        lo = mid
    else:
        hi = mid
show("j0 first root", lo)
show("i0(1)", i0_series(1))
show("exp(-1) i0(1)", mp.exp(-1) * i0_series(1))
show("exp(-20) i0(20)", mp.exp(-20) * i0_series(20))
show("exp(-50) i0(50)", mp.exp(-50) * mp.besseli(0, 50))
l5 = laguerre_exact(5, Fraction(37, 10))
print(f"L5(3.7) = {l5} = {mp.nstr(mp.mpf(l5.numerator) / l5.denominator, 20)}")

r = mp.mpf(1)
show("paeos p0 (b=0,r=1)", 1 / mp.cosh(r))
show("paeos p2 (b=0,r=1)", r ** 2 / (2 * mp.cosh(r)))
show("paeos p4 (b=0,r=1)", r ** 4 / (24 * mp.cosh(r)))
show("paeos p1 (b=1,r=1)", r / mp.sinh(r))
show("paeos p3 (b=1,r=1)", r ** 3 / (6 * mp.sinh(r)))
show("beta(S=0,r=1)", mp.tanh(r) ** 2 / (1 + mp.tanh(r) ** 2))
B = mp.tanh(r)
show("Q paeos (b=0,r=1)", (r / B) * (1 - B ** 2))
show("Q weak (S=0,r=1)", r / mp.tanh(2 * r) * (1 - mp.tanh(2 * r) ** 2))

# no-two-photon-absorption mean: d ln F / dz at 1
rho, s, sigma = mp.mpf(1), mp.mpf("0.5"), mp.mpf(0)
gamma = (sigma + rho + rho / s) / s
show("no2a mean", (1 + gamma) * s / (1 - s) - rho / s)

# closed-form probabilities (nu=1, s=0.5, sigma=0, r=1) via the generating function
nu, s, sigma, r = mp.mpf(1), mp.mpf("0.5"), mp.mpf(0), mp.mpf(1)
R = mp.sqrt((nu * s) ** 2 + 4 * r ** 2)
h = (R - nu * s) / 2
g = (s + sigma + h * (1 + s)) / R
a, c = nu * g, nu * (1 + s)
F = lambda z: mp.exp(h * (1 - z)) * mp.hyp1f1(a, c, R * (1 + z)) / mp.hyp1f1(a, c, 2 * R)
coeffs = mp.taylor(F, 0, 6)
for n, p in enumerate(coeffs):
    show(f"closed p{n} (1,0.5,0,1)", p)
show("closed mean (1,0.5,0,1)", mp.diff(F, 1))

# purity of PAEOS (beta=0.3, r=2) by series
beta, r = mp.mpf("0.3"), mp.mpf(2)
mu = mp.nsum(lambda k: ((1 - beta) * r ** (2 * k) / (mp.factorial(2 * k) * mp.cosh(r))) ** 2, [0, mp.inf]) \
    + mp.nsum(lambda k: (beta * r ** (2 * k + 1) / (mp.factorial(2 * k + 1) * mp.sinh(r))) ** 2, [0, mp.inf])
show("purity (0.3,2)", mu)

# PAEOS Wigner at (beta=0.2, r=3, x=1.3) from the closed form
beta, r, x = mp.mpf("0.2"), mp.mpf(3), mp.mpf("1.3")
y = mp.sqrt(8 * r) * x
W = mp.exp(-x ** 2) / mp.sinh(2 * r) * ((1 - (1 - 2 * beta) * mp.exp(-2 * r)) * mp.besseli(0, y)
                                        + ((1 - 2 * beta) * mp.exp(2 * r) - 1) * mp.besselj(0, y))
show("W paeos (0.2,3,1.3)", W)
