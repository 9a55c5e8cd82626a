"""High-precision oracle for half-integer Bessel functions, their extrema and
Clebsch-Gordan coefficients (mpmath at 50 digits, sympy exact CG)."""

import random

import mpmath as mp
from sympy import S
from sympy.physics.wigner import clebsch_gordan

from _common import dump, jhalf

mp.mp.dps = 50


def main():
    rng = random.Random(7)
    samples = [(7, 3.5), (0, 1.0), (3, 0.01), (20, 5.0), (40, 1.0), (40, 200.0), (10, 37.25), (25, 80.0)]
    samples += [(rng.randint(0, 40), round(rng.uniform(0.05, 200.0), 6)) for _ in range(40)]
    j_vals = [[l, x, mp.nstr(jhalf(l, x), 30)] for l, x in samples]
    modulus = [[l, x, mp.nstr(mp.sqrt(jhalf(l, x) ** 2 + mp.bessely(l + mp.mpf(1) / 2, x) ** 2), 30)]
               for l, x in [(2, 5.0), (0, 2.0), (3, 10.0), (6, 0.7)]]
    extrema = {}
    for l in range(0, 21):
        nu = l + mp.mpf(1) / 2
        extrema[str(l)] = {'max': mp.nstr(mp.besseljzero(nu, 1, derivative=1), 30),
                           'zero': mp.nstr(mp.besseljzero(nu, 1), 30)}
    # closed-form brackets for l = 0, 1: d/dx(sin x / sqrt x) = 0  <=>  tan x = 2x
    x0 = mp.findroot(lambda x: mp.tan(x) - 2 * x, (1.0, 1.5), solver='bisect')
    x1 = mp.findroot(lambda x: mp.diff(lambda t: mp.sin(t) / t - mp.cos(t), x) - (mp.sin(x) / x - mp.cos(x)) / (2 * x), (2.0, 2.8), solver='anderson')
    cg = []
    for l1 in range(0, 3):
        for l2 in range(0, 3):
            for L in range(abs(l1 - l2), l1 + l2 + 1):
                for m1 in range(-l1, l1 + 1):
                    for m2 in range(-l2, l2 + 1):
                        M = m1 + m2
                        if abs(M) > L:
                            continue
                        v = clebsch_gordan(S(l1), S(l2), S(L), S(m1), S(m2), S(M))
                        cg.append([l1, l2, m1, m2, L, M, str(v), float(v)])
    dump('specfun', {'j_half': j_vals, 'modulus': modulus, 'extrema': extrema,
                     'l0_max_bisect': mp.nstr(x0, 30), 'l1_max_bisect': mp.nstr(x1, 30),
                     'cg': cg}, 'mpmath besselj/bessely/besseljzero at 50 digits; sympy exact CG')


if __name__ == '__main__':
    main()
