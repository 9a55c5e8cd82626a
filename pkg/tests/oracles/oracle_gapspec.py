"""Quadrature oracle (mpmath, 25 digits) for the eigenvalue condition, the
radial profile weights, the GL radial integrals and the s/d degenerate
chemical potential."""

import mpmath as mp

from _common import dump, jhalf, kernel, radial

mp.mp.dps = 25


def rhs(mu, T, R, l):
    return radial(lambda p: p * R / kernel(p, mu, T) * jhalf(l, p * R) ** 2, mu, R)


def norm2(mu, T, R, l):
    return radial(lambda p: p * jhalf(l, p * R) ** 2 / kernel(p, mu, T) ** 2, mu, R)


def g1(x):
    # d/dx of -tanh(x/2)/x
    if abs(x) < mp.mpf('1e-10'):
        return x / 12
    return mp.tanh(x / 2) / x ** 2 - mp.sech(x / 2) ** 2 / (2 * x)


def weights(mu, T, R, l, p, N):
    z = p * p - mu
    kr = N * p ** mp.mpf(-0.5) * jhalf(l, R * p)  # K rho
    f2 = p * p / (2 * T) * mp.sech(z / (2 * T)) ** 2 * kr ** 2
    f4 = p * p / T ** 2 * g1(z / T) / z * kr ** 4
    return f2, f4


def main():
    mu, T, R = mp.mpf(2), mp.mpf('0.1'), mp.mpf(1)
    rhs_vals = {str(l): rhs(mu, T, R, l) for l in range(3)}
    lambdas = {l: 1 / v for l, v in rhs_vals.items()}
    N0 = 1 / mp.sqrt(norm2(mu, T, R, 0))
    f2, f4 = weights(mu, T, R, 0, mp.mpf('1.4'), N0)
    # GL radial integrals for the l = 2 profile
    N2 = 1 / mp.sqrt(norm2(mu, T, R, 2))

    def f4_int(p):
        z = p * p - mu
        x = z / T
        g = g1(x) / z if abs(x) > mp.mpf('1e-8') else 1 / (12 * T)
        return p * p / T ** 2 * g * (N2 * p ** mp.mpf(-0.5) * jhalf(2, R * p)) ** 4

    def f2_int(p):
        z = p * p - mu
        return p * p / (2 * T) * mp.sech(z / (2 * T)) ** 2 * (N2 * p ** mp.mpf(-0.5) * jhalf(2, R * p)) ** 2
    c = radial(f4_int, mu, R)
    d = radial(f2_int, mu, R, upper=mp.sqrt(mu + 80 * T) + 1)
    # s/d degeneracy at T = 0.02
    Ts = mp.mpf('0.02')
    x0 = mp.besseljzero(mp.mpf(1) / 2, 1, derivative=1)
    x2 = mp.besseljzero(mp.mpf(5) / 2, 1, derivative=1)
    delta = lambda m: rhs(m, Ts, 1, 0) - rhs(m, Ts, 1, 2)
    mu_t = mp.findroot(delta, (x0 ** 2, x2 ** 2), solver='anderson', tol=mp.mpf('1e-30'))
    # g_s at the degeneracy point
    Ns = 1 / mp.sqrt(norm2(mu_t, Ts, 1, 0))
    Nd = 1 / mp.sqrt(norm2(mu_t, Ts, 1, 2))
    gs = [[float(p), mp.nstr(abs(Ns * jhalf(0, p) / (Nd * jhalf(2, p))), 20)] for p in (0.5, 1.0, 1.5, 2.0, 3.0)]
    s = lambda v: mp.nstr(v, 22)
    dump('gapspec', {
        'params': {'mu': 2, 'temperature': 0.1, 'radius': 1},
        'rhs': {k: s(v) for k, v in rhs_vals.items()},
        'lambda': {k: s(v) for k, v in lambdas.items()},
        'f_weights_l0_p1.4': {'f2': s(f2), 'f4': s(f4)},
        'gl_l2': {'c': s(c), 'd': s(d)},
        'sd_T0.02': {'mu': s(mu_t), 'lambda': s(1 / rhs(mu_t, Ts, 1, 0))},
        'gs_ratio_sd_T0.02': gs,
    }, 'mpmath quad at 25 digits (Richardson-summed tail); Bessel via mpmath.besselj')


if __name__ == '__main__':
    main()
