"""Independent checks of the dominance certificates (mpmath, 30 digits).

The certificate intervals for ``l0 = 2`` (first maximum) and ``l0 = 3``
(neighbours) are taken from a library run and recorded; their margins are
then recomputed here directly from mpmath Bessel values against every order
up to ``L_ALL`` (higher orders are negligible on these intervals: the first
maximum of order 60 lies beyond x = 60). The first intersection for
``l = 2`` is found by bisection on the difference of squares, and the
maximal amplitudes by locating the first derivative zero."""

import mpmath as mp

from _common import dump, jhalf
from bcsgl.besseldom import verify_first_max_dominance, verify_neighbor_dominance

mp.mp.dps = 30
L_ALL = 60
GRID = 2001


def true_margin_first(l0, a, b):
    worst = mp.inf
    for x in mp.linspace(a, b, GRID):
        own = jhalf(l0, x) ** 2
        other = max(jhalf(l, x) ** 2 for l in range(L_ALL + 1) if l != l0)
        worst = min(worst, own - other)
    return worst


def true_margin_neighbor(l0, a, b):
    worst = mp.inf
    for x in mp.linspace(a, b, GRID):
        floor = min(jhalf(l0 - 1, x) ** 2, jhalf(l0 + 1, x) ** 2)
        other = max(jhalf(l, x) ** 2 for l in range(l0 + 3, L_ALL + 1) if (l - l0) % 2)
        worst = min(worst, floor - other)
    return worst


def bisect_intersection(l):
    f = lambda x: jhalf(l - 1, x) ** 2 - jhalf(l + 1, x) ** 2
    x, step = mp.mpf('0.05'), mp.mpf('0.05')
    while f(x + step) > 0:
        x += step
    lo, hi = x, x + step
    for _ in range(120):
        mid = (lo + hi) / 2
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def main():
    s = lambda v: mp.nstr(v, 22)
    c2 = verify_first_max_dominance(2)
    res3, c3 = verify_neighbor_dominance(3)
    amps = {}
    for l in range(22):
        x = mp.besseljzero(l + mp.mpf(1) / 2, 1, derivative=1)
        amps[str(l)] = s(jhalf(l, x) ** 2)
    dump('besseldom', {
        'first_max_l2': {'certificate': c2.to_dict(),
                         'true_margin': s(true_margin_first(2, *c2.interval))},
        'neighbor_l3': {'certificate': c3.to_dict(), 'residual': res3,
                        'true_margin': s(true_margin_neighbor(3, *c3.interval))},
        'intersection_l2': s(bisect_intersection(2)),
        'max_amplitude': amps,
    }, 'certificates recorded from the library; margins recomputed with mpmath against all l <= %d' % L_ALL)


if __name__ == '__main__':
    main()
