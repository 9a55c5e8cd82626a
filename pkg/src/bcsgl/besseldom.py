"""Numerical certificates for dominance of half-integer Bessel functions.

A certificate for ``l0`` is an interval ``(a, b)`` around the first maximum
``x0 = j'_{l0+1/2,1}`` and a margin ``eps`` with

    J_{l0+1/2}(x)^2 - J_{l+1/2}(x)^2 > eps   on (a, b), for every l != l0.

Three bounds cover the infinitely many competitors.

* ``l > l0``: the maximum over ``y`` of ``|J_{l+1/2}(y)|`` decreases in
  ``l``, so the single constant ``max_y J_{l0+3/2}(y)^2`` bounds them all.
* ``l <= l1``: the modulus ``M_{l+1/2}`` increases with ``l``, so
  ``M_{l1+1/2}(x)^2`` bounds every ``J_{l+1/2}(x)^2`` with ``l <= l1``.
* ``l1 < l < l0``: direct pointwise comparison.
"""

import csv
import io
import math
from dataclasses import asdict, dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from .specfun import bessel_j_half, first_extremum, modulus_m

__all__ = ['DominanceCertificate', 'CertificateError', 'verify_first_max_dominance',
           'verify_neighbor_dominance', 'intersection_z', 'rounded_l1', 'max_amplitude',
           'certificate_margin', 'curve_rows', 'curve_csv', 'dominance_windows']

GRID = 1001


class CertificateError(RuntimeError):
    """No positive margin could be established."""


@dataclass(frozen=True)
class DominanceCertificate:
    """Witness interval and margin for a dominance statement.

    Attributes
    ----------
    l0 : int
    x0 : float
        First maximum of ``J_{l0+1/2}``.
    interval : (float, float)
    epsilon : float
    l_checked : int
        Largest order compared directly.
    tail_bound : float
        Constant bounding ``J^2`` of all orders above the directly compared
        range.
    l1 : int or None
        Modulus-bound order covering ``0..l1`` (None when unused).
    kind : {'first_max', 'neighbor'}
    """

    l0: int
    x0: float
    interval: Tuple[float, float]
    epsilon: float
    l_checked: int
    tail_bound: float
    l1: Optional[int] = None
    kind: str = 'first_max'

    def to_dict(self):
        d = asdict(self)
        d['interval'] = list(self.interval)
        return d


def max_amplitude(l):
    """``max_y J_{l+1/2}(y)^2``, attained at the first maximum."""
    return float(bessel_j_half(l, first_extremum(l, 'max'))) ** 2


def _j2(l, x):
    return np.asarray(bessel_j_half(l, x), dtype=float) ** 2


def _m2(l, x):
    return np.asarray(modulus_m(l, x), dtype=float) ** 2


def _window(margin, x0, half_width, n=GRID):
    """Grid-connected component around ``x0`` where ``margin > margin(x0)/2``."""
    m0 = float(margin(np.array([x0]))[0])
    if not m0 > 0:
        raise CertificateError('no positive margin at the first maximum (%.3e)' % m0)
    xs = np.linspace(x0 - half_width, x0 + half_width, n)
    ms = margin(xs)
    centre = int(np.argmin(np.abs(xs - x0)))
    good = ms > 0.5 * m0
    lo = hi = centre
    while lo > 0 and good[lo - 1]:
        lo -= 1
    while hi < n - 1 and good[hi + 1]:
        hi += 1
    # conservative shrink by one grid cell on each side
    a, b = float(xs[min(lo + 1, centre)]), float(xs[max(hi - 1, centre)])
    if not a < x0 < b:
        raise CertificateError('window collapsed around x0')
    return a, b


def _finish(margin, a, b):
    ms = margin(np.linspace(a, b, GRID))
    worst = float(np.min(ms))
    if not worst > 0:
        raise CertificateError('margin not positive on the interval')
    return 0.5 * worst


def rounded_l1(l0, c=0.65):
    """Order ``l1 = round(m0 - c m0^{1/3} - 1/2)`` with ``m0 = l0 + 1/2``.

    Returns
    -------
    l1 : int
    checks : dict
        ``amplitude``: ``J_{l0+1/2}^2(x0) > M_{l1+1/2}^2(x0)``;
        ``zero``: ``j_{l1+1/2,1} > x0``.
    """
    m0 = l0 + 0.5
    l1 = int(round(m0 - c * m0 ** (1.0 / 3.0) - 0.5))
    l1 = max(0, min(l1, l0 - 1))
    x0 = first_extremum(l0, 'max')
    amp = float(_j2(l0, x0)) > float(_m2(l1, x0))
    zero = first_extremum(l1, 'zero') > x0
    return l1, {'amplitude': amp, 'zero': zero}


def _best_l1(l0, x0, target):
    """Largest ``l1 < l0`` whose modulus stays below the target at ``x0``."""
    for l1 in range(l0 - 1, -1, -1):
        if float(_m2(l1, x0)) < target:
            return l1
    return None


def verify_first_max_dominance(l0, L_probe=None):
    """Certify that ``J_{l0+1/2}^2`` dominates all other orders near ``x0``.

    Parameters
    ----------
    l0 : int
    L_probe : int, optional
        Orders ``l0 < l <= L_probe`` are compared directly as well (they are
        also covered by the tail bound). Defaults to ``l0 + 2``.

    Returns
    -------
    DominanceCertificate
    """
    if l0 < 0:
        raise ValueError('l0 must be non-negative')
    L_probe = l0 + 2 if L_probe is None else L_probe
    if L_probe < l0 + 2:
        raise ValueError('L_probe must be at least l0 + 2')
    x0 = first_extremum(l0, 'max')
    tail = max_amplitude(l0 + 1)
    peak = float(_j2(l0, x0))
    l1 = _best_l1(l0, x0, peak - 0.5 * (peak - tail)) if l0 > 0 else None
    direct = list(range((l1 + 1) if l1 is not None else 0, l0)) + list(range(l0 + 1, L_probe + 1))

    def margin(x):
        x = np.asarray(x, dtype=float)
        comp = np.full_like(x, tail)
        if l1 is not None:
            comp = np.maximum(comp, _m2(l1, x))
        for l in direct:
            comp = np.maximum(comp, _j2(l, x))
        return _j2(l0, x) - comp

    a, b = _window(margin, x0, 0.5 * (first_extremum(l0, 'zero') - x0))
    eps = _finish(margin, a, b)
    return DominanceCertificate(l0, x0, (a, b), eps, L_probe, tail, l1, 'first_max')


def verify_neighbor_dominance(l0, L_probe=None):
    """Certify the equal-neighbour picture at ``x0 = j'_{l0+1/2,1}``.

    ``J_{l0-1/2}(x0) = J_{l0+3/2}(x0)`` holds by the recurrence at a critical
    point; near ``x0`` the smaller of the two squares dominates every
    ``J_{l+1/2}^2`` with ``l >= l0 + 3``.

    Returns
    -------
    residual : float
        ``|J_{l0-1/2}(x0) - J_{l0+3/2}(x0)|``.
    certificate : DominanceCertificate
    """
    if l0 < 1:
        raise ValueError('l0 must be at least 1')
    x0 = first_extremum(l0, 'max')
    lo_val = float(bessel_j_half(l0 - 1, x0))
    hi_val = float(bessel_j_half(l0 + 1, x0))
    residual = abs(lo_val - hi_val)
    floor = min(lo_val, hi_val) ** 2
    if L_probe is None:
        # compare directly until the uniform tail bound leaves half the floor
        L_probe = l0 + 3
        while max_amplitude(L_probe + 1) > 0.5 * floor:
            L_probe += 1
    tail = max_amplitude(L_probe + 1)
    direct = [l for l in range(l0 + 3, L_probe + 1) if (l - l0) % 2]

    def margin(x):
        x = np.asarray(x, dtype=float)
        comp = np.full_like(x, tail)
        for l in direct:
            comp = np.maximum(comp, _j2(l, x))
        return np.minimum(_j2(l0 - 1, x), _j2(l0 + 1, x)) - comp

    a, b = _window(margin, x0, 0.5 * (first_extremum(l0, 'zero') - x0))
    eps = _finish(margin, a, b)
    return residual, DominanceCertificate(l0, x0, (a, b), eps, L_probe, tail, None, 'neighbor')


def certificate_margin(cert, n=10000):
    """Re-evaluate a certificate's worst margin on a fresh grid."""
    xs = np.linspace(cert.interval[0], cert.interval[1], n)
    if cert.kind == 'first_max':
        comp = np.full_like(xs, cert.tail_bound)
        if cert.l1 is not None:
            comp = np.maximum(comp, _m2(cert.l1, xs))
        start = cert.l1 + 1 if cert.l1 is not None else 0
        for l in list(range(start, cert.l0)) + list(range(cert.l0 + 1, cert.l_checked + 1)):
            comp = np.maximum(comp, _j2(l, xs))
        return float(np.min(_j2(cert.l0, xs) - comp))
    comp = np.full_like(xs, cert.tail_bound)
    for l in range(cert.l0 + 3, cert.l_checked + 1):
        if (l - cert.l0) % 2:
            comp = np.maximum(comp, _j2(l, xs))
    return float(np.min(np.minimum(_j2(cert.l0 - 1, xs), _j2(cert.l0 + 1, xs)) - comp))


def intersection_z(l, tol=1e-10):
    """First positive solution of ``J_{l-1/2}^2 = J_{l+3/2}^2``.

    Found by scanning the difference of squares from the origin and refining
    the first sign change; checked against ``j'_{l+1/2,1}``.
    """
    if l < 1:
        raise ValueError('l must be at least 1')
    f = lambda x: float(_j2(l - 1, x) - _j2(l + 1, x))
    step = 0.05
    x = step
    fx = f(x)
    while True:
        xn = x + step
        fn = f(xn)
        if fx > 0 >= fn:
            break
        x, fx = xn, fn
        if x > 10 * (l + 5):
            raise RuntimeError('no intersection found')
    z = brentq(f, x, xn, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    ref = first_extremum(l, 'max')
    if abs(z - ref) > tol:
        raise AssertionError('intersection %.15g differs from first maximum %.15g' % (z, ref))
    return z


def curve_rows(l_max=11, x_max=25.0, n=2501):
    """Rows ``(x, l, J_{l+1/2}(x)^2)`` for ``l = 0..l_max`` on ``(0, x_max]``."""
    xs = np.linspace(x_max / n, x_max, n)
    rows = []
    for l in range(l_max + 1):
        vals = _j2(l, xs)
        rows.extend((float(x), l, float(v)) for x, v in zip(xs, vals))
    return rows


def curve_csv(l_max=11, x_max=25.0, n=2501):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator='\n')
    w.writerow(['x', 'l', 'J2'])
    for x, l, v in curve_rows(l_max, x_max, n):
        w.writerow(['%.17g' % x, l, '%.17g' % v])
    return buf.getvalue()


def dominance_windows(l_max=11, x_max=25.0, n=2501):
    """For each ``l``, the grid interval around ``j'_{l+1/2,1}`` where ``J_{l+1/2}^2``
    is the largest member of the family ``0..l_max`` (None when empty)."""
    xs = np.linspace(x_max / n, x_max, n)
    table = np.array([_j2(l, xs) for l in range(l_max + 1)])
    top = np.argmax(table, axis=0)
    out = {}
    for l in range(l_max + 1):
        x0 = first_extremum(l, 'max')
        if x0 > x_max:
            out[l] = None
            continue
        i = int(np.argmin(np.abs(xs - x0)))
        if top[i] != l:
            out[l] = None
            continue
        lo = hi = i
        while lo > 0 and top[lo - 1] == l:
            lo -= 1
        while hi < n - 1 and top[hi + 1] == l:
            hi += 1
        out[l] = (float(xs[lo]), float(xs[hi]))
    return out
