"""Half-integer Bessel functions, Clebsch-Gordan coefficients and the
spherical-harmonic basis change used for the d-wave order parameter.

All Bessel routines take the integer ``l`` and evaluate order ``l + 1/2``.
"""

import math
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq

from .orderparam import OrderParameter

__all__ = [
    'bessel_j_half', 'bessel_y_half', 'modulus_m', 'bessel_j_half_derivative',
    'first_extremum', 'clebsch_gordan', 'clebsch_gordan_exact', 'Surd',
    'basis_change', 'complex_to_real_matrix', 'hankel_coefficients',
]

_SERIES_X = 1.0
_RESCALE = 1e250


def _check_args(l, x):
    if int(l) != l or l < 0:
        raise ValueError('order index l must be a non-negative integer, got %r' % (l,))
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise ValueError('argument x must be positive')
    return int(l), x


def _series(l, x):
    """Power series of J_{l+1/2}; used for x < 1."""
    nu = l + 0.5
    half = 0.5 * x
    log_pref = nu * np.log(half) - math.lgamma(nu + 1.0)
    pref = np.exp(log_pref)
    term = np.ones_like(x)
    total = np.ones_like(x)
    q = -half * half
    for k in range(1, 40):
        term = term * q / (k * (k + nu))
        total = total + term
        if np.all(np.abs(term) < 1e-17 * np.abs(total)):
            break
    return pref * total


def _upward(l, x):
    """Upward recurrence from J_{-1/2}, J_{1/2}; stable for x > l + 1/2."""
    amp = np.sqrt(2.0 / (np.pi * x))
    jm = amp * np.cos(x)  # J_{-1/2}
    j = amp * np.sin(x)  # J_{1/2}
    for k in range(l):
        nu = k + 0.5
        jm, j = j, (2.0 * nu / x) * j - jm
    return j


def _miller(l, x):
    """Downward recurrence normalised against the closed-form l = 0 values."""
    start = l + 15 + int(math.ceil(float(np.max(x))))
    f_up = np.zeros_like(x)
    f = np.full_like(x, 1e-300)
    out = np.zeros_like(x)
    for k in range(start, -1, -1):
        # f holds J_{k+1/2} (unnormalised), f_up holds J_{k+3/2}
        if k == l:
            out = f.copy()
        f_down = (2.0 * (k + 0.5) / x) * f - f_up
        f_up, f = f, f_down
        big = np.abs(f) > _RESCALE
        if np.any(big):
            s = np.where(big, 1.0 / _RESCALE, 1.0)
            f, f_up, out = f * s, f_up * s, out * s
    # f = J_{-1/2}, f_up = J_{1/2}, both unnormalised
    amp = np.sqrt(2.0 / (np.pi * x))
    use_sin = np.abs(np.sin(x)) >= np.abs(np.cos(x))
    scale = np.where(use_sin, amp * np.sin(x) / f_up, amp * np.cos(x) / f)
    return out * scale


def bessel_j_half(l, x):
    """Bessel function of the first kind of half-integer order.

    Parameters
    ----------
    l : int
        Non-negative integer; the order is ``l + 1/2``.
    x : float or ndarray
        Positive argument(s).

    Returns
    -------
    float or ndarray
        ``J_{l+1/2}(x)``.

    Notes
    -----
    Small arguments use the power series, ``x > l + 1/2`` uses upward
    recurrence from the closed forms, and the remaining range uses Miller's
    downward recurrence started at order ``l + 15 + ceil(x)``.
    """
    l, xa = _check_args(l, x)
    scalar = xa.ndim == 0
    xa = np.atleast_1d(xa)
    out = np.empty_like(xa)
    small = xa < _SERIES_X
    up = (~small) & (xa > l + 0.5)
    mid = ~(small | up)
    if np.any(small):
        out[small] = _series(l, xa[small])
    if np.any(up):
        out[up] = _upward(l, xa[up])
    if np.any(mid):
        out[mid] = _miller(l, xa[mid])
    return out[0] if scalar else out


def bessel_y_half(l, x):
    """Bessel function of the second kind ``Y_{l+1/2}(x)`` by upward recurrence."""
    l, xa = _check_args(l, x)
    amp = np.sqrt(2.0 / (np.pi * xa))
    ym = amp * np.sin(xa)  # Y_{-1/2}
    y = -amp * np.cos(xa)  # Y_{1/2}
    for k in range(l):
        ym, y = y, (2.0 * (k + 0.5) / xa) * y - ym
    return y


def modulus_m(l, x):
    """Modulus ``M_{l+1/2}(x) = sqrt(J^2 + Y^2)``."""
    j = bessel_j_half(l, x)
    y = bessel_y_half(l, x)
    return np.hypot(j, y)


def bessel_j_half_derivative(l, x):
    """Derivative ``J'_{l+1/2}(x) = (nu/x) J_nu(x) - J_{nu+1}(x)``."""
    nu = l + 0.5
    return nu / np.asarray(x, dtype=float) * bessel_j_half(l, x) - bessel_j_half(l + 1, x)


def first_extremum(l, kind='max'):
    """First positive zero or first maximum of ``J_{l+1/2}``.

    Parameters
    ----------
    l : int
        Order index.
    kind : {'zero', 'max'}
        ``'zero'`` returns ``j_{l+1/2,1}``, ``'max'`` returns ``j'_{l+1/2,1}``.

    Returns
    -------
    float
    """
    if int(l) != l or l < 0:
        raise ValueError('l must be a non-negative integer')
    l = int(l)
    if kind == 'max':
        func = lambda t: float(bessel_j_half_derivative(l, t))
        x = l + 0.5  # j'_{nu,1} > nu
    elif kind == 'zero':
        func = lambda t: float(bessel_j_half(l, t))
        x = first_extremum(l, 'max')
    else:
        raise ValueError("kind must be 'zero' or 'max'")
    fx = func(x)
    for _ in range(1000):
        xn = x + 1.0
        fn = func(xn)
        if fx > 0 >= fn:
            return brentq(func, x, xn, xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=200)
        x, fx = xn, fn
    raise RuntimeError('bracketing failed for l=%d kind=%s' % (l, kind))


def hankel_coefficients(l):
    """Coefficients of the finite trigonometric form of ``J_{l+1/2}``.

    ``J_{l+1/2}(x) = sqrt(2/(pi x)) [P(x) sin(x - l pi/2) + Q(x) cos(x - l pi/2)]``
    with ``P = sum_k p[k] x^{-2k}`` and ``Q = sum_k q[k] x^{-2k-1}``.

    Returns
    -------
    p, q : ndarray
    """
    n = int(l)
    p = [(-1) ** k * math.factorial(n + 2 * k)
         / (math.factorial(2 * k) * math.factorial(n - 2 * k) * 2.0 ** (2 * k))
         for k in range(n // 2 + 1)]
    q = [(-1) ** k * math.factorial(n + 2 * k + 1)
         / (math.factorial(2 * k + 1) * math.factorial(n - 2 * k - 1) * 2.0 ** (2 * k + 1))
         for k in range((n - 1) // 2 + 1)] if n >= 1 else []
    return np.array(p), np.array(q)


# --- exact angular-momentum algebra -------------------------------------

def _squarefree_split(n):
    """Write ``n = a^2 * b`` with ``b`` squarefree; return ``(a, b)``."""
    a, b, f = 1, 1, 2
    while f * f <= n:
        while n % (f * f) == 0:
            a *= f
            n //= f * f
        if n % f == 0:
            b *= f
            n //= f
        f += 1
    return a, b * n


class Surd:
    """Exact number ``sum_k q_k sqrt(k)`` with rational ``q_k`` and squarefree ``k``."""

    __slots__ = ('terms',)

    def __init__(self, terms=None):
        self.terms = {k: Fraction(v) for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def sqrt(cls, value, sign=1):
        """Exact ``sign * sqrt(value)`` for a non-negative rational ``value``."""
        value = Fraction(value)
        if value < 0:
            raise ValueError('negative radicand')
        if value == 0 or sign == 0:
            return cls()
        num = value.numerator * value.denominator
        a, b = _squarefree_split(num)
        return cls({b: Fraction(sign * a, value.denominator)})

    def __add__(self, other):
        other = other if isinstance(other, Surd) else Surd({1: other})
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return Surd(out)

    __radd__ = __add__

    def __neg__(self):
        return Surd({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Surd):
            return Surd({k: v * Fraction(other) for k, v in self.terms.items()})
        out = Surd()
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                a, b = _squarefree_split(k1 * k2)
                out = out + Surd({b: v1 * v2 * a})
        return out

    __rmul__ = __mul__

    def __eq__(self, other):
        other = other if isinstance(other, Surd) else Surd({1: other})
        return (self - other).terms == {}

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __float__(self):
        return float(sum(float(v) * math.sqrt(k) for k, v in self.terms.items()))

    def is_zero(self):
        return not self.terms

    def __repr__(self):
        if not self.terms:
            return 'Surd(0)'
        parts = ['%s*sqrt(%d)' % (v, k) if k != 1 else str(v) for k, v in sorted(self.terms.items())]
        return 'Surd(' + ' + '.join(parts) + ')'


def _valid_cg(l1, l2, m1, m2, L, M):
    if M != m1 + m2:
        return False
    if abs(m1) > l1 or abs(m2) > l2 or abs(M) > L:
        return False
    return abs(l1 - l2) <= L <= l1 + l2


def clebsch_gordan_exact(l1, l2, m1, m2, L, M):
    """Clebsch-Gordan coefficient ``<l1 l2; m1 m2 | L M>`` as an exact ``Surd``.

    Uses the Racah sum in integer arithmetic; integer angular momenta only.
    """
    if not _valid_cg(l1, l2, m1, m2, L, M):
        return Surd()
    f = math.factorial
    pref = Fraction((2 * L + 1) * f(L + l1 - l2) * f(L - l1 + l2) * f(l1 + l2 - L),
                    f(l1 + l2 + L + 1))
    pref *= f(L + M) * f(L - M) * f(l1 - m1) * f(l1 + m1) * f(l2 - m2) * f(l2 + m2)
    s = Fraction(0)
    kmin = max(0, l2 - L - m1, l1 - L + m2)
    kmax = min(l1 + l2 - L, l1 - m1, l2 + m2)
    for k in range(kmin, kmax + 1):
        s += Fraction((-1) ** k, f(k) * f(l1 + l2 - L - k) * f(l1 - m1 - k) * f(l2 + m2 - k)
                      * f(L - l2 + m1 + k) * f(L - l1 - m2 + k))
    if s == 0:
        return Surd()
    return Surd.sqrt(pref * s * s, sign=1 if s > 0 else -1)


def clebsch_gordan(l1, l2, m1, m2, L, M):
    """Clebsch-Gordan coefficient ``<l1 l2; m1 m2 | L M>`` as a float."""
    return float(clebsch_gordan_exact(l1, l2, m1, m2, L, M))


# --- basis change ----------------------------------------------------------

_S2 = 1.0 / math.sqrt(2.0)


def complex_to_real_matrix():
    """Unitary ``U`` with ``psi_complex = U @ psi_real``.

    Component order is ``m = -2, ..., 2`` in both bases.
    """
    u = np.zeros((5, 5), dtype=complex)
    # rows: complex index (m+2); columns: real index (m+2)
    u[2, 2] = 1.0
    u[1, 3], u[1, 1] = -_S2, 1j * _S2  # psi~_-1 = (-psi_1 + i psi_-1)/sqrt2
    u[3, 3], u[3, 1] = _S2, 1j * _S2  # psi~_1 = (psi_1 + i psi_-1)/sqrt2
    u[0, 4], u[0, 0] = _S2, -1j * _S2  # psi~_-2 = (psi_2 - i psi_-2)/sqrt2
    u[4, 4], u[4, 0] = _S2, 1j * _S2  # psi~_2 = (psi_2 + i psi_-2)/sqrt2
    return u


_U = complex_to_real_matrix()


def basis_change(psi, direction):
    """Map a five-component d-wave order parameter between bases.

    Parameters
    ----------
    psi : OrderParameter
        Five components, ``basis`` tag ``'complex_sh'`` or ``'real_sh'``.
    direction : {'complex->real', 'real->complex'}

    Returns
    -------
    OrderParameter
    """
    if direction not in ('complex->real', 'real->complex'):
        raise ValueError('unknown direction %r' % (direction,))
    src, dst = direction.split('->')
    src, dst = src + '_sh', dst + '_sh'
    if psi.basis != src:
        raise ValueError('basis tag %r does not match direction %r' % (psi.basis, direction))
    v = np.asarray(psi.components, dtype=complex)
    if v.shape != (5,):
        raise ValueError('basis change needs exactly five components')
    out = _U @ v if src == 'real_sh' else _U.conj().T @ v
    return OrderParameter(out, dst)
