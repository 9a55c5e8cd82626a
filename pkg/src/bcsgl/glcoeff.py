"""Ginzburg-Landau coefficients: radial integrals and the quartic tensor.

The quartic coefficients factor into a radial integral (one of ``c``,
``c1s``, ``c2s``, ``c4s`` depending on how many indices refer to the s-wave
profile) times an angular integral over four basis functions. Angular
integrals are kept exact as :class:`~bcsgl.specfun.Surd` values of
``pi * A``; in three dimensions they come from Clebsch-Gordan sums, in two
dimensions from the elementary integrals of ``cos^a sin^b``.
"""

import json
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from . import __version__
from .kernel import _sech2, aux_g, dispersion, k_t
from .quadrature import integrate_adaptive, integrate_to_inf
from .specfun import Surd, clebsch_gordan_exact

__all__ = ['GlCoefficients', 'radial_coeffs', 'c_tensor', 'angular_factor', 'angular_oracle',
           'MODES', 'MODE_LABELS', 'MODE_BASIS']

MODE_LABELS = {
    'scalar': ('psi',),
    'dwave3d': (-2, -1, 0, 1, 2),
    'mixed3d': ('s', -2, -1, 0, 1, 2),
    'dwave2d': ('x2-y2', 'xy'),
    'mixed2d': ('s', 'x2-y2', 'xy'),
}
MODE_BASIS = {
    'scalar': 'scalar',
    'dwave3d': 'complex_sh',
    'mixed3d': 'mixed_complex',
    'dwave2d': 'real_2d',
    'mixed2d': 'mixed_2d',
}
MODES = tuple(MODE_LABELS)
_SCALAR_BY_NS = {0: 'c', 1: 'c1s', 2: 'c2s', 4: 'c4s'}


@dataclass(frozen=True)
class GlCoefficients:
    """Scalar GL coefficients, optionally with the assembled tensor.

    Parameters
    ----------
    c, d : float
        Radial integrals of ``f4`` and ``f2``.
    c1s, c2s, c4s, d2s : float, optional
        Mixed radial integrals carrying ``g_s^m``.
    dimension : {2, 3}
    mode : str, optional
        Set once the tensor is built; one of ``MODES``.
    tensor : ndarray, optional
        ``c_{ijkm}`` over ``labels``.
    d_matrix : ndarray, optional
    quad_error : float
        Largest relative quadrature error estimate among the scalars.
    """

    c: float
    d: float
    c1s: Optional[float] = None
    c2s: Optional[float] = None
    c4s: Optional[float] = None
    d2s: Optional[float] = None
    dimension: int = 3
    mode: Optional[str] = None
    tensor: Optional[np.ndarray] = None
    d_matrix: Optional[np.ndarray] = None
    quad_error: float = 0.0

    @property
    def labels(self):
        return MODE_LABELS[self.mode] if self.mode else None

    @property
    def basis(self):
        return MODE_BASIS[self.mode] if self.mode else None

    @property
    def n(self):
        return len(self.labels) if self.mode else None

    @property
    def has_mixed(self):
        return None not in (self.c1s, self.c2s, self.c4s, self.d2s)

    @property
    def tau(self):
        """``7 pi d / (5 c)`` in 3D, ``pi d / c`` in 2D."""
        return (7.0 if self.dimension == 3 else 5.0) * math.pi * self.d / (5.0 * self.c)

    @property
    def tau_s(self):
        return 2.0 * math.pi * self.d2s / self.c4s

    def scalar(self, name):
        val = getattr(self, name)
        if val is None:
            raise ValueError('coefficient %s is not available' % name)
        return val

    def to_dict(self):
        """JSON-ready dictionary with the index legend and all scalars."""
        out = {
            'version': __version__,
            'dimension': self.dimension,
            'scalars': {k: getattr(self, k) for k in ('c', 'd', 'c1s', 'c2s', 'c4s', 'd2s')},
            'quad_error': self.quad_error,
        }
        if self.mode:
            out['mode'] = self.mode
            out['basis'] = self.basis
            out['labels'] = [str(x) for x in self.labels]
            out['c_tensor'] = {'real': self.tensor.real.tolist(), 'imag': self.tensor.imag.tolist()}
            out['d_matrix'] = {'real': self.d_matrix.real.tolist(), 'imag': self.d_matrix.imag.tolist()}
        return out

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


# --- angular factors ----------------------------------------------------------

def _lm(label):
    return (0, 0) if label == 's' else (2, int(label))


@lru_cache(maxsize=None)
def _angular_3d(i, j, k, m):
    (l1, m1), (l2, m2), (l3, m3), (l4, m4) = map(_lm, (i, j, k, m))
    if m1 + m2 != m3 + m4:
        return Surd()
    M = m1 + m2
    pref = Surd.sqrt((2 * l1 + 1) * (2 * l2 + 1) * (2 * l3 + 1) * (2 * l4 + 1))
    total = Surd()
    for L in range(max(abs(l1 - l2), abs(l3 - l4), abs(M)), min(l1 + l2, l3 + l4) + 1):
        term = (clebsch_gordan_exact(l1, l2, 0, 0, L, 0) * clebsch_gordan_exact(l1, l2, m1, m2, L, M)
                * clebsch_gordan_exact(l3, l4, 0, 0, L, 0) * clebsch_gordan_exact(l3, l4, m3, m4, L, M))
        total = total + term * Fraction(1, 4 * (2 * L + 1))
    return pref * total


def _dfact(n):
    return 1 if n <= 0 else n * _dfact(n - 2)


@lru_cache(maxsize=None)
def _angular_2d(i, j, k, m):
    idx = (i, j, k, m)
    a = idx.count('x2-y2')
    b = idx.count('xy')
    ns = idx.count('s')
    if a % 2 or b % 2:
        return Surd()
    # int_0^{2pi} cos^a sin^b = 2 pi (a-1)!!(b-1)!!/(a+b)!!; norms 1/sqrt(pi), 1/sqrt(2 pi)
    x = Fraction(_dfact(a - 1) * _dfact(b - 1), _dfact(a + b))
    return Surd({1: 2 * x / Fraction(2) ** (ns // 2)})


def angular_factor(mode, i, j, k, m):
    """Exact ``pi * int conj(Y_i Y_j) Y_k Y_m`` for the basis of ``mode``.

    Returns
    -------
    Surd
    """
    labels = MODE_LABELS[mode]
    for x in (i, j, k, m):
        if x not in labels:
            raise ValueError('label %r not in mode %s' % (x, mode))
    if mode == 'scalar':
        return Surd({1: 1})
    if mode in ('dwave3d', 'mixed3d'):
        return _angular_3d(i, j, k, m)
    return _angular_2d(i, j, k, m)


def _radial_name(mode, idx):
    if mode == 'scalar':
        return 'c'
    ns = sum(1 for x in idx if x == 's')
    return _SCALAR_BY_NS.get(ns)


def c_tensor(mode, scalars):
    """Assemble ``c_{ijkm}`` and ``d_{ij}`` for one of the supported bases.

    Parameters
    ----------
    mode : {'dwave3d', 'mixed3d', 'dwave2d', 'mixed2d', 'scalar'}
        ``scalar`` is the single-component ``c |psi|^4 - d |psi|^2`` model.
    scalars : GlCoefficients

    Returns
    -------
    GlCoefficients
        Copy of ``scalars`` with ``mode``, ``tensor`` and ``d_matrix`` set.
    """
    if mode not in MODES:
        raise ValueError('unknown mode %r' % (mode,))
    if mode.startswith('mixed') and not scalars.has_mixed:
        raise ValueError('mixed mode needs c1s, c2s, c4s and d2s')
    want_dim = 2 if mode.endswith('2d') else 3
    if mode != 'scalar' and scalars.dimension != want_dim:
        raise ValueError('mode %s needs dimension %d' % (mode, want_dim))
    labels = MODE_LABELS[mode]
    n = len(labels)
    t = np.zeros((n,) * 4, dtype=complex)
    pi_inv = 1.0 if mode == 'scalar' else 1.0 / math.pi
    for a, i in enumerate(labels):
        for b, j in enumerate(labels):
            for e, k in enumerate(labels):
                for f, m in enumerate(labels):
                    ang = angular_factor(mode, i, j, k, m)
                    if ang.is_zero():
                        continue
                    t[a, b, e, f] = float(ang) * pi_inv * scalars.scalar(_radial_name(mode, (i, j, k, m)))
    dm = np.diag([scalars.d2s if lab == 's' else scalars.d for lab in labels]).astype(complex)
    t.setflags(write=False)
    dm.setflags(write=False)
    return replace(scalars, mode=mode, tensor=t, d_matrix=dm)


# --- independent angular quadrature ---------------------------------------------

@lru_cache(maxsize=None)
def _sphere_grid(n_theta=64, n_phi=128):
    x, w = np.polynomial.legendre.leggauss(n_theta)
    phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
    theta = np.arccos(x)
    T, P = np.meshgrid(theta, phi, indexing='ij')
    W = np.outer(w, np.full(n_phi, 2.0 * math.pi / n_phi))
    return T, P, W


def _ylm(label, theta, phi):
    from scipy.special import sph_harm_y
    l, m = _lm(label)
    return sph_harm_y(l, m, theta, phi)


def _y2d(label, phi):
    if label == 's':
        return np.full_like(phi, 1.0 / math.sqrt(2.0 * math.pi))
    f = np.cos if label == 'x2-y2' else np.sin
    return f(2.0 * phi) / math.sqrt(math.pi)


def angular_oracle(i, j, k, m, mode='mixed3d'):
    """Numerical ``int conj(Y_i Y_j) Y_k Y_m`` over the sphere (or circle).

    Gauss-Legendre in ``cos(theta)`` (64 nodes) times the trapezoid rule in
    ``phi`` (128 nodes); both are exact for these polynomial integrands.
    Independent of the Clebsch-Gordan route used by :func:`c_tensor`.
    """
    if mode in ('dwave3d', 'mixed3d'):
        T, P, W = _sphere_grid()
        val = np.conj(_ylm(i, T, P) * _ylm(j, T, P)) * _ylm(k, T, P) * _ylm(m, T, P)
        return float(np.sum(W * val).real)
    if mode in ('dwave2d', 'mixed2d'):
        phi = 2.0 * math.pi * np.arange(128) / 128
        val = _y2d(i, phi) * _y2d(j, phi) * _y2d(k, phi) * _y2d(m, phi)
        return float(np.sum(val) * 2.0 * math.pi / 128)
    raise ValueError('no angular integral for mode %r' % (mode,))


# --- radial coefficients -----------------------------------------------------------

def _weights(params, p):
    """``(w2, w4)`` with ``f2 = w2 |rho|^2`` and ``f4 = w4 |rho|^4``."""
    T = params.temperature
    z = dispersion(p, params.mu)
    K = k_t(params, p)
    pref = p ** (params.dimension - 1)
    x = z / T
    g1_over_z = np.where(np.abs(x) < 1e-6, 1.0 / (12.0 * T), aux_g(1, x) / np.where(x == 0, 1.0, z))
    w4 = pref / T ** 2 * g1_over_z * K ** 4
    w2 = pref / (2.0 * T) * _sech2(x / 2.0) * K ** 2
    return w2, w4


def _sign_changes(f, hi, n=4000):
    grid = np.linspace(hi / n, hi, n)
    vals = np.asarray(f(grid), dtype=float)
    roots = []
    for a, b, fa, fb in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if fa == 0.0:
            roots.append(a)
        elif fa * fb < 0:
            roots.append(brentq(lambda q: float(f(np.array([q]))[0]), a, b, xtol=1e-15))
    return roots


def _integrate(f, cutoff, bps, rtol):
    finite, err = integrate_adaptive(f, 0.0, cutoff, rtol=rtol, breakpoints=bps)
    tail, terr = integrate_to_inf(f, cutoff, rtol=rtol, atol=1e-3 * rtol * abs(finite),
                                  scale=cutoff)
    total = finite + tail
    return total, (err + terr) / max(abs(total), 1e-300)


def radial_coeffs(params, rho, rho_s=None, rtol=1e-11, signed_c1s=False):
    """Radial GL integrals for a kernel profile (and an optional s-wave one).

    Parameters
    ----------
    params : ModelParams
        Its temperature is the critical temperature.
    rho : RadialProfile
        Normalised profile of the dominant sector.
    rho_s : RadialProfile, optional
        Normalised s-wave profile; enables ``c1s, c2s, c4s, d2s``.
    rtol : float
    signed_c1s : bool
        Use ``rho_s rho^3`` instead of ``|rho_s| |rho|^3`` in ``c1s``.

    Returns
    -------
    GlCoefficients
        Scalars only; pass to :func:`c_tensor` for the tensor.
    """
    if rho.dimension != params.dimension or (rho_s is not None and rho_s.dimension != params.dimension):
        raise ValueError('profile dimension does not match the model')
    mu, T = params.mu, params.temperature
    kf = math.sqrt(mu) if mu > 0 else 0.0
    scale = 1.0 / params.radius if rho.shell is not None else 1.0
    cutoff = max(2.0 * kf, math.sqrt(max(mu, 0.0) + 80.0 * T), 40.0 * scale)
    bps = set(rho.breakpoints)
    if kf:
        bps.add(kf)
    profiles = [rho] if rho_s is None else [rho, rho_s]
    for prof in profiles:
        bps.update(_sign_changes(prof, cutoff))
    bps = sorted(b for b in bps if 0 < b < cutoff)

    def rr(p):
        return np.asarray(rho(p), dtype=float)

    def f2(p, s_power=0):
        w2, _ = _weights(params, p)
        base = rr(p) if s_power == 0 else np.asarray(rho_s(p), dtype=float)
        return w2 * base ** 2

    def f4(p, m=0):
        _, w4 = _weights(params, p)
        r = rr(p)
        if m == 0:
            return w4 * r ** 4
        s = np.asarray(rho_s(p), dtype=float)
        if m == 1 and signed_c1s:
            return w4 * s * r ** 3
        return w4 * np.abs(r) ** (4 - m) * np.abs(s) ** m

    # the thermal weight in f2 is negligible past sqrt(mu + 80 T)
    c, ec = _integrate(f4, cutoff, bps, rtol)
    d, ed = _integrate(f2, cutoff, bps, rtol)
    errs = [ec, ed]
    out = dict(c=c, d=d)
    if rho_s is not None:
        for m, name in ((1, 'c1s'), (2, 'c2s'), (4, 'c4s')):
            out[name], e = _integrate(lambda p, m=m: f4(p, m), cutoff, bps, rtol)
            errs.append(e)
        out['d2s'], e = _integrate(lambda p: f2(p, 1), cutoff, bps, rtol)
        errs.append(e)
    return GlCoefficients(dimension=params.dimension, quad_error=max(errs), **out)
