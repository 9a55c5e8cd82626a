"""Trial BCS states built from a kernel element and the small-``h`` expansion
of their free energy relative to the normal state.

For a kernel element ``a`` of ``K_{Tc} + V`` and ``h = sqrt((Tc - T)/Tc)``
the trial state has gap ``Delta = h t`` with ``t = -2 K_{Tc} a``. Its free
energy difference is

    dF = -T int (log cosh(E/2T) - log cosh(e/2T)) dp - h^2 int V|a|^2
         + int V |alpha - h a|^2,

with ``e = p^2 - mu`` and ``E = sqrt(e^2 + |Delta|^2)``. The ``h^2``
contributions cancel exactly. To keep the ``h^4`` and ``h^6`` structure
visible in floating point, the trace term is evaluated as ``h^2 E1`` plus an
integral that is ``O(h^4)`` pointwise.

Momentum integrals carry no ``(2 pi)`` factors and Fourier transforms are
unitary, so that Plancherel holds without constants.
"""

import csv
import io
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .gapspec import fourier_bessel, rho_profile
from .glcoeff import angular_factor, c_tensor, radial_coeffs
from .glenergy import eval_generic
from .kernel import _sech2, _sinh_minus, aux_g, dispersion, k_t
from .orderparam import OrderParameter
from .quadrature import bessel_product_integral, integrate_adaptive, integrate_to_inf

__all__ = ['KernelElement', 'TrialState', 'state_eigenvalues', 'trial_state', 'free_energy_diff', 'semiclassical_coeffs',
           'gl_energy', 'h1_remainder', 'scaling_scan', 'ScalingResult', 'swave_params']


@dataclass(frozen=True)
class KernelElement:
    """Angular content of a kernel element: sector ``l`` and coefficients over
    ``m = -l..l`` in the complex spherical-harmonic basis."""

    l: int
    coefficients: Sequence[complex] = (1.0,)

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=complex).reshape(-1)
        if c.size != 2 * self.l + 1:
            raise ValueError('sector l=%d needs %d coefficients' % (self.l, 2 * self.l + 1))
        object.__setattr__(self, 'coefficients', tuple(c))

    @property
    def vector(self):
        return np.array(self.coefficients, dtype=complex)


def _sphere(n_theta=32, n_phi=64):
    x, w = np.polynomial.legendre.leggauss(n_theta)
    phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
    T, P = np.meshgrid(np.arccos(x), phi, indexing='ij')
    W = np.outer(w, np.full(n_phi, 2.0 * math.pi / n_phi))
    return T, P, W


def _angular_moments(elem):
    """``(int |Y|^2, int |Y|^4)`` for ``Y = sum_m psi_m Y_l^m``."""
    from scipy.special import sph_harm_y
    T, P, W = _sphere()
    Y = sum(c * sph_harm_y(elem.l, m, T, P) for m, c in zip(range(-elem.l, elem.l + 1), elem.coefficients))
    a2 = np.abs(Y) ** 2
    return float(np.sum(W * a2)), float(np.sum(W * a2 * a2))


@dataclass
class TrialState:
    """Trial BCS state ``Gamma_Delta`` with ``Delta = -2 h K_{Tc} a``.

    Attributes
    ----------
    params : ModelParams
        Critical parameters: ``temperature`` is ``Tc`` and ``lam`` solves the
        eigenvalue condition for sector ``element.l``.
    element : KernelElement
    h : float
        ``sqrt((Tc - T)/Tc)``, in ``[0, 1)``.
    rho : RadialProfile
        Normalised momentum profile of the sector.
    """

    params: object
    element: KernelElement
    h: float
    rho: object

    @property
    def tc(self):
        return self.params.temperature

    @property
    def temperature(self):
        return self.tc * (1.0 - self.h * self.h)

    def _ylm(self, theta, phi):
        from scipy.special import sph_harm_y
        l = self.element.l
        return sum(c * sph_harm_y(l, m, theta, phi)
                   for m, c in zip(range(-l, l + 1), self.element.coefficients))

    def a_hat(self, p, theta=0.0, phi=0.0):
        """Kernel element in momentum space."""
        return np.asarray(self.rho(p)) * self._ylm(theta, phi)

    def delta_hat(self, p, theta=0.0, phi=0.0):
        return -2.0 * self.h * k_t(self.params, p) * self.a_hat(p, theta, phi)

    def e_delta(self, p, theta=0.0, phi=0.0):
        e = dispersion(p, self.params.mu)
        return np.sqrt(e * e + np.abs(self.delta_hat(p, theta, phi)) ** 2)

    def gamma_hat(self, p, theta=0.0, phi=0.0):
        E = self.e_delta(p, theta, phi)
        e = dispersion(p, self.params.mu)
        T = self.temperature
        return 0.5 * (1.0 - e * _tanh_over(E, T))

    def alpha_hat(self, p, theta=0.0, phi=0.0):
        E = self.e_delta(p, theta, phi)
        return -0.5 * self.delta_hat(p, theta, phi) * _tanh_over(E, self.temperature)


def state_eigenvalues(state, p, theta=0.0, phi=0.0):
    """Eigenvalues of the ``2x2`` matrix ``[[gamma, alpha], [conj alpha, 1 - gamma]]``.

    Returns
    -------
    ndarray, shape (..., 2)
        Ascending; a valid state has both in ``[0, 1]``.
    """
    g = np.asarray(state.gamma_hat(p, theta, phi), dtype=float)
    a = np.asarray(state.alpha_hat(p, theta, phi), dtype=complex)
    g, a = np.broadcast_arrays(g, a)
    m = np.empty(g.shape + (2, 2), dtype=complex)
    m[..., 0, 0] = g
    m[..., 0, 1] = a
    m[..., 1, 0] = np.conj(a)
    m[..., 1, 1] = 1.0 - g
    return np.linalg.eigvalsh(m)


def _tanh_over(E, T):
    """``tanh(E/2T)/E`` including ``E = 0``."""
    E = np.asarray(E, dtype=float)
    return aux_g(0, E / T) / T


def trial_state(params, element, h):
    """Build ``Gamma_Delta`` for a kernel element.

    Raises :class:`~bcsgl.gapspec.ConditionError` when ``params`` do not
    satisfy the eigenvalue condition of sector ``element.l`` to ``1e-8``.
    """
    if not 0.0 <= h < 1.0:
        raise ValueError('h must lie in [0, 1)')
    if params.dimension != 3:
        raise ValueError('trial states are implemented in three dimensions')
    rho = rho_profile(params, element.l, 'momentum')
    return TrialState(params, element, float(h), rho)


# --- integration helpers -----------------------------------------------------------

def _cutoff(params):
    mu, T = params.mu, params.temperature
    kf = math.sqrt(mu) if mu > 0 else 0.0
    return kf, max(2.0 * kf, math.sqrt(max(mu, 0.0) + 80.0 * T), 40.0 / params.radius)


def _radial(f, params, rtol, atol=0.0):
    kf, cut = _cutoff(params)
    # the stable formulas switch branch at |p^2 - mu| = Tc
    Tc = params.temperature
    bps = tuple(math.sqrt(v) for v in (params.mu - Tc, params.mu, params.mu + Tc) if v > 0)
    finite, _ = integrate_adaptive(f, 0.0, cut, rtol=rtol, atol=atol, breakpoints=bps)
    tail, _ = integrate_to_inf(f, cut, rtol=rtol, atol=max(atol, 1e-4 * rtol * abs(finite)), scale=cut)
    return finite + tail


def _require_swave(state):
    if state.element.l != 0:
        raise NotImplementedError('the free-energy route is implemented for s-wave trial states')


def _psi2(state):
    # |Y|^2 for l = 0 is |psi|^2 / (4 pi)
    return abs(state.element.coefficients[0]) ** 2


# --- semiclassical coefficients -------------------------------------------------

def _v_aa(state, rtol=1e-11):
    """``int V |a|^2`` through the position-space value on the shell."""
    params, l = state.params, state.element.l
    R = params.radius
    aR = fourier_bessel(state.rho, l, R, rtol=rtol)
    n2, _ = _angular_moments(state.element)
    return float(-params.lam * R * R * aR * aR * n2)


def semiclassical_coeffs(state, rtol=1e-11):
    """Expansion coefficients of the trace term.

    Returns
    -------
    E1 : float
        ``-(1/4Tc) int g0(e/Tc) |t|^2``.
    E2 : float
        ``(1/16Tc^2) int g1(e/Tc)/e |t|^4 - (1/8Tc) int sech^2(e/2Tc) |t|^2``.
    cancellation : float
        ``|E1 h^2 - h^2 int V |a|^2|`` with the potential term evaluated in
        position space.
    """
    params = state.params
    Tc = params.temperature
    l = state.element.l
    n2, n4 = _angular_moments(state.element)
    R = params.radius
    smooth = state.rho.shell[2]

    # t = -2 K rho Y, so |t|^2 = 4 K^2 rho^2 |Y|^2
    def w1(p):
        K = k_t(params, p)
        return -1.0 / (4.0 * Tc) * aux_g(0, dispersion(p, params.mu) / Tc) * 4.0 * K * K * smooth(p) ** 2 * p * p
    kf, _ = _cutoff(params)
    E1 = n2 * bessel_product_integral(w1, [(l, R), (l, R)], breakpoints=(kf,) if kf else (), rtol=rtol)

    def quartic(p):
        e = dispersion(p, params.mu)
        x = e / Tc
        g1z = np.where(np.abs(x) < 1e-6, 1.0 / (12.0 * Tc), aux_g(1, x) / np.where(x == 0, 1.0, e))
        t2 = 4.0 * k_t(params, p) ** 2 * np.asarray(state.rho(p)) ** 2
        return g1z * t2 * t2 * p * p / (16.0 * Tc * Tc)

    def thermal(p):
        e = dispersion(p, params.mu)
        t2 = 4.0 * k_t(params, p) ** 2 * np.asarray(state.rho(p)) ** 2
        return _sech2(e / (2.0 * Tc)) * t2 * p * p / (8.0 * Tc)
    E2 = n4 * _radial(quartic, params, rtol) - n2 * _radial(thermal, params, rtol)
    h2 = state.h ** 2
    cancel = abs(E1 * h2 - h2 * _v_aa(state, rtol))
    return float(E1), float(E2), float(cancel)


def gl_energy(params, element):
    """GL energy of the kernel element from the coefficient tables."""
    rho = rho_profile(params, element.l, 'momentum')
    sc = radial_coeffs(params, rho)
    v = element.vector
    if element.l == 0:
        return float(sc.c * float(angular_factor('mixed3d', 's', 's', 's', 's')) / math.pi
                     * abs(v[0]) ** 4 - sc.d * abs(v[0]) ** 2)
    if element.l == 2:
        return eval_generic(c_tensor('dwave3d', sc), OrderParameter(v, 'complex_sh'))
    raise NotImplementedError('GL tables exist for l = 0 and l = 2')


# --- free energy -------------------------------------------------------------------

def _bracket(state, p):
    """``tanh(E/2T)/E - tanh(|e|/2Tc)/|e|`` without cancellation."""
    params = state.params
    Tc, T = state.tc, state.temperature
    e = np.abs(dispersion(p, params.mu))
    d2 = np.abs(state.delta_hat(p)) ** 2
    E = np.sqrt(e * e + d2)
    direct = _tanh_over(E, T) - _tanh_over(e, Tc)
    far = e > Tc
    es = np.where(far, e, 1.0)
    Es = np.where(far, E, 1.0)
    # tanh(x/2) - 1 = -2/(exp(x) + 1)
    stable = (-2.0 / (np.exp(np.minimum(Es / T, 700.0)) + 1.0) / Es
              + 2.0 / (np.exp(np.minimum(es / Tc, 700.0)) + 1.0) / es
              - d2 / (Es * es * (Es + es)))
    return np.where(far, stable, direct)


def _g_remainder(state, p):
    """Radial part of ``alpha_Delta - h a`` (divided by the s-wave harmonic)."""
    psi = abs(state.element.coefficients[0])
    return state.h * psi * k_t(state.params, p) * np.asarray(state.rho(p)) * _bracket(state, p)


def _log1p_minus(u):
    """``log(1 + u) - u`` accurate for small ``u``."""
    u = np.asarray(u, dtype=float)
    small = np.abs(u) < 1e-2
    us = np.where(small, u, 0.0)
    series = np.zeros_like(us)
    for k in range(11, 1, -1):
        series = series * us + (-1.0) ** (k + 1) / k
    series = series * us * us
    direct = np.log1p(np.where(small, 0.0, u)) - np.where(small, 0.0, u)
    return np.where(small, series, direct)


def _expm1_ratio(w):
    """``-expm1(-w)/w`` with the limit 1 at ``w = 0``."""
    w = np.asarray(w, dtype=float)
    ws = np.where(w == 0, 1.0, w)
    return np.where(w == 0, 1.0, -np.expm1(-ws) / ws)


def _trace_remainder(state, rtol):
    """``int (trace term) - h^2 E1``, computed from an ``O(h^4)`` integrand.

    With ``A = e/2T``, ``b = (E - e)/2T`` and ``u = tanh A sinh b + 2 sinh^2(b/2)``
    one has ``logcosh(E/2T) - logcosh(e/2T) = log1p(u)``; subtracting
    ``|Delta|^2/(4 K_{Tc})`` term by term leaves only pieces of order
    ``|Delta|^4`` or ``h^2 |Delta|^2``.
    """
    params = state.params
    T, Tc, h2 = state.temperature, state.tc, state.h ** 2

    def f(p):
        e = np.abs(dispersion(p, params.mu))
        d2 = np.abs(state.delta_hat(p)) ** 2
        E = np.sqrt(e * e + d2)
        delta = d2 / (E + e)
        b = delta / (2.0 * T)
        ta = np.tanh(e / (2.0 * T))
        u = ta * np.sinh(b) + 2.0 * np.sinh(0.5 * b) ** 2
        xa, xb = np.exp(-e / T), np.exp(-e / Tc)
        x = (T * _log1p_minus(u)
             + 2.0 * T * ta * _sinh_minus(np.atleast_1d(0.5 * b))
             + 2.0 * T * np.sinh(0.5 * b) ** 2
             - 0.25 * d2 * d2 * _tanh_over(e, T) / (E + e) ** 2
             # (tanh(e/2T) - tanh(e/2Tc)) / (2e), with e/T - e/Tc = e h^2 / T
             + 0.5 * d2 * h2 / T * _expm1_ratio(e * h2 / T) * xb / ((1.0 + xa) * (1.0 + xb)))
        return -4.0 * math.pi * p * p * x
    return _radial(f, params, rtol, atol=1e-30)


def free_energy_diff(state, rtol=1e-11, details=False):
    """``F(Gamma_Delta) - F(Gamma_0)`` at ``T = Tc (1 - h^2)``.

    Parameters
    ----------
    state : TrialState
        s-wave trial state.
    rtol : float
    details : bool
        Also return the individual contributions.
    """
    _require_swave(state)
    if state.h == 0.0:
        return (0.0, {}) if details else 0.0
    h2 = state.h ** 2
    E1, _, _ = semiclassical_coeffs(state, rtol)
    vaa = _v_aa(state, rtol)
    rem = _trace_remainder(state, rtol)
    R = state.params.radius

    def g_fb(p):
        return p ** 1.5 * R ** -0.5 * _g_remainder(state, p)
    from .specfun import bessel_j_half
    gR = _radial(lambda p: g_fb(p) * bessel_j_half(0, R * np.maximum(p, 1e-300)), state.params, rtol,
                 atol=1e-18 * state.h ** 3)
    v_rem = -state.params.lam * R * R * gR * gR
    total = float(rem + h2 * (E1 - vaa) + v_rem)
    if details:
        return total, {'trace_remainder': rem, 'E1': E1, 'V_aa': vaa, 'V_remainder': v_rem}
    return total


def h1_remainder(state, rtol=1e-11):
    """``||alpha_Delta - h a||_{H^1}^2 = int (1 + p^2) |alpha - h a|^2 dp`` (s-wave)."""
    _require_swave(state)
    if state.h == 0.0:
        return 0.0
    f = lambda p: (1.0 + p * p) * _g_remainder(state, p) ** 2 * p * p
    return _radial(f, state.params, rtol, atol=1e-30)


# --- scaling scan ----------------------------------------------------------------------

@dataclass
class ScalingResult:
    """Rows of the ``h`` scan and fitted log-log slopes."""

    h: List[float]
    delta_f: List[float]
    h4_e2: List[float]
    remainder: List[float]
    h1: List[float]
    slope_remainder: float
    slope_h1: float
    E1: float
    E2: float
    gl: float
    cancellation: float
    extra: dict = field(default_factory=dict)

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator='\n')
        w.writerow(['h', 'delta_f', 'h4_E2', 'remainder', 'h1_remainder'])
        for row in zip(self.h, self.delta_f, self.h4_e2, self.remainder, self.h1):
            w.writerow(['%.17g' % v for v in row])
        return buf.getvalue()


def _slope(h, r):
    x, y = np.log(np.asarray(h)), np.log(np.asarray(r))
    return float(np.polyfit(x, y, 1)[0])


def scaling_scan(params, element, h_list, rtol=1e-11):
    """Fit the orders of the free-energy and ``H^1`` remainders.

    Parameters
    ----------
    params : ModelParams
        Critical parameters of an s-wave kernel.
    element : KernelElement
    h_list : sequence of float
        At least four decreasing values in ``(0, 0.3]``.
    """
    h_list = [float(h) for h in h_list]
    if len(h_list) < 4:
        raise ValueError('need at least four h values')
    if any(not 0 < h <= 0.3 for h in h_list) or any(a <= b for a, b in zip(h_list, h_list[1:])):
        raise ValueError('h values must decrease within (0, 0.3]')
    base = trial_state(params, element, h_list[0])
    E1, E2, _ = semiclassical_coeffs(base, rtol)
    cancel = semiclassical_coeffs(trial_state(params, element, h_list[-1]), rtol)[2]
    dfs, h4s, rems, h1s = [], [], [], []
    for h in h_list:
        st = TrialState(params, element, h, base.rho)
        df = free_energy_diff(st, rtol)
        dfs.append(df)
        h4s.append(h ** 4 * E2)
        rems.append(abs(df - h ** 4 * E2))
        h1s.append(h1_remainder(st, rtol))
    return ScalingResult(h_list, dfs, h4s, rems, h1s, _slope(h_list, rems), _slope(h_list, h1s),
                         E1, E2, gl_energy(params, element), cancel)


def swave_params(mu=1.0, tc=0.1, radius=1.0):
    """Critical parameters with an s-wave kernel: ``lambda = lambda_0(Tc, mu)``."""
    from .gapspec import lambda_l
    from .kernel import ModelParams
    p = ModelParams(mu=mu, temperature=tc, radius=radius)
    return p.replace(lam=lambda_l(p, 0))
