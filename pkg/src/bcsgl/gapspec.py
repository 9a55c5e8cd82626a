"""Sector-resolved spectral theory of ``K_T + V`` for the delta-shell
interaction: eigenvalue condition, coupling thresholds, critical
temperature, radial eigenfunctions and the sector-selection procedures.

Temperatures enter through ``ModelParams.log_temperature`` so that the very
small critical temperatures produced by weak coupling stay representable.
For ``T`` far below the Fermi-surface scale the sector integral is split as

    rhs = J_reg + F(sqrt(mu)) * Lambda(w / 2T),

where ``Lambda(A) = int_0^A tanh(u)/u du = log A + log(4 e^gamma / pi)``
up to ``O(exp(-2A))`` and ``J_reg`` no longer depends on ``T`` (the
neglected terms are ``O(T^2)``).
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from .kernel import ModelParams, RadialProfile, dispersion, k_t, shell_profile
from .quadrature import bessel_product_integral, integrate_adaptive, integrate_to_inf
from .specfun import bessel_j_half, first_extremum

__all__ = ['ev_condition_rhs', 'lambda_l', 'solve_tc', 'solve_log_tc', 'rho_profile',
           'fourier_bessel', 'params_from_dominance', 'scan_degeneracy',
           'find_sd_degeneracy', 'delta_t', 'DominanceParams', 'SectorSpectrum',
           'NoRootError', 'ConditionError', 'C_F_DEFAULT', 'C_F_ALT', 'T_DOUBLE_STAR']

LOG_TANH_CONST = math.log(4.0 / math.pi) + 0.57721566490153286
SMALL_T_RATIO = 1e-6
C_F_DEFAULT = math.sqrt(2.0)
C_F_ALT = 2.0 ** 1.5
# empirical upper temperature (R = 1 units) below which the (s+d) bracket
# [x0^2, x2^2] shows the required sign change
T_DOUBLE_STAR = 0.25
RTOL = 1e-11


class NoRootError(RuntimeError):
    """Root-finding could not bracket a solution."""


class ConditionError(ValueError):
    """Parameters violate the eigenvalue condition."""


# --- eigenvalue condition -------------------------------------------------

def _core_width(mu):
    return 0.5 * mu


def _use_small_t(params):
    return params.mu > 0 and params.log_temperature <= math.log(SMALL_T_RATIO * _core_width(params.mu))


def _rhs_direct(params, l, E, rtol):
    R = params.radius
    if params.temperature <= 0.0:
        raise ValueError('temperature underflows; only E = 0 is supported there')

    def weight(p):
        return p * R / (k_t(params, p) - E)
    bps = []
    if params.mu > 0:
        s = math.sqrt(params.mu)
        bps = [s, 2 * s]
        # resolve the thermal peak of width ~T around the Fermi surface
        for k in (1.0, 10.0, 100.0):
            for z in (-k * params.temperature, k * params.temperature):
                if params.mu + z > 0:
                    bps.append(math.sqrt(params.mu + z))
    return bessel_product_integral(weight, [(l, R), (l, R)], breakpoints=bps, rtol=rtol)


def _small_t_parts(mu, R, l, rtol=RTOL):
    """``(J_reg, F0, w)`` of the small-temperature splitting."""
    w = _core_width(mu)
    p0 = math.sqrt(mu)
    lo, hi = math.sqrt(mu - w), math.sqrt(mu + w)
    F0 = R * float(bessel_j_half(l, R * p0)) ** 2

    def core(p):
        z = np.abs(dispersion(p, mu))
        F = R * bessel_j_half(l, R * p) ** 2
        return np.where(z > 0, p * (F - F0) / np.where(z > 0, z, 1.0), 0.0)
    inner, _ = integrate_adaptive(core, lo, hi, rtol=rtol, breakpoints=[p0])

    def outer_weight(p):
        z = np.abs(dispersion(p, mu))
        inside = (p > lo) & (p < hi)
        return np.where(inside, 0.0, p * R / np.where(inside, 1.0, z))
    outer = bessel_product_integral(outer_weight, [(l, R), (l, R)], breakpoints=[lo, hi, 2 * hi],
                                    rtol=rtol)
    return inner + outer, F0, w


def _rhs_small_t(params, l, rtol):
    j_reg, F0, w = _small_t_parts(params.mu, params.radius, l, rtol)
    return j_reg + F0 * (math.log(w / 2.0) - params.log_temperature + LOG_TANH_CONST)


def ev_condition_rhs(params, l, E=0.0, rtol=RTOL):
    """Right-hand side of the sector-``l`` eigenvalue condition.

    ``int_0^inf p R / (K_T(p) - E) J_{l+1/2}(p R)^2 dp``; the condition reads
    ``1 = lambda * rhs``.

    Parameters
    ----------
    params : ModelParams
    l : int
    E : float
        Trial eigenvalue below the bottom of ``K_T``.
    rtol : float

    Returns
    -------
    float
    """
    T = params.temperature
    mu = params.mu
    if mu >= 0:
        bound = 2.0 * T
    else:
        bound = abs(mu) / math.tanh(abs(mu) / (2.0 * T)) if T > 0 else abs(mu)
    if E != 0.0 and not E < bound:
        raise ValueError('E must lie below inf K_T = %.6g' % bound)
    if E == 0.0 and _use_small_t(params):
        return _rhs_small_t(params, l, rtol)
    return _rhs_direct(params, l, E, rtol)


def lambda_l(params, l, rtol=RTOL):
    """Coupling ``lambda_l(T, mu)`` that puts a zero eigenvalue in sector ``l``."""
    return 1.0 / ev_condition_rhs(params, l, 0.0, rtol)


def solve_log_tc(lam, mu, R, l, log_t_ceiling=None, rtol=RTOL):
    """Natural log of the critical temperature in sector ``l``.

    Solves ``lambda_l(T, mu, R) = lam`` for ``log T``.

    Raises
    ------
    NoRootError
        If ``lam`` exceeds ``lambda_l`` at the ceiling or no lower bracket exists.
    """
    if not lam > 0:
        raise ValueError('lambda must be positive')
    base = ModelParams(mu=mu, temperature=1.0, lam=lam, radius=R)
    scale = max(abs(mu), 1.0 / R ** 2)
    ceiling = math.log(1e4 * scale) if log_t_ceiling is None else log_t_ceiling

    def lam_at(logt):
        return lambda_l(base.replace(log_temperature=logt), l, rtol)

    if lam_at(ceiling) < lam:
        raise NoRootError('lambda=%.6g exceeds lambda_l at the temperature ceiling' % lam)
    if mu > 0:
        j_reg, F0, w = _small_t_parts(mu, R, l, rtol)
        threshold = math.log(SMALL_T_RATIO * _core_width(mu))
        cand = math.log(w / 2.0) + LOG_TANH_CONST + (j_reg - 1.0 / lam) / F0
        if F0 > 0 and cand < threshold:
            return cand
        lo = threshold
    else:
        lo = ceiling - 1.0
        step = 1.0
        while lam_at(lo) > lam:
            lo -= step
            step *= 2.0
            if lo < -700.0:
                raise NoRootError('lambda=%.6g is below the zero-temperature threshold' % lam)
    hi = ceiling
    f = lambda t: math.log(lam_at(t)) - math.log(lam)
    flo, fhi = f(lo), f(hi)
    if flo > 0 or fhi < 0:
        raise NoRootError('critical temperature not bracketed')
    return brentq(f, lo, hi, xtol=1e-13, rtol=1e-15, maxiter=200)


def solve_tc(lam, mu, R, l, log_t_ceiling=None, rtol=RTOL):
    """Critical temperature of sector ``l`` (``exp`` of :func:`solve_log_tc`)."""
    return math.exp(solve_log_tc(lam, mu, R, l, log_t_ceiling, rtol))


# --- radial eigenfunctions ------------------------------------------------

def fourier_bessel(g, l, x, inverse=False, rtol=1e-10):
    """Fourier-Bessel transform ``int s^{3/2} x^{-1/2} J_{l+1/2}(s x) g(s) ds``.

    The transform is its own inverse; ``inverse`` only labels the direction.

    Parameters
    ----------
    g : RadialProfile or callable
    l : int
    x : float or array_like
    """
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty_like(xs)
    shell = getattr(g, 'shell', None)
    for i, xv in enumerate(xs):
        if shell is not None:
            lg, Rg, smooth = shell
            out[i] = bessel_product_integral(lambda s: s ** 1.5 * xv ** -0.5 * smooth(s),
                                             [(l, xv), (lg, Rg)],
                                             breakpoints=getattr(g, 'breakpoints', ()), rtol=rtol)
        else:
            f = lambda s: s ** 1.5 * xv ** -0.5 * bessel_j_half(l, xv * np.maximum(s, 1e-300)) * g(s)
            out[i], _ = integrate_to_inf(f, 0.0, rtol=rtol)
    return out if np.ndim(x) else out[0]


def _check_condition(params, l, tol=1e-8):
    res = abs(1.0 - params.lam * ev_condition_rhs(params, l))
    if res > tol:
        raise ConditionError('eigenvalue condition residual %.3e exceeds %.1e' % (res, tol))
    return res


def rho_profile(params, l, space='momentum'):
    """Radial part of the sector-``l`` kernel element.

    Parameters
    ----------
    params : ModelParams
        Must satisfy ``lambda = lambda_l(T, mu)`` within ``1e-8``.
    l : int
    space : {'momentum', 'position'}

    Returns
    -------
    RadialProfile
        Momentum space: ``p^{-1/2} J_{l+1/2}(R p) / K_T(p)`` normalised in
        ``L^2(p^2 dp)``. Position space: ``r^{-1/2} int p J(r p) J(R p)/K_T dp``
        with the same normalisation constant.
    """
    _check_condition(params, l)
    raw = shell_profile(params, l, norm=1.0)
    norm = 1.0 / raw.norm()
    if space == 'momentum':
        return raw.scaled(norm)
    if space != 'position':
        raise ValueError("space must be 'momentum' or 'position'")
    R = params.radius
    bps = (math.sqrt(params.mu),) if params.mu > 0 else ()

    def pos(r):
        rs = np.atleast_1d(np.asarray(r, dtype=float))
        vals = np.array([norm * rv ** -0.5 * bessel_product_integral(
            lambda p: p / k_t(params, p), [(l, rv), (l, R)], breakpoints=bps, rtol=1e-10)
            for rv in rs])
        return vals if np.ndim(r) else vals[0]
    return RadialProfile(pos, params.dimension, None, ())


# --- sector scan ------------------------------------------------------------

@dataclass
class SectorSpectrum:
    """Table of sector thresholds ``lambda_l`` at fixed ``(T, mu, R)``."""

    lambdas: Dict[int, float]
    l0: int
    kernel_dim: int
    degenerate: List[Tuple[int, int]] = field(default_factory=list)
    minimal_sectors: List[int] = field(default_factory=list)


def scan_degeneracy(params, L_max=12, symmetric_only=False, rel_tol=1e-9):
    """Tabulate ``lambda_l`` for ``l <= L_max`` and locate the minimising sector.

    Sectors above ``L_max`` are not evaluated; their ``J^2`` never exceeds
    ``max_y J_{L_max+3/2}(y)^2``, which the dominance certificates bound.

    Parameters
    ----------
    params : ModelParams
    L_max : int
        At least 4.
    symmetric_only : bool
        Restrict to even ``l`` (reflection-symmetric functions).
    rel_tol : float
        Two sectors are flagged degenerate when their ``lambda`` agree to this
        relative tolerance.
    """
    if L_max < 4:
        raise ValueError('L_max must be at least 4')
    ls = [l for l in range(L_max + 1) if not symmetric_only or l % 2 == 0]
    lams = {l: lambda_l(params, l) for l in ls}
    l0 = min(ls, key=lambda l: lams[l])
    deg = [(a, b) for i, a in enumerate(ls) for b in ls[i + 1:]
           if abs(lams[a] - lams[b]) < rel_tol * lams[a]]
    minimal = [l for l in ls if abs(lams[l] - lams[l0]) < rel_tol * lams[l0]]
    dim = sum(2 * l + 1 for l in minimal)
    return SectorSpectrum(lams, l0, dim, deg, minimal)


# --- dominance-driven parameters -----------------------------------------

@dataclass(frozen=True)
class DominanceParams:
    """Chemical-potential window and coupling bound for sector selection.

    ``t_star`` may underflow to zero; ``log_t_star`` is always exact.
    """

    l0: int
    interval: Tuple[float, float]
    log_t_star: float
    lambda_star: float
    mu_at_min: float
    c_f: float
    radius: float

    @property
    def t_star(self):
        return math.exp(self.log_t_star)


def _golden_min(f, a, b, tol):
    g = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol * max(1.0, abs(a) + abs(b)):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def params_from_dominance(l0, R, cert, c_f=C_F_DEFAULT, grid=41):
    """Turn a dominance certificate into ``(I, T_*, lambda_*)``.

    ``delta = (b^2 - a^2)/4``, ``I = (a^2 + delta, b^2 - delta)`` and
    ``T_* = delta/2 * exp(-2 C_f (sqrt(1 + 2 b^2) + 1/(2b)) / (eps delta))``
    in units ``R = 1``; ``I`` scales as ``R^-2`` and ``T_*`` likewise.
    ``lambda_*`` is the minimum of ``lambda_{l0}(T_*, mu)`` over the closed
    interval (grid scan, then golden-section refinement to ``1e-8``).
    """
    if cert.l0 != l0:
        raise ValueError('certificate belongs to l0=%d' % cert.l0)
    a, b = cert.interval
    eps = cert.epsilon
    delta = (b * b - a * a) / 4.0
    if not (delta > 0 and eps > 0):
        raise ValueError('degenerate certificate interval')
    lo, hi = (a * a + delta) / R ** 2, (b * b - delta) / R ** 2
    log_t = math.log(delta / 2.0) - 2.0 * c_f * (math.sqrt(1.0 + 2.0 * b * b) + 1.0 / (2.0 * b)) / (eps * delta)
    log_t -= 2.0 * math.log(R)

    def lam_mu(mu):
        return lambda_l(ModelParams(mu=mu, log_temperature=log_t, radius=R), l0)
    mus = np.linspace(lo, hi, grid)
    vals = [lam_mu(m) for m in mus]
    i = int(np.argmin(vals))
    left, right = mus[max(i - 1, 0)], mus[min(i + 1, grid - 1)]
    mu_min, lam_min = _golden_min(lam_mu, left, right, 1e-8)
    if vals[i] < lam_min:
        mu_min, lam_min = mus[i], vals[i]
    return DominanceParams(l0, (lo, hi), log_t, lam_min, mu_min, c_f, R)


# --- (s+d) degeneracy -------------------------------------------------------

def delta_t(T, mu, R=1.0):
    """``delta_T(mu) = int p R/K_T (J_{1/2}^2 - J_{5/2}^2)(p R) dp``."""
    params = ModelParams(mu=mu, temperature=T, radius=R)
    return ev_condition_rhs(params, 0) - ev_condition_rhs(params, 2)


def find_sd_degeneracy(T, R=1.0, t_double_star=T_DOUBLE_STAR):
    """Chemical potential where the s- and d-wave sectors share ``T_c = T``.

    Returns
    -------
    mu_T : float
        Root of ``delta_T`` in ``[x0^2, x2^2]/R^2``.
    lam : float
        Common coupling ``lambda_0 = lambda_2``.
    """
    if not 0 < T * R ** 2 < t_double_star:
        raise ValueError('T must lie below T_** = %.3g (R = 1 units)' % t_double_star)
    lo = (first_extremum(0, 'max') / R) ** 2
    hi = (first_extremum(2, 'max') / R) ** 2
    f = lambda mu: delta_t(T, mu, R)
    flo, fhi = f(lo), f(hi)
    if not (flo > 0 > fhi):
        raise NoRootError('delta_T does not change sign on [x0^2, x2^2]')
    mu = brentq(f, lo, hi, xtol=1e-14, rtol=1e-15, maxiter=200)
    lam = lambda_l(ModelParams(mu=mu, temperature=T, radius=R), 0)
    return mu, lam
