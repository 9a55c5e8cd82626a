"""Model parameters, the kernel K_T, the auxiliary g-functions and the
radial weights f2, f4 entering the GL coefficients."""

import math
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np

from .quadrature import bessel_product_integral, integrate_to_inf
from .specfun import bessel_j_half

__all__ = ['ModelParams', 'RadialProfile', 'aux_g', 'k_t', 'f_weights', 'gs_ratio',
           'fermi_dirac', 'dispersion']

SERIES_Z = 1e-3


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of the BCS model with a delta-shell interaction.

    Parameters
    ----------
    mu : float
        Chemical potential.
    temperature : float
        Temperature ``T > 0``. Ignored when ``log_temperature`` is given.
    lam : float
        Delta-shell coupling ``lambda > 0``.
    radius : float
        Delta-shell radius ``R > 0``.
    dimension : {2, 3}
    log_temperature : float, optional
        Natural log of ``T``; lets temperatures below the float range be
        represented. Always populated after construction.
    """

    mu: float
    temperature: float = 0.0
    lam: float = 1.0
    radius: float = 1.0
    dimension: int = 3
    log_temperature: Optional[float] = None

    def __post_init__(self):
        if self.dimension not in (2, 3):
            raise ValueError('dimension must be 2 or 3')
        if self.log_temperature is None:
            if not self.temperature > 0:
                raise ValueError('temperature must be positive')
            object.__setattr__(self, 'log_temperature', math.log(self.temperature))
        else:
            object.__setattr__(self, 'log_temperature', float(self.log_temperature))
            object.__setattr__(self, 'temperature', math.exp(self.log_temperature))
        if not self.lam > 0:
            raise ValueError('lambda must be positive')
        if not self.radius > 0:
            raise ValueError('radius must be positive')

    def replace(self, **kw):
        d = dict(mu=self.mu, temperature=self.temperature, lam=self.lam, radius=self.radius,
                 dimension=self.dimension, log_temperature=self.log_temperature)
        if 'temperature' in kw and 'log_temperature' not in kw:
            d['log_temperature'] = None
        d.update(kw)
        return ModelParams(**d)


@dataclass(frozen=True)
class RadialProfile:
    """Momentum-space radial function with an L^2 contract.

    Parameters
    ----------
    func : callable
        Vectorised ``p -> rho(p)``.
    dimension : {2, 3}
        Sets the norm weight ``p^2 dp`` (3D) or ``p dp`` (2D).
    shell : tuple, optional
        ``(l, R, smooth)`` when ``rho(p) = smooth(p) * J_{l+1/2}(R p)``;
        enables exact oscillatory tails in integrals.
    breakpoints : tuple of float
        Points where the profile has sharp features (e.g. the Fermi surface).
    """

    func: Callable
    dimension: int = 3
    shell: Optional[Tuple] = None
    breakpoints: Tuple[float, ...] = field(default_factory=tuple)

    def __call__(self, p):
        return self.func(np.asarray(p, dtype=float))

    def norm(self, rtol=1e-12):
        """``sqrt(int |rho|^2 p^{D-1} dp)``."""
        k = self.dimension - 1
        if self.shell is not None:
            l, R, smooth = self.shell
            val = bessel_product_integral(lambda p: smooth(p) ** 2 * p ** k, [(l, R), (l, R)],
                                          breakpoints=self.breakpoints, rtol=rtol)
        else:
            val, _ = integrate_to_inf(lambda p: np.abs(self.func(p)) ** 2 * p ** k, 0.0, rtol=rtol)
        return math.sqrt(val)

    def scaled(self, factor):
        f = self.func
        shell = None
        if self.shell is not None:
            l, R, smooth = self.shell
            shell = (l, R, lambda p, s=smooth: factor * s(p))
        return RadialProfile(lambda p: factor * f(p), self.dimension, shell, self.breakpoints)

    def normalized(self):
        return self.scaled(1.0 / self.norm())


def _sech2(x):
    e = np.exp(-2.0 * np.abs(x))
    return 4.0 * e / (1.0 + e) ** 2


def _sinh_minus(x):
    """``sinh(2x)/2 - x`` without cancellation."""
    y = 2.0 * x
    out = np.sinh(y) / 2.0 - x
    small = np.abs(y) < 0.5
    if np.any(small):
        ys = y[small]
        term = ys ** 3 / 6.0
        s = term.copy()
        for k in range(2, 12):
            term = term * ys * ys / ((2 * k) * (2 * k + 1))
            s = s + term
        out[small] = s / 2.0
    return out


def aux_g(k, z):
    """Auxiliary functions ``g0, g1, g2``.

    ``g0(z) = tanh(z/2)/z``, ``g1 = -g0'`` and ``g2 = g1' + 2 g1/z``.

    Parameters
    ----------
    k : {0, 1, 2}
    z : float or ndarray

    Returns
    -------
    float or ndarray
    """
    z = np.asarray(z, dtype=float)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    out = np.empty_like(z)
    small = np.abs(z) < SERIES_Z
    zs = z[small]
    z2 = zs * zs
    zb = z[~small]
    if k == 0:
        out[small] = 0.5 + z2 * (-1 / 24 + z2 * (1 / 240 + z2 * (-17 / 40320)))
        out[~small] = np.tanh(zb / 2.0) / zb
    elif k == 1:
        out[small] = zs * (1 / 12 + z2 * (-1 / 60 + z2 * (17 / 6720 + z2 * (-31 / 90720))))
        x = zb / 2.0
        mod = np.abs(zb) <= 2.0
        val = np.empty_like(zb)
        xm = x[mod]
        val[mod] = _sinh_minus(xm) / (np.cosh(xm) ** 2 * zb[mod] ** 2)
        zl = zb[~mod]
        val[~mod] = np.tanh(zl / 2.0) / zl ** 2 - _sech2(zl / 2.0) / (2.0 * zl)
        out[~small] = val
    elif k == 2:
        out[small] = 0.25 + z2 * (-1 / 12 + z2 * (17 / 960 + z2 * (-31 / 10080)))
        out[~small] = np.tanh(zb / 2.0) * _sech2(zb / 2.0) / (2.0 * zb)
    else:
        raise ValueError('k must be 0, 1 or 2')
    return out[0] if scalar else out


def dispersion(p, mu):
    """``p^2 - mu`` accurate near the Fermi surface ``p = sqrt(mu)``."""
    p = np.asarray(p, dtype=float)
    if mu <= 0:
        return p * p - mu
    s = math.sqrt(mu)
    corr = float(Fraction(s) ** 2 - Fraction(mu))
    return (p - s) * (p + s) + corr


def _kernel(z, T):
    z = np.asarray(z, dtype=float)
    if T <= 0.0:
        return np.abs(z)
    out = np.empty_like(z)
    small = np.abs(z) < 1e-8 * T
    out[small] = 2.0 * T + z[small] ** 2 / (6.0 * T)
    zb = z[~small]
    out[~small] = zb / np.tanh(zb / (2.0 * T))
    return out


def k_t(params, p):
    """Kernel ``K_T(p) = (p^2 - mu) / tanh((p^2 - mu)/(2T))``."""
    p = np.asarray(p, dtype=float)
    out = _kernel(np.atleast_1d(dispersion(p, params.mu)), params.temperature)
    return out[0] if p.ndim == 0 else out


def fermi_dirac(params, p):
    """Normal-state occupation ``1/(1 + exp((p^2 - mu)/T))``."""
    z = dispersion(p, params.mu) / params.temperature
    return 0.5 * (1.0 - np.tanh(z / 2.0))


def f_weights(params, rho, p):
    """Radial weights ``f2(p), f4(p)`` for a profile at ``T = T_c``.

    ``f4 = p^2/T^2 * g1(z/T)/z * |K rho|^4`` and
    ``f2 = p^2/(2T) * sech^2(z/(2T)) * |K rho|^2`` with ``z = p^2 - mu``;
    in two dimensions the prefactor ``p^2`` becomes ``p``.

    Returns
    -------
    f2, f4 : ndarray
    """
    p = np.asarray(p, dtype=float)
    T = params.temperature
    z = dispersion(p, params.mu)
    kr = np.abs(k_t(params, p) * rho(p))
    pref = p ** (params.dimension - 1)
    x = z / T
    g1_over_z = np.where(np.abs(x) < 1e-6, 1.0 / (12.0 * T), aux_g(1, x) / np.where(x == 0, 1.0, z))
    f4 = pref / T ** 2 * g1_over_z * kr ** 4
    f2 = pref / (2.0 * T) * _sech2(x / 2.0) * kr ** 2
    return f2, f4


def gs_ratio(rho_s, rho, p, tiny=1e-300):
    """``|rho_s(p) / rho(p)|``; raises ``ZeroDivisionError`` where ``|rho| < tiny``."""
    den = np.asarray(rho(p), dtype=float)
    if np.any(np.abs(den) < tiny):
        raise ZeroDivisionError('reference profile vanishes at the requested point')
    return np.abs(np.asarray(rho_s(p), dtype=float) / den)


def shell_smooth(l, R, params):
    """Smooth factor ``p^{-1/2}/K_T(p)`` of the delta-shell eigenfunction."""
    return lambda p: np.asarray(p, dtype=float) ** -0.5 / k_t(params, p)


def shell_profile(params, l, norm=None):
    """Delta-shell profile ``p^{-1/2} J_{l+1/2}(R p) / K_T(p)``, normalised."""
    R = params.radius
    smooth = shell_smooth(l, R, params)
    bps = (math.sqrt(params.mu),) if params.mu > 0 else ()
    # p^{-1/2} J_{l+1/2}(R p) -> sqrt(2R/pi) at p = 0 for l = 0, and 0 otherwise
    origin = math.sqrt(2.0 * R / math.pi) / float(k_t(params, 0.0)) if l == 0 else 0.0

    def func(p):
        p = np.asarray(p, dtype=float)
        safe = np.where(p > 0, p, 1.0)
        return np.where(p > 0, smooth(safe) * bessel_j_half(l, R * safe), origin)
    prof = RadialProfile(func, params.dimension, (l, R, smooth), bps)
    return prof.scaled(1.0 / (prof.norm() if norm is None else norm))
