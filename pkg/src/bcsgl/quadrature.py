"""Adaptive quadrature on finite and semi-infinite ranges.

The workhorse is a vectorised adaptive Gauss-Legendre scheme: each panel
is integrated with a 21-point rule and the error is estimated from the
difference between the panel value and the sum over its two halves.

Integrands containing products of half-integer Bessel functions are split at
a cutoff. Beyond it every ``J_{l+1/2}(r p)`` is written exactly as
``Re[C(p) exp(i r p)]`` with a smooth amplitude ``C`` (the trigonometric form
is finite for half-integer order). The resulting Fourier tails are passed to
QUADPACK's QAWF through ``scipy.integrate.quad``.
"""

import itertools
import math

import numpy as np
from scipy import integrate

from .specfun import bessel_j_half, hankel_coefficients

__all__ = ['QuadratureError', 'integrate_adaptive', 'integrate_to_inf',
           'bessel_amplitude', 'bessel_product_integral']

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(21)


class QuadratureError(RuntimeError):
    """Raised when an adaptive rule exhausts its panel budget."""


def _panel_values(f, a, b):
    # a, b: arrays of panel ends
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = mid[:, None] + half[:, None] * _NODES[None, :]
    fx = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    return half * (fx @ _WEIGHTS)


def integrate_adaptive(f, a, b, rtol=1e-11, atol=0.0, breakpoints=(), max_panels=200000,
                       initial=4):
    """Integrate a vectorised function over ``[a, b]``.

    Parameters
    ----------
    f : callable
        Maps a 1-D array of abscissae to values.
    a, b : float
        Finite limits.
    rtol, atol : float
        Target accuracy ``max(atol, rtol*|I|)``.
    breakpoints : sequence of float
        Interior points where the integrand may be non-smooth.
    max_panels : int
        Total panel budget.
    initial : int
        Initial uniform subdivisions between breakpoints.

    Returns
    -------
    value : float
    error : float
        Sum of the accepted local error estimates.
    """
    if b < a:
        v, e = integrate_adaptive(f, b, a, rtol, atol, breakpoints, max_panels, initial)
        return -v, e
    if b == a:
        return 0.0, 0.0
    pts = sorted({float(p) for p in breakpoints if a < p < b} | {float(a), float(b)})
    edges = np.concatenate([np.linspace(pts[i], pts[i + 1], initial + 1)[:-1]
                            for i in range(len(pts) - 1)] + [[pts[-1]]])
    lo, hi = edges[:-1], edges[1:]
    coarse = _panel_values(f, lo, hi)
    done_val = 0.0
    done_err = 0.0
    used = lo.size
    estimate = float(np.sum(coarse))
    while lo.size:
        mid = 0.5 * (lo + hi)
        left = _panel_values(f, lo, mid)
        right = _panel_values(f, mid, hi)
        fine = left + right
        err = np.abs(fine - coarse)
        estimate = done_val + float(np.sum(fine))
        budget = max(atol, rtol * abs(estimate)) - done_err
        # accept the smallest errors while they use at most half the budget
        order = np.argsort(err)
        ok = np.zeros(err.size, dtype=bool)
        ok[order[np.cumsum(err[order]) <= 0.5 * max(budget, 0.0)]] = True
        # panels at floating-point resolution cannot be split further
        ok |= (hi - lo) <= 64 * np.finfo(float).eps * np.maximum(np.abs(lo), np.abs(hi))
        done_val += float(np.sum(fine[ok]))
        done_err += float(np.sum(err[ok]))
        bad = ~ok
        used += 2 * int(np.count_nonzero(bad))
        if used > max_panels:
            raise QuadratureError('panel budget exhausted; error estimate %.3e' % (done_err + np.sum(err[bad])))
        lo = np.concatenate([lo[bad], mid[bad]])
        hi = np.concatenate([mid[bad], hi[bad]])
        coarse = np.concatenate([left[bad], right[bad]])
    return done_val, done_err


def integrate_to_inf(f, a, rtol=1e-11, atol=0.0, scale=1.0, max_panels=200000):
    """Integrate over ``[a, inf)`` with the map ``p = a + scale*u/(1-u)``.

    Suitable for integrands decaying at least like ``p^{-2}`` without
    oscillation (or with oscillations of negligible amplitude).
    """
    def g(u):
        u = np.asarray(u, dtype=float)
        one_m = 1.0 - u
        with np.errstate(divide='ignore', invalid='ignore'):
            p = a + scale * u / one_m
            jac = scale / (one_m * one_m)
            val = np.asarray(f(np.where(one_m > 0, p, a + 1.0)), dtype=float) * jac
        return np.where(one_m > 0, val, 0.0)
    return integrate_adaptive(g, 0.0, 1.0, rtol=rtol, atol=atol, max_panels=max_panels)


def bessel_amplitude(l, r, p):
    """Smooth complex amplitude ``C`` with ``J_{l+1/2}(r p) = Re[C(p) e^{i r p}]``."""
    pc, qc = hankel_coefficients(l)
    x = r * np.asarray(p, dtype=float)
    inv2 = 1.0 / (x * x)
    P = np.polyval(pc[::-1], inv2)
    Q = np.polyval(qc[::-1], inv2) / x if qc.size else np.zeros_like(x)
    phase = np.exp(-0.5j * math.pi * l)
    return np.sqrt(2.0 / (math.pi * x)) * phase * (Q - 1j * P)


def _tail_terms(factors):
    """Expand a product of Bessel factors into ``sum_k D_k(p) exp(i W_k p)``.

    Returns a dict ``|W| -> list of (signs, conj_flag)`` where the product of
    amplitudes uses ``C_j`` for ``+`` and ``conj(C_j)`` for ``-``.
    """
    groups = {}
    for signs in itertools.product((1, -1), repeat=len(factors)):
        w = sum(s * r for s, (_, r) in zip(signs, factors))
        key = round(abs(w), 12)
        groups.setdefault(key, []).append((signs, w < 0))
    return groups


def _oscillatory_tail(weight, factors, start, rtol, scale):
    """``int_start^inf weight(p) prod_j J_{l_j+1/2}(r_j p) dp`` via QAWF."""
    groups = _tail_terms(factors)
    k = len(factors)
    total = 0.0

    def parts(p, members):
        amps = [bessel_amplitude(l, r, p) for l, r in factors]
        acc = 0.0 + 0.0j
        for signs, flip in members:
            d = 1.0 + 0.0j
            for s, c in zip(signs, amps):
                d *= c if s > 0 else np.conj(c)
            # exp(i W p) with W<0 equals conj(exp(i|W|p)); keep Re part only
            acc += np.conj(d) if flip else d
        return acc / 2.0 ** k

    for omega, members in groups.items():
        def fc(p, members=members):
            return float(weight(np.array([p]))[0] * parts(p, members).real)

        def fs(p, members=members):
            return float(-weight(np.array([p]))[0] * parts(p, members).imag)

        epsabs = max(rtol * scale, 1e-300)
        if omega == 0.0:
            def f0(p, members=members):
                p = np.asarray(p, dtype=float)
                out = np.array([weight(np.array([q]))[0] * parts(q, members).real for q in p.ravel()])
                return out.reshape(p.shape)
            v, _ = integrate_to_inf(f0, start, rtol=rtol, atol=epsabs, scale=max(start, 1.0))
            total += v
        else:
            vc, _ = integrate.quad(fc, start, np.inf, weight='cos', wvar=omega, epsabs=epsabs, limlst=200)
            vs, _ = integrate.quad(fs, start, np.inf, weight='sin', wvar=omega, epsabs=epsabs, limlst=200)
            # cos(W p + 0): D e^{iWp} real part = Re D cos - Im D sin
            total += vc + vs
    return total


def bessel_product_integral(weight, factors, breakpoints=(), cutoff=None, rtol=1e-11):
    """Integrate ``weight(p) * prod_j J_{l_j+1/2}(r_j p)`` over ``(0, inf)``.

    Parameters
    ----------
    weight : callable
        Vectorised, smooth and non-oscillating beyond ``cutoff``.
    factors : sequence of (int, float)
        Pairs ``(l_j, r_j)``.
    breakpoints : sequence of float
        Interior points for the finite part.
    cutoff : float, optional
        Start of the exact oscillatory tail; chosen from the largest order
        and smallest radius when omitted.
    rtol : float
        Relative accuracy target.

    Returns
    -------
    float
    """
    factors = [(int(l), float(r)) for l, r in factors]
    rmin = min(r for _, r in factors)
    lmax = max(l for l, _ in factors)
    auto = max(40.0, 2.0 * (lmax + 2) ** 2) / rmin
    cutoff = max(auto, max(breakpoints, default=0.0) * 1.5 + 10.0 / rmin) if cutoff is None else cutoff

    def integrand(p):
        p = np.asarray(p, dtype=float)
        out = np.asarray(weight(p), dtype=float)
        pp = np.maximum(p, 1e-300)
        for l, r in factors:
            out = out * bessel_j_half(l, r * pp)
        return out

    finite, _ = integrate_adaptive(integrand, 0.0, cutoff, rtol=rtol, breakpoints=breakpoints)
    tail = _oscillatory_tail(weight, factors, cutoff, rtol, max(abs(finite), 1e-300))
    return finite + tail
