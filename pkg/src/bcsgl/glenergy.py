"""GL energy functionals: the generic tensor form, closed forms and gradients.

Optimisation code works with interleaved real coordinates
``(Re psi_1, Im psi_1, Re psi_2, ...)``; see :mod:`bcsgl.orderparam`.
"""

import math

import numpy as np

from .orderparam import OrderParameter, complex_to_interleaved
from .specfun import complex_to_real_matrix

__all__ = ['eval_generic', 'eval_dwave5', 'eval_mixed6', 'eval_2d', 'gradient',
           'to_tensor_basis', 'quartic_form', 'quadratic_form', 'REGIMES']

REGIMES = ('below_tc', 'above_tc')
_U = complex_to_real_matrix()
_MIXED_U = np.zeros((6, 6), dtype=complex)
_MIXED_U[0, 0] = 1.0
_MIXED_U[1:, 1:] = _U

# (source basis, tensor basis) -> matrix taking source components to tensor components
_TRANSFORMS = {
    ('real_sh', 'complex_sh'): _U,
    ('labeled_mixed', 'mixed_complex'): _MIXED_U,
}


def _regime_sign(regime):
    if regime not in REGIMES:
        raise ValueError('regime must be one of %s' % (REGIMES,))
    return 1.0 if regime == 'below_tc' else -1.0


def _transform(coeffs, psi):
    if coeffs.mode is None:
        raise ValueError('coefficients carry no tensor; build one with c_tensor')
    if psi.n != coeffs.n:
        raise ValueError('order parameter has %d components, tensor expects %d' % (psi.n, coeffs.n))
    if psi.basis == coeffs.basis:
        return None
    key = (psi.basis, coeffs.basis)
    if key not in _TRANSFORMS:
        raise ValueError('cannot evaluate basis %r against a %r tensor' % key)
    return _TRANSFORMS[key]


def to_tensor_basis(coeffs, psi):
    """Components of ``psi`` in the basis the tensor is stored in."""
    u = _transform(coeffs, psi)
    v = np.asarray(psi.components, dtype=complex)
    return v if u is None else u @ v


def quartic_form(tensor, v):
    """``sum c_ijkm conj(v_i v_j) v_k v_m``."""
    vc = v.conj()
    return np.einsum('ijkm,i,j,k,m->', tensor, vc, vc, v, v)


def quadratic_form(dm, v):
    return np.einsum('ij,i,j->', dm, v.conj(), v)


def eval_generic(coeffs, psi, regime='below_tc'):
    """Tensor-form GL energy.

    Parameters
    ----------
    coeffs : GlCoefficients
        With a tensor.
    psi : OrderParameter
        In the tensor basis or one convertible to it (real harmonics for the
        d-wave tensors).
    regime : {'below_tc', 'above_tc'}
        Above the critical temperature the quadratic term changes sign.

    Returns
    -------
    float
    """
    sign = _regime_sign(regime)
    v = to_tensor_basis(coeffs, psi)
    val = quartic_form(coeffs.tensor, v) - sign * quadratic_form(coeffs.d_matrix, v)
    scale = max(1.0, abs(val))
    if abs(val.imag) > 1e-12 * scale:
        raise ArithmeticError('energy has imaginary part %.3e' % val.imag)
    return float(val.real)


def _need(psi, basis, n):
    if psi.basis != basis:
        raise ValueError('expected basis %r, got %r' % (basis, psi.basis))
    if psi.n != n:
        raise ValueError('expected %d components, got %d' % (n, psi.n))
    return np.asarray(psi.components, dtype=complex)


def _dwave5(c, d, v):
    tau = 7.0 * math.pi * d / (5.0 * c)
    s = float(np.sum(np.abs(v) ** 2))
    return 5.0 * c / (14.0 * math.pi) * ((s - tau) ** 2 - tau ** 2 + 0.5 * abs(np.sum(v * v)) ** 2)


def eval_dwave5(c, d, psi):
    """Closed-form five-component d-wave energy in the real-harmonic basis.

    ``(5c/14pi) ((|psi|^2 - tau)^2 - tau^2 + |sum psi_m^2|^2 / 2)`` with
    ``tau = 7 pi d / (5 c)``.
    """
    return _dwave5(c, d, _need(psi, 'real_sh', 5))


def _coupling(c1s, c2s, s, v):
    # v indexed m = -2..2 at positions 0..4
    pm = {m: v[m + 2] for m in range(-2, 3)}
    a2 = {m: abs(pm[m]) ** 2 for m in pm}
    sc = np.conj(s)
    quad = c2s / (2.0 * math.pi) * (2.0 * abs(s) ** 2 * sum(a2.values())
                                   + (sc ** 2 * np.sum(v * v)).real)
    p0 = pm[0]
    inner = 2.0 * p0 * a2[0]
    # the sum runs over m = +-1 and m = +-2
    for m in (-2, -1, 1, 2):
        inner += abs(m) * (-1) ** (m + 1) * (2.0 * p0 * a2[m] + np.conj(p0) * pm[m] ** 2)
    t1 = (sc * inner).real
    t2 = math.sqrt(3.0) * (sc * sum(m * (2.0 * pm[2] * a2[m] + np.conj(pm[2]) * pm[m] ** 2)
                                    for m in (-1, 1))).real
    t3 = 2.0 * math.sqrt(3.0) * (sc * (np.conj(pm[-2]) * pm[1] * pm[-1]
                                       + 2.0 * pm[-2] * (np.conj(pm[1]) * pm[-1]).real)).real
    return quad + math.sqrt(5.0) * c1s / (7.0 * math.pi) * (t1 + t2 + t3)


def _swave(c4s, d2s, s):
    tau_s = 2.0 * math.pi * d2s / c4s
    return c4s / (4.0 * math.pi) * ((abs(s) ** 2 - tau_s) ** 2 - tau_s ** 2)


def eval_mixed6(coeffs, psi):
    """Closed-form (s+d) energy: s-wave part, d-wave part and their coupling.

    Parameters
    ----------
    coeffs : GlCoefficients
        Needs ``c, d, c1s, c2s, c4s, d2s``.
    psi : OrderParameter
        Basis ``'labeled_mixed'``, order ``(psi_s, psi_-2, ..., psi_2)``
        with the d-block in real harmonics.
    """
    if not coeffs.has_mixed:
        raise ValueError('mixed coefficients missing')
    v = _need(psi, 'labeled_mixed', 6)
    s, dv = v[0], v[1:]
    return float(_swave(coeffs.c4s, coeffs.d2s, s) + _dwave5(coeffs.c, coeffs.d, dv)
                 + _coupling(coeffs.c1s, coeffs.c2s, s, dv))


def eval_2d(variant, coeffs, psi):
    """Two-dimensional closed forms.

    ``variant='dwave2'`` takes ``(psi_{x2-y2}, psi_xy)``; ``'mixed3'`` takes
    ``(psi_s, psi_{x2-y2}, psi_xy)``. The s-d density coupling enters with
    coefficient ``8 c2s`` (after multiplying the energy by ``4 pi``).
    """
    c, d = coeffs.c, coeffs.d
    if variant == 'dwave2':
        x, y = _need(psi, 'real_2d', 2)
        ax, ay = abs(x) ** 2, abs(y) ** 2
        k = math.pi * d / c
        return float(c / (2.0 * math.pi) * ((ax + ay - k) ** 2 - k ** 2 + 0.5 * abs(x * x + y * y) ** 2))
    if variant == 'mixed3':
        if not coeffs.has_mixed:
            raise ValueError('mixed coefficients missing')
        s, x, y = _need(psi, 'mixed_2d', 3)
        ax, ay, as_ = abs(x) ** 2, abs(y) ** 2, abs(s) ** 2
        e = (3.0 * c * (ax ** 2 + ay ** 2) + 2.0 * coeffs.c4s * as_ ** 2
             + 2.0 * c * (np.conj(x) ** 2 * y ** 2).real + 4.0 * c * ax * ay
             + 4.0 * coeffs.c2s * (np.conj(s) ** 2 * (x * x + y * y)).real
             + 8.0 * coeffs.c2s * as_ * (ax + ay)
             - 4.0 * math.pi * d * (ax + ay) - 4.0 * math.pi * coeffs.d2s * as_)
        return float(e / (4.0 * math.pi))
    raise ValueError("variant must be 'dwave2' or 'mixed3'")


def _wirtinger(tensor, dm, v, sign):
    """``dE/d conj(v)`` in the tensor basis."""
    vc = v.conj()
    g = (np.einsum('ajkm,j,k,m->a', tensor, vc, v, v)
         + np.einsum('iakm,i,k,m->a', tensor, vc, v, v))
    return g - sign * dm @ v


def gradient(coeffs, psi, regime='below_tc'):
    """Gradient of :func:`eval_generic` in interleaved real coordinates of ``psi``.

    Derivatives are taken with respect to the real and imaginary parts of
    ``psi`` in its own basis, so a real-harmonic ``psi`` gets a real-harmonic
    gradient.

    Returns
    -------
    ndarray, shape (2n,)
    """
    sign = _regime_sign(regime)
    u = _transform(coeffs, psi)
    v = to_tensor_basis(coeffs, psi)
    g = _wirtinger(coeffs.tensor, coeffs.d_matrix, v, sign)
    if u is not None:
        g = u.conj().T @ g
    # dE/dx = 2 Re(dE/d conj psi), dE/dy = 2 Im(dE/d conj psi)
    return complex_to_interleaved(2.0 * g)
