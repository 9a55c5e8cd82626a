"""Minimisation of GL energies and the (s+d) stability criteria.

A GL energy ``E(psi) = Q(psi) - B(psi)`` with quartic ``Q`` and quadratic
``B`` restricted to the ray ``psi = L omega`` is minimised in closed form:
``min_L (L^4 A - L^2 B) = -max(B, 0)^2 / (4 A)``. What remains is a smooth
function on the unit sphere of ``C^n``, handled by Riemannian gradient
descent with Barzilai-Borwein steps, Armijo backtracking and random
restarts.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np

from .glenergy import _regime_sign, _wirtinger, eval_dwave5, eval_mixed6, gradient, quadratic_form, quartic_form
from .orderparam import OrderParameter, complex_to_interleaved, interleaved_to_complex
from .specfun import basis_change

__all__ = ['MinimizationResult', 'StabilityReport', 'minimize_gl', 'check_dwave_minimizer',
           'stability_criteria', 'lambda_min', 'dwave_reference_minimizer', 'NonCoerciveError']

MEMBERSHIP_TOL = 1e-6


class NonCoerciveError(ValueError):
    """The quartic form is not positive on the unit sphere."""


@dataclass
class MinimizationResult:
    """Outcome of :func:`minimize_gl`.

    ``argmin`` is expressed in the tensor basis; ``argmin_physical`` uses
    real harmonics for the three-dimensional d-wave tensors.
    """

    minimum: float
    argmin: OrderParameter
    restarts_used: int
    method: str
    residuals: Dict[str, float] = field(default_factory=dict)
    argmin_physical: OrderParameter = None
    values: List[float] = field(default_factory=list)


def _sphere_objective(tensor, dm, sign, x):
    """Reduced objective and its Euclidean gradient at unit ``x`` (interleaved)."""
    w = interleaved_to_complex(x)
    A = float(quartic_form(tensor, w).real)
    B = sign * float(quadratic_form(dm, w).real)
    if A <= 0:
        raise NonCoerciveError('quartic form %.3e <= 0 on the unit sphere' % A)
    if B <= 0:
        return 0.0, np.zeros_like(x), A, B
    vc = w.conj()
    gA = 2.0 * (np.einsum('ajkm,j,k,m->a', tensor, vc, w, w) + np.einsum('iakm,i,k,m->a', tensor, vc, w, w))
    gB = 2.0 * sign * (dm @ w)
    g = -(B / (2.0 * A)) * gB + (B * B / (4.0 * A * A)) * gA
    return -B * B / (4.0 * A), complex_to_interleaved(g), A, B


def _descend(tensor, dm, sign, x, max_iter=5000, gtol=1e-12, step_tol=1e-14):
    f, g, A, B = _sphere_objective(tensor, dm, sign, x)
    step = 1.0
    prev = None
    for _ in range(max_iter):
        rg = g - np.dot(g, x) * x
        gn = np.linalg.norm(rg)
        if gn < gtol:
            break
        if prev is not None:
            s, y = x - prev[0], rg - prev[1]
            sy = np.dot(s, y)
            step = abs(np.dot(s, s) / sy) if sy != 0 else step
            step = min(max(step, 1e-8), 1e8)
        t = step
        while True:
            xn = x - t * rg
            xn /= np.linalg.norm(xn)
            fn, gn_, An, Bn = _sphere_objective(tensor, dm, sign, xn)
            if fn <= f - 1e-4 * t * gn * gn or t < 1e-14:
                break
            t *= 0.5
        prev = (x, rg)
        moved = np.linalg.norm(xn - x)
        x, f, g, A, B = xn, fn, gn_, An, Bn
        if moved < step_tol:
            break
    return x, f, A, B


def minimize_gl(coeffs, n=None, restarts=64, seed=42, regime='below_tc'):
    """Global minimisation of a tensor-form GL energy.

    Parameters
    ----------
    coeffs : GlCoefficients
        With a tensor (see :func:`bcsgl.glcoeff.c_tensor`).
    n : int, optional
        Number of components; checked against the tensor.
    restarts : int
        Random starting points, uniform on the unit sphere.
    seed : int
    regime : {'below_tc', 'above_tc'}

    Returns
    -------
    MinimizationResult
    """
    if coeffs.mode is None:
        raise ValueError('coefficients carry no tensor')
    if n is not None and n != coeffs.n:
        raise ValueError('n=%d does not match the tensor size %d' % (n, coeffs.n))
    if restarts < 1:
        raise ValueError('restarts must be positive')
    n = coeffs.n
    sign = _regime_sign(regime)
    tensor, dm = np.asarray(coeffs.tensor), np.asarray(coeffs.d_matrix)
    rng = np.random.default_rng(seed)
    best = None
    values = []
    for r in range(restarts):
        x0 = rng.normal(size=2 * n)
        x0 /= np.linalg.norm(x0)
        x, f, A, B = _descend(tensor, dm, sign, x0)
        values.append(f)
        if best is None or f < best[1] - 1e-15 * abs(best[1]):
            best = (x, f, A, B, r)
    x, f, A, B, _ = best
    L2 = max(B, 0.0) / (2.0 * A)
    psi = OrderParameter(math.sqrt(L2) * interleaved_to_complex(x), coeffs.basis)
    gnorm = float(np.linalg.norm(gradient(coeffs, psi, regime)))
    phys = psi
    if coeffs.basis == 'complex_sh':
        phys = basis_change(psi, 'complex->real')
    elif coeffs.basis == 'mixed_complex':
        d = basis_change(OrderParameter(psi.components[1:], 'complex_sh'), 'complex->real')
        phys = OrderParameter(np.concatenate([psi.components[:1], d.components]), 'labeled_mixed')
    return MinimizationResult(minimum=f, argmin=psi, restarts_used=restarts,
                              method='sphere_reduction', residuals={'gradient_norm': gnorm},
                              argmin_physical=phys, values=values)


def check_dwave_minimizer(psi, c, d):
    """Residuals ``(| |psi|^2 - tau |, | sum psi_m^2 |)`` for a real-harmonic ``psi``."""
    if psi.basis != 'real_sh' or psi.n != 5:
        raise ValueError('expected five real-harmonic components')
    v = np.asarray(psi.components)
    tau = 7.0 * math.pi * d / (5.0 * c)
    return abs(float(np.sum(np.abs(v) ** 2)) - tau), float(abs(np.sum(v * v)))


def dwave_reference_minimizer(c, d):
    """The minimiser ``(0, sqrt(tau/2), 0, i sqrt(tau/2), 0)``."""
    tau = 7.0 * math.pi * d / (5.0 * c)
    a = math.sqrt(tau / 2.0)
    return OrderParameter([0, a, 0, 1j * a, 0], 'real_sh')


def lambda_min(coeffs):
    """Smallest eigenvalue of the quadratic coefficient matrix."""
    dm = np.asarray(coeffs.d_matrix, dtype=complex)
    if not np.allclose(dm, dm.conj().T, rtol=0, atol=1e-12 * max(1.0, np.max(np.abs(dm)))):
        raise ValueError('d_matrix is not Hermitian')
    return float(np.linalg.eigvalsh(dm)[0])


@dataclass
class StabilityReport:
    """Flags of the two (s+d) instability criteria and the perturbation checks.

    ``drops_d`` and ``drops_s`` map ``epsilon`` to the energy change of the
    explicit perturbation; negative means the energy dropped.
    """

    d_unstable_under_s: bool
    s_unstable_under_d: bool
    nontrivial_coupling: bool
    margin_d: float
    margin_s: float
    drops_d: Dict[float, float]
    drops_s: Dict[float, float]
    consistent: bool


def stability_criteria(coeffs, epsilons=(1e-2, 1e-3)):
    """Evaluate the two (s+d) stability inequalities and test them directly.

    ``d_unstable_under_s``: ``d c2s < (5/7) c d2s``. Adding a small s-wave
    component to the d-wave minimiser ``(0, sqrt(tau/2), 0, i sqrt(tau/2), 0)``
    lowers the energy.

    ``s_unstable_under_d``: ``d2s c2s <= d c4s``. Adding ``i eps`` to the
    ``m = 2`` real harmonic next to the s-wave minimiser ``sqrt(tau_s)``
    lowers the energy (when the inequality is strict).

    Returns
    -------
    StabilityReport
        ``consistent`` is False when a flag is set but its perturbation fails
        to lower the energy at every ``epsilon``, or a strict reverse
        inequality holds and the energy still drops.
    """
    if not coeffs.has_mixed:
        raise ValueError('stability criteria need c1s, c2s, c4s and d2s')
    c, d = coeffs.c, coeffs.d
    c2s, c4s, d2s = coeffs.c2s, coeffs.c4s, coeffs.d2s
    margin_d = 5.0 / 7.0 * c * d2s - d * c2s
    margin_s = d * c4s - d2s * c2s
    flag_d = d * c2s < 5.0 / 7.0 * c * d2s
    flag_s = d2s * c2s <= d * c4s

    psi_d = dwave_reference_minimizer(c, d).components
    e_d = eval_dwave5(c, d, OrderParameter(psi_d, 'real_sh'))
    tau_s = coeffs.tau_s
    e_s = -c4s / (4.0 * math.pi) * tau_s ** 2
    drops_d, drops_s = {}, {}
    for eps in epsilons:
        trial = [eval_mixed6(coeffs, OrderParameter(np.concatenate([[eps * w], psi_d]), 'labeled_mixed'))
                 for w in (1.0, 1j)]
        drops_d[eps] = min(trial) - e_d
        v = np.zeros(6, dtype=complex)
        v[0] = math.sqrt(tau_s)
        v[5] = 1j * eps
        drops_s[eps] = eval_mixed6(coeffs, OrderParameter(v, 'labeled_mixed')) - e_s
    ok = True
    for flag, margin, drops in ((flag_d, margin_d, drops_d), (flag_s, margin_s, drops_s)):
        if flag and margin > 0 and not all(x < 0 for x in drops.values()):
            ok = False
        if not flag and any(x < 0 for x in drops.values()):
            ok = False
    return StabilityReport(flag_d, flag_s, flag_d and flag_s, margin_d, margin_s,
                           drops_d, drops_s, ok)
