"""End-to-end acceptance checks; each test records one PASS/FAIL line."""

import math
import time

import numpy as np
from scipy.special import spherical_jn
from scipy.stats import ortho_group

from bcsgl.bcsverify import KernelElement, scaling_scan, swave_params
from bcsgl.besseldom import (certificate_margin, intersection_z, verify_first_max_dominance,
                             verify_neighbor_dominance)
from bcsgl.gapspec import (ev_condition_rhs, find_sd_degeneracy, params_from_dominance, scan_degeneracy,
                           solve_log_tc)
from bcsgl.glcoeff import GlCoefficients, angular_factor, angular_oracle, c_tensor
from bcsgl.glenergy import eval_dwave5, eval_generic, gradient
from bcsgl.glmin import check_dwave_minimizer, minimize_gl, stability_criteria
from bcsgl.kernel import ModelParams
from bcsgl.orderparam import OrderParameter
from bcsgl.reference import DWAVE_ROWS, MIXED_ROWS, SCALE
from bcsgl.specfun import Surd, first_extremum


def j2(l, x):
    """``J_{l+1/2}(x)^2`` through scipy's spherical Bessel functions."""
    return 2.0 * x / math.pi * spherical_jn(l, x) ** 2


def test_reference_tables(acceptance):
    t0 = time.perf_counter()
    scal = GlCoefficients(c=0.37, d=0.21, c1s=0.29, c2s=0.41, c4s=0.53, d2s=0.17)
    exact_ok, tensor_err, oracle_err, n = True, 0.0, 0.0, 0
    for mode, rows in (('dwave3d', DWAVE_ROWS), ('mixed3d', MIXED_ROWS)):
        co = c_tensor(mode, scal)
        pos = {lab: a for a, lab in enumerate(co.labels)}
        for idx, coef, radicand, name in rows:
            want = Surd.sqrt(radicand) * Surd({1: coef}) if coef else Surd()
            exact_ok &= angular_factor(mode, *idx) * Surd({1: SCALE}) == want
            entry = co.tensor[tuple(pos[i] for i in idx)] * SCALE * math.pi
            tensor_err = max(tensor_err, abs(entry - float(want) * scal.scalar(name)))
            oracle_err = max(oracle_err, abs(angular_oracle(*idx, mode=mode) * math.pi * SCALE - float(want)))
            n += 1
    dt = time.perf_counter() - t0
    ok = n == 29 and exact_ok and tensor_err < 1e-13 and oracle_err < 1e-9 and dt < 10
    acceptance(1, ok, 'reference tables: %d rows exact=%s tensor_err=%.1e oracle_err=%.1e in %.1fs'
               % (n, exact_ok, tensor_err, oracle_err, dt))
    assert ok


def test_gl5_minimum(acceptance):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst_rel, worst_res = 0.0, 0.0
    for k in range(10):
        c, d = rng.uniform(0.1, 3.0, size=2)
        res = minimize_gl(c_tensor('dwave3d', GlCoefficients(c=c, d=d)), restarts=16, seed=k)
        tau = 7.0 * math.pi * d / (5.0 * c)
        expected = -5.0 * c / (14.0 * math.pi) * tau ** 2
        worst_rel = max(worst_rel, abs(res.minimum - expected) / abs(expected))
        worst_res = max(worst_res, max(check_dwave_minimizer(res.argmin_physical, c, d)) / tau)
    dt = time.perf_counter() - t0
    ok = worst_rel < 1e-8 and worst_res < 1e-6 and dt < 30
    acceptance(2, ok, 'd-wave minimum: rel_err=%.1e residual/tau=%.1e in %.1fs' % (worst_rel, worst_res, dt))
    assert ok


def test_o5_symmetry(acceptance):
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(100):
        v = rng.normal(size=5) + 1j * rng.normal(size=5)
        w = np.exp(1j * rng.uniform(0, 2 * math.pi)) * (ortho_group.rvs(5, random_state=rng) @ v)
        c, d = rng.uniform(0.1, 3.0, size=2)
        e0 = eval_dwave5(c, d, OrderParameter(v, 'real_sh'))
        e1 = eval_dwave5(c, d, OrderParameter(w, 'real_sh'))
        worst = max(worst, abs(e0 - e1) / max(1.0, abs(e0)))
    ranks = []
    for k in range(20):
        c, d = rng.uniform(0.1, 3.0, size=2)
        v = np.asarray(minimize_gl(c_tensor('dwave3d', GlCoefficients(c=c, d=d)), restarts=4,
                                   seed=100 + k).argmin_physical.components)
        x, y = v.real, v.imag
        # constraints |v|^2 = tau and sum v^2 = 0 in real coordinates (x, y)
        J = np.zeros((3, 10))
        J[0, :5], J[0, 5:] = 2 * x, 2 * y
        J[1, :5], J[1, 5:] = 2 * x, -2 * y
        J[2, :5], J[2, 5:] = 2 * y, 2 * x
        ranks.append(int(np.linalg.matrix_rank(J, tol=1e-8 * np.linalg.norm(J))))
    ok = worst < 1e-10 and all(r == 3 for r in ranks)
    acceptance(3, ok, 'O(5) invariance: max_rel_change=%.1e; Jacobian ranks=%s'
               % (worst, sorted(set(ranks))))
    assert ok


def test_2d_double_cover(acceptance):
    rng = np.random.default_rng(7)
    worst_mod, worst_pair = 0.0, 0.0
    for k in range(10):
        c, d = rng.uniform(0.1, 3.0, size=2)
        res = minimize_gl(c_tensor('dwave2d', GlCoefficients(c=c, d=d, dimension=2)), restarts=8, seed=k)
        x, y = res.argmin.components
        worst_mod = max(worst_mod, abs(abs(x) ** 2 - math.pi * d / (2 * c)))
        worst_pair = max(worst_pair, min(abs(y - 1j * x), abs(y + 1j * x)))
    ok = worst_mod < 1e-7 and worst_pair < 1e-7
    acceptance(4, ok, '2D minimisers (psi, +-i psi): modulus_err=%.1e pairing_err=%.1e' % (worst_mod, worst_pair))
    assert ok


def test_bessel_dominance(acceptance):
    t0 = time.perf_counter()
    min_eps, worst_fresh, worst_direct = math.inf, math.inf, math.inf
    for l0 in range(21):
        cert = verify_first_max_dominance(l0, L_probe=l0 + 2)
        min_eps = min(min_eps, cert.epsilon)
        worst_fresh = min(worst_fresh, certificate_margin(cert) / cert.epsilon)
        # independent scan against every order up to l0 + 40 on the witness interval
        x = np.linspace(*cert.interval, 801)
        others = np.max([j2(l, x) for l in range(l0 + 41) if l != l0], axis=0)
        worst_direct = min(worst_direct, float(np.min(j2(l0, x) - others)) / cert.epsilon)
    worst_res, worst_z = 0.0, 0.0
    for l0 in range(1, 11):
        res, nc = verify_neighbor_dominance(l0)
        worst_res = max(worst_res, res)
        worst_fresh = min(worst_fresh, certificate_margin(nc) / nc.epsilon)
        worst_z = max(worst_z, abs(intersection_z(l0) - first_extremum(l0, 'max')))
    dt = time.perf_counter() - t0
    ok = min_eps > 0 and worst_fresh >= 1.0 and worst_direct >= 1.0 and worst_res < 1e-10 and worst_z < 1e-10 \
        and dt < 60
    acceptance(5, ok, 'Bessel dominance l0<=20: min_eps=%.2e fresh/eps=%.3f direct/eps=%.3f; neighbours '
               'residual=%.1e z_err=%.1e in %.1fs' % (min_eps, worst_fresh, worst_direct, worst_res, worst_z, dt))
    assert ok


def test_sector_selection_pipeline(acceptance):
    t0 = time.perf_counter()
    rng = np.random.default_rng(11)
    failures, worst_res, solved = [], 0.0, 0
    for l0 in range(4):
        dp = params_from_dominance(l0, 1.0, verify_first_max_dominance(l0))
        for _ in range(20):
            mu = rng.uniform(*dp.interval)
            lam = dp.lambda_star * rng.uniform(0.5, 1.0)
            try:
                log_tc = solve_log_tc(lam, mu, 1.0, l0)
            except Exception as exc:  # a failed solve is a failed point
                failures.append((l0, mu, lam, repr(exc)))
                continue
            par = ModelParams(mu=mu, log_temperature=log_tc, lam=lam)
            residual = abs(1.0 - lam * ev_condition_rhs(par, l0))
            worst_res = max(worst_res, residual)
            if scan_degeneracy(par).l0 != l0 or residual >= 1e-9:
                failures.append((l0, mu, lam, 'wrong sector or residual %.1e' % residual))
            solved += 1
    dt = time.perf_counter() - t0
    ok = not failures and solved == 80 and dt < 300
    acceptance(6, ok, 'dominance-driven sector selection: %d/80 points solved, failures=%d, max_residual=%.1e '
               'in %.0fs' % (solved, len(failures), worst_res, dt))
    assert ok, failures[:5]


def test_sd_degeneracy(acceptance):
    x1 = first_extremum(1, 'max')
    gaps, rel, below = [], 0.0, True
    for T in (0.1, 0.05, 0.025, 0.0125):
        mu, lam = find_sd_degeneracy(T)
        lams = scan_degeneracy(ModelParams(mu=mu, temperature=T, lam=lam), L_max=8, symmetric_only=True).lambdas
        rel = max(rel, abs(lams[0] - lams[2]) / lams[0])
        below &= all(lams[0] < lams[l] for l in (4, 6, 8))
        gaps.append(abs(math.sqrt(mu) - x1))
    decreasing = all(a > b for a, b in zip(gaps, gaps[1:]))
    ok = rel < 1e-8 and below and decreasing
    acceptance(7, ok, '(s+d) degeneracy: max_rel_gap=%.1e below_l4_6_8=%s distances=%s'
               % (rel, below, ', '.join('%.3e' % g for g in gaps)))
    assert ok


def test_semiclassical_orders(acceptance):
    t0 = time.perf_counter()
    hs = [0.2, 0.1, 0.05, 0.025]
    res = scaling_scan(swave_params(), KernelElement(0, (1.0,)), hs)
    h = hs[-1]
    cancel_ok = res.cancellation < 1e-7 * abs(res.E1) * h ** 2
    gl_err = abs(res.E2 - res.gl) / abs(res.E2)
    dt = time.perf_counter() - t0
    ok = res.slope_remainder >= 5.5 and res.slope_h1 >= 5.5 and cancel_ok and gl_err < 1e-8 and dt < 300
    acceptance(8, ok, 'semiclassical orders: slopes %.2f / %.2f, cancellation=%.1e, |E2-GL|/|E2|=%.1e in %.0fs'
               % (res.slope_remainder, res.slope_h1, res.cancellation, gl_err, dt))
    assert ok


def test_gradients(acceptance):
    s3 = GlCoefficients(c=0.37, d=0.21, c1s=0.29, c2s=0.41, c4s=0.53, d2s=0.17)
    s2 = GlCoefficients(c=0.37, d=0.21, dimension=2)
    models = {'GL1': (c_tensor('scalar', GlCoefficients(c=0.8, d=0.3)), 'scalar'),
              'GL2': (c_tensor('dwave2d', s2), 'real_2d'),
              'GL5': (c_tensor('dwave3d', s3), 'real_sh'),
              'GL6': (c_tensor('mixed3d', s3), 'labeled_mixed')}
    rng = np.random.default_rng(13)
    step, worst = 1e-6, {}
    for name, (co, basis) in models.items():
        err = 0.0
        for _ in range(50):
            x = rng.normal(size=2 * co.n)
            g = gradient(co, OrderParameter.from_real(x, basis))
            fd = np.empty_like(x)
            for k in range(x.size):
                e = np.zeros_like(x)
                e[k] = step
                fd[k] = (eval_generic(co, OrderParameter.from_real(x + e, basis))
                         - eval_generic(co, OrderParameter.from_real(x - e, basis))) / (2 * step)
            err = max(err, float(np.max(np.abs(g - fd))))
        worst[name] = err
    ok = all(v < 1e-5 for v in worst.values())
    acceptance(9, ok, 'gradients vs central differences: ' + ', '.join('%s %.1e' % kv for kv in worst.items()))
    assert ok


def test_stability_thresholds(acceptance):
    c, d, eps = 0.37, 0.21, 1e-3

    def synthetic(g, r):
        # constant ratio g_s = g with an independent d2s = r d
        return GlCoefficients(c=c, d=d, c1s=c * g, c2s=c * g ** 2, c4s=c * g ** 4, d2s=d * r)

    flips_ok, drops_ok, n_flag = True, True, 0
    for g in (0.5, 0.8, 1.0, 1.3, 2.0):
        # d c2s = (5/7) c d2s  <=>  r = 7 g^2 / 5;  d2s c2s = d c4s  <=>  r = g^2
        r_d, r_s = 1.4 * g * g, g * g
        for f in (1 - 1e-9, 1 + 1e-9):
            flips_ok &= stability_criteria(synthetic(g, r_d * f), (eps,)).d_unstable_under_s == (f > 1)
            flips_ok &= stability_criteria(synthetic(g, r_s * f), (eps,)).s_unstable_under_d == (f < 1)
        for r in np.geomspace(0.05, 8.0, 41):
            rep = stability_criteria(synthetic(g, r), (eps,))
            if rep.d_unstable_under_s:
                n_flag += 1
                drops_ok &= rep.drops_d[eps] < 0
            if rep.s_unstable_under_d:
                n_flag += 1
                drops_ok &= rep.drops_s[eps] < 0
    ok = flips_ok and drops_ok and n_flag > 0
    acceptance(10, ok, 'stability thresholds: flips_exact=%s, energy drops at eps=1e-3 for all %d set flags=%s'
               % (flips_ok, n_flag, drops_ok))
    assert ok
