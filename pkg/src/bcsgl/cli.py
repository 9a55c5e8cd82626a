"""Command-line interface: ``bcsgl <command> [flags]``.

Every command writes one report (JSON by default, CSV where tabular data
exists) to ``--out`` or standard output. JSON reports embed the resolved
configuration and the library version; floats are written with 17
significant digits.

Exit codes: 0 success, 1 verification failure, 2 invalid configuration,
3 numerical non-convergence.
"""

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3

COMMANDS = ('tc', 'sectors', 'dominance', 'derive-params', 'sd-degeneracy', 'coeffs',
            'minimize', 'semiclassical', 'verify')

DEFAULTS = {
    'mu': 1.0, 'temp': 0.1, 'lambda': None, 'radius': 1.0, 'l': 0, 'lmax': None,
    'restarts': 64, 'seed': 42, 'tol': 1e-11, 'out': None, 'format': 'json', 'cf': None,
    'mode': None, 'c': None, 'd': None, 'c1s': None, 'c2s': None, 'c4s': None, 'd2s': None,
    'h': None, 'temps': None, 'symmetric_only': False, 'figure': False,
}


class ConfigError(ValueError):
    """Invalid or inconsistent configuration."""


class VerificationFailure(RuntimeError):
    def __init__(self, report):
        super().__init__('verification failed')
        self.report = report


# --- serialisation -------------------------------------------------------------------

def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, complex):
        return {'real': obj.real, 'imag': obj.imag}
    return obj


def dumps(obj, indent=2, _level=0):
    """JSON text with floats at 17 significant digits and sorted keys."""
    obj = _plain(obj) if _level == 0 else obj
    pad, inner = ' ' * (indent * _level), ' ' * (indent * (_level + 1))
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return '%.17g' % obj if math.isfinite(obj) else 'null'
    if isinstance(obj, (int, str)):
        return json.dumps(obj)
    if isinstance(obj, list):
        if not obj:
            return '[]'
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return '[' + ', '.join(dumps(v, indent, _level + 1) for v in obj) + ']'
        return '[\n' + ',\n'.join(inner + dumps(v, indent, _level + 1) for v in obj) + '\n' + pad + ']'
    if isinstance(obj, dict):
        if not obj:
            return '{}'
        items = ('%s%s: %s' % (inner, json.dumps(k), dumps(obj[k], indent, _level + 1)) for k in sorted(obj))
        return '{\n' + ',\n'.join(items) + '\n' + pad + '}'
    raise TypeError('cannot serialise %r' % type(obj))


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
        if not text.endswith('\n'):
            sys.stdout.write('\n')
        return
    with open(out, 'w', encoding='utf-8', newline='\n') as fh:
        fh.write(text if text.endswith('\n') else text + '\n')


# --- configuration --------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog='bcsgl', description='BCS to Ginzburg-Landau numerics for delta-shell interactions.')
    p.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    sub = p.add_subparsers(dest='command', metavar='command')
    sub.required = True
    helps = {
        'tc': 'critical temperature of one sector',
        'sectors': 'sector thresholds lambda_l and the minimising sector',
        'dominance': 'Bessel dominance certificates (CSV: curves J^2)',
        'derive-params': 'chemical-potential window, T_* and lambda_* from a certificate',
        'sd-degeneracy': 's/d degenerate chemical potential for a list of temperatures',
        'coeffs': 'radial GL coefficients and the quartic tensor',
        'minimize': 'global GL minimisation with membership and stability checks',
        'semiclassical': 'free-energy expansion orders (CSV: scan rows)',
        'verify': 'run the invariant suite',
    }
    for name in COMMANDS:
        sp = sub.add_parser(name, help=helps[name], description=helps[name])
        _common(sp)
    return p


def _common(sp):
    a = sp.add_argument
    a('--config', help='JSON file whose keys override the flags')
    a('--mu', type=float, help='chemical potential')
    a('--temp', type=float, help='temperature (critical temperature where applicable)')
    a('--lambda', dest='lambda', type=float, help='coupling lambda')
    a('--radius', '--R', dest='radius', type=float, help='delta-shell radius')
    a('--l', type=int, help='angular momentum sector')
    a('--lmax', type=int, help='largest sector scanned')
    a('--restarts', type=int, help='random restarts of the minimiser')
    a('--seed', type=int, help='random seed')
    a('--tol', type=float, help='relative quadrature tolerance')
    a('--out', help='output file (default: stdout)')
    a('--format', choices=('json', 'csv'), help='report format')
    a('--cf', type=float, help='constant C_f of the temperature bound')
    a('--mode', choices=('scalar', 'dwave3d', 'mixed3d', 'dwave2d', 'mixed2d'), help='GL tensor basis')
    for name in ('c', 'd', 'c1s', 'c2s', 'c4s', 'd2s'):
        a('--' + name, type=float, help='GL scalar %s (skips the radial integrals)' % name)
    a('--h', type=float, nargs='+', help='decreasing h values for the semiclassical scan')
    a('--temps', type=float, nargs='+', help='temperatures for sd-degeneracy')
    a('--symmetric-only', dest='symmetric_only', action='store_true', default=None,
      help='restrict sectors to even l')
    a('--figure', action='store_true', default=None, help='dominance: emit curve data instead of certificates')


def resolve_config(ns):
    """Merge defaults, flags and the optional config file (file wins)."""
    cfg = dict(DEFAULTS)
    for k, v in vars(ns).items():
        if k in cfg and v is not None:
            cfg[k] = v
    if ns.config:
        try:
            with open(ns.config, encoding='utf-8') as fh:
                extra = json.load(fh)
        except (OSError, ValueError) as exc:
            raise ConfigError('cannot read config file: %s' % exc)
        if not isinstance(extra, dict):
            raise ConfigError('config file must hold a JSON object')
        unknown = sorted(set(extra) - set(cfg))
        if unknown:
            raise ConfigError('unknown config keys: %s' % ', '.join(unknown))
        cfg.update(extra)
    cfg['command'] = ns.command
    _validate(cfg)
    return cfg


def _validate(cfg):
    for key in ('tol', 'radius', 'temp'):
        if cfg[key] is not None and not (isinstance(cfg[key], (int, float)) and cfg[key] > 0):
            raise ConfigError('%s must be positive' % key)
    if cfg['lambda'] is not None and not cfg['lambda'] > 0:
        raise ConfigError('lambda must be positive')
    if cfg['restarts'] < 1:
        raise ConfigError('restarts must be positive')
    if cfg['l'] < 0 or (cfg['lmax'] is not None and cfg['lmax'] < 0):
        raise ConfigError('sector indices must be non-negative')
    if cfg['format'] not in ('json', 'csv'):
        raise ConfigError('format must be json or csv')


def _params(cfg, lam=None):
    from .kernel import ModelParams
    return ModelParams(mu=cfg['mu'], temperature=cfg['temp'], radius=cfg['radius'],
                       lam=lam if lam is not None else (cfg['lambda'] or 1.0))


def _require(cfg, *keys):
    missing = [k for k in keys if cfg[k] is None]
    if missing:
        raise ConfigError('missing required option(s): %s' % ', '.join('--' + k for k in missing))


# --- commands ----------------------------------------------------------------------------

def cmd_tc(cfg):
    from .gapspec import ev_condition_rhs, solve_log_tc
    _require(cfg, 'lambda')
    log_t = solve_log_tc(cfg['lambda'], cfg['mu'], cfg['radius'], cfg['l'], rtol=cfg['tol'])
    p = _params(cfg).replace(log_temperature=log_t)
    residual = abs(1.0 - cfg['lambda'] * ev_condition_rhs(p, cfg['l'], rtol=cfg['tol']))
    return {'tc': math.exp(log_t), 'log_tc': log_t, 'condition_residual': residual}


def cmd_sectors(cfg):
    from .gapspec import scan_degeneracy
    spec = scan_degeneracy(_params(cfg), L_max=cfg['lmax'] if cfg['lmax'] is not None else 12,
                           symmetric_only=bool(cfg['symmetric_only']))
    return {'lambdas': {str(k): v for k, v in spec.lambdas.items()}, 'l0': spec.l0,
            'kernel_dim': spec.kernel_dim, 'degenerate': spec.degenerate,
            'minimal_sectors': spec.minimal_sectors}


def cmd_dominance(cfg):
    from .besseldom import (certificate_margin, curve_csv, intersection_z, verify_first_max_dominance,
                            verify_neighbor_dominance)
    lmax = cfg['lmax'] if cfg['lmax'] is not None else 11
    if cfg['figure'] or cfg['format'] == 'csv':
        return curve_csv(l_max=lmax)
    certs, neighbors = [], []
    for l0 in range(lmax + 1):
        c = verify_first_max_dominance(l0)
        certs.append(dict(c.to_dict(), fresh_grid_margin=certificate_margin(c)))
        if l0 >= 1:
            res, nc = verify_neighbor_dominance(l0)
            neighbors.append(dict(nc.to_dict(), equality_residual=res,
                                  fresh_grid_margin=certificate_margin(nc),
                                  intersection_z=intersection_z(l0)))
    return {'first_max': certs, 'neighbor': neighbors}


def cmd_derive_params(cfg):
    from .besseldom import verify_first_max_dominance
    from .gapspec import C_F_DEFAULT, params_from_dominance
    l0 = cfg['l']
    cert = verify_first_max_dominance(l0)
    dp = params_from_dominance(l0, cfg['radius'], cert, c_f=cfg['cf'] or C_F_DEFAULT)
    return {'l0': l0, 'interval': list(dp.interval), 'log_t_star': dp.log_t_star,
            'log10_t_star': dp.log_t_star / math.log(10.0), 't_star': dp.t_star,
            'lambda_star': dp.lambda_star, 'mu_at_min': dp.mu_at_min, 'c_f': dp.c_f,
            'certificate': cert.to_dict()}


def cmd_sd_degeneracy(cfg):
    from .gapspec import find_sd_degeneracy, scan_degeneracy
    from .kernel import ModelParams
    from .specfun import first_extremum
    temps = cfg['temps'] or [0.1, 0.05, 0.025, 0.0125]
    x1 = first_extremum(1, 'max')
    rows = []
    for T in temps:
        mu, lam = find_sd_degeneracy(T, cfg['radius'])
        spec = scan_degeneracy(ModelParams(mu=mu, temperature=T, lam=lam, radius=cfg['radius']),
                               L_max=8, symmetric_only=True)
        rows.append({'temperature': T, 'mu': mu, 'lambda': lam,
                     'rel_gap_0_2': abs(spec.lambdas[0] - spec.lambdas[2]) / spec.lambdas[0],
                     'lambdas': {str(k): v for k, v in spec.lambdas.items()},
                     'distance_to_x1': abs(math.sqrt(mu) * cfg['radius'] - x1)})
    return {'rows': rows}


def _gl_scalars(cfg):
    """GL scalars from flags, or from the radial integrals of the model."""
    from .glcoeff import GlCoefficients, radial_coeffs
    mode = cfg['mode'] or ('scalar' if cfg['l'] == 0 else 'dwave3d')
    dim = 2 if mode.endswith('2d') else 3
    if cfg['c'] is not None or cfg['d'] is not None:
        _require(cfg, 'c', 'd')
        kw = {k: cfg[k] for k in ('c1s', 'c2s', 'c4s', 'd2s') if cfg[k] is not None}
        return mode, GlCoefficients(c=cfg['c'], d=cfg['d'], dimension=dim, **kw)
    if dim == 2:
        raise ConfigError('two-dimensional modes need --c and --d (and the mixed scalars)')
    from .gapspec import lambda_l, rho_profile
    from .kernel import shell_profile
    l = 2 if mode in ('dwave3d', 'mixed3d') else cfg['l']
    p = _params(cfg)
    lam = cfg['lambda'] if cfg['lambda'] is not None else lambda_l(p, l, cfg['tol'])
    p = p.replace(lam=lam)
    rho = rho_profile(p, l)
    rho_s = shell_profile(p, 0) if mode == 'mixed3d' else None
    return mode, radial_coeffs(p, rho, rho_s, rtol=cfg['tol'])


def cmd_coeffs(cfg):
    from .glcoeff import c_tensor
    mode, sc = _gl_scalars(cfg)
    return c_tensor(mode, sc).to_dict()


def cmd_minimize(cfg):
    from .glcoeff import c_tensor
    from .glmin import check_dwave_minimizer, minimize_gl, stability_criteria
    mode, sc = _gl_scalars(cfg)
    co = c_tensor(mode, sc)
    res = minimize_gl(co, restarts=cfg['restarts'], seed=cfg['seed'])
    out = {'mode': mode, 'minimum': res.minimum, 'restarts_used': res.restarts_used,
           'method': res.method, 'residuals': res.residuals, 'basis': res.argmin.basis,
           'argmin': [{'real': z.real, 'imag': z.imag} for z in np.asarray(res.argmin.components)],
           'scalars': {k: v for k, v in co.to_dict()['scalars'].items()}}
    checks = {}
    if mode in ('dwave3d', 'mixed3d'):
        phys = res.argmin_physical
        out['argmin_physical'] = [{'real': z.real, 'imag': z.imag} for z in np.asarray(phys.components)]
    if mode == 'dwave3d':
        from .orderparam import OrderParameter
        tau = co.tau
        r1, r2 = check_dwave_minimizer(OrderParameter(res.argmin_physical.components, 'real_sh'), co.c, co.d)
        expected = -5.0 * co.c / (14.0 * math.pi) * tau * tau
        checks = {'norm_residual': r1, 'square_sum_residual': r2, 'expected_minimum': expected,
                  'relative_error': abs(res.minimum - expected) / abs(expected),
                  'member': bool(r1 < 1e-6 * tau and r2 < 1e-6 * tau)}
    elif mode == 'dwave2d':
        v = np.asarray(res.argmin.components)
        k = math.pi * co.d / (2.0 * co.c)
        checks = {'modulus_residual': abs(abs(v[0]) ** 2 - k), 'pairing_residual': abs(v[0] * v[0] + v[1] * v[1]),
                  'member': bool(abs(abs(v[0]) ** 2 - k) < 1e-7 and abs(v[0] ** 2 + v[1] ** 2) < 1e-7)}
    if co.has_mixed and mode == 'mixed3d':
        st = stability_criteria(co)
        out['stability'] = {'d_unstable_under_s': st.d_unstable_under_s,
                            's_unstable_under_d': st.s_unstable_under_d,
                            'nontrivial_coupling': st.nontrivial_coupling,
                            'margin_d': st.margin_d, 'margin_s': st.margin_s,
                            'drops_d': {repr(k): v for k, v in st.drops_d.items()},
                            'drops_s': {repr(k): v for k, v in st.drops_s.items()},
                            'consistent': st.consistent}
        checks['member'] = bool(st.consistent)
    out['checks'] = checks
    if checks and not checks['member']:
        raise VerificationFailure(out)
    return out


def cmd_semiclassical(cfg):
    from .bcsverify import KernelElement, scaling_scan, swave_params
    h = cfg['h'] or [0.2, 0.1, 0.05, 0.025]
    try:
        params = swave_params(cfg['mu'], cfg['temp'], cfg['radius'])
        res = scaling_scan(params, KernelElement(0, (1.0,)), h, rtol=cfg['tol'])
    except ValueError as exc:
        raise ConfigError(str(exc))
    if cfg['format'] == 'csv':
        return res.to_csv()
    return {'lambda': params.lam, 'h': res.h, 'delta_f': res.delta_f, 'h4_E2': res.h4_e2,
            'remainder': res.remainder, 'h1_remainder': res.h1, 'slope_remainder': res.slope_remainder,
            'slope_h1': res.slope_h1, 'E1': res.E1, 'E2': res.E2, 'gl_energy': res.gl,
            'cancellation': res.cancellation}


# --- verify ------------------------------------------------------------------------------

def _check(name, fn):
    try:
        ok, detail = fn()
    except Exception as exc:  # a crashing check is a failed check
        ok, detail = False, {'error': '%s: %s' % (type(exc).__name__, exc)}
    return {'name': name, 'ok': bool(ok), 'detail': detail}


def _verify_tables():
    from .reference import check_reference_rows
    rows = check_reference_rows()
    return all(r['ok'] for r in rows), {'rows': len(rows), 'max_oracle_error': max(r['oracle_error'] for r in rows)}


def _verify_o5(seed):
    from scipy.stats import ortho_group
    from .glenergy import eval_dwave5
    from .orderparam import OrderParameter
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(100):
        v = rng.normal(size=5) + 1j * rng.normal(size=5)
        q = ortho_group.rvs(5, random_state=rng)
        w = np.exp(1j * rng.uniform(0, 2 * math.pi)) * (q @ v)
        e0 = eval_dwave5(1.0, 1.0, OrderParameter(v, 'real_sh'))
        e1 = eval_dwave5(1.0, 1.0, OrderParameter(w, 'real_sh'))
        worst = max(worst, abs(e0 - e1) / max(1.0, abs(e0)))
    return worst < 1e-10, {'max_relative_change': worst}


def _verify_gl5(cfg):
    from .glcoeff import GlCoefficients, c_tensor
    from .glmin import minimize_gl
    co = c_tensor('dwave3d', GlCoefficients(c=1.0, d=1.0))
    res = minimize_gl(co, restarts=cfg['restarts'], seed=cfg['seed'])
    expected = -5.0 / (14.0 * math.pi) * co.tau ** 2
    err = abs(res.minimum - expected) / abs(expected)
    return err < 1e-8, {'minimum': res.minimum, 'expected': expected, 'relative_error': err}


def _verify_dominance(lmax):
    from .besseldom import certificate_margin, intersection_z, verify_first_max_dominance, verify_neighbor_dominance
    from .specfun import first_extremum
    eps, worst_fresh, worst_res, worst_z = [], math.inf, 0.0, 0.0
    for l0 in range(lmax + 1):
        c = verify_first_max_dominance(l0)
        eps.append(c.epsilon)
        worst_fresh = min(worst_fresh, certificate_margin(c) / c.epsilon)
    for l0 in range(1, min(lmax, 10) + 1):
        res, nc = verify_neighbor_dominance(l0)
        worst_res = max(worst_res, res)
        worst_fresh = min(worst_fresh, certificate_margin(nc) / nc.epsilon)
        worst_z = max(worst_z, abs(intersection_z(l0) - first_extremum(l0, 'max')))
    ok = min(eps) > 0 and worst_fresh >= 1.0 and worst_res < 1e-11 and worst_z < 1e-10
    return ok, {'l0_max': lmax, 'min_epsilon': min(eps), 'min_fresh_margin_over_epsilon': worst_fresh,
                'max_equality_residual': worst_res, 'max_intersection_error': worst_z}


def _verify_semiclassical():
    from .bcsverify import KernelElement, gl_energy, semiclassical_coeffs, swave_params, trial_state
    p = swave_params()
    el = KernelElement(0, (1.0,))
    st = trial_state(p, el, 0.05)
    E1, E2, cancel = semiclassical_coeffs(st)
    gl = gl_energy(p, el)
    ok = E1 < 0 and cancel < 1e-7 * abs(E1) * 0.05 ** 2 and abs(E2 - gl) < 1e-8 * abs(E2)
    return ok, {'E1': E1, 'E2': E2, 'gl_energy': gl, 'cancellation': cancel}


def cmd_verify(cfg):
    lmax = cfg['lmax'] if cfg['lmax'] is not None else 12
    checks = [
        _check('reference_tables', _verify_tables),
        _check('o5_invariance', lambda: _verify_o5(cfg['seed'])),
        _check('gl5_minimum', lambda: _verify_gl5(cfg)),
        _check('dominance_certificates', lambda: _verify_dominance(lmax)),
        _check('semiclassical_coefficients', _verify_semiclassical),
    ]
    out = {'checks': checks, 'passed': all(c['ok'] for c in checks)}
    if not out['passed']:
        raise VerificationFailure(out)
    return out


HANDLERS = {
    'tc': cmd_tc, 'sectors': cmd_sectors, 'dominance': cmd_dominance, 'derive-params': cmd_derive_params,
    'sd-degeneracy': cmd_sd_degeneracy, 'coeffs': cmd_coeffs, 'minimize': cmd_minimize,
    'semiclassical': cmd_semiclassical, 'verify': cmd_verify,
}


def _report(cfg, result, status):
    public = {k: v for k, v in cfg.items() if k not in ('out',)}
    return dumps({'version': __version__, 'command': cfg['command'], 'config': public,
                  'status': status, 'result': result})


def run(cfg):
    """Execute a resolved configuration; returns the exit status."""
    from .gapspec import ConditionError, NoRootError
    from .besseldom import CertificateError
    from .glmin import NonCoerciveError
    from .quadrature import QuadratureError
    try:
        result = HANDLERS[cfg['command']](cfg)
        status = EXIT_OK
    except VerificationFailure as exc:
        result, status = exc.report, EXIT_VERIFY
    except CertificateError as exc:
        result, status = {'error': str(exc)}, EXIT_VERIFY
    except (NoRootError, QuadratureError) as exc:
        result, status = {'error': str(exc)}, EXIT_NUMERIC
    except (ConfigError, ConditionError, NonCoerciveError, ValueError) as exc:
        sys.stderr.write('bcsgl: error: %s\n' % exc)
        return EXIT_CONFIG
    if isinstance(result, str):
        if status == EXIT_OK:
            _emit(result, cfg['out'])
        return status
    _emit(_report(cfg, result, 'ok' if status == EXIT_OK else 'fail'), cfg['out'])
    return status


def main(argv=None):
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        cfg = resolve_config(ns)
    except ConfigError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write('bcsgl: error: %s\n' % exc)
        return EXIT_CONFIG
    try:
        return run(cfg)
    except BrokenPipeError:
        # downstream closed the pipe (e.g. `| head`); nothing left to report
        sys.stdout = open(os.devnull, 'w')
        return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
