"""Critical temperatures per sector and the sector that condenses first."""

from bcsgl.gapspec import lambda_l, scan_degeneracy, solve_tc
from bcsgl.kernel import ModelParams


def main():
    params = ModelParams(mu=2.0, temperature=0.1, radius=1.0)
    spec = scan_degeneracy(params, L_max=6)
    print('thresholds lambda_l at mu=2, T=0.1:')
    for l, lam in sorted(spec.lambdas.items()):
        print('  l=%d  %.10f' % (l, lam))
    print('minimising sector:', spec.l0)
    lam0 = lambda_l(params, spec.l0)
    print('solve_tc(lambda_l0) = %.12f' % solve_tc(lam0, 2.0, 1.0, spec.l0))


if __name__ == '__main__':
    main()
