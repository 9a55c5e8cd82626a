"""Free-energy expansion of an s-wave trial state and its remainder orders."""

from bcsgl.bcsverify import KernelElement, scaling_scan, swave_params


def main():
    res = scaling_scan(swave_params(), KernelElement(0, (1.0,)), [0.2, 0.1, 0.05, 0.025])
    print('E1 = %.12g   E2 = %.12g   GL energy = %.12g' % (res.E1, res.E2, res.gl))
    print('%8s %22s %22s %14s' % ('h', 'delta_f', 'h^4 E2', 'remainder'))
    for h, df, e, r in zip(res.h, res.delta_f, res.h4_e2, res.remainder):
        print('%8.4f %22.15g %22.15g %14.4g' % (h, df, e, r))
    print('remainder slope %.3f, H1 slope %.3f' % (res.slope_remainder, res.slope_h1))


if __name__ == '__main__':
    main()
