"""Dominance certificates for squared half-integer Bessel functions."""

from bcsgl.besseldom import certificate_margin, verify_first_max_dominance


def main():
    print('%3s %10s %24s %10s %10s' % ('l0', 'x0', 'interval', 'epsilon', 'fresh'))
    for l0 in range(8):
        c = verify_first_max_dominance(l0)
        print('%3d %10.6f  [%9.6f, %9.6f] %10.3e %10.3e'
              % (l0, c.x0, c.interval[0], c.interval[1], c.epsilon, certificate_margin(c)))


if __name__ == '__main__':
    main()
