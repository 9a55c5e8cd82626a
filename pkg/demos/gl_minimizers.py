"""GL minimisers for d-wave and mixed (s+d) tensors with stability flags."""

import math

import numpy as np

from bcsgl.glcoeff import GlCoefficients, c_tensor
from bcsgl.glmin import check_dwave_minimizer, minimize_gl, stability_criteria


def main():
    c, d = 1.0, 1.0
    res = minimize_gl(c_tensor('dwave3d', GlCoefficients(c=c, d=d)), restarts=16)
    tau = 7 * math.pi * d / (5 * c)
    print('d-wave minimum %.15f (closed form %.15f)' % (res.minimum, -5 * c / (14 * math.pi) * tau ** 2))
    print('membership residuals', check_dwave_minimizer(res.argmin_physical, c, d))
    print('argmin (real harmonics):', np.round(res.argmin_physical.components, 6))
    for g, r in ((1.0, 0.5), (1.0, 1.2), (1.0, 2.0)):
        co = GlCoefficients(c=c, d=d, c1s=g, c2s=g ** 2, c4s=g ** 4, d2s=r)
        rep = stability_criteria(co)
        print('g=%.1f d2s=%.1f  d unstable under s: %s  s unstable under d: %s'
              % (g, r, rep.d_unstable_under_s, rep.s_unstable_under_d))


if __name__ == '__main__':
    main()
