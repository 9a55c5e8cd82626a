"""Reference values of the quartic GL coefficients in three dimensions.

Each row lists an index tuple ``(i, j, k, m)`` and ``28 pi c_{ijkm}`` as
``(coefficient, radicand, scalar)``: the value is
``coefficient * sqrt(radicand) * scalar``.
"""

import math

from .glcoeff import angular_factor, angular_oracle
from .specfun import Surd

__all__ = ['DWAVE_ROWS', 'MIXED_ROWS', 'check_reference_rows']

SCALE = 28

DWAVE_ROWS = (
    ((2, 2, 2, 2), 10, 1, 'c'),
    ((2, 1, 2, 1), 5, 1, 'c'),
    ((1, 1, 1, 1), 10, 1, 'c'),
    ((0, 2, 0, 2), 5, 1, 'c'),
    ((1, 1, 0, 2), 0, 1, 'c'),
    ((0, 1, 0, 1), 5, 1, 'c'),
    ((-1, 2, -1, 2), 5, 1, 'c'),
    ((0, 1, -1, 2), 0, 1, 'c'),
    ((0, 0, 0, 0), 15, 1, 'c'),
    ((1, -1, 1, -1), 10, 1, 'c'),
    ((2, -2, 2, -2), 10, 1, 'c'),
    ((0, 0, 2, -2), 5, 1, 'c'),
    ((0, 0, 1, -1), -5, 1, 'c'),
    ((1, -1, 2, -2), -5, 1, 'c'),
)

MIXED_ROWS = (
    (('s', 2, 0, 2), -2, 5, 'c1s'),
    (('s', 2, 's', 2), 7, 1, 'c2s'),
    (('s', 2, 1, 1), 1, 30, 'c1s'),
    (('s', 1, 0, 1), 1, 5, 'c1s'),
    (('s', 1, 's', 1), 7, 1, 'c2s'),
    (('s', 1, -1, 2), -1, 30, 'c1s'),
    (('s', 0, 0, 0), 2, 5, 'c1s'),
    (('s', 's', 0, 0), 7, 1, 'c2s'),
    (('s', 0, 's', 0), 7, 1, 'c2s'),
    (('s', 's', 's', 0), 0, 1, 'c2s'),
    (('s', 's', 's', 's'), 7, 1, 'c4s'),
    (('s', 0, 2, -2), -2, 5, 'c1s'),
    (('s', 's', 2, -2), 7, 1, 'c2s'),
    (('s', 0, 1, -1), -1, 5, 'c1s'),
    (('s', 's', 1, -1), -7, 1, 'c2s'),
)


def _expected(coef, radicand):
    return Surd.sqrt(radicand) * Surd({1: coef}) if coef else Surd()


def check_reference_rows(oracle_tol=1e-9):
    """Compare every reference row with the exact and the quadrature route.

    Returns
    -------
    list of dict
        One entry per row with ``exact`` (bool), ``oracle_error`` (float)
        and ``ok``.
    """
    out = []
    for mode, rows in (('dwave3d', DWAVE_ROWS), ('mixed3d', MIXED_ROWS)):
        for idx, coef, radicand, scalar in rows:
            want = _expected(coef, radicand)
            got = angular_factor(mode, *idx) * Surd({1: SCALE})
            oracle = angular_oracle(*idx, mode=mode) * math.pi * SCALE
            err = abs(oracle - float(want))
            out.append({'mode': mode, 'index': [str(i) for i in idx], 'scalar': scalar,
                        'expected': float(want), 'exact': got == want, 'oracle_error': err,
                        'ok': got == want and err < oracle_tol})
    return out
