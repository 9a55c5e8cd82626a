import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bcsgl.gapspec import find_sd_degeneracy, lambda_l, rho_profile
from bcsgl.glcoeff import MODE_LABELS, GlCoefficients, angular_factor, angular_oracle, c_tensor, radial_coeffs
from bcsgl.kernel import ModelParams, shell_profile
from bcsgl.reference import check_reference_rows
from bcsgl.specfun import Surd

SCAL = GlCoefficients(c=0.37, d=0.21, c1s=0.29, c2s=0.41, c4s=0.53, d2s=0.17)
MIXED = c_tensor('mixed3d', SCAL)
LABELS = MODE_LABELS['mixed3d']
POS = {lab: i for i, lab in enumerate(LABELS)}
SCALE = 28 * math.pi


def entry(coeffs, i, j, k, m):
    pos = {lab: a for a, lab in enumerate(coeffs.labels)}
    return coeffs.tensor[pos[i], pos[j], pos[k], pos[m]]


def neg(label):
    return label if label == 's' else -label


def mval(label):
    return 0 if label == 's' else label


class TestTables:
    def test_reference_rows(self):
        rows = check_reference_rows()
        assert len(rows) == 29
        assert all(r['exact'] and r['oracle_error'] < 1e-9 for r in rows)

    @pytest.mark.parametrize('idx,value', [
        ((2, 2, 2, 2), 10 * SCAL.c), ((0, 0, 1, -1), -5 * SCAL.c), (('s', 's', 's', 0), 0.0),
        (('s', 2, 's', 2), 7 * SCAL.c2s), ((2, 1, 0, 0), 0.0), (('s', 's', 's', 's'), 7 * SCAL.c4s),
    ])
    def test_table_entries(self, idx, value):
        assert entry(MIXED, *idx).real * SCALE == pytest.approx(value, rel=1e-14, abs=1e-15)

    def test_exact_rationals(self):
        assert angular_factor('dwave3d', 0, 0, 0, 0) * Surd({1: 28}) == Surd({1: 15})
        assert angular_factor('mixed3d', 's', 2, 0, 2) * Surd({1: 28}) == Surd.sqrt(5) * Surd({1: -2})


class TestOracle:
    def test_y20_fourth_power(self):
        assert angular_oracle(0, 0, 0, 0) == pytest.approx(15 / SCALE, abs=1e-14)

    def test_2121(self):
        assert angular_oracle(2, 1, 2, 1) == pytest.approx(5 / SCALE, abs=1e-14)

    def test_all_tuples(self):
        worst = 0.0
        for idx in itertools.product(LABELS, repeat=4):
            exact = float(angular_factor('mixed3d', *idx)) / math.pi
            worst = max(worst, abs(exact - angular_oracle(*idx)))
        assert worst < 1e-9

    def test_m_violation_vanishes(self):
        for idx in itertools.product(LABELS, repeat=4):
            if mval(idx[0]) + mval(idx[1]) != mval(idx[2]) + mval(idx[3]):
                assert abs(angular_oracle(*idx)) < 1e-14

    @pytest.mark.parametrize('mode', ['dwave2d', 'mixed2d'])
    def test_2d_tuples(self, mode):
        for idx in itertools.product(MODE_LABELS[mode], repeat=4):
            exact = float(angular_factor(mode, *idx)) / math.pi
            assert abs(exact - angular_oracle(*idx, mode=mode)) < 1e-12


class TestSymmetries:
    @given(st.tuples(*[st.sampled_from(LABELS)] * 4))
    def test_pair_permutation(self, idx):
        i, j, k, m = idx
        v = entry(MIXED, i, j, k, m)
        assert entry(MIXED, j, i, k, m) == v
        assert entry(MIXED, i, j, m, k) == v
        assert entry(MIXED, k, m, i, j) == v

    @given(st.tuples(*[st.sampled_from(LABELS)] * 4))
    def test_pair_sign_flip(self, idx):
        i, j, k, m = idx
        assert entry(MIXED, neg(i), neg(j), neg(k), neg(m)) == entry(MIXED, i, j, k, m)

    @given(st.tuples(*[st.sampled_from(LABELS)] * 4))
    def test_selection_rule(self, idx):
        i, j, k, m = idx
        if mval(i) + mval(j) != mval(k) + mval(m):
            assert entry(MIXED, i, j, k, m) == 0

    def test_real_tensor(self):
        assert np.all(MIXED.tensor.imag == 0)

    def test_d_matrix(self):
        assert np.allclose(np.diag(MIXED.d_matrix).real, [SCAL.d2s] + [SCAL.d] * 5)
        assert np.count_nonzero(MIXED.d_matrix - np.diag(np.diag(MIXED.d_matrix))) == 0


class TestTwoDimensional:
    def test_dwave_pattern(self):
        t = c_tensor('dwave2d', GlCoefficients(c=1.0, d=1.0, dimension=2))
        xx, xy = 'x2-y2', 'xy'
        # int cos^4(2 phi) / pi^2 and int cos^2 sin^2 / pi^2
        assert entry(t, xx, xx, xx, xx).real == pytest.approx(3 / (4 * math.pi), rel=1e-15)
        assert entry(t, xy, xy, xy, xy).real == pytest.approx(3 / (4 * math.pi), rel=1e-15)
        for idx in itertools.product((xx, xy), repeat=4):
            if idx.count(xy) % 2:
                assert entry(t, *idx) == 0
            elif idx.count(xy) == 2:
                assert entry(t, *idx).real == pytest.approx(1 / (4 * math.pi), rel=1e-15)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            c_tensor('dwave2d', SCAL)


@pytest.fixture(scope='module')
def dwave():
    par = ModelParams(mu=2.0, temperature=0.1)
    par = par.replace(lam=lambda_l(par, 2))
    return par, rho_profile(par, 2)


class TestRadial:
    def test_golden(self, dwave, golden):
        par, rho = dwave
        ref = golden('gapspec')['gl_l2']
        co = radial_coeffs(par, rho)
        assert co.c == pytest.approx(float(ref['c']), rel=1e-9)
        assert co.d == pytest.approx(float(ref['d']), rel=1e-9)

    def test_same_profile(self, dwave):
        par, rho = dwave
        co = radial_coeffs(par, rho, rho_s=rho)
        for name in ('c1s', 'c2s', 'c4s'):
            assert getattr(co, name) == pytest.approx(co.c, rel=1e-10)
        assert co.d2s == pytest.approx(co.d, rel=1e-10)

    def test_sd_point_positive(self):
        mu, lam = find_sd_degeneracy(0.05)
        par = ModelParams(mu=mu, temperature=0.05, lam=lam)
        co = radial_coeffs(par, rho_profile(par, 2), rho_s=rho_profile(par, 0))
        assert all(getattr(co, k) > 0 for k in ('c', 'd', 'c1s', 'c2s', 'c4s', 'd2s'))
        assert co.quad_error < 1e-9

    def test_mixed_needs_profile(self, dwave):
        par, rho = dwave
        with pytest.raises(ValueError):
            c_tensor('mixed3d', radial_coeffs(par, rho))

    def test_profile_dimension(self, dwave):
        par, _ = dwave
        with pytest.raises(ValueError):
            radial_coeffs(par, shell_profile(par.replace(dimension=2), 2))


def test_json_export():
    d = json.loads(MIXED.to_json())
    assert d['labels'] == ['s', '-2', '-1', '0', '1', '2']
    assert np.array(d['c_tensor']['real']).shape == (6, 6, 6, 6)
    assert d['scalars']['c4s'] == SCAL.c4s
