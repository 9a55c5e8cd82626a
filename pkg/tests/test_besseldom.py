import csv
import io

import numpy as np
import pytest

from bcsgl.besseldom import (CertificateError, certificate_margin, dominance_windows, curve_csv,
                             intersection_z, rounded_l1, max_amplitude, verify_first_max_dominance,
                             verify_neighbor_dominance)
from bcsgl.specfun import bessel_j_half, first_extremum, modulus_m


def j2(l, x):
    return np.asarray(bessel_j_half(l, x)) ** 2


class TestFirstMax:
    def test_l0_zero(self):
        cert = verify_first_max_dominance(0)
        assert cert.l1 is None
        assert cert.tail_bound == pytest.approx(max_amplitude(1), rel=1e-15)
        assert cert.epsilon > 0
        assert cert.interval[0] < first_extremum(0, 'max') < cert.interval[1]

    def test_l0_two_golden(self, golden):
        ref = golden('besseldom')['first_max_l2']
        cert = verify_first_max_dominance(2)
        want = ref['certificate']
        assert cert.interval == pytest.approx(tuple(want['interval']), abs=1e-12)
        assert cert.epsilon == pytest.approx(want['epsilon'], rel=1e-9)
        assert cert.interval[0] < cert.x0 < cert.interval[1]
        # the high-precision margin against all orders is at least the witness margin
        assert float(ref['true_margin']) >= cert.epsilon

    @pytest.mark.parametrize('l0', [1, 5, 12, 20])
    def test_invariants(self, l0):
        cert = verify_first_max_dominance(l0)
        a, b = cert.interval
        assert a < cert.x0 < b and cert.epsilon > 0
        xs = np.linspace(a, b, 501)
        assert np.all(cert.tail_bound < j2(l0, xs) - cert.epsilon)

    def test_soundness_on_fresh_grid(self):
        for l0 in range(0, 21):
            cert = verify_first_max_dominance(l0)
            assert certificate_margin(cert, n=10_000) >= cert.epsilon

    def test_direct_check_all_orders(self):
        # bound-free recheck against every order up to 60
        for l0 in (3, 8, 15):
            cert = verify_first_max_dominance(l0)
            xs = np.linspace(*cert.interval, 2001)
            others = np.max([j2(l, xs) for l in range(61) if l != l0], axis=0)
            assert np.min(j2(l0, xs) - others) > cert.epsilon

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            verify_first_max_dominance(-1)
        with pytest.raises(ValueError):
            verify_first_max_dominance(3, L_probe=4)


class TestLemmaL1:
    @pytest.mark.parametrize('c', [0.5, 0.65, 0.8])
    def test_l0_eleven(self, c):
        l1, checks = rounded_l1(11, c)
        m0 = 11.5
        assert l1 == int(round(m0 - c * m0 ** (1 / 3) - 0.5))
        assert checks['amplitude'] and checks['zero']
        x0 = first_extremum(11, 'max')
        assert j2(11, x0) > modulus_m(l1, x0) ** 2
        assert first_extremum(l1, 'zero') > x0


class TestNeighbor:
    @pytest.mark.parametrize('l0', range(1, 11))
    def test_residual(self, l0):
        res, cert = verify_neighbor_dominance(l0)
        assert res < 1e-11
        assert cert.epsilon > 0 and cert.interval[0] < cert.x0 < cert.interval[1]
        assert certificate_margin(cert, n=10_000) >= cert.epsilon

    def test_l1_covers_even_orders(self):
        _, cert = verify_neighbor_dominance(1)
        xs = np.linspace(*cert.interval, 2001)
        floor = np.minimum(j2(0, xs), j2(2, xs))
        for l in (4, 6, 8, 10):
            assert np.all(j2(l, xs) < floor - cert.epsilon)
        # orders above the probe range sit below the uniform bound
        assert cert.tail_bound >= max_amplitude(cert.l_checked + 1)
        assert np.all(cert.tail_bound < floor - cert.epsilon)

    def test_l3_golden(self, golden):
        ref = golden('besseldom')['neighbor_l3']
        res, cert = verify_neighbor_dominance(3)
        assert cert.interval == pytest.approx(tuple(ref['certificate']['interval']), abs=1e-12)
        assert cert.epsilon == pytest.approx(ref['certificate']['epsilon'], rel=1e-9)
        assert float(ref['true_margin']) >= cert.epsilon

    def test_l0_floor(self):
        with pytest.raises(ValueError):
            verify_neighbor_dominance(0)


class TestIntersection:
    @pytest.mark.parametrize('l', range(1, 11))
    def test_first_maximum(self, l):
        assert abs(intersection_z(l) - first_extremum(l, 'max')) < 1e-10

    def test_l2_bisection(self, golden):
        assert intersection_z(2) == pytest.approx(float(golden('besseldom')['intersection_l2']), abs=1e-10)

    @pytest.mark.parametrize('l', [1, 4, 9])
    def test_positive_before(self, l):
        z = intersection_z(l)
        xs = np.linspace(z / 1000, z, 1000)
        for k in (l - 1, l, l + 1):
            assert np.all(np.asarray(bessel_j_half(k, xs)) > 0)

    def test_l0_rejected(self):
        with pytest.raises(ValueError):
            intersection_z(0)


class TestAmplitudes:
    def test_golden(self, golden):
        for l, v in golden('besseldom')['max_amplitude'].items():
            assert max_amplitude(int(l)) == pytest.approx(float(v), rel=1e-12)

    def test_strictly_decreasing(self):
        amps = [max_amplitude(l) for l in range(21)]
        assert all(a - b > 0 for a, b in zip(amps, amps[1:]))


class TestFigure:
    def test_csv_shape(self):
        rows = list(csv.reader(io.StringIO(curve_csv(l_max=3, n=101))))
        assert rows[0] == ['x', 'l', 'J2']
        assert len(rows) == 1 + 4 * 101
        x, l, v = rows[1 + 101 + 5]
        assert float(v) == pytest.approx(float(j2(1, float(x))), rel=1e-15)

    def test_every_order_has_a_window(self):
        wins = dominance_windows()
        for l, w in wins.items():
            assert w is not None, l
            assert w[0] <= first_extremum(l, 'max') <= w[1]


def test_certificate_error_type():
    assert issubclass(CertificateError, RuntimeError)


def test_to_dict():
    d = verify_first_max_dominance(4).to_dict()
    assert set(d) == {'l0', 'x0', 'interval', 'epsilon', 'l_checked', 'tail_bound', 'l1', 'kind'}
    assert isinstance(d['interval'], list)
