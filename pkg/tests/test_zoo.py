import cmath
import itertools
import math

import numpy as np
import pytest

from rkboundary import zoo
from rkboundary.core import Domain, compose_maps, eval_kernel, inner
from rkboundary.errors import ConvergenceError, DomainError, PoleError
from rkboundary.numerics import NOT_PSD, gram
from rkboundary.sampling import quasi_random_sample

D = zoo.DISK


def _euler_maclaurin_zeta(s: complex, n: int = 2000) -> complex:
    """Independent oracle: partial sum plus Euler-Maclaurin tail."""
    head = sum(k ** -s for k in range(1, n))
    tail = n ** (1 - s) / (s - 1) + 0.5 * n ** -s + s * n ** (-s - 1) / 12 \
        - s * (s + 1) * (s + 2) * n ** (-s - 3) / 720
    return head + tail


class TestZeta:
    def test_closed_forms(self):
        assert abs(zoo.zeta_eval(2) - math.pi ** 2 / 6) < 1e-12
        assert abs(zoo.zeta_eval(4) - math.pi ** 4 / 90) < 1e-12
        assert abs(zoo.zeta_eval(3) - 1.2020569031595942) < 1e-12

    @pytest.mark.parametrize("s", [0.6, 0.75 + 3j, 1.2 + 10j, 0.6 + 30j, 2.5 - 4j, 1.0001])
    def test_against_euler_maclaurin(self, s):
        assert abs(zoo.zeta_eval(s) - _euler_maclaurin_zeta(s)) < 1e-10

    @pytest.mark.parametrize("s", [0.6, 0.75 + 3j, 1.2 + 10j, 0.6 + 30j])
    def test_against_mpmath(self, s):
        mpmath = pytest.importorskip("mpmath")
        assert abs(zoo.zeta_eval(s) - complex(mpmath.zeta(s))) < 1e-10

    def test_errors(self):
        with pytest.raises(PoleError):
            zoo.zeta_eval(1 + 1e-8)
        with pytest.raises(DomainError):
            zoo.zeta_eval(0.5)

    def test_convergence_error_when_budget_tiny(self, monkeypatch):
        monkeypatch.setattr(zoo, "ZETA_MAX_TERMS", 64)
        with pytest.raises(ConvergenceError):
            zoo.zeta_eval(0.51 + 200j)


class TestNatMatrix:
    def test_entries(self):
        assert zoo.nat_matrix_eval(1, 1) == 1
        assert zoo.nat_matrix_eval(3, 3) == 3
        assert zoo.nat_matrix_eval(2, 5) == 1

    def test_leading_minors_positive(self):
        for n in range(1, 9):
            M = np.array([[zoo.nat_matrix_eval(i, j) for j in range(1, n + 1)] for i in range(1, n + 1)])
            # det = prod_{i>=2}(i - 1) by subtracting the first row
            assert np.linalg.det(M) == pytest.approx(math.factorial(n - 1), rel=1e-10)
            assert np.linalg.det(M) > 0


class TestDbr:
    def test_values(self):
        assert zoo.db_rovnyak_eval(0, 0) == pytest.approx(0.75)
        for n in (10, 20, 30):
            assert zoo.db_rovnyak_eval(0, 1 - 2.0 ** -n) == pytest.approx(0.5, abs=2.0 ** -n)

    def test_hermitian(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            z, w = 0.95 * rng.uniform(0, 1, 2) * np.exp(2j * np.pi * rng.uniform(0, 1, 2))
            assert zoo.db_rovnyak_eval(z, w) == pytest.approx(np.conj(zoo.db_rovnyak_eval(w, z)), rel=1e-13)


class TestCatalog:
    def test_labels_roundtrip(self):
        for label, k in zoo.catalog_kernels().items():
            assert k.label == label
        for label, m in zoo.catalog_maps().items():
            assert zoo.parse_map(label).label == m.label

    def test_bad_labels(self):
        for bad in ("nope", "szego_pow", "da_pow:2", "szego:1"):
            with pytest.raises(ValueError):
                zoo.parse_kernel(bad)
        for bad in ("nope", "hartz", "mobius:2"):
            with pytest.raises(ValueError):
                zoo.parse_map(bad)

    def test_complex_literals(self):
        assert zoo.parse_complex("1+0i") == 1
        assert zoo.parse_complex("-0.5i") == -0.5j
        assert zoo.parse_complex("0.3") == 0.3
        assert zoo.parse_vector("0.6+0i,0.8i") == (0.6, 0.8j)

    def test_catalog_psd_smoke(self):
        for label, k in zoo.catalog_kernels().items():
            if label == "nat_matrix":
                continue
            S = quasi_random_sample(k.domain, 12, seed=11)
            assert gram(k, S).verdict != NOT_PSD, label

    def test_hermitian_100_pairs(self):
        for label, k in zoo.catalog_kernels().items():
            S = list(quasi_random_sample(k.domain, 20, seed=5))
            for x, y in itertools.islice(itertools.product(S, S), 100):
                a, b = eval_kernel(k, x, y), eval_kernel(k, y, x)
                assert abs(a - b.conjugate()) <= 1e-12 * (1 + abs(a)), label

    def test_da_pow_matches_power_of_da(self):
        k, d = zoo.da_pow(2, 0.5), zoo.drury_arveson(2)
        S = quasi_random_sample(k.domain, 6, seed=2)
        for x in S:
            for y in S:
                assert eval_kernel(k, x, y) == pytest.approx(cmath.sqrt(eval_kernel(d, x, y)), rel=1e-13)


class TestMaps:
    def test_mobius_identity(self):
        rng = np.random.default_rng(4)
        for a in (0.5, 0.3 - 0.6j):
            m = zoo.mobius(a)
            for _ in range(20):
                z, w = 0.95 * rng.uniform(0, 1, 2) * np.exp(2j * np.pi * rng.uniform(0, 1, 2))
                pz, pw = m(D.point(z)).z, m(D.point(w)).z
                lhs = 1 - pz * pw.conjugate()
                rhs = (1 - abs(a) ** 2) * (1 - z * np.conj(w)) / ((1 - z * np.conj(a)) * (1 - a * np.conj(w)))
                assert abs(lhs - rhs) <= 1e-12 * abs(rhs)

    def test_mobius_involution(self):
        m = zoo.mobius(0.4 + 0.1j)
        mm = compose_maps(m, m)
        assert mm(D.point(0.3 - 0.2j)).z == pytest.approx(0.3 - 0.2j, abs=1e-14)

    def test_hartz_self_map(self):
        rng = np.random.default_rng(7)
        for alpha in (0.3, 0.5, 0.9):
            for zeta in (1, cmath.exp(1j)):
                h = zoo.hartz(alpha, zeta)
                for z in 0.999 * np.sqrt(rng.uniform(0, 1, 200)) * np.exp(2j * np.pi * rng.uniform(0, 1, 200)):
                    assert abs(h.raw(D.point(z))[0]) < 1

    def test_halfway_closed_form(self):
        h = zoo.halfway()
        for z0 in (0, -0.5, 0.3j):
            x = D.point(z0)
            for n in range(1, 30):
                x = h(x)
                assert abs(x.z - (1 - (1 - z0) / 2 ** n)) < 1e-12

    def test_polydisk_product_identity(self):
        ident = zoo.identity()
        m = zoo.polydisk_product([ident, ident, ident])
        P = Domain.polydisk(3)
        x = P.point(0.1, -0.5j, 0.7)
        assert m(x).coords == x.coords

    def test_polydisk_product_permutes(self):
        m = zoo.polydisk_product([zoo.square(), zoo.halfway()], (1, 0))
        y = m(Domain.polydisk(2).point(0.5, 0.0))
        assert y.coords == (0.5, 0.25)

    def test_ball_hartz(self):
        zeta = (0.6, 0.8j)
        m = zoo.ball_hartz(2, 0.5, zeta)
        B = Domain.unit_ball(2)
        x = B.point(0.3, 0.1j)
        assert m(x).z == pytest.approx(1 - (1 - inner(x.coords, zeta)) ** 0.5)

    def test_square_outside(self):
        with pytest.raises(DomainError):
            zoo.mobius(1.2)
