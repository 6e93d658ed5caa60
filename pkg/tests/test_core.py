import cmath
import math

import numpy as np
import pytest

from rkboundary import zoo
from rkboundary.core import (
    Domain,
    Kernel,
    Point,
    compose_kernel,
    diagonal,
    eval_kernel,
    exp_kernel,
    normalized_section,
    ones_kernel,
    p_metric,
    power_kernel,
    product_kernel,
    quotient_kernel,
    zero_kernel,
)
from rkboundary.errors import (
    BranchError,
    DegenerateError,
    DivisionError,
    DomainError,
    HermitianError,
    KernelOverflowError,
)
from rkboundary.numerics import gram
from rkboundary.sampling import quasi_random_sample

D = Domain.unit_disk()


def pt(z):
    return D.point(z)


class TestDomain:
    def test_ball_one_matches_disk(self):
        ball = Domain.unit_ball(1)
        rng = np.random.default_rng(0)
        for z in 1.2 * (rng.uniform(-1, 1, 100) + 1j * rng.uniform(-1, 1, 100)):
            assert ball.contains((z,)) == D.contains((z,))

    def test_strict_membership(self):
        assert not D.contains((1.0,))
        assert not Domain.half_plane().contains((0.5,))
        assert Domain.half_plane().contains((0.5 + 1e-9,))
        assert Domain.ray().contains((0.0,))
        assert not Domain.ray().contains((-1e-9,))
        assert Domain.naturals().contains((3,))
        assert not Domain.naturals().contains((0,))
        assert not Domain.naturals().contains((2.5,))
        assert not Domain.polydisk(2).contains((0.2, 1.0))

    def test_point_rejects_outside(self):
        with pytest.raises(DomainError):
            D.point(1.0)
        with pytest.raises(DomainError):
            Domain.unit_ball(2).point(0.1)

    def test_boundary_point_skips_check(self):
        assert D.boundary_point(1).coords == (1 + 0j,)
        assert Domain.ray().boundary_point(math.inf).coords == (math.inf,)


class TestEval:
    def test_szego_values(self):
        k = zoo.szego()
        assert eval_kernel(k, pt(0), pt(0)) == 1
        assert eval_kernel(k, pt(0.5), pt(0.5)) == pytest.approx(4 / 3, abs=1e-15)

    def test_min_kernel(self):
        k = zoo.min_ray()
        r = Domain.ray()
        assert eval_kernel(k, r.point(2), r.point(3)) == 2

    def test_membership_enforced(self):
        k = zoo.szego()
        with pytest.raises(DomainError):
            eval_kernel(k, pt(0), Point((1.0 + 0j,), D))

    def test_diagonal_clamped_real(self):
        k = Kernel(lambda x, y: 2 + 1e-14j, D, "nearly-real")
        assert eval_kernel(k, pt(0.1), pt(0.1)) == 2 + 0j

    def test_diagonal_imaginary_raises(self):
        k = Kernel(lambda x, y: 2 + 1e-6j, D, "bad")
        with pytest.raises(HermitianError):
            eval_kernel(k, pt(0.1), pt(0.1))

    def test_hermitian_symmetry_catalog(self):
        rng = np.random.default_rng(1)
        for label, k in zoo.catalog_kernels().items():
            S = quasi_random_sample(k.domain, 15, seed=int(rng.integers(1000)))
            for x in S:
                for y in list(S)[:7]:
                    a, b = eval_kernel(k, x, y), eval_kernel(k, y, x)
                    assert abs(a - b.conjugate()) <= 1e-12 * (1 + abs(a)), label

    def test_normalization(self):
        for k in (zoo.szego(), zoo.szego_pow(0.7), zoo.drury_arveson(3), zoo.polydisk_hardy(2)):
            S = quasi_random_sample(k.domain, 20, seed=2)
            for x in S:
                assert eval_kernel(k, x, k.normalization_point) == pytest.approx(1, abs=1e-14)


class TestCombinators:
    def test_product_equals_square_power(self):
        k = zoo.szego()
        p, q = product_kernel(k, k), power_kernel(k, 2)
        for z, w in [(0.3, 0.4), (0.5j, -0.2), (0.9, 0.9)]:
            assert eval_kernel(p, pt(z), pt(w)) == pytest.approx(eval_kernel(q, pt(z), pt(w)), rel=1e-13)
        assert eval_kernel(q, pt(0.3), pt(0.4)) == pytest.approx(1 / (1 - 0.12) ** 2, rel=1e-14)

    def test_product_with_ones(self):
        k = zoo.dbr_half()
        p = product_kernel(k, ones_kernel(D))
        assert eval_kernel(p, pt(0.2j), pt(0.4)) == eval_kernel(k, pt(0.2j), pt(0.4))

    def test_product_random_pairs(self):
        a, b = zoo.szego_pow(0.5), zoo.dirichlet_log()
        p = product_kernel(a, b)
        rng = np.random.default_rng(5)
        for _ in range(5):
            z, w = [0.9 * r * cmath.exp(2j * math.pi * t) for r, t in rng.uniform(0, 1, (2, 2))]
            assert eval_kernel(p, pt(z), pt(w)) == pytest.approx(
                eval_kernel(a, pt(z), pt(w)) * eval_kernel(b, pt(z), pt(w)), rel=1e-14)

    def test_product_domain_mismatch(self):
        with pytest.raises(DomainError):
            product_kernel(zoo.szego(), zoo.min_ray())

    def test_power_one_is_identity(self):
        k = zoo.dbr_half()
        q = power_kernel(k, 1)
        assert eval_kernel(q, pt(0.1), pt(-0.3j)) == eval_kernel(k, pt(0.1), pt(-0.3j))

    def test_power_branch_error(self):
        neg = Kernel(lambda x, y: -1 + 0j, D, "neg")
        with pytest.raises(BranchError):
            eval_kernel(power_kernel(neg, 0.5), pt(0.1), pt(0.2))

    def test_compose(self):
        k = zoo.szego()
        assert eval_kernel(compose_kernel(k, zoo.square()), pt(0.5), pt(0.5)) == pytest.approx(1 / (1 - 0.0625))
        c = compose_kernel(k, zoo.constant_map(0))
        assert eval_kernel(c, pt(0.3), pt(-0.7j)) == 1
        ident = compose_kernel(k, zoo.identity())
        assert eval_kernel(ident, pt(0.3), pt(0.2j)) == eval_kernel(k, pt(0.3), pt(0.2j))

    def test_compose_gram_equals_image_gram(self):
        k, phi = zoo.szego_pow(0.5), zoo.hartz(0.5)
        S = quasi_random_sample(D, 10, seed=4)
        G1 = gram(compose_kernel(k, phi), S).matrix
        G2 = np.array([[eval_kernel(k, phi(x), phi(y)) for y in S] for x in S])
        assert np.array_equal(G1, G2)

    def test_compose_domain_mismatch(self):
        with pytest.raises(DomainError):
            compose_kernel(zoo.min_ray(), zoo.square())

    def test_quotient_self_is_one(self):
        k = zoo.szego_pow(0.5)
        q = quotient_kernel(k, k)
        for x in quasi_random_sample(D, 10, seed=1):
            assert abs(eval_kernel(q, x, pt(0.4j)) - 1) <= 1e-14

    def test_quotient_by_automorphism(self):
        a = 0.3 + 0.2j
        k = zoo.szego()
        q = quotient_kernel(k, compose_kernel(k, zoo.mobius(a)))
        for z, w in [(0.1, 0.5j), (-0.6, 0.2 + 0.2j)]:
            # (1 - psi(z) conj(psi(w))) / (1 - z conj(w)), by the automorphism identity
            want = (1 - abs(a) ** 2) / ((1 - z * a.conjugate()) * (1 - a * w.conjugate()))
            assert eval_kernel(q, pt(z), pt(w)) == pytest.approx(want, rel=1e-12)

    def test_quotient_division_error(self):
        with pytest.raises(DivisionError):
            eval_kernel(quotient_kernel(zoo.szego(), zero_kernel(D)), pt(0), pt(0))

    def test_dbr_is_quotient(self):
        num = Kernel(lambda x, y: 1 - (x.z + 1) / 2 * ((y.z + 1) / 2).conjugate(), D, "num")
        inv = Kernel(lambda x, y: 1 - x.z * y.z.conjugate(), D, "inv")
        q = quotient_kernel(num, inv)
        for z, w in [(0.1, 0.5j), (-0.6, 0.2 + 0.2j)]:
            assert eval_kernel(q, pt(z), pt(w)) == pytest.approx(eval_kernel(zoo.dbr_half(), pt(z), pt(w)))

    def test_exp(self):
        assert eval_kernel(exp_kernel(zero_kernel(D)), pt(0.3), pt(0.1)) == 1
        r = Domain.ray()
        assert eval_kernel(exp_kernel(zoo.min_ray()), r.point(1), r.point(1)) == pytest.approx(math.e)
        big = Kernel(lambda x, y: 701.0 + 0j, D, "big")
        with pytest.raises(KernelOverflowError):
            eval_kernel(exp_kernel(big), pt(0), pt(0))

    def test_exp_szego_psd(self):
        S = quasi_random_sample(D, 10, seed=8)
        assert gram(exp_kernel(zoo.szego()), S).verdict != "NotPSD"


class TestSectionsAndMetric:
    def test_normalized_section(self):
        k = zoo.szego()
        s0 = normalized_section(k, pt(0))
        assert s0(pt(0.7j)) == pytest.approx(1)
        x = pt(0.9)
        s = normalized_section(k, x)
        assert s(x) == pytest.approx(math.sqrt(diagonal(k, x)))
        assert s(pt(0)) == pytest.approx(0.435889894354, rel=1e-11)

    def test_normalized_section_degenerate(self):
        with pytest.raises(DegenerateError):
            normalized_section(zero_kernel(D), pt(0.2))

    def test_p_metric_literal(self):
        k = zoo.szego()
        want = math.sqrt(1 - 1 / math.sqrt(4 / 3))
        assert p_metric(k, pt(0), pt(0.5)) == pytest.approx(want, rel=1e-14)
        assert p_metric(k, pt(0), pt(0)) == 0
        assert p_metric(k, pt(0.3), pt(-0.2j)) == p_metric(k, pt(-0.2j), pt(0.3))

    def test_p_metric_literal_diagonal_above_one(self):
        # k(x,x) > 1 makes the literal radicand 1 - k(x,x) negative even at x = y
        with pytest.raises(DegenerateError):
            p_metric(zoo.szego(), pt(0.3), pt(0.3))

    def test_p_metric_literal_degenerate(self):
        # the printed formula is not scale invariant: radicand below zero
        with pytest.raises(DegenerateError):
            p_metric(zoo.szego(), pt(0.9), pt(0.91))

    def test_p_metric_squared_is_pseudo_hyperbolic(self):
        k = zoo.szego()
        for z, w in [(0.3, -0.4j), (0.9, 0.2 + 0.1j)]:
            rho = abs(z - w) / abs(1 - complex(w).conjugate() * z)
            assert p_metric(k, pt(z), pt(w), squared=True) == pytest.approx(rho, rel=1e-10)

    def test_p_metric_vanishing_diagonal(self):
        with pytest.raises(DegenerateError):
            p_metric(zero_kernel(D), pt(0.1), pt(0.2))
