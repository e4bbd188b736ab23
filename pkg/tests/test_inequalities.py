import math

import numpy as np
import pytest

from polarineq.circlequad import QuadratureSpec, cp_constant
from polarineq.families import (FamilySpec, Side, sample_unrestricted,
                                sample_zeros_inside, sample_zeros_outside)
from polarineq.inequalities import (HypothesisError, check_aziz_shah,
                                    check_bernstein, check_debruijn,
                                    check_lemma1, check_lemma2, check_lemma3,
                                    check_main_theorem,
                                    check_reciprocal_identity,
                                    check_theorem_A, check_theorem_B,
                                    check_theorem_B_printed, check_theorem_C,
                                    check_zygmund,
                                    circle_modulus_identity_margin,
                                    default_lemma2_majorant)
from polarineq.polycore import Polynomial, from_roots

FAST = QuadratureSpec(max_nodes=16384)


def rand_poly(rng, n):
    coeffs = (rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1)) / np.sqrt(2)
    coeffs[n] += 2.0
    return Polynomial(coeffs)


def monomial(n):
    return Polynomial([0] * n + [1])


class TestBernstein:
    def test_monomial_equality(self):
        r = check_bernstein(monomial(4), FAST)
        assert r.ratio == pytest.approx(1.0, abs=1e-9)
        assert r.satisfied and r.convention == "sup"

    def test_one_plus_z(self):
        r = check_bernstein(Polynomial([1, 1]), FAST)
        assert r.lhs == pytest.approx(1.0, rel=1e-10)
        assert r.rhs == pytest.approx(2.0, rel=1e-10)
        assert r.ratio == pytest.approx(0.5, rel=1e-9)

    def test_random_suite(self):
        rng = np.random.default_rng(0)
        for _ in range(60):
            r = check_bernstein(rand_poly(rng, int(rng.integers(1, 11))), FAST)
            assert r.satisfied


class TestZygmund:
    @pytest.mark.parametrize("p", [1.0, 2.0, 4.0])
    def test_scaled_monomial_equality(self, p):
        r = check_zygmund(2.7j * monomial(5), p)
        assert r.ratio == pytest.approx(1.0, abs=1e-10)

    def test_one_plus_z_p2_derived_values(self):
        # mean of |P|^2 is 2 and of |P'|^2 is 1, so lhs=1, rhs=sqrt(2)
        r = check_zygmund(Polynomial([1, 1]), 2.0)
        assert r.lhs == pytest.approx(1.0, rel=1e-12)
        assert r.rhs == pytest.approx(math.sqrt(2), rel=1e-12)
        assert r.ratio == pytest.approx(1 / math.sqrt(2), rel=1e-12)

    def test_random_suite(self):
        rng = np.random.default_rng(1)
        for _ in range(60):
            p = float(rng.choice([1.0, 2.0, 4.0]))
            r = check_zygmund(rand_poly(rng, int(rng.integers(1, 9))), p)
            assert r.satisfied


class TestAzizShah:
    def test_monomial_equality(self):
        r = check_aziz_shah(monomial(3), 2.0, FAST)
        assert r.lhs == pytest.approx(6.0, rel=1e-9)
        assert r.rhs == pytest.approx(6.0, rel=1e-9)

    def test_one_plus_z(self):
        r = check_aziz_shah(Polynomial([1, 1]), 3.0, FAST)
        assert r.satisfied
        # D_3(1+z) = 1+z + (3-z) = 4, sup = 4, rhs = 1*3*2 = 6
        assert r.lhs == pytest.approx(4.0, rel=1e-10)
        assert r.rhs == pytest.approx(6.0, rel=1e-10)

    def test_alpha_inside_disk_rejected(self):
        with pytest.raises(HypothesisError):
            check_aziz_shah(Polynomial([1, 1]), 0.5, FAST)

    def test_random_suite(self):
        rng = np.random.default_rng(2)
        for _ in range(40):
            alpha = (1 + 4 * rng.random()) * np.exp(1j * rng.uniform(0, 2 * np.pi))
            if abs(alpha) <= 1:
                continue
            r = check_aziz_shah(rand_poly(rng, int(rng.integers(1, 9))), alpha, FAST)
            assert r.satisfied


class TestTheoremA:
    def test_monomial_ratio(self):
        for alpha in (1.0, 2.0, 5.0):
            r = check_theorem_A(monomial(4), alpha, 2.0)
            assert r.ratio == pytest.approx(alpha / (alpha + 1), rel=1e-10)

    def test_alpha_one_case(self):
        assert check_theorem_A(Polynomial([1, 1]), 1.0, 2.0).satisfied

    def test_random_suite(self):
        rng = np.random.default_rng(3)
        for _ in range(40):
            alpha = (1 + 3 * rng.random()) * np.exp(1j * rng.uniform(0, 2 * np.pi))
            p = float(rng.choice([1.0, 2.0, 4.0]))
            r = check_theorem_A(rand_poly(rng, int(rng.integers(1, 9))), alpha, p)
            assert r.satisfied


class TestDeBruijn:
    def test_self_reciprocal_binomial_equality(self):
        # 1 + z^n is the L^2 extremal: ratio exactly 1
        for n in (2, 3, 5):
            r = check_debruijn(Polynomial([1] + [0] * (n - 1) + [1]), 2.0)
            assert r.ratio == pytest.approx(1.0, abs=1e-10)

    def test_shifted_binomial_power_ratio(self):
        # (1+z)^n at p=2 gives ratio sqrt(n/(2n-1)): the sup-norm extremal is
        # not the L^2 extremal
        for n in (2, 3, 5):
            r = check_debruijn(from_roots([-1] * n), 2.0)
            assert r.ratio == pytest.approx(math.sqrt(n / (2 * n - 1)), rel=1e-9)
            assert r.satisfied

    def test_one_plus_z_p1_equality(self):
        r = check_debruijn(Polynomial([1, 1]), 1.0)
        assert r.lhs == pytest.approx(2 * math.pi, rel=1e-10)
        assert r.rhs == pytest.approx(2 * math.pi, rel=1e-9)
        assert r.satisfied

    def test_vanishing_inside_rejected(self):
        with pytest.raises(HypothesisError, match="vanishes"):
            check_debruijn(Polynomial([0, 1]), 2.0)

    def test_random_outside_suite(self):
        spec = FamilySpec(n=6, K=1.0, side=Side.ZEROS_OUTSIDE_OPEN_DISK)
        for i, P in enumerate(sample_zeros_outside(spec, 40, 7).polynomials):
            r = check_debruijn(P, [1.0, 2.0, 4.0][i % 3])
            assert r.satisfied


class TestTheoremB:
    def test_corrected_form_random_suite(self):
        spec = FamilySpec(n=5, K=1.0, side=Side.ZEROS_OUTSIDE_OPEN_DISK)
        rng = np.random.default_rng(8)
        for P in sample_zeros_outside(spec, 40, 9).polynomials:
            alpha = (1 + 3 * rng.random()) * np.exp(1j * rng.uniform(0, 2 * np.pi))
            r = check_theorem_B(P, alpha, float(rng.choice([1.0, 2.0, 4.0])))
            assert r.satisfied

    def test_sharpness_probe_binomial(self):
        # 1+z is degree-1 a+bz^n form: equality for theorem B at p=2, alpha real
        r = check_theorem_B(Polynomial([1, 1]), 2.0, 2.0)
        assert r.ratio == pytest.approx(1.0, abs=1e-9)

    def test_printed_form_is_vacuous(self):
        # as printed both sides carry ||D_alpha P||: ratio is the constant
        # 1/(n (|alpha|+1) C_p) regardless of P
        rng = np.random.default_rng(10)
        for _ in range(5):
            n = int(rng.integers(1, 7))
            P = from_roots(1.0 + rng.random(n))
            alpha = 1.0 + 2 * rng.random()
            p = float(rng.choice([1.0, 2.0, 4.0]))
            r = check_theorem_B_printed(P, alpha, p)
            assert r.ratio == pytest.approx(1 / (n * (alpha + 1) * cp_constant(p)),
                                            rel=1e-12)
            assert r.satisfied  # n(|alpha|+1)C_p >= 2 C_p > 1


class TestTheoremC:
    def test_beta_zero_K_one_reduces_to_theorem_B(self):
        rng = np.random.default_rng(11)
        spec = FamilySpec(n=4, K=1.0, side=Side.ZEROS_OUTSIDE_OPEN_DISK)
        for P in sample_zeros_outside(spec, 10, 12).polynomials:
            alpha = (1 + 2 * rng.random()) * np.exp(1j * rng.uniform(0, 2 * np.pi))
            p = float(rng.choice([1.0, 2.0, 4.0]))
            rc = check_theorem_C(P, alpha, 0j, p, 1.0)
            rb = check_theorem_B(P, alpha, p)
            assert rc.rhs == rb.rhs  # bitwise: same arithmetic
            assert rc.lhs == pytest.approx(rb.lhs, rel=1e-14)

    def test_shifted_root_polynomial(self):
        r = check_theorem_C(from_roots([-0.5] * 4), 1.0, 1.0, 2.0, 0.5)
        assert r.satisfied and 0 < r.ratio < 1

    def test_random_suite_over_K(self):
        rng = np.random.default_rng(13)
        for K in (0.25, 0.5, 0.75, 1.0):
            spec = FamilySpec(n=5, K=K, side=Side.ZEROS_OUTSIDE_OPEN_DISK)
            for P in sample_zeros_outside(spec, 10, 14).polynomials:
                amod = K + (4 - K) * rng.random()
                alpha = amod * np.exp(1j * rng.uniform(0, 2 * np.pi))
                beta = rng.random() * np.exp(1j * rng.uniform(0, 2 * np.pi))
                r = check_theorem_C(P, alpha, beta, float(rng.choice([1.0, 2.0, 4.0])), K)
                assert r.satisfied

    def test_preconditions(self):
        P = from_roots([-1, -2])
        with pytest.raises(HypothesisError):
            check_theorem_C(P, 0.1, 0j, 2.0, 0.5)  # |alpha| < K
        with pytest.raises(HypothesisError):
            check_theorem_C(P, 1.0, 2.0, 2.0, 0.5)  # |beta| > 1
        with pytest.raises(HypothesisError):
            check_theorem_C(P, 1.0, 0j, 0.5, 0.5)  # p < 1


class TestMainTheorem:
    def test_mu_one_is_theorem_C_bit_for_bit(self):
        rng = np.random.default_rng(15)
        spec = FamilySpec(n=4, K=0.5, side=Side.ZEROS_OUTSIDE_OPEN_DISK)
        for P in sample_zeros_outside(spec, 10, 16).polynomials:
            alpha = (0.5 + 2 * rng.random()) * np.exp(1j * rng.uniform(0, 2 * np.pi))
            beta = rng.random() * np.exp(1j * rng.uniform(0, 2 * np.pi))
            p = float(rng.choice([1.0, 2.0, 4.0]))
            rm = check_main_theorem(P, alpha, beta, p, 0.5, 1)
            rc = check_theorem_C(P, alpha, beta, p, 0.5)
            assert rm.lhs == rc.lhs and rm.rhs == rc.rhs

    def test_lacunary_edge_binomial(self):
        P = Polynomial([0.5 ** 4, 0, 0, 0, 1])  # |a_0| = |a_n| K^n
        r = check_main_theorem(P, 1.0, 1.0, 2.0, 0.5, 4)
        assert r.satisfied and r.ratio < 1

    def test_shape_mismatch_rejected(self):
        with pytest.raises(HypothesisError, match="lacunary"):
            check_main_theorem(from_roots([-1] * 4), 1.0, 0j, 2.0, 1.0, 2)

    def test_bound_factor_monotone_in_mu(self):
        # (|alpha| - K^mu)/(K^mu + 1) is nondecreasing in mu for |alpha| >= K
        rng = np.random.default_rng(17)
        for _ in range(200):
            K = float(rng.uniform(0.05, 1.0))
            amod = K + 4 * rng.random()
            factors = [(amod - K ** mu) / (K ** mu + 1) for mu in range(1, 9)]
            assert all(a <= b + 1e-15 for a, b in zip(factors, factors[1:]))


class TestLemma1:
    def test_monomial_closed_forms(self):
        # |D_2 z^n| = 2n on the circle; printed bound n, proof bound n/2
        zn = monomial(3)
        rp = check_lemma1(zn, 2.0, 1.0, 1, "printed", FAST)
        assert rp.rhs == pytest.approx(6.0, rel=1e-12)
        assert rp.lhs == pytest.approx(3.0, rel=1e-12)
        rq = check_lemma1(zn, 2.0, 1.0, 1, "proof", FAST)
        assert rq.lhs == pytest.approx(1.5, rel=1e-12)
        assert rp.satisfied and rq.satisfied

    def test_alpha_on_boundary_trivial(self):
        r = check_lemma1(monomial(4), 0.5, 0.5, 1, "printed", FAST)
        assert r.lhs == 0.0 and r.satisfied

    def test_variant_disagreement_on_spec_probe(self):
        # P = (z - K) z^(n-1): the printed denominator K^mu fails while the
        # proof form survives (the typo-resolution experiment's core fact)
        rng = np.random.default_rng(19)
        printed_bad = proof_bad = 0
        for _ in range(60):
            n = int(rng.integers(2, 9))
            K = float(rng.choice([0.25, 0.5, 0.75]))
            P = from_roots([K] + [0] * (n - 1))
            alpha = (K + (4 - K) * rng.random()) * np.exp(1j * rng.uniform(0, 2 * np.pi))
            printed_bad += not check_lemma1(P, alpha, K, 1, "printed", FAST).satisfied
            proof_bad += not check_lemma1(P, alpha, K, 1, "proof", FAST).satisfied
        assert proof_bad == 0
        assert printed_bad > 0

    def test_unknown_variant(self):
        with pytest.raises(ValueError):
            check_lemma1(monomial(2), 2.0, 1.0, 1, "bogus", FAST)

    def test_outside_zero_rejected(self):
        with pytest.raises(HypothesisError):
            check_lemma1(from_roots([2.0]), 3.0, 1.0, 1, "proof", FAST)


class TestLemma2:
    def test_equal_pair_has_zero_margin(self):
        P = Polynomial([0.1, 0.2, 0.4])
        r = check_lemma2(P, P, 1.0, 0.5 + 0.5j, 0.8, 1, FAST)
        assert r.margin == 0.0 and r.satisfied

    def test_constant_minorant(self):
        # |c| <= min |Q| on |z|=K for Q = z^n
        r = check_lemma2(Polynomial([0.9 * 0.5 ** 3]), monomial(3), 1.0, 1.0, 0.5, 1, FAST)
        assert r.satisfied

    def test_scaled_minorant_suite(self):
        rng = np.random.default_rng(21)
        spec = FamilySpec(n=5, K=0.5, side=Side.ZEROS_INSIDE_CLOSED_DISK)
        for Q in sample_zeros_inside(spec, 20, 22).polynomials:
            eps = rng.uniform(0.05, 0.95)
            alpha = (0.5 + 2 * rng.random()) * np.exp(1j * rng.uniform(0, 2 * np.pi))
            beta = rng.random() * np.exp(1j * rng.uniform(0, 2 * np.pi))
            r = check_lemma2(eps * Q, Q, alpha, beta, 0.5, 1, FAST)
            assert r.satisfied

    def test_default_majorant_properties(self):
        # |Q| = |P| on |z| = K and Q's zeros are reflections into the disk
        from polarineq import polycore
        spec = FamilySpec(n=4, K=0.5, side=Side.ZEROS_OUTSIDE_OPEN_DISK)
        for P in sample_zeros_outside(spec, 5, 23).polynomials:
            Q = default_lemma2_majorant(P, 0.5)
            assert polycore.max_root_modulus(Q) <= 0.5 + 1e-8
            theta = 2 * np.pi * np.arange(256) / 256
            ring = 0.5 * np.exp(1j * theta)
            pv = np.abs(polycore.evaluate(P, ring))
            qv = np.abs(polycore.evaluate(Q, ring))
            assert np.max(np.abs(pv - qv)) <= 1e-10 * np.max(qv)
            r = check_lemma2(P, Q, 1.0, 0.7, 0.5, 1, FAST)
            assert r.satisfied

    def test_majorant_hypothesis_rejected(self):
        # |P| > |Q| somewhere on |z| = K must be a hypothesis failure
        with pytest.raises(HypothesisError, match=r"\|P\| <= \|Q\|"):
            check_lemma2(Polynomial([10.0]), monomial(3), 1.0, 0.5, 0.5, 1, FAST)


class TestLemma3:
    def test_self_reciprocal_equality(self):
        # P = 1 + z^n has Q = P; both sides equal 2 pi n^p int |P|^p
        r = check_lemma3(Polynomial([1, 0, 1]), 2.0)
        assert r.lhs == pytest.approx(32 * math.pi ** 2, rel=1e-10)
        assert r.rhs == pytest.approx(32 * math.pi ** 2, rel=1e-10)
        assert r.satisfied

    def test_constant_degenerate(self):
        r = check_lemma3(Polynomial([5.0]), 2.0)
        assert r.lhs == 0.0 and r.rhs == 0.0 and r.ratio == 0.0 and r.satisfied

    def test_p_zero_is_exact_equality(self):
        r = check_lemma3(Polynomial([1, 2, 3]), 0.0)
        assert r.lhs == pytest.approx(4 * math.pi ** 2, rel=1e-12)
        assert r.rhs == pytest.approx(4 * math.pi ** 2, rel=1e-12)

    def test_printed_form_without_two_pi_is_violated(self):
        r = check_lemma3(Polynomial([1, 0, 1]), 2.0, with_two_pi=False)
        assert r.lhs == pytest.approx(32 * math.pi ** 2, rel=1e-10)
        assert r.rhs == pytest.approx(16 * math.pi, rel=1e-10)
        assert not r.satisfied

    def test_vanishing_at_origin_rejected(self):
        with pytest.raises(HypothesisError, match="P\\(0\\)"):
            check_lemma3(Polynomial([0, 1, 1]), 2.0)

    def test_random_suite(self):
        rng = np.random.default_rng(25)
        spec1024 = QuadratureSpec(start_nodes=512, max_nodes=1024)
        for _ in range(12):
            n = int(rng.integers(1, 7))
            P = rand_poly(rng, n)
            r = check_lemma3(P, float(rng.choice([1.0, 2.0, 4.0])), True, spec1024)
            assert r.satisfied


class TestReciprocalIdentity:
    def test_monomial(self):
        r = check_reciprocal_identity(monomial(3))
        assert r.satisfied and r.lhs <= 1e-14

    def test_one_plus_z(self):
        assert check_reciprocal_identity(Polynomial([1, 1])).satisfied

    def test_random_suite(self):
        rng = np.random.default_rng(27)
        for _ in range(60):
            P = rand_poly(rng, int(rng.integers(1, 11)))
            r = check_reciprocal_identity(P)
            assert r.satisfied and r.lhs <= 1e-10
            assert circle_modulus_identity_margin(P) <= 1e-12


class TestInvariances:
    def test_scale_invariance_of_ratios(self):
        rng = np.random.default_rng(29)
        spec = FamilySpec(n=4, K=1.0, side=Side.ZEROS_OUTSIDE_OPEN_DISK)
        for P in sample_zeros_outside(spec, 10, 30).polynomials:
            c = complex(rng.standard_normal(), rng.standard_normal()) * 3
            if abs(c) < 0.1:
                c += 1.0
            r1 = check_debruijn(P, 2.0)
            r2 = check_debruijn(c * P, 2.0)
            assert r2.ratio == pytest.approx(r1.ratio, rel=1e-12)
            z1 = check_zygmund(P, 1.0)
            z2 = check_zygmund(c * P, 1.0)
            assert z2.ratio == pytest.approx(z1.ratio, rel=1e-12)

    def test_rotation_invariance(self):
        rng = np.random.default_rng(31)
        for _ in range(10):
            P = rand_poly(rng, int(rng.integers(1, 8)))
            gamma = rng.uniform(0, 2 * np.pi)
            rot = Polynomial([c * np.exp(1j * gamma * k)
                              for k, c in enumerate(P.coeffs)])
            b1, b2 = check_bernstein(P, FAST), check_bernstein(rot, FAST)
            assert b2.lhs == pytest.approx(b1.lhs, rel=1e-10)
            assert b2.rhs == pytest.approx(b1.rhs, rel=1e-10)
            z1, z2 = check_zygmund(P, 2.0), check_zygmund(rot, 2.0)
            assert z2.lhs == pytest.approx(z1.lhs, rel=1e-10)
            assert z2.rhs == pytest.approx(z1.rhs, rel=1e-10)


def test_report_serialization_round_trip():
    r = check_zygmund(Polynomial([1, 1]), 2.0)
    d = r.to_json_dict()
    assert d["name"] == "zygmund" and d["satisfied"] is True
    assert d["convention"] == "mean"
    assert len(d["quadrature"]) == 2
