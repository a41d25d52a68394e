import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st
from sympy import primerange

from rrpfermat.arith import v_p
from rrpfermat.frey import (
    PreconditionError,
    build_frey_55p,
    build_frey_rrp,
    classify_reduction,
    classify_reduction_all,
    f_k,
    frey_rrp_from_ABC,
    frey_rrp_from_indices,
    j_from_mu,
    j_valuation_check_55p,
    j_valuation_check_rrp,
    legendre_identities,
    legendre_j,
    mu_case_check,
    phi5_congruence,
    phi_r_eval,
    phi_r_sum,
    shared_primes_apb_phi5,
    verify_coprimality,
    weierstrass_invariants,
)
from rrpfermat.numfield import element_valuation, primes_above, real_cyclotomic, splitting_type

from oracles import weierstrass_disc_c4

small = st.integers(-50, 50)
nonzero_rationals = st.fractions(min_value=-100, max_value=100, max_denominator=50).filter(lambda x: x not in (0, 1))


class TestPhi:
    def test_examples(self):
        assert phi_r_eval(1, 1, 5) == 1
        assert phi_r_eval(1, 0, 7) == 1
        assert phi_r_eval(2, 1, 5) == 11

    @given(small, small, st.sampled_from([5, 7, 11]))
    def test_closed_forms_agree(self, a, b, r):
        assume(a + b != 0)
        assert phi_r_eval(a, b, r) == phi_r_sum(a, b, r)
        assert phi_r_eval(a, b, r) * (a + b) == a**r + b**r


class TestWeierstrass55P:
    def test_examples(self):
        E = build_frey_55p(1, 0)
        assert (E.discriminant, E.c4, E.j) == (2000, 160, 2048)
        assert build_frey_55p(1, 1).discriminant == 32000
        with pytest.raises(ValueError, match="singular curve"):
            build_frey_55p(1, -1)

    @settings(max_examples=300)
    @given(small, small)
    def test_closed_forms_match_standard_formulas(self, a, b):
        assume(a + b != 0 and a**5 + b**5 != 0)
        E = build_frey_55p(a, b)
        a2, a4 = E.a2.to_rational(), E.a4.to_rational()
        w = weierstrass_invariants(a2=a2, a4=a4)
        d, c4 = weierstrass_disc_c4(a2, a4)
        assert E.discriminant == w.discriminant == d
        assert E.c4 == w.c4 == c4
        assert E.j * E.discriminant == E.c4**3

    def test_reduction_examples(self):
        E = build_frey_55p(1, 2)
        v = classify_reduction(E, 11)
        assert v.type == "multiplicative" and v.v_delta == 2
        # with d = 33 recorded on the curve, 11 | d puts 11 in the excluded set
        with pytest.raises(ValueError, match="excluded prime"):
            classify_reduction(build_frey_55p(1, 2, c=1, d=33, p=5), 11)
        assert element_valuation(E.c4, primes_above(11, E.field)[0]) == 0
        assert classify_reduction(E, 7).type == "good"
        with pytest.raises(ValueError, match="excluded prime"):
            classify_reduction(E, 2)

    @given(small, small, st.sampled_from(list(primerange(7, 60))))
    def test_multiplicative_means_q_divides_delta_not_c4(self, a, b, q):
        assume(a + b != 0 and a**5 + b**5 != 0 and math.gcd(a, b) == 1)
        E = build_frey_55p(a, b)
        v = classify_reduction(E, q, p=7)
        if v.type == "multiplicative":
            assert v.v_delta > 0 and v.v_c4 == 0
        elif v.type == "good":
            assert v.v_delta == 0


class TestCongruenceLemma:
    @settings(max_examples=300)
    @given(small, st.sampled_from(list(primerange(2, 98))), st.integers(-20, 20))
    def test_phi5_congruence(self, a, q, k):
        b = q * k - a
        assert (a + b) % q == 0
        assert phi5_congruence(a, b, q)

    def test_no_shared_prime_outside_5(self):
        for a in range(-30, 31):
            for b in range(-30, 31):
                if math.gcd(a, b) != 1 or a + b == 0:
                    continue
                assert shared_primes_apb_phi5(a, b, 97) == []


class TestFreyRRP:
    @settings(max_examples=100)
    @given(st.integers(-40, 40), st.integers(-40, 40))
    def test_relation_and_discriminant(self, a, b):
        assume(a * b * (a + b) != 0)
        F = real_cyclotomic(5)
        E = frey_rrp_from_indices(a, b, 5, 0, 1, 2)
        assert E.A + E.B + E.C == 0
        assert E.discriminant == 16 * (E.A * E.B * E.C) ** 2
        assert E.j * E.discriminant == E.c4**3
        # true c4 is the negative of the symmetric expression
        assert E.c4 == -E.c4_symmetric
        assert E.c4 == 16 * (E.A**2 + E.A * E.B + E.B**2)
        assert E.field == F

    @settings(max_examples=60)
    @given(st.integers(-30, 30), st.integers(-30, 30), st.sampled_from([5, 7]))
    def test_invariants_match_standard_formulas(self, a, b, r):
        assume(a * b * (a + b) != 0)
        E = frey_rrp_from_indices(a, b, r, 0, 1, 2)
        w = weierstrass_invariants(a2=E.a2, a4=E.a4)
        assert w.discriminant == E.discriminant
        assert w.c4 == E.c4

    def test_two_torsion_roots(self):
        E = frey_rrp_from_ABC(3, 5)
        for x0 in E.two_torsion_x:
            assert x0 * (x0 - E.A) * (x0 + E.B) == 0

    def test_f0_is_square_of_a_plus_b(self):
        F = real_cyclotomic(7)
        assert f_k(2, 3, 0, F) == F(25)

    def test_build_selects_index_divisible_by_prime(self):
        F = real_cyclotomic(5)
        P = splitting_type(2, F)
        E = build_frey_rrp(1, 1, 5, P)
        k1 = E.indices[0]
        assert element_valuation(f_k(1, 1, k1, F), P) > 0
        assert E.indices[1:] == tuple(k for k in range(3) if k != k1)[:2]

    def test_build_rejects_trivial(self):
        F = real_cyclotomic(5)
        P = splitting_type(2, F)
        with pytest.raises(ValueError, match="construction precondition violated"):
            build_frey_rrp(1, -1, 5, P)
        with pytest.raises(ValueError, match="construction precondition violated"):
            build_frey_rrp(1, 2, 5, P)  # 2 divides no f_k(1, 2)

    def test_singular(self):
        with pytest.raises(ValueError, match="singular curve"):
            frey_rrp_from_ABC(1, -1)


class TestCoprimality:
    def test_example_r5(self):
        rep = verify_coprimality(1, 2, 1, 5, 33)
        assert rep.ok and rep.primitive

    def test_a_equals_b(self):
        rep = verify_coprimality(1, 1, 1, 5, 2)
        assert rep.primitive
        assert all(not pc.shared for pc in rep.f_pairs)

    def test_non_primitive_flagged(self):
        rep = verify_coprimality(2, 4, 2, 5, 33)
        assert not rep.primitive and not rep.ok

    def test_trivial_rejected(self):
        with pytest.raises(ValueError):
            verify_coprimality(0, 1, 1, 5, 1)

    @settings(max_examples=40)
    @given(st.integers(1, 30), st.integers(1, 30))
    def test_f_pairs_coprime_outside_rd_for_primitive_pairs(self, a, b):
        assume(math.gcd(a, b) == 1)
        d = 1
        rep = verify_coprimality(a, b, 1, 7, d)
        assert all(not pc.shared for pc in rep.f_pairs)


class TestJValuations:
    def test_rrp_constructed_instance(self):
        # v(A) = 5 at 2, B odd, C odd: v(j) = 8 - 10 = -2
        E = frey_rrp_from_ABC(32, 1)
        chk = j_valuation_check_rrp(E, 2, 5)
        assert chk.v_j == -2 and chk.case == "P|A" and chk.formula_holds and chk.ok

    @given(st.integers(3, 12), st.integers(-200, 200))
    def test_rrp_formula(self, k, b):
        assume(b % 2 != 0)
        E = frey_rrp_from_ABC(2**k, b)
        p = 2 * k + 1
        chk = j_valuation_check_rrp(E, 2, max(p, 5))
        assert chk.v_j == 8 - 2 * k
        assert chk.formula_holds

    def test_rrp_precondition(self):
        E = frey_rrp_from_ABC(32, 1)
        with pytest.raises(PreconditionError):
            j_valuation_check_rrp(E, 2, 3)

    def test_55p_example(self):
        E = build_frey_55p(1, 31, c=1, d=32)
        chk = j_valuation_check_55p(E, 2, 13)
        assert chk.v_j == -12 and chk.case == "P|a+b" and chk.ok

    def test_55p_boundary(self):
        E = build_frey_55p(1, 15, c=1, d=16)
        with pytest.raises(PreconditionError):
            j_valuation_check_55p(E, 2, 13)


class TestLegendre:
    def test_examples(self):
        for lam in (2, -1, Fraction(1, 2)):
            chk = legendre_identities(lam)
            assert chk.equal and chk.j_lambda == 1728

    @pytest.mark.parametrize("lam", [0, 1])
    def test_degenerate(self, lam):
        with pytest.raises(ValueError, match="degenerate Legendre parameter"):
            legendre_j(lam)

    @given(nonzero_rationals)
    def test_identities_and_symmetry(self, lam):
        chk = legendre_identities(lam)
        assert chk.equal
        j = legendre_j(lam)
        assert j == legendre_j(1 - lam) == legendre_j(1 / lam)

    def test_j_from_mu(self):
        assert j_from_mu(-1) == 0
        assert j_from_mu(1) == 2048
        with pytest.raises(ValueError):
            j_from_mu(0)

    def test_mu_case(self):
        m = mu_case_check(Fraction(4), 2)
        assert (m.case, m.v_j, m.nonnegative) == ("positive", 6, True)

    @given(st.integers(-4, 8), st.integers(-99, 99).filter(lambda x: x % 2 != 0))
    def test_mu_cases_give_integral_j(self, k, u):
        mu = Fraction(u) * Fraction(2) ** k
        m = mu_case_check(mu, 2)
        assert m.case != "outside"
        assert m.nonnegative
        assert m.v_j == v_p(j_from_mu(mu), 2)


def test_classify_all_primes_above_in_extension():
    F = real_cyclotomic(5)
    E = frey_rrp_from_indices(1, 2, 5, 0, 1, 2)
    out = classify_reduction_all(E, 11, p=5)
    assert len(out) == 2
