from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st
from sympy import factorint

from rrpfermat.arith import v_p
from rrpfermat.numfield import element_valuation, field_norm, primes_above, rationals, real_quadratic
from rrpfermat.sunit import (
    SquareSumSolution,
    SUnitConfig,
    SUnitSolution,
    canonical_square_sum,
    check_bound_55p,
    check_bound_rrp,
    decompose,
    descent_growth,
    descent_step,
    enumerate_square_sum,
    enumerate_sunit,
    field_sqrt,
    fundamental_unit,
    integral_form,
    quadratic_unit,
    sunit_basis,
)

from golden import GOLDEN_S23_B8

Q = rationals()
F = Fraction


def _pairs(sols):
    return {(str(s.lam), str(s.mu)) for s in sols}


def _is_s_unit_rational(x, S):
    return all(q in S for q in factorint(abs(x.numerator))) and all(q in S for q in factorint(x.denominator))


class TestEnumerationOverQ:
    def test_s2_bound4(self):
        sols = enumerate_sunit(SUnitConfig(Q, (2,), 4))
        assert _pairs(sols) == {("2", "-1"), ("-1", "2"), ("1/2", "1/2")}

    def test_s23_bound4_contains_examples(self):
        got = _pairs(enumerate_sunit(SUnitConfig(Q, (2, 3), 4)))
        for lam, mu in [("4", "-3"), ("-3", "4"), ("9", "-8"), ("-8", "9"), ("3", "-2"), ("1/4", "3/4"), ("1/3", "2/3"), ("3/4", "1/4")]:
            assert (lam, mu) in got

    def test_s5_empty(self):
        assert enumerate_sunit(SUnitConfig(Q, (5,), 6)) == []

    def test_golden_s23_bound8(self):
        sols = enumerate_sunit(SUnitConfig(Q, (2, 3), 8))
        assert _pairs(sols) == GOLDEN_S23_B8
        assert len(sols) == 21

    @pytest.mark.parametrize("S,bound", [((2,), 6), ((2, 3), 6), ((2, 5), 4), ((2, 3, 5), 3)])
    def test_invariants(self, S, bound):
        sols = enumerate_sunit(SUnitConfig(Q, S, bound))
        pairs = {(s.lam, s.mu) for s in sols}
        assert len(pairs) == len(sols)
        for s in sols:
            assert s.lam + s.mu == 1
            assert _is_s_unit_rational(s.lam, S) and _is_s_unit_rational(s.mu, S)
            assert (s.mu, s.lam) in pairs

    def test_deterministic_order(self):
        cfg = SUnitConfig(Q, (2, 3), 5)
        assert enumerate_sunit(cfg) == enumerate_sunit(cfg)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            SUnitConfig(Q, (), 4)
        with pytest.raises(ValueError):
            SUnitConfig(Q, (4,), 4)
        with pytest.raises(ValueError):
            SUnitConfig(Q, (2,), 0)


class TestBoundsAndIntegralForm:
    def test_bound_rrp_examples(self):
        assert check_bound_rrp(SUnitSolution(F(1, 2), F(1, 2)), 2)
        assert not check_bound_rrp(SUnitSolution(F(256), F(-255)), 2)
        assert check_bound_rrp(SUnitSolution(F(2), F(-1)), 2)

    def test_integral_form_examples(self):
        out = integral_form(SUnitSolution(F(1, 2), F(1, 2)), 2)
        assert (out.lam, out.mu) == (2, -1)
        assert integral_form(SUnitSolution(F(4), F(-3)), 2).lam == 4
        out = integral_form(SUnitSolution(F(1, 4), F(3, 4)), 2)
        assert (out.lam, out.mu) == (4, -3)

    def test_integral_form_on_golden_set(self):
        for s in enumerate_sunit(SUnitConfig(Q, (2, 3), 8)):
            t = integral_form(s, 2)
            assert t.lam + t.mu == 1
            assert v_p(t.lam, 2) >= 0
            before = max(abs(v_p(s.lam, 2)), abs(v_p(s.mu, 2)))
            after = max(abs(v_p(t.lam, 2)), abs(v_p(t.mu, 2)))
            assert before == after
            assert integral_form(t, 2) == t

    def test_bound_55p_examples(self):
        assert check_bound_55p(SquareSumSolution(F(4), F(5), F(3)), 2)
        assert not check_bound_55p(SquareSumSolution(F(256), F(-255), F(1)), 2)
        assert check_bound_55p(SquareSumSolution(F(1), F(-1), F(0)), 2)


class TestDescent:
    def test_example(self):
        s = descent_step(3)
        assert (s.lam, s.mu) == (F(4, 3), F(-1, 3))

    @pytest.mark.parametrize("g", [0, 1, -1])
    def test_degenerate(self, g):
        with pytest.raises(ValueError, match="degenerate descent"):
            descent_step(g)

    @given(st.fractions(min_value=-1000, max_value=1000, max_denominator=1000))
    def test_identity(self, g):
        assume(g not in (0, 1, -1))
        s = descent_step(g)
        assert s.lam + s.mu == 1

    @given(st.integers(4, 20), st.integers(-500, 500))
    def test_growth_when_premises_hold(self, t, k):
        # gamma = 1 + 2^(t-1) * odd: v(1 - gamma) = t - 1, v(1 + gamma) = 1
        gamma = 1 + 2 ** (t - 1) * (2 * k + 1)
        assume(gamma not in (0, 1, -1))
        g = descent_growth(F(gamma), 2)
        assert g.t0 == t
        assert g.premises == (t >= 5)
        if g.premises:
            assert g.v_mu == g.predicted == 2 * t - 4
            assert g.grows


class TestSquareSum:
    def test_examples(self):
        got = enumerate_square_sum(SUnitConfig(Q, (2, 5), 3))
        triples = {(s.alpha, s.beta, s.gamma) for s in got}
        assert (4, 5, 3) in triples
        assert (1, -1, 0) in triples

    def test_canonical_representative(self):
        cfg = SUnitConfig(Q, (2, 3), 8)
        assert canonical_square_sum(F(1, 4), F(3, 4), F(1), cfg) == (1, 3, 2)
        assert canonical_square_sum(F(4), F(5), F(3), SUnitConfig(Q, (2, 5), 8)) == (4, 5, 3)

    @pytest.mark.parametrize("S,bound", [((2,), 4), ((2, 3), 3), ((2, 5), 3)])
    def test_invariants_and_dedup(self, S, bound):
        sols = enumerate_square_sum(SUnitConfig(Q, S, bound))
        seen = set()
        for s in sols:
            assert s.alpha + s.beta == s.gamma**2
            assert s.gamma >= 0
            assert _is_s_unit_rational(s.alpha, S) and _is_s_unit_rational(s.beta, S)
            cfg = SUnitConfig(Q, S, bound)
            assert canonical_square_sum(s.alpha, s.beta, s.gamma, cfg) == (s.alpha, s.beta, s.gamma)
            assert (s.alpha, s.beta) not in seen
            seen.add((s.alpha, s.beta))
        # no two representatives differ by the square of a prime in S
        for s in sols:
            for q in S:
                for k in (1, 2):
                    d2 = F(q) ** (2 * k)
                    assert (s.alpha * d2, s.beta * d2) not in seen
                    assert (s.alpha / d2, s.beta / d2) not in seen


class TestQuadratic:
    @pytest.mark.parametrize("t,xy", [(2, (2, 2)), (3, (4, 2)), (5, (1, 1)), (13, (3, 1)), (10, (6, 2))])
    def test_fundamental_unit(self, t, xy):
        assert fundamental_unit(t) == xy
        eps = quadratic_unit(real_quadratic(t))
        assert abs(field_norm(eps)) == 1 and eps.is_integral()

    @pytest.mark.parametrize("t,S", [(2, (2,)), (5, (2,)), (2, (2, 3)), (13, (2, 3)), (10, (2,))])
    def test_basis_generators(self, t, S):
        K = real_quadratic(t)
        b = sunit_basis(K, S)
        for P, g, k in zip(b.primes, b.generators, b.powers):
            assert element_valuation(g, P) == k
            for P2 in primes_above(P.q, K):
                if P2 != P:
                    assert element_valuation(g, P2) == 0
        assert b.full_group == (t != 10)

    @settings(max_examples=40)
    @given(st.integers(-3, 3), st.integers(-3, 3), st.booleans())
    def test_decompose_roundtrip(self, k0, e, neg):
        K = real_quadratic(2)
        b = sunit_basis(K, (2,))
        x = b.unit**k0 * b.generators[0] ** e
        x = -x if neg else x
        assert decompose(x, b) == (int(neg), k0, e)

    def test_decompose_rejects_non_s_unit(self):
        K = real_quadratic(2)
        b = sunit_basis(K, (2,))
        assert decompose(K(3), b) is None

    @pytest.mark.parametrize("t,S,bound", [(2, (2,), 3), (5, (2,), 4), (13, (2, 3), 1)])
    def test_sunit_enumeration(self, t, S, bound):
        K = real_quadratic(t)
        sols = enumerate_sunit(SUnitConfig(K, S, bound))
        assert sols
        keys = {(tuple(s.lam.coords), tuple(s.mu.coords)) for s in sols}
        for s in sols:
            assert s.lam + s.mu == 1
            for x in (s.lam, s.mu):
                n = field_norm(x)
                assert _is_s_unit_rational(n, S)
            assert (tuple(s.mu.coords), tuple(s.lam.coords)) in keys

    def test_square_sum_quadratic(self):
        K = real_quadratic(2)
        sols = enumerate_square_sum(SUnitConfig(K, (2,), 2))
        for s in sols:
            assert s.alpha + s.beta == s.gamma * s.gamma

    @given(st.integers(-40, 40), st.integers(-40, 40), st.sampled_from([2, 3, 5, 13]))
    def test_field_sqrt(self, u, v, t):
        K = real_quadratic(t)
        x = K([u, v])
        r = field_sqrt(x * x)
        assert r is not None and r * r == x * x
        assert field_sqrt(x * x * K.theta) is None or field_sqrt(x * x * K.theta) ** 2 == x * x * K.theta
