import math

import pytest
from hypothesis import given, settings, strategies as st
from sympy import integer_nthroot

from rrpfermat import jsonio
from rrpfermat.numfield import real_cyclotomic, real_quadratic
from rrpfermat.search import (
    SearchBox,
    _quadratic_pth_root,
    classify,
    search_solutions,
    verify_vacuity,
)


def brute(H, r, p, d):
    """Independent scan over Z using sympy's integer roots."""
    out = set()
    for a in range(-H, H + 1):
        for b in range(-H, H + 1):
            s = a**r + b**r
            if s % d:
                continue
            q = s // d
            root, exact = integer_nthroot(abs(q), p)
            if exact:
                out.add((a, b, int(root) if q >= 0 else -int(root)))
    return out


class TestSearchOverZ:
    def test_example_d33(self):
        recs = search_solutions(SearchBox(3, 5, 5, 33))
        nontrivial = [(x.a, x.b, x.c) for x in recs if not x.trivial]
        assert (1, 2, 1) in nontrivial and (2, 1, 1) in nontrivial
        rec = classify(1, 2, 1)
        assert rec.primitive and not rec.c_even and rec.c_unit

    def test_trivial_only(self):
        recs = search_solutions(SearchBox(2, 7, 13, 5))
        assert recs and all(x.trivial for x in recs)

    def test_filter_drops_trivial(self):
        assert search_solutions(SearchBox(2, 7, 13, 5, filter="two_divides_c")) == []

    @pytest.mark.parametrize("H,r,p,d", [(6, 5, 5, 33), (8, 7, 5, 2), (5, 5, 7, 1), (10, 5, 5, -2), (4, 7, 7, 5)])
    def test_matches_brute_force(self, H, r, p, d):
        got = {(x.a, x.b, x.c) for x in search_solutions(SearchBox(H, r, p, d))}
        assert got == brute(H, r, p, d)

    @settings(max_examples=15)
    @given(st.integers(1, 6), st.integers(1, 6), st.sampled_from([1, 2, 3, 5, 33, 64]))
    def test_monotone_in_H(self, h1, h2, d):
        lo, hi = sorted((h1, h2))
        small = {(x.a, x.b, x.c) for x in search_solutions(SearchBox(lo, 5, 5, d))}
        big = {(x.a, x.b, x.c) for x in search_solutions(SearchBox(hi, 5, 5, d))}
        assert small <= big

    @settings(max_examples=15)
    @given(st.integers(2, 8), st.sampled_from([1, 3, 5, 11, 33]))
    def test_parity_and_coprimality(self, H, d):
        for x in search_solutions(SearchBox(H, 5, 5, d)):
            assert x.a**5 + x.b**5 == d * x.c**5
            if x.a_plus_b_even:
                assert x.c_even
            if not x.trivial and x.primitive:
                assert x.pairwise_coprime
                assert math.gcd(x.a, x.b) == 1


class TestVacuity:
    def test_r7_d5_p13(self):
        rep = verify_vacuity(SearchBox(30, 7, 13, 5))
        assert rep.vacuous and rep.parity_violations == () and rep.coprimality_violations == ()
        assert rep.solutions_scanned > 0

    def test_hit_is_reported(self):
        # 1 + 31^5 = d * 2^5 with d odd
        d = (1 + 31**5) // 32
        rep = verify_vacuity(SearchBox(31, 5, 5, d))
        assert (1, 31, 2) in {(h.a, h.b, h.c) for h in rep.hits}
        assert not rep.vacuous and "asymptotic" in rep.note
        assert all(h.c_even for h in rep.hits)

    def test_serialization(self):
        rep = verify_vacuity(SearchBox(5, 7, 13, 5))
        assert jsonio.loads(jsonio.dumps(rep)) == rep


class TestBoxValidation:
    @pytest.mark.parametrize(
        "kw",
        [dict(H=0, r=5, p=5, d=1), dict(H=3, r=4, p=5, d=1), dict(H=3, r=5, p=3, d=1),
         dict(H=3, r=5, p=5, d=0), dict(H=3, r=5, p=5, d=1, filter="bogus")],
    )
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            SearchBox(**kw)

    def test_unsupported_field(self):
        with pytest.raises(ValueError):
            SearchBox(3, 5, 5, 1, field=real_cyclotomic(7))


class TestQuadratic:
    @settings(max_examples=200)
    @given(
        st.sampled_from([2, 3, 5, 13]),
        st.integers(-10**6, 10**6),
        st.integers(-10**6, 10**6),
        st.sampled_from([5, 7, 11, 13]),
    )
    def test_root_recovers(self, t, u, v, p):
        K = real_quadratic(t)
        x = K([u, v])
        assert _quadratic_pth_root(x**p, p) == x

    def test_non_power(self):
        K = real_quadratic(2)
        assert _quadratic_pth_root(K([3, 1]), 5) is None
        assert _quadratic_pth_root(K([1, 1]) ** 5 + 2, 5) is None

    def test_box_q_sqrt2(self):
        K = real_quadratic(2)
        recs = search_solutions(SearchBox(1, 5, 5, 1, field=K))
        assert recs
        for x in recs:
            assert x.a**5 + x.b**5 == x.c**5
        assert all(x.trivial for x in recs)
