"""Acceptance criteria, one test each, timed against the stated limit.

A PASS/FAIL line per criterion is printed in the terminal summary.
"""

import functools
import random
import time
from fractions import Fraction

from sympy import primerange

from rrpfermat.arith import factor_mod_p, v_p
from rrpfermat.criteria import (
    CLASS_NUMBER_TABLE,
    FAIL,
    PASS,
    check_cor_Q_prime_d,
    check_cor_quadratic,
    check_thm2_hypotheses,
    norm_reduction_filter,
)
from rrpfermat.frey import (
    build_frey_55p,
    frey_rrp_from_indices,
    legendre_identities,
    legendre_j,
    phi5_congruence,
    phi_r_eval,
    weierstrass_invariants,
)
from rrpfermat.numfield import (
    composite,
    field_norm,
    is_square_in_residue_ring,
    primes_above,
    real_cyclotomic,
    real_cyclotomic_min_poly,
    rationals,
    residue_ring,
    splitting_type,
    uniformizer_above_r,
    valuation_by_coordinates,
    valuation_by_hensel,
)
from rrpfermat.search import SearchBox, search_solutions, verify_vacuity
from rrpfermat.sunit import SUnitConfig, descent_step, enumerate_sunit, integral_form

from conftest import ACCEPTANCE_RESULTS
from oracles import weierstrass_disc_c4
from golden import GOLDEN_S23_B8

SEED = 20240917


def criterion(n, title, limit):
    def deco(fn):
        @functools.wraps(fn)
        def run():
            t0 = time.perf_counter()
            ok = False
            try:
                fn()
                ok = True
            finally:
                secs = time.perf_counter() - t0
                ok = ok and secs < limit
                ACCEPTANCE_RESULTS[n] = (title, ok, secs, limit)
                print(f"{'PASS' if ok else 'FAIL'}  #{n} {title} ({secs:.2f} s)")
            assert secs < limit, f"took {secs:.2f} s, limit {limit} s"

        return run

    return deco


@criterion(1, "cor-q-prime-d example regression", 5)
def test_01_cor_q_prime_d_examples():
    for r, ds in ((7, (5, 37, 53)), (11, (5, 13, 29, 37, 53))):
        for d in ds:
            assert check_cor_Q_prime_d(r, d).overall == PASS, (r, d)
        # nothing else passes below the largest listed d
        others = [d for d in primerange(3, 54) if d not in ds and d != r]
        assert all(check_cor_Q_prime_d(r, d).overall == FAIL for d in others)
    for d in primerange(3, 10**4):
        assert check_cor_Q_prime_d(5, d).overall == FAIL, d


@criterion(2, "listed r: 2 inert in Q(zeta_r)^+ and r != 1 mod 8", 5)
def test_02_listed_primes():
    assert len(CLASS_NUMBER_TABLE.entries) == 21
    for r in CLASS_NUMBER_TABLE.entries:
        assert r % 8 != 1
        assert splitting_type(2, real_cyclotomic(r)).inert
        # second route: the minimal polynomial stays irreducible mod 2
        facs = factor_mod_p(real_cyclotomic_min_poly(r).coeffs, 2)
        assert len(facs) == 1 and facs[0][1] == 1


@criterion(3, "quadratic-field examples", 1)
def test_03_quadratic_examples():
    for t, r in ((2, 5), (2, 11), (2, 13), (5, 7)):
        rep = check_cor_quadratic(t, r)
        verdicts = {c.name: c.verdict for c in rep.conditions}
        assert verdicts["r_inert_and_congruences"] == PASS
        assert verdicts["unique_prime_above_2"] == PASS
        assert len(primes_above(2, composite(t, r))) == 1
    assert check_cor_quadratic(2, 7).overall == FAIL


@criterion(4, "(7,5): pi, d, pi*d non-squares mod P^5, exhaustive", 60)
def test_04_prop_condition_3_r7_d5():
    F = real_cyclotomic(7)
    R = residue_ring(splitting_type(2, F), 5)
    assert R.size == 2**15
    pi = uniformizer_above_r(F)
    verdicts = {}
    for label, x in (("pi", pi), ("d", F(5)), ("pi_d", pi * 5)):
        is_sq, _ = is_square_in_residue_ring(x, R, method="exhaustive")
        filt = norm_reduction_filter(x, 5)
        if filt.verdict == "excluded":
            assert is_sq is False, label
        verdicts[label] = is_sq
    assert verdicts == {"pi": False, "d": False, "pi_d": False}, verdicts


@criterion(5, "Frey identity suite", 30)
def test_05_frey_identities():
    rng = random.Random(SEED)
    done = 0
    while done < 1000:
        a, b = rng.randint(-50, 50), rng.randint(-50, 50)
        if a + b == 0 or a**5 + b**5 == 0:
            continue
        E = build_frey_55p(a, b)
        a2, a4 = E.a2.to_rational(), E.a4.to_rational()
        w = weierstrass_invariants(a2=a2, a4=a4)
        disc, c4 = weierstrass_disc_c4(a2, a4)
        assert E.discriminant == w.discriminant == disc
        assert E.c4 == w.c4 == c4
        assert E.j * E.discriminant == E.c4**3
        done += 1
    done = 0
    while done < 100:
        a, b = rng.randint(-50, 50), rng.randint(-50, 50)
        if a * b * (a + b) == 0:
            continue
        k1, k2, k3 = rng.sample(range(3), 3)
        E = frey_rrp_from_indices(a, b, 5, k1, k2, k3)
        assert E.field == real_cyclotomic(5)
        assert (E.A + E.B + E.C).is_zero()
        assert E.discriminant == 16 * (E.A * E.B * E.C) ** 2
        done += 1


@criterion(6, "phi_5 congruence mod q^2", 5)
def test_06_congruence():
    rng = random.Random(SEED + 6)
    qs = list(primerange(2, 98))
    for _ in range(500):
        q = rng.choice(qs)
        a = rng.randint(-10**4, 10**4)
        b = q * rng.randint(-100, 100) - a
        assert (a + b) % q == 0
        assert phi5_congruence(a, b, q)
        assert (phi_r_eval(a, b, 5) - 5 * a * a * b * b) % (q * q) == 0


@criterion(7, "Legendre j identities and S3 symmetry", 1)
def test_07_legendre():
    rng = random.Random(SEED + 7)
    done = 0
    while done < 200:
        lam = Fraction(rng.randint(-500, 500), rng.randint(1, 500))
        if lam in (0, 1):
            continue
        chk = legendre_identities(lam)
        assert chk.equal
        direct = 256 * (lam * lam - lam + 1) ** 3 / (lam * lam * (lam - 1) ** 2)
        assert chk.j_lambda == direct
        assert legendre_j(lam) == legendre_j(1 - lam) == legendre_j(1 / lam)
        done += 1


@criterion(8, "S-unit suite over Q", 10)
def test_08_sunit():
    sols = enumerate_sunit(SUnitConfig(rationals(), (2, 3), 8))
    assert {(str(s.lam), str(s.mu)) for s in sols} == GOLDEN_S23_B8
    for s in sols:
        t = integral_form(s, 2)
        before = max(abs(v_p(s.lam, 2)), abs(v_p(s.mu, 2)))
        assert max(abs(v_p(t.lam, 2)), abs(v_p(t.mu, 2))) == before
        assert integral_form(t, 2) == t
    rng = random.Random(SEED + 8)
    done = 0
    while done < 100:
        g = Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 10**6))
        if g in (0, 1, -1):
            continue
        s = descent_step(g)
        assert s.lam + s.mu == 1
        done += 1


@criterion(9, "Theorem-2 hypotheses at d = +-2^m", 1)
def test_09_thm2_boundary():
    for m in (5, 6):
        for sign in (1, -1):
            assert check_thm2_hypotheses(sign * 2**m).overall == PASS
    for sign in (1, -1):
        assert check_thm2_hypotheses(sign * 2**4).overall == FAIL


@criterion(10, "search vacuity (7, 5, 13), H = 60", 60)
def test_10_search_vacuity():
    rep = verify_vacuity(SearchBox(60, 7, 13, 5))
    assert rep.vacuous
    assert rep.parity_violations == ()
    assert rep.solutions_scanned > 0
    assert all(s.c_even for s in search_solutions(rep.box) if s.a_plus_b_even)


@criterion(11, "valuation routes agree at inert primes", 10)
def test_11_valuation_cross_check():
    rng = random.Random(SEED + 11)
    for r, inert in ((5, (2, 3, 7)), (7, (2, 3, 5))):
        F = real_cyclotomic(r)
        n = F.degree
        for _ in range(200):
            q = rng.choice(inert)
            P = splitting_type(q, F)
            assert P.inert
            coords = [rng.randint(-10**6, 10**6) for _ in range(n)]
            if not any(coords):
                continue
            k = rng.randint(-3, 6)
            x = F(coords) * Fraction(q) ** k
            vh = valuation_by_hensel(x, P)
            vc = valuation_by_coordinates(x, P)
            assert vh == vc
            assert P.f * vh == v_p(field_norm(x), q)
