"""Exhaustive box search for x^r + y^r = d z^p over Z and real quadratic rings."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from sympy import factorint, integer_nthroot, isprime

from .arith import integer_root
from .numfield import (
    FieldElement,
    NumberFieldDesc,
    element_valuation,
    field_norm,
    primes_above,
    rationals,
)

FILTERS = ("all", "two_divides_c", "two_divides_a_plus_b", "c_odd_nontrivial")


@dataclass(frozen=True)
class SearchBox:
    H: int
    r: int
    p: int
    d: int
    field: NumberFieldDesc = field(default_factory=rationals)
    filter: str = "all"

    def __post_init__(self):
        if self.H < 1:
            raise ValueError("H must be >= 1")
        for name in ("r", "p"):
            v = getattr(self, name)
            if v < 5 or not isprime(v):
                raise ValueError(f"{name} = {v} must be a prime >= 5")
        if self.d == 0:
            raise ValueError("d must be nonzero")
        if self.filter not in FILTERS:
            raise ValueError(f"filter must be one of {FILTERS}")
        if self.field.kind not in ("rationals", "real_quadratic"):
            raise ValueError("search supports Z and real quadratic rings")


@dataclass(frozen=True)
class SolutionRecord:
    a: Any
    b: Any
    c: Any
    trivial: bool
    primitive: bool
    c_even: bool
    a_plus_b_even: bool
    c_unit: bool
    pairwise_coprime: bool


# ---------------------------------------------------------------------------
# helpers over Z and O_K


def _divisible_by_2(x) -> bool:
    if isinstance(x, FieldElement):
        return (x / 2).is_integral()
    return x % 2 == 0


def _shared_prime(xs: list) -> bool:
    """True if some prime divides every element of xs."""
    nonzero = [x for x in xs if x != 0]
    if not nonzero:
        return True
    if not isinstance(nonzero[0], FieldElement):
        return math.gcd(*nonzero) != 1
    g = 0
    for x in nonzero:
        g = math.gcd(g, abs(field_norm(x)).numerator)
    if g == 1:
        return False
    F = nonzero[0].field
    for q in factorint(g):
        for P in primes_above(q, F):
            if all(element_valuation(x, P) > 0 for x in nonzero):
                return True
    return False


def _is_unit(x) -> bool:
    if isinstance(x, FieldElement):
        return x.is_integral() and abs(field_norm(x)) == 1
    return abs(x) == 1


def classify(a, b, c) -> SolutionRecord:
    trivial = a * b * c == 0
    primitive = not _shared_prime([a, b, c])
    pairwise = not any(_shared_prime(list(pair)) for pair in ((a, b), (a, c), (b, c)))
    return SolutionRecord(
        a, b, c,
        trivial=bool(trivial),
        primitive=primitive,
        c_even=_divisible_by_2(c),
        a_plus_b_even=_divisible_by_2(a + b),
        c_unit=_is_unit(c),
        pairwise_coprime=pairwise,
    )


def passes_filter(rec: SolutionRecord, name: str) -> bool:
    if name == "all":
        return True
    if rec.trivial or not rec.primitive:
        return False
    if name == "two_divides_c":
        return rec.c_even
    if name == "two_divides_a_plus_b":
        return rec.a_plus_b_even
    return not rec.c_even and not rec.c_unit


_FIXED_BITS = 64


def _floor_root_signed(n: int, p: int) -> int:
    root = int(integer_nthroot(abs(n), p)[0])
    return root if n >= 0 else -root


def _quadratic_pth_root(x: FieldElement, p: int) -> FieldElement | None:
    """Exact p-th root in O_K, p odd.

    Both real embeddings are approximated in fixed point with enough guard
    bits to survive cancellation in the smaller one, rooted in integers and
    recombined. The candidate and its neighbours are checked exactly.
    """
    F = x.field
    if x.is_zero():
        return F.zero()
    N = field_norm(x)
    if N.denominator != 1 or integer_root(N.numerator, p) is None:
        return None
    u, v = (int(c) for c in x.coords)
    K = 1 << (_FIXED_BITS + max(u.bit_length(), v.bit_length()))
    W = math.isqrt(F.t * K * K)  # sqrt(t) * K
    half = F.t % 4 == 1
    if half:
        # theta = (1 + sqrt t)/2, so sigma = u + v/2 +- v sqrt(t)/2
        s1, s2 = (2 * u + v) * K + v * W, (2 * u + v) * K - v * W
        C1 = _floor_root_signed(s1 * K ** (p - 1) // 2, p)
        C2 = _floor_root_signed(s2 * K ** (p - 1) // 2, p)
        n_fix = (C1 - C2) * K // W  # K (c1 - c2)/sqrt t
        m_est = ((C1 + C2 - n_fix) // 2) // K
        n_est = n_fix // K
    else:
        s1, s2 = u * K + v * W, u * K - v * W
        C1 = _floor_root_signed(s1 * K ** (p - 1), p)
        C2 = _floor_root_signed(s2 * K ** (p - 1), p)
        m_est = (C1 + C2) // (2 * K)
        n_est = (C1 - C2) // (2 * W)
    for dm, dn in itertools.product((0, 1, -1, 2, -2), repeat=2):
        cand = F([m_est + dm, n_est + dn])
        if cand**p == x:
            return cand
    return None


def _box_elements(box: SearchBox):
    rng = range(-box.H, box.H + 1)
    if box.field.kind == "rationals":
        return list(rng)
    F = box.field
    return [F([u, v]) for u in rng for v in rng]


def search_solutions(box: SearchBox) -> list[SolutionRecord]:
    """Every (a, b) in the box with (a^r + b^r)/d an exact p-th power."""
    out = []
    elems = _box_elements(box)
    if box.field.kind == "rationals":
        for a in elems:
            ar = a**box.r
            for b in elems:
                s = ar + b**box.r
                if s % box.d:
                    continue
                c = integer_root(s // box.d, box.p)
                if c is None:
                    continue
                rec = classify(a, b, c)
                if passes_filter(rec, box.filter):
                    out.append(rec)
        return out
    F = box.field
    powers = [x**box.r for x in elems]
    dinv = Fraction(1, box.d)
    for a, ar in zip(elems, powers):
        for b, br in zip(elems, powers):
            s = (ar + br) * dinv
            if not s.is_integral():
                continue
            c = _quadratic_pth_root(s, box.p)
            if c is None:
                continue
            rec = classify(a, b, c)
            if passes_filter(rec, box.filter):
                out.append(rec)
    return out


# ---------------------------------------------------------------------------
# vacuity


@dataclass(frozen=True)
class VacuityReport:
    box: SearchBox
    solutions_scanned: int
    hits: tuple[SolutionRecord, ...]
    parity_violations: tuple[SolutionRecord, ...]
    coprimality_violations: tuple[SolutionRecord, ...]
    note: str

    @property
    def vacuous(self) -> bool:
        return not self.hits


def _fifth_power_free(d: int) -> bool:
    return all(e < 5 for e in factorint(abs(d)).values())


def verify_vacuity(box: SearchBox) -> VacuityReport:
    """No nontrivial primitive solution with 2 | c inside the box.

    Also checks, over every solution found, that 2 | a+b forces 2 | c when d
    is odd, and that nontrivial primitive solutions are pairwise coprime when
    d is fifth-power free.
    """
    full = SearchBox(box.H, box.r, box.p, box.d, box.field, "all")
    recs = search_solutions(full)
    hits = tuple(rec for rec in recs if passes_filter(rec, "two_divides_c"))
    parity = ()
    if box.d % 2:
        parity = tuple(rec for rec in recs if rec.a_plus_b_even and not rec.c_even)
    coprime = ()
    if _fifth_power_free(box.d):
        coprime = tuple(rec for rec in recs if not rec.trivial and rec.primitive and not rec.pairwise_coprime)
    note = (
        "no hit in the box"
        if not hits
        else "falsifier candidate: the nonexistence statement is asymptotic in p, so a hit at small p is not a contradiction"
    )
    return VacuityReport(full, len(recs), hits, parity, coprime, note)
