"""Frey curves for x^r + y^r = d z^p and x^5 + y^5 = d z^p.

Both families are stored with exact invariants as FieldElements of a common
field (``rationals()`` for integer inputs). Verification helpers test the
coprimality, reduction-type and j-valuation statements on concrete inputs.

The RRP curve is Y^2 = X(X - A)(X + B) with A + B + C = 0. Its model c4 is
16(A^2 + AB + B^2), which equals -16(AB + BC + CA); the symmetric expression
is kept alongside as ``c4_symmetric``. Valuations of c4 and j do not depend
on the sign.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from sympy import factorint

from .numfield import (
    FieldElement,
    NumberFieldDesc,
    PrimeData,
    cyclotomic_trace_element,
    element_valuation,
    field_norm,
    primes_above,
    rationals,
    real_cyclotomic,
)


class PreconditionError(ValueError):
    """Inputs do not meet the hypotheses of the statement being checked."""


def _elt(x, F: NumberFieldDesc) -> FieldElement:
    return F(x)


def _field_of(*xs) -> NumberFieldDesc:
    for x in xs:
        if isinstance(x, FieldElement):
            return x.field
    return rationals()


def _v(x, P: PrimeData) -> int | float:
    return element_valuation(x, P)


def _rational_prime(P: PrimeData | int, F: NumberFieldDesc) -> PrimeData:
    if isinstance(P, PrimeData):
        if P.field != F:
            raise ValueError("prime and curve live in different fields")
        return P
    if F.degree != 1:
        raise ValueError("pass a PrimeData for curves over a proper extension of Q")
    return primes_above(P, F)[0]


# ---------------------------------------------------------------------------
# generic Weierstrass invariants


@dataclass(frozen=True)
class WeierstrassInvariants:
    b2: Any
    b4: Any
    b6: Any
    b8: Any
    c4: Any
    c6: Any
    discriminant: Any
    j: Any


def weierstrass_invariants(a1=0, a2=0, a3=0, a4=0, a6=0) -> WeierstrassInvariants:
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6
    disc = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    if disc == 0:
        j = None
    elif isinstance(disc, int) and isinstance(c4, int):
        j = Fraction(c4**3, disc)
    else:
        j = c4 * c4 * c4 / disc
    return WeierstrassInvariants(b2, b4, b6, b8, c4, c6, disc, j)


# ---------------------------------------------------------------------------
# phi_r and f_k


def phi_r_sum(a, b, r: int):
    """sum_{i=0}^{r-1} (-1)^i a^(r-1-i) b^i."""
    return sum((-1) ** i * a ** (r - 1 - i) * b**i for i in range(r))


def phi_r_eval(a, b, r: int):
    """(a^r + b^r)/(a + b), falling back to the alternating sum at a = -b."""
    s = a + b
    if s == 0:
        return phi_r_sum(a, b, r)
    num = a**r + b**r
    if isinstance(num, int) and isinstance(s, int):
        return num // s
    return num / s


def f_k(a, b, k: int, F: NumberFieldDesc) -> FieldElement:
    """(a + zeta^k b)(a + zeta^-k b) = a^2 + theta_k ab + b^2."""
    a, b = _elt(a, F), _elt(b, F)
    return a * a + cyclotomic_trace_element(F, k) * a * b + b * b


def abc_coefficients(F: NumberFieldDesc, k1: int, k2: int, k3: int):
    """(alpha, beta, gamma) with alpha f_k1 + beta f_k2 + gamma f_k3 = 0."""
    t1, t2, t3 = (cyclotomic_trace_element(F, k) for k in (k1, k2, k3))
    return t3 - t2, t1 - t3, t2 - t1


# ---------------------------------------------------------------------------
# curve for x^r + y^r = d z^p


@dataclass(frozen=True)
class FreyCurveRRP:
    field: NumberFieldDesc
    A: FieldElement
    B: FieldElement
    C: FieldElement
    a2: FieldElement
    a4: FieldElement
    discriminant: FieldElement
    c4: FieldElement
    j: FieldElement
    r: int | None = None
    a: FieldElement | None = None
    b: FieldElement | None = None
    c: FieldElement | None = None
    d: FieldElement | None = None
    p: int | None = None
    indices: tuple[int, int, int] | None = None

    @property
    def c4_symmetric(self) -> FieldElement:
        A, B, C = self.A, self.B, self.C
        return 16 * (A * B + B * C + C * A)

    @property
    def two_torsion_x(self) -> tuple[FieldElement, FieldElement, FieldElement]:
        return (self.field.zero(), self.A, -self.B)


def frey_rrp_from_ABC(A, B, F: NumberFieldDesc | None = None, **meta) -> FreyCurveRRP:
    """Y^2 = X(X - A)(X + B) with C = -A - B."""
    F = F or _field_of(A, B)
    A, B = _elt(A, F), _elt(B, F)
    C = -A - B
    disc = 16 * (A * B * C) ** 2
    if disc == 0:
        raise ValueError("singular curve")
    c4 = 16 * (A * A + A * B + B * B)
    return FreyCurveRRP(
        field=F, A=A, B=B, C=C, a2=B - A, a4=-(A * B),
        discriminant=disc, c4=c4, j=c4 * c4 * c4 / disc, **meta,
    )


def frey_rrp_from_indices(a, b, r: int, k1: int, k2: int, k3: int, **meta) -> FreyCurveRRP:
    F = real_cyclotomic(r)
    n = (r - 1) // 2
    ks = (k1, k2, k3)
    if len(set(ks)) != 3 or not all(0 <= k <= n for k in ks):
        raise ValueError(f"indices must be distinct in [0, {n}]")
    a, b = _elt(a, F), _elt(b, F)
    al, be, ga = abc_coefficients(F, *ks)
    A = al * f_k(a, b, k1, F)
    B = be * f_k(a, b, k2, F)
    C = ga * f_k(a, b, k3, F)
    assert A + B + C == 0
    return frey_rrp_from_ABC(A, B, F, r=r, a=a, b=b, indices=ks, **meta)


def build_frey_rrp(a, b, r: int, prime: PrimeData, c=None, d=None, p: int | None = None) -> FreyCurveRRP:
    """Frey curve attached to (a, b, c) with k1 the first index such that the
    prime divides f_k1(a, b) and k2 < k3 the smallest remaining indices."""
    F = real_cyclotomic(r)
    if prime.field != F:
        raise ValueError("prime must lie in Q(zeta_r)^+")
    a, b = _elt(a, F), _elt(b, F)
    c = None if c is None else _elt(c, F)
    d = None if d is None else _elt(d, F)
    if a.is_zero() or b.is_zero() or (a + b).is_zero() or (c is not None and c.is_zero()):
        raise ValueError("construction precondition violated: trivial solution")
    if c is not None and d is not None and p is not None:
        if a**r + b**r != d * c**p:
            raise ValueError("construction precondition violated: not a solution")
    if c is not None and _v(c, prime) <= 0:
        raise ValueError("construction precondition violated: prime does not divide c")
    n = (r - 1) // 2
    k1 = next((k for k in range(n + 1) if _v(f_k(a, b, k, F), prime) > 0), None)
    if k1 is None:
        raise ValueError("construction precondition violated: no f_k divisible by the prime")
    k2, k3 = [k for k in range(n + 1) if k != k1][:2]
    return frey_rrp_from_indices(a, b, r, k1, k2, k3, c=c, d=d, p=p)


# ---------------------------------------------------------------------------
# curve for x^5 + y^5 = d z^p


@dataclass(frozen=True)
class FreyCurve55P:
    field: NumberFieldDesc
    a: FieldElement
    b: FieldElement
    phi5: FieldElement
    a2: FieldElement
    a4: FieldElement
    discriminant: FieldElement
    c4: FieldElement
    j: FieldElement
    c: FieldElement | None = None
    d: FieldElement | None = None
    p: int | None = None


def build_frey_55p(a, b, c=None, d=None, p: int | None = None, field: NumberFieldDesc | None = None) -> FreyCurve55P:
    """y^2 = x^3 - 5(a^2+b^2) x^2 + 5 phi_5(a,b) x with closed-form invariants."""
    F = field or _field_of(a, b)
    a, b = _elt(a, F), _elt(b, F)
    s = a + b
    if s.is_zero():
        raise ValueError("singular curve")
    phi = phi_r_eval(a, b, 5)
    a5b5 = a**5 + b**5
    disc = 2**4 * 5**3 * s * s * a5b5 * a5b5
    if disc == 0:
        raise ValueError("singular curve")
    q2 = a * a + b * b
    c4 = 2**4 * 5 * (5 * q2 * q2 - 3 * phi)
    return FreyCurve55P(
        field=F, a=a, b=b, phi5=phi, a2=-5 * q2, a4=5 * phi,
        discriminant=disc, c4=c4, j=c4 * c4 * c4 / disc,
        c=None if c is None else _elt(c, F),
        d=None if d is None else _elt(d, F),
        p=p,
    )


def phi5_congruence(a: int, b: int, q: int) -> bool:
    """phi_5(a,b) = 5 a^2 b^2 mod q^2 (meaningful when q | a + b)."""
    return (phi_r_eval(a, b, 5) - 5 * a * a * b * b) % (q * q) == 0


def shared_primes_apb_phi5(a: int, b: int, bound: int) -> list[int]:
    """Primes q <= bound, q != 5, dividing both a + b and phi_5(a, b)."""
    g = math.gcd(a + b, phi_r_eval(a, b, 5))
    return sorted(q for q in factorint(g) if q != 5 and q <= bound) if g > 1 else []


# ---------------------------------------------------------------------------
# coprimality


@dataclass(frozen=True)
class PairCheck:
    left: str
    right: str
    shared: tuple[str, ...]


@dataclass(frozen=True)
class CoprimalityReport:
    primitive: bool
    non_primitive_at: tuple[str, ...]
    f_pairs: tuple[PairCheck, ...]
    abc_pairs: tuple[PairCheck, ...]

    @property
    def ok(self) -> bool:
        return self.primitive and not any(pc.shared for pc in self.f_pairs + self.abc_pairs)


def _prime_label(P: PrimeData) -> str:
    return f"{P.q}" if P.g == 1 else f"{P.q}#{P.index}"


def _common_primes(xs: list[FieldElement], skip) -> list[PrimeData]:
    """Primes dividing every element of xs, outside ``skip``."""
    norms = [abs(field_norm(x)) for x in xs if not x.is_zero()]
    g = 0
    for n in norms:
        if n.denominator != 1:
            raise ValueError("elements must be integral")
        g = math.gcd(g, n.numerator)
    if g <= 1:
        return []
    out = []
    for q in sorted(factorint(g)):
        for P in primes_above(q, xs[0].field):
            if skip(P):
                continue
            if all(x.is_zero() or _v(x, P) > 0 for x in xs):
                out.append(P)
    return out


def verify_coprimality(a, b, c, r: int, d, indices: tuple[int, int, int] = (0, 1, 2)) -> CoprimalityReport:
    """Shared prime factors of the f_k(a,b) and of A, B, C outside the primes
    dividing r d. Every common prime divides the gcd of the norms, so the scan
    over that gcd is exhaustive."""
    F = real_cyclotomic(r)
    a, b, c, d = (_elt(x, F) for x in (a, b, c, d))
    if a.is_zero() or b.is_zero() or c.is_zero():
        raise ValueError("trivial solution")

    def excluded(P: PrimeData) -> bool:
        return P.q == r or _v(d, P) > 0

    bad = _common_primes([a, b, c], lambda P: False)
    n = (r - 1) // 2
    fs = [f_k(a, b, k, F) for k in range(n + 1)]
    f_pairs = []
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            shared = _common_primes([fs[i], fs[j]], excluded)
            f_pairs.append(PairCheck(f"f{i}", f"f{j}", tuple(_prime_label(P) for P in shared)))
    curve = frey_rrp_from_indices(a, b, r, *indices)
    vals = {"A": curve.A, "B": curve.B, "C": curve.C}
    abc_pairs = []
    for x, y in (("A", "B"), ("A", "C"), ("B", "C")):
        shared = _common_primes([vals[x], vals[y]], excluded)
        abc_pairs.append(PairCheck(x, y, tuple(_prime_label(P) for P in shared)))
    return CoprimalityReport(
        primitive=not bad,
        non_primitive_at=tuple(_prime_label(P) for P in bad),
        f_pairs=tuple(f_pairs),
        abc_pairs=tuple(abc_pairs),
    )


# ---------------------------------------------------------------------------
# reduction types


@dataclass(frozen=True)
class ReductionVerdict:
    q: int
    prime_index: int
    type: str  # good | multiplicative | non_semistable
    v_delta: int
    v_c4: int | float
    p_divides: bool | None
    violation: str | None


def _excluded(curve, P: PrimeData) -> bool:
    if P.q == 2:
        return True
    if isinstance(curve, FreyCurveRRP):
        if curve.r is not None and P.q == curve.r:
            return True
    elif P.q == 5:
        return True
    return curve.d is not None and _v(curve.d, P) > 0


def classify_reduction(curve: FreyCurveRRP | FreyCurve55P, q: int | PrimeData, p: int | None = None) -> ReductionVerdict:
    """Good or multiplicative reduction at a prime away from 2rd (resp. 10d)."""
    P = _rational_prime(q, curve.field)
    if _excluded(curve, P):
        raise ValueError("excluded prime")
    p = p if p is not None else curve.p
    vd = _v(curve.discriminant, P)
    vc = _v(curve.c4, P)
    if vd == 0:
        return ReductionVerdict(P.q, P.index, "good", 0, vc, True if p else None, None)
    p_div = None if p is None else vd % p == 0
    if vc > 0:
        return ReductionVerdict(P.q, P.index, "non_semistable", vd, vc, p_div, "prime divides both discriminant and c4")
    violation = None
    if p_div is False:
        violation = f"p = {p} does not divide v(discriminant) = {vd}"
    return ReductionVerdict(P.q, P.index, "multiplicative", vd, vc, p_div, violation)


def classify_reduction_all(curve, q: int, p: int | None = None) -> list[ReductionVerdict]:
    return [classify_reduction(curve, P, p) for P in primes_above(q, curve.field)]


# ---------------------------------------------------------------------------
# j-invariant valuations above 2


@dataclass(frozen=True)
class JValuationCheck:
    v_j: int | float
    negative: bool
    p_not_dividing: bool
    case: str
    predicted: int | None
    formula_holds: bool | None

    @property
    def ok(self) -> bool:
        return self.negative and self.p_not_dividing and self.formula_holds is not False


def j_valuation_check_rrp(curve: FreyCurveRRP, P: PrimeData | int, p: int) -> JValuationCheck:
    """v_P(j) < 0 and p does not divide it, with v_P(j) = 8 v_P(2) - 2 v_P(A)
    when P divides A only."""
    P = _rational_prime(P, curve.field)
    v2 = _v(curve.field(2), P)
    if p <= 4 * v2:
        raise PreconditionError(f"needs p > 4 v_P(2) = {4 * v2}")
    if curve.c is not None and _v(curve.c, P) <= 0:
        raise PreconditionError("needs P | c")
    vj = _v(curve.j, P)
    vA, vB, vC = (_v(x, P) for x in (curve.A, curve.B, curve.C))
    if vA > 0 and vB == 0 and vC == 0:
        case, predicted = "P|A", 8 * v2 - 2 * vA
    else:
        case, predicted = "other", None
    return JValuationCheck(
        v_j=vj,
        negative=vj < 0,
        p_not_dividing=vj % p != 0 if vj != math.inf else False,
        case=case,
        predicted=predicted,
        formula_holds=None if predicted is None else vj == predicted,
    )


def j_valuation_check_55p(curve: FreyCurve55P, P: PrimeData | int, p: int, d=None) -> JValuationCheck:
    """Case formulas 8v(2) - 4v(d) (P | a+b) and 8v(2) - 2v(d) (P | phi_5)."""
    P = _rational_prime(P, curve.field)
    d = curve.d if d is None else _elt(d, curve.field)
    if d is None:
        raise PreconditionError("d is required")
    v2 = _v(curve.field(2), P)
    vd = _v(d, P)
    if vd <= 0:
        raise PreconditionError("needs P | d")
    if curve.c is not None and _v(curve.c, P) > 0:
        raise PreconditionError("needs P not dividing c")
    if vd <= 4 * v2:
        raise PreconditionError(f"needs v_P(d) > 4 v_P(2) = {4 * v2}")
    if p <= 4 * abs(vd - 2 * v2):
        raise PreconditionError(f"needs p > 4|v_P(d) - 2 v_P(2)| = {4 * abs(vd - 2 * v2)}")
    vj = _v(curve.j, P)
    div_s = _v(curve.a + curve.b, P) > 0
    div_phi = _v(curve.phi5, P) > 0
    if div_s and div_phi:
        case, predicted = "both", None
    elif div_s:
        case, predicted = "P|a+b", 8 * v2 - 4 * vd
    elif div_phi:
        case, predicted = "P|phi5", 8 * v2 - 2 * vd
    else:
        case, predicted = "neither", None
    holds = None if predicted is None else vj == predicted
    if case == "both":
        holds = False
    return JValuationCheck(vj, vj < 0, vj % p != 0 if vj != math.inf else False, case, predicted, holds)


# ---------------------------------------------------------------------------
# Legendre form and the mu parametrisation


def legendre_j(lam):
    if lam == 0 or lam == 1:
        raise ValueError("degenerate Legendre parameter")
    return 256 * (lam * lam - lam + 1) ** 3 / (lam * lam * (1 - lam) ** 2)


def legendre_j_lambda_mu(lam, mu):
    lm = lam * mu
    return 256 * (1 - lm) ** 3 / (lm * lm)


@dataclass(frozen=True)
class LegendreCheck:
    j_lambda: Any
    j_lambda_mu: Any
    equal: bool


def legendre_identities(lam) -> LegendreCheck:
    if isinstance(lam, int):
        lam = Fraction(lam)
    j1 = legendre_j(lam)
    j2 = legendre_j_lambda_mu(lam, 1 - lam)
    return LegendreCheck(j1, j2, j1 == j2)


def j_from_mu(mu):
    if mu == 0:
        raise ValueError("mu must be nonzero")
    if isinstance(mu, int):
        mu = Fraction(mu)
    return 256 * (mu + 1) ** 3 / mu


@dataclass(frozen=True)
class MuCase:
    v_mu: int
    case: str  # negative | zero | positive | outside
    v_j: int | float
    nonnegative: bool


def mu_case_check(mu, P: PrimeData | int) -> MuCase:
    """Which valuation range v_P(mu) falls in, and the resulting v_P(j)."""
    F = mu.field if isinstance(mu, FieldElement) else rationals()
    P = _rational_prime(P, F)
    mu = _elt(mu, F)
    v2 = _v(F(2), P)
    vm = _v(mu, P)
    if -4 * v2 <= vm < 0:
        case = "negative"
    elif vm == 0:
        case = "zero"
    elif 0 < vm <= 8 * v2:
        case = "positive"
    else:
        case = "outside"
    vj = _v(j_from_mu(mu), P)
    return MuCase(vm, case, vj, vj >= 0)
