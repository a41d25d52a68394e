"""Bounded enumeration of lambda + mu = 1 and alpha + beta = gamma^2 in
S-units, over Q and real quadratic fields.

An S-unit is written as  sign * eps^k0 * prod g_i^e_i  where eps is the
fundamental unit (quadratic fields only) and g_i generates the smallest
principal power of the i-th prime above S. The search covers every such
word with all exponents bounded by ``exponent_bound``; nothing outside that
box is claimed.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from sympy import isprime

from .arith import integer_root, prime_support
from .numfield import (
    FieldElement,
    NumberFieldDesc,
    PrimeData,
    element_valuation,
    field_norm,
    primes_above,
    rationals,
)

DEFAULT_BOUND = 8


@dataclass(frozen=True)
class SUnitConfig:
    field: NumberFieldDesc
    S: tuple[int, ...]
    exponent_bound: int = DEFAULT_BOUND

    def __post_init__(self):
        if not self.S:
            raise ValueError("S must be nonempty")
        if any(not isprime(q) for q in self.S):
            raise ValueError("S must consist of rational primes")
        if self.exponent_bound < 1:
            raise ValueError("exponent_bound must be >= 1")
        if self.field.kind not in ("rationals", "real_quadratic"):
            raise ValueError("S-unit enumeration supports Q and real quadratic fields")
        object.__setattr__(self, "S", tuple(sorted(set(self.S))))


@dataclass(frozen=True)
class SUnitSolution:
    lam: Fraction | FieldElement
    mu: Fraction | FieldElement
    valuations: tuple[tuple[str, int, int], ...] = ()

    def max_abs_valuation(self, label: str) -> int:
        for name, vl, vm in self.valuations:
            if name == label:
                return max(abs(vl), abs(vm))
        raise KeyError(label)


@dataclass(frozen=True)
class SquareSumSolution:
    alpha: Fraction | FieldElement
    beta: Fraction | FieldElement
    gamma: Fraction | FieldElement
    representative: bool = True
    members_found: int = 1


# ---------------------------------------------------------------------------
# unit and prime generators


def fundamental_unit(t: int, max_y: int = 10**7) -> tuple[int, int]:
    """(x, y) with x, y > 0 minimal such that x^2 - t y^2 = +-4; the unit is
    (x + y sqrt t)/2."""
    for y in range(1, max_y):
        ty2 = t * y * y
        for s in (-4, 4):
            x2 = ty2 + s
            if x2 > 0:
                x = math.isqrt(x2)
                if x * x == x2:
                    return x, y
    raise ArithmeticError(f"fundamental unit of Q(sqrt {t}) not found below y = {max_y}")


def _from_sqrt_basis(F: NumberFieldDesc, u: Fraction, v: Fraction) -> FieldElement:
    """u + v sqrt(t) in the power basis of theta."""
    if F.t % 4 == 1:
        # sqrt t = 2 theta - 1
        return F([u - v, 2 * v])
    return F([u, v])


def _to_sqrt_basis(x: FieldElement) -> tuple[Fraction, Fraction]:
    u, v = x.coords
    if x.field.t % 4 == 1:
        return u + v / 2, v / 2
    return u, v


def _embed(x: FieldElement) -> float:
    """Approximate real embedding; only used for size estimates."""
    u, v = _to_sqrt_basis(x)
    return float(u) + float(v) * math.sqrt(x.field.t)


def _sign(x: FieldElement) -> int:
    """Exact sign of u + v sqrt(t) under the embedding sqrt(t) > 0."""
    u, v = _to_sqrt_basis(x)
    su = (u > 0) - (u < 0)
    sv = (v > 0) - (v < 0)
    if su == sv or sv == 0:
        return su
    if su == 0:
        return sv
    # opposite signs: compare u^2 with t v^2
    return su if u * u > x.field.t * v * v else sv


@lru_cache(maxsize=None)
def quadratic_unit(F: NumberFieldDesc) -> FieldElement:
    x, y = fundamental_unit(F.t)
    return _from_sqrt_basis(F, Fraction(x, 2), Fraction(y, 2))


def _norm_solutions(F: NumberFieldDesc, m: int, eps: float) -> list[FieldElement]:
    """Integral x with |Norm x| = m, up to units, in a box that contains a
    representative of every unit class."""
    t = F.t
    vmax = int(4 * math.sqrt(m) * eps / math.sqrt(t)) + 2
    if vmax > 10**7:
        raise ArithmeticError("norm search box too large")
    out = []
    for v in range(0, vmax + 1):
        for sgn in (1, -1):
            # (2u + v)^2 = t v^2 +- 4m  or  u^2 = t v^2 +- m
            if t % 4 == 1:
                w2 = t * v * v + sgn * 4 * m
                w = integer_root(w2, 2) if w2 >= 0 else None
                if w is None:
                    continue
                for ww in {w, -w}:
                    if (ww - v) % 2 == 0:
                        out.append(F([(ww - v) // 2, v]))
            else:
                u2 = t * v * v + sgn * m
                u = integer_root(u2, 2) if u2 >= 0 else None
                if u is None:
                    continue
                for uu in {u, -u}:
                    out.append(F([uu, v]))
    return out


@dataclass(frozen=True)
class SUnitBasis:
    field: NumberFieldDesc
    unit: FieldElement | None
    primes: tuple[PrimeData, ...]
    labels: tuple[str, ...]
    generators: tuple[Fraction | FieldElement, ...]
    powers: tuple[int, ...]

    @property
    def full_group(self) -> bool:
        """True when every generator has valuation 1 at its prime."""
        return all(k == 1 for k in self.powers)


def prime_label(P: PrimeData) -> str:
    return str(P.q) if P.g == 1 else f"{P.q}#{P.index}"


@lru_cache(maxsize=None)
def sunit_basis(field: NumberFieldDesc, S: tuple[int, ...], max_power: int = 24) -> SUnitBasis:
    if field.kind == "rationals":
        Q = rationals()
        return SUnitBasis(
            Q, None, tuple(primes_above(q, Q)[0] for q in S),
            tuple(str(q) for q in S), tuple(Fraction(q) for q in S), (1,) * len(S),
        )
    eps = quadratic_unit(field)
    eps_f = abs(_embed(eps))
    primes, gens, powers = [], [], []
    for q in S:
        Ps = primes_above(q, field)
        for P in Ps:
            others = [Q for Q in Ps if Q != P]
            found = None
            for k in range(1, max_power + 1):
                if P.g == 1 and P.e == 1:
                    found = field(q)  # inert: q generates P
                    break
                m = q ** (P.f * k)
                cands = [
                    x for x in _norm_solutions(field, m, eps_f)
                    if element_valuation(x, P) == k and all(element_valuation(x, Q) == 0 for Q in others)
                ]
                if cands:
                    found = min(cands, key=lambda x: (abs(x.coords[1]), abs(x.coords[0]), x.coords))
                    break
            if found is None:
                raise ArithmeticError(f"no principal power of {P} up to {max_power}")
            primes.append(P)
            gens.append(found)
            powers.append(k)
    return SUnitBasis(
        field, eps, tuple(primes), tuple(prime_label(P) for P in primes), tuple(gens), tuple(powers)
    )


# ---------------------------------------------------------------------------
# words in the generators


def _is_field(x) -> bool:
    return isinstance(x, FieldElement)


def _valuation(x, P: PrimeData) -> int | float:
    return element_valuation(x, P)


def decompose(x, basis: SUnitBasis) -> tuple[int, ...] | None:
    """Exponent word (sign, k0, e_1..e_m) of x, or None if x is not in the
    group generated by the basis. Sign is 0 for positive, 1 for negative."""
    if x == 0:
        return None
    es = []
    for P, k in zip(basis.primes, basis.powers):
        v = _valuation(x, P)
        if v % k:
            return None
        es.append(v // k)
    if basis.unit is None:
        rest = Fraction(x)
        for g, e in zip(basis.generators, es):
            rest /= Fraction(g) ** e
        if abs(rest) != 1:
            return None
        return (0 if rest > 0 else 1, *es)
    rest = x
    for g, e in zip(basis.generators, es):
        rest = rest / g**e
    if not rest.is_integral() or abs(field_norm(rest)) != 1:
        return None
    guess = round(math.log(abs(_embed(rest))) / math.log(abs(_embed(basis.unit))))
    for k0 in (guess, guess - 1, guess + 1):
        unit_part = basis.unit**k0
        if rest == unit_part:
            return (0, k0, *es)
        if rest == -unit_part:
            return (1, k0, *es)
    return None


def _words(basis: SUnitBasis, bound: int):
    rng = range(-bound, bound + 1)
    nunit = 0 if basis.unit is None else 1
    for sign in (0, 1):
        for exps in itertools.product(rng, repeat=nunit + len(basis.generators)):
            yield (sign, *exps)


def _evaluate(word: tuple[int, ...], basis: SUnitBasis):
    sign, *exps = word
    if basis.unit is None:
        x = Fraction(1)
        for g, e in zip(basis.generators, exps):
            x *= Fraction(g) ** e
        return -x if sign else x
    x = basis.unit ** exps[0]
    for g, e in zip(basis.generators, exps[1:]):
        x = x * g**e
    return -x if sign else x


def _within(word, bound: int) -> bool:
    return all(abs(e) <= bound for e in word[1:])


def _valuation_vector(basis: SUnitBasis, lam, mu) -> tuple[tuple[str, int, int], ...]:
    return tuple(
        (label, _valuation(lam, P), _valuation(mu, P)) for label, P in zip(basis.labels, basis.primes)
    )


def _key(x) -> tuple:
    return tuple(x.coords) if _is_field(x) else (x,)


# ---------------------------------------------------------------------------
# lambda + mu = 1


def enumerate_sunit(cfg: SUnitConfig) -> list[SUnitSolution]:
    """All (lambda, mu) with both words inside the exponent box, ordered by
    the exponent word of lambda."""
    basis = sunit_basis(cfg.field, cfg.S)
    out = []
    seen = set()
    for word in _words(basis, cfg.exponent_bound):
        lam = _evaluate(word, basis)
        mu = 1 - lam
        if mu == 0:
            continue
        mw = decompose(mu, basis)
        if mw is None or not _within(mw, cfg.exponent_bound):
            continue
        k = (_key(lam), _key(mu))
        if k in seen:
            continue
        seen.add(k)
        out.append((word, SUnitSolution(lam, mu, _valuation_vector(basis, lam, mu))))
    out.sort(key=lambda item: item[0])
    return [s for _, s in out]


def _two_adic(P) -> tuple[PrimeData | int, int]:
    if isinstance(P, PrimeData):
        return P, _valuation(P.field(2), P)
    return P, 1 if P == 2 else 0


def _v_generic(x, P) -> int | float:
    if isinstance(P, PrimeData):
        return _valuation(x, P)
    from .arith import v_p

    return v_p(x.to_rational() if _is_field(x) else x, P)


def check_bound_rrp(sol: SUnitSolution, P) -> bool:
    """max(|v_P(lambda)|, |v_P(mu)|) <= 4 v_P(2)."""
    P, v2 = _two_adic(P)
    return max(abs(_v_generic(sol.lam, P)), abs(_v_generic(sol.mu, P))) <= 4 * v2


def integral_form(sol: SUnitSolution, P) -> SUnitSolution:
    """Replace (lambda, mu) by (1/lambda, mu/(mu - 1)) when v_P(lambda) < 0."""
    if _v_generic(sol.lam, P) >= 0:
        return sol
    lam = 1 / sol.lam
    mu = sol.mu / (sol.mu - 1)
    # v(1/lam) = -v(lam); v(mu/(mu-1)) = v(mu) - v(-lam)
    vals = tuple((name, -vl, vm - vl) for name, vl, vm in sol.valuations)
    return SUnitSolution(lam, mu, vals)


def _rational_valuations(lam, mu) -> tuple[tuple[str, int, int], ...]:
    from .arith import v_p

    support = sorted(prime_support(lam) | prime_support(mu))
    return tuple((str(q), v_p(lam, q), v_p(mu, q)) for q in support)


def descent_step(gamma) -> SUnitSolution:
    """lambda'' = (1+gamma)^2/(4 gamma), mu'' = -(1-gamma)^2/(4 gamma)."""
    if not _is_field(gamma):
        gamma = Fraction(gamma)
    if gamma == 0 or gamma == 1 or gamma == -1:
        raise ValueError("degenerate descent")
    lam = (1 + gamma) ** 2 / (4 * gamma)
    mu = -((1 - gamma) ** 2) / (4 * gamma)
    vals = () if _is_field(gamma) else _rational_valuations(lam, mu)
    return SUnitSolution(lam, mu, vals)


@dataclass(frozen=True)
class DescentGrowth:
    t0: int | float
    t1: int | float
    t2: int | float
    v_mu: int | float
    premises: bool
    predicted: int | None
    grows: bool


def descent_growth(gamma, P) -> DescentGrowth:
    """Valuation bookkeeping for one descent step at a prime above 2.

    t0 = v(1 - gamma^2), t1 = v(1 + gamma), t2 = v(1 - gamma). The premises
    are t0 >= 5 and min(t1, t2) = v(2); when t2 carries the small valuation,
    gamma is replaced by -gamma so that t1 is the small one.
    """
    P, v2 = _two_adic(P)
    if not _is_field(gamma):
        gamma = Fraction(gamma)
    t1 = _v_generic(1 + gamma, P)
    t2 = _v_generic(1 - gamma, P)
    if t2 < t1:
        gamma = -gamma
        t1, t2 = t2, t1
    t0 = t1 + t2
    sol = descent_step(gamma)
    v_mu = _v_generic(sol.mu, P)
    premises = t0 >= 5 * v2 and t1 == v2 and _v_generic(gamma, P) == 0
    predicted = 2 * t0 - 4 * v2 if premises else None
    return DescentGrowth(t0, t1, t2, v_mu, premises, predicted, v_mu > t0)


# ---------------------------------------------------------------------------
# alpha + beta = gamma^2


def _sqrt_rational(s: Fraction) -> Fraction | None:
    if s < 0:
        return None
    n = integer_root(s.numerator, 2)
    d = integer_root(s.denominator, 2)
    if n is None or d is None:
        return None
    return Fraction(n, d)


def field_sqrt(s):
    """A square root of s in Q or the real quadratic field, or None."""
    if not _is_field(s):
        return _sqrt_rational(Fraction(s))
    F = s.field
    if s.is_zero():
        return F.zero()
    A, B = _to_sqrt_basis(s)
    t = F.t
    # (u + v sqrt t)^2 = A + B sqrt t  =>  u^2 is a root of X^2 - A X + t B^2/4
    root = _sqrt_rational(A * A - t * B * B)
    if root is None:
        return None
    for X in ((A + root) / 2, (A - root) / 2):
        u = _sqrt_rational(X)
        if u is None:
            continue
        if u != 0:
            v = B / (2 * u)
        else:
            v = _sqrt_rational(A / t) if B == 0 else None
            if v is None:
                continue
        cand = _from_sqrt_basis(F, u, v)
        if cand * cand == s:
            return cand if _sign(cand) >= 0 else -cand
    return None


def _canonical(alpha_w, beta_w, gamma, basis: SUnitBasis):
    """Representative of the delta^2-scaling class: per generator (and the
    unit), min(exp_alpha, exp_beta) reduced to {0, 1}; gamma >= 0."""
    shift = [0] * (len(alpha_w) - 1)
    for i in range(1, len(alpha_w)):
        m = min(alpha_w[i], beta_w[i])
        shift[i - 1] = m // 2
    delta = _evaluate((0, *shift), basis)
    a2 = _evaluate(alpha_w, basis) / (delta * delta)
    b2 = _evaluate(beta_w, basis) / (delta * delta)
    g2 = gamma / delta
    neg = _sign(g2) < 0 if _is_field(g2) else g2 < 0
    if neg:
        g2 = -g2
    return a2, b2, g2


def enumerate_square_sum(cfg: SUnitConfig) -> list[SquareSumSolution]:
    """Inequivalent (alpha, beta, gamma) with alpha, beta words in the box and
    gamma an exact square root of alpha + beta."""
    basis = sunit_basis(cfg.field, cfg.S)
    words = list(_words(basis, cfg.exponent_bound))
    values = [_evaluate(w, basis) for w in words]
    classes: dict[tuple, list] = {}
    order = []
    for wa, a in zip(words, values):
        for wb, b in zip(words, values):
            g = field_sqrt(a + b)
            if g is None:
                continue
            ca, cb, cg = _canonical(wa, wb, g, basis)
            key = (_key(ca), _key(cb))
            if key not in classes:
                classes[key] = [ca, cb, cg, 0]
                order.append(key)
            classes[key][3] += 1
    return [SquareSumSolution(*classes[k][:3], True, classes[k][3]) for k in order]


def canonical_square_sum(alpha, beta, gamma, cfg: SUnitConfig):
    """Canonical representative of the class of (alpha, beta, gamma)."""
    basis = sunit_basis(cfg.field, cfg.S)
    wa, wb = decompose(alpha, basis), decompose(beta, basis)
    if wa is None or wb is None:
        raise ValueError("alpha and beta must be S-units")
    if gamma * gamma != alpha + beta:
        raise ValueError("alpha + beta != gamma^2")
    return _canonical(wa, wb, gamma, basis)


def check_bound_55p(sol: SquareSumSolution, P) -> bool:
    """|v_P(alpha / beta)| <= 6 v_P(2)."""
    P, v2 = _two_adic(P)
    return abs(_v_generic(sol.alpha, P) - _v_generic(sol.beta, P)) <= 6 * v2
