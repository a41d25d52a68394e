"""Supported number fields, prime splitting, valuations and residue rings.

Four kinds of totally real field are handled:

* ``rationals``         Q, generator 0
* ``real_quadratic(t)`` Q(sqrt t), generator sqrt(t), or (1+sqrt t)/2 when
  t = 1 mod 4 so that Z[theta] is the full ring of integers
* ``real_cyclotomic(r)`` Q(zeta_r)^+, generator theta = zeta_r + zeta_r^-1
* ``composite(t, r)``   Q(sqrt t, zeta_r + zeta_r^-1), generator
  sqrt(t) + zeta_r + zeta_r^-1; splitting data and norm-route valuations only

Elements are vectors of Fractions in the power basis of the generator.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

from sympy import isprime

from .arith import (
    IntPoly,
    ModPoly,
    factor_mod_p,
    hensel_lift_factor,
    legendre,
    order_mod_pm1,
    poly_add,
    poly_compose_shift,
    poly_divmod,
    poly_mul,
    poly_rem,
    poly_scale,
    poly_str,
    poly_sub,
    resultant,
    trim,
    v_p,
)

KINDS = ("rationals", "real_quadratic", "real_cyclotomic", "composite")

VALUATION_START = 8
VALUATION_CAP = 4096
EXHAUSTIVE_LIMIT = 2**20


class UnsupportedPrime(ValueError):
    pass


# ---------------------------------------------------------------------------
# fields


def real_cyclotomic_min_poly(r: int) -> IntPoly:
    """Minimal polynomial of zeta_r + zeta_r^-1.

    Uses Phi_r(z) / z^n = 1 + sum_{k=1..n} (z^k + z^-k) and the Dickson
    recurrence D_{k+1} = x D_k - D_{k-1} for z^k + z^-k in terms of x.
    """
    if r < 3 or not isprime(r):
        raise ValueError(f"r = {r} must be an odd prime")
    n = (r - 1) // 2
    d_prev, d_cur = (2,), (0, 1)
    acc = poly_add((1,), d_cur)
    for _ in range(2, n + 1):
        d_prev, d_cur = d_cur, poly_sub(poly_mul((0, 1), d_cur), d_prev)
        acc = poly_add(acc, d_cur)
    return IntPoly(acc)


def _is_squarefree(t: int) -> bool:
    return all(t % (p * p) for p in range(2, math.isqrt(t) + 1))


def _composite_min_poly(t: int, r: int) -> tuple[int, ...]:
    # psi(x + s) * psi(x - s) with s^2 = t, computed as A^2 - t B^2 where
    # psi(x + s) = A(x) + s B(x)
    psi = real_cyclotomic_min_poly(r).coeffs
    a: tuple = ()
    b: tuple = ()
    for c in reversed(psi):
        # (A + sB)(x + s) = (xA + tB) + s(A + xB)
        a, b = poly_add(poly_mul((0, 1), a), poly_scale(b, t)), poly_add(a, poly_mul((0, 1), b))
        a = poly_add(a, (c,))
    return tuple(int(c) for c in poly_sub(poly_mul(a, a), poly_scale(poly_mul(b, b), t)))


@dataclass(frozen=True)
class NumberFieldDesc:
    kind: str
    min_poly: tuple[int, ...]
    r: int | None = None
    t: int | None = None

    @property
    def degree(self) -> int:
        return len(self.min_poly) - 1

    @property
    def theta(self) -> FieldElement:
        if self.degree == 1:
            return self(-self.min_poly[0])
        return FieldElement(self, (Fraction(0), Fraction(1)) + (Fraction(0),) * (self.degree - 2))

    def __call__(self, value) -> FieldElement:
        """Embed a rational, or build an element from a coordinate list."""
        if isinstance(value, FieldElement):
            if value.field != self:
                raise ValueError("element belongs to another field")
            return value
        if isinstance(value, (list, tuple)):
            coords = [Fraction(c) for c in value]
            if len(coords) > self.degree:
                coords = list(poly_rem(coords, self.min_poly))
            coords += [Fraction(0)] * (self.degree - len(coords))
            return FieldElement(self, tuple(coords))
        return FieldElement(self, (Fraction(value),) + (Fraction(0),) * (self.degree - 1))

    def zero(self) -> FieldElement:
        return self(0)

    def one(self) -> FieldElement:
        return self(1)

    def label(self) -> str:
        return {
            "rationals": "Q",
            "real_quadratic": f"Q(sqrt {self.t})",
            "real_cyclotomic": f"Q(zeta_{self.r})^+",
            "composite": f"Q(sqrt {self.t}, zeta_{self.r})^+",
        }[self.kind]

    def to_json(self) -> dict:
        return {"kind": self.kind, "r": self.r, "t": self.t, "min_poly": list(self.min_poly)}

    @classmethod
    def from_json(cls, data: dict) -> NumberFieldDesc:
        F = make_field(data["kind"], r=data.get("r"), t=data.get("t"))
        if list(F.min_poly) != list(data["min_poly"]):
            raise ValueError("min_poly does not match the field description")
        return F

    def __repr__(self) -> str:
        return f"NumberFieldDesc({self.label()}, min_poly={poly_str(self.min_poly)})"


@lru_cache(maxsize=None)
def rationals() -> NumberFieldDesc:
    return NumberFieldDesc("rationals", (0, 1))


@lru_cache(maxsize=None)
def real_quadratic(t: int) -> NumberFieldDesc:
    if t < 2 or not _is_squarefree(t):
        raise ValueError(f"t = {t} must be a squarefree integer >= 2")
    if t % 4 == 1:
        return NumberFieldDesc("real_quadratic", (-(t - 1) // 4, -1, 1), t=t)
    return NumberFieldDesc("real_quadratic", (-t, 0, 1), t=t)


@lru_cache(maxsize=None)
def real_cyclotomic(r: int) -> NumberFieldDesc:
    return NumberFieldDesc("real_cyclotomic", real_cyclotomic_min_poly(r).coeffs, r=r)


@lru_cache(maxsize=None)
def composite(t: int, r: int) -> NumberFieldDesc:
    if t < 2 or not _is_squarefree(t):
        raise ValueError(f"t = {t} must be a squarefree integer >= 2")
    if r < 5 or not isprime(r):
        raise ValueError(f"r = {r} must be a prime >= 5")
    if t == r and r % 4 == 1:
        raise ValueError(f"sqrt({t}) already lies in Q(zeta_{r})^+")
    return NumberFieldDesc("composite", _composite_min_poly(t, r), r=r, t=t)


def make_field(kind: str, r: int | None = None, t: int | None = None) -> NumberFieldDesc:
    if kind == "rationals":
        return rationals()
    if kind == "real_quadratic":
        return real_quadratic(t)
    if kind == "real_cyclotomic":
        return real_cyclotomic(r)
    if kind == "composite":
        return composite(t, r)
    raise ValueError(f"unsupported field kind {kind!r}")


# ---------------------------------------------------------------------------
# elements


def _poly_inverse(a: Sequence[Fraction], f: Sequence[int]) -> tuple:
    r0, r1 = tuple(Fraction(c) for c in f), trim(a)
    s0, s1 = (), (Fraction(1),)
    while len(r1) > 1:
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(s0, poly_mul(q, s1))
    if not r1:
        raise ZeroDivisionError("element is not invertible")
    return poly_scale(s1, 1 / r1[0])


@dataclass(frozen=True, eq=False)
class FieldElement:
    field: NumberFieldDesc
    coords: tuple[Fraction, ...]

    def _coerce(self, other) -> FieldElement | None:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, tuple(a * other for a in self.coords))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        prod = poly_rem(poly_mul(self.coords, o.coords), self.field.min_poly)
        return self.field(list(prod))

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        if self.is_zero():
            raise ZeroDivisionError("division by zero in number field")
        return self.field(list(_poly_inverse(self.coords, self.field.min_poly)))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, tuple(a / other for a in self.coords))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.field.one(), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other) -> bool:
        o = self._coerce(other) if isinstance(other, (FieldElement, int, Fraction)) else None
        if o is None:
            return NotImplemented
        return self.coords == o.coords

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.coords[0])
        return hash((self.field, self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.coords[0]

    def denominator(self) -> int:
        return math.lcm(*(c.denominator for c in self.coords))

    def integer_coords(self) -> tuple[int, ...]:
        """Coordinates scaled by the common denominator."""
        d = self.denominator()
        return tuple(int(c * d) for c in self.coords)

    def is_integral(self) -> bool:
        return self.denominator() == 1

    def norm(self) -> Fraction:
        return field_norm(self)

    def __repr__(self) -> str:
        return f"[{poly_str(self.coords, 'theta')}]"

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coords]


def as_element(x, F: NumberFieldDesc) -> FieldElement:
    return F(x)


def field_norm(x: FieldElement | int | Fraction, F: NumberFieldDesc | None = None) -> Fraction:
    """Norm via Res(min_poly, representative); min_poly is monic so no sign fix."""
    if not isinstance(x, FieldElement):
        if F is None:
            return Fraction(x)
        x = F(x)
    if x.is_zero():
        return Fraction(0)
    return resultant(x.field.min_poly, trim(x.coords))


def field_trace(x: FieldElement) -> Fraction:
    F = x.field
    return sum((x * F.theta**i).coords[i] for i in range(F.degree))


def cyclotomic_trace_element(F: NumberFieldDesc, k: int) -> FieldElement:
    """zeta_r^k + zeta_r^-k inside Q(zeta_r)^+."""
    if F.kind != "real_cyclotomic":
        raise ValueError("needs a real cyclotomic field")
    k %= F.r
    if k == 0:
        return F(2)
    th = F.theta
    prev, cur = F(2), th
    for _ in range(1, k):
        prev, cur = cur, th * cur - prev
    return cur


def uniformizer_above_r(F: NumberFieldDesc) -> FieldElement:
    """pi = zeta_r + zeta_r^-1 - 2."""
    return F.theta - 2


# ---------------------------------------------------------------------------
# primes


@dataclass(frozen=True)
class PrimeData:
    field: NumberFieldDesc
    q: int
    e: int
    f: int
    g: int
    residue_factor: tuple[int, ...] | None = None
    index: int = 0
    precision: int = VALUATION_START

    def __post_init__(self):
        if self.e * self.f * self.g != self.field.degree:
            raise ValueError("e*f*g must equal the field degree")

    @property
    def inert(self) -> bool:
        return self.e == 1 and self.g == 1

    @property
    def unique(self) -> bool:
        return self.g == 1

    def local_factor(self, n: int) -> ModPoly:
        if self.residue_factor is None:
            raise UnsupportedPrime("no local factor for a ramified prime")
        return _lift(self.field.min_poly, self.residue_factor, self.q, n)

    def v2(self) -> int:
        """v_P(2)."""
        return self.e if self.q == 2 else 0

    def to_json(self) -> dict:
        return {
            "field": self.field.to_json(),
            "q": self.q,
            "e": self.e,
            "f": self.f,
            "g": self.g,
            "residue_factor": None if self.residue_factor is None else list(self.residue_factor),
            "index": self.index,
        }

    def __repr__(self) -> str:
        return f"PrimeData(q={self.q}, e={self.e}, f={self.f}, g={self.g}, #{self.index} in {self.field.label()})"


@lru_cache(maxsize=4096)
def _lift(min_poly: tuple[int, ...], factor: tuple[int, ...], q: int, n: int) -> ModPoly:
    return hensel_lift_factor(min_poly, ModPoly(factor, q), n)


def _quadratic_splitting(q: int, t: int) -> tuple[int, int, int]:
    if q == 2:
        if t % 4 != 1:
            return 2, 1, 1
        return (1, 1, 2) if t % 8 == 1 else (1, 2, 1)
    if t % q == 0:
        return 2, 1, 1
    return (1, 1, 2) if legendre(t, q) == 1 else (1, 2, 1)


def _cyclotomic_splitting(q: int, r: int) -> tuple[int, int, int]:
    n = (r - 1) // 2
    if q == r:
        return n, 1, 1
    f = order_mod_pm1(q, r)
    return 1, f, n // f


def _from_factors(F: NumberFieldDesc, q: int) -> list[PrimeData]:
    facs = factor_mod_p(F.min_poly, q)
    if any(m > 1 for _, m in facs):
        raise UnsupportedPrime(f"{q} ramifies or divides the index in {F.label()}")
    g = len(facs)
    return [
        PrimeData(F, q, 1, h.degree, g, residue_factor=h.coeffs, index=i)
        for i, (h, _) in enumerate(facs)
    ]


def primes_above(q: int, F: NumberFieldDesc) -> list[PrimeData]:
    """All primes of F above the rational prime q, with local data when
    the prime is unramified."""
    if not isprime(q):
        raise ValueError(f"{q} is not prime")
    if F.kind == "rationals":
        return [PrimeData(F, q, 1, 1, 1, residue_factor=(0, 1))]
    if F.kind == "real_quadratic":
        e, f, g = _quadratic_splitting(q, F.t)
        if e > 1:
            return [PrimeData(F, q, e, f, g)]
        return _from_factors(F, q)
    if F.kind == "real_cyclotomic":
        e, f, g = _cyclotomic_splitting(q, F.r)
        if e > 1:
            return [PrimeData(F, q, e, f, g)]
        out = _from_factors(F, q)
        assert all(P.f == f and P.g == g for P in out)
        return out
    if F.kind == "composite":
        P = splitting_type(q, F)
        return [PrimeData(F, q, P.e, P.f, P.g, index=i) for i in range(P.g)]
    raise ValueError(f"unsupported field kind {F.kind!r}")


def splitting_type(q: int, F: NumberFieldDesc) -> PrimeData:
    """Splitting data (e, f, g) of q in F; one representative prime."""
    if not isprime(q):
        raise ValueError(f"{q} is not prime")
    if F.kind != "composite":
        return primes_above(q, F)[0]
    e1, f1, _ = _quadratic_splitting(q, F.t)
    e2, f2, _ = _cyclotomic_splitting(q, F.r)
    if e1 > 1 and e2 > 1:
        raise UnsupportedPrime(f"{q} ramifies in both Q(sqrt {F.t}) and Q(zeta_{F.r})^+")
    # abelian composite: inertia is the product, Frobenius order the lcm
    e = e1 * e2
    f = math.lcm(f1, f2)
    return PrimeData(F, q, e, f, F.degree // (e * f))


# ---------------------------------------------------------------------------
# valuations


def valuation_by_norm(x: FieldElement, P: PrimeData) -> int | float:
    """v_P(x) = v_q(Norm x) / f, valid when P is the only prime above q."""
    if not P.unique:
        raise UnsupportedPrime("norm route needs a unique prime above q")
    if x.is_zero():
        return math.inf
    v = v_p(field_norm(x), P.q)
    if v % P.f:
        raise ArithmeticError("norm valuation not divisible by the residue degree")
    return v // P.f


def valuation_by_coordinates(x: FieldElement, P: PrimeData) -> int | float:
    """v_P(x) = min_i v_q(x_i) for P = qO inert (power basis is integral)."""
    if not P.inert:
        raise UnsupportedPrime("coordinate route needs an inert prime")
    return min(v_p(c, P.q) for c in x.coords)


def valuation_by_hensel(x: FieldElement, P: PrimeData, cap: int = VALUATION_CAP) -> int | float:
    """Reduce x modulo the lifted local factor of P over Z/q^n and take the
    minimal q-adic valuation of the remainder, doubling n as needed."""
    if x.is_zero():
        return math.inf
    if P.e != 1 or P.residue_factor is None:
        raise UnsupportedPrime("Hensel route needs an unramified prime with a local factor")
    q = P.q
    num = x.integer_coords()
    vd = v_p(x.denominator(), q)
    n = P.precision
    while n <= cap:
        h = P.local_factor(n)
        rem = ModPoly(num, q**n) % h
        if not rem.is_zero():
            return min(v_p(c, q) for c in rem.coeffs if c) - vd
        n *= 2
    raise ArithmeticError(f"valuation precision cap {cap} exceeded")


def element_valuation(x, P: PrimeData, cap: int = VALUATION_CAP) -> int | float:
    if not isinstance(x, FieldElement):
        x = P.field(x)
    elif x.field != P.field:
        raise ValueError("element and prime live in different fields")
    if x.is_zero():
        return math.inf
    if P.field.degree == 1:
        return v_p(x.coords[0], P.q)
    if P.e == 1 and P.residue_factor is not None:
        return valuation_by_hensel(x, P, cap)
    if P.unique:
        return valuation_by_norm(x, P)
    raise UnsupportedPrime(f"valuations at {P} are not supported")


def valuation(x, prime) -> int | float:
    """v at a PrimeData, or the ordinary p-adic valuation for an int prime."""
    if isinstance(prime, PrimeData):
        return element_valuation(x, prime)
    if isinstance(x, FieldElement):
        x = x.to_rational()
    return v_p(x, prime)


# ---------------------------------------------------------------------------
# residue rings


@dataclass(frozen=True)
class ResidueRing:
    """O / P^n as integer coordinate vectors modulo a monic polynomial and
    per-coordinate moduli; the ring variable is y = theta - shift."""

    prime: PrimeData
    n: int
    modulus: tuple[int, ...]
    coord_moduli: tuple[int, ...]
    shift: int = 0

    @property
    def dim(self) -> int:
        return len(self.coord_moduli)

    @property
    def size(self) -> int:
        return math.prod(self.coord_moduli)

    def reduce(self, coeffs: Sequence[int]) -> tuple[int, ...]:
        c = list(coeffs)
        if len(c) > self.dim:
            c = list(poly_rem(c, self.modulus))
        c += [0] * (self.dim - len(c))
        return tuple(int(a) % m for a, m in zip(c, self.coord_moduli))

    def image(self, x) -> tuple[int, ...]:
        F = self.prime.field
        if not isinstance(x, FieldElement):
            x = F(x)
        big = max(self.coord_moduli)
        coeffs = x.coords
        if self.shift:
            coeffs = poly_compose_shift(coeffs, self.shift)
        out = []
        for c in coeffs:
            c = Fraction(c)
            if c.denominator % self.prime.q == 0:
                raise ValueError("element is not integral at the prime")
            out.append(c.numerator * pow(c.denominator, -1, big) % big)
        if self.prime.g > 1:
            h = self.prime.local_factor(self.n)
            out = list((ModPoly(out, big) % h).coeffs)
        return self.reduce(out)

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.dim

    def one(self) -> tuple[int, ...]:
        return self.reduce((1,))

    def add(self, a, b):
        return tuple((x + y) % m for x, y, m in zip(a, b, self.coord_moduli))

    def sub(self, a, b):
        return tuple((x - y) % m for x, y, m in zip(a, b, self.coord_moduli))

    def mul(self, a, b):
        return self.reduce(poly_mul(a, b))

    def square(self, a):
        return self.mul(a, a)

    def is_unit(self, a) -> bool:
        if self.shift:
            return a[0] % self.prime.q != 0
        return any(c % self.prime.q for c in a)

    def elements(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(*(range(m) for m in self.coord_moduli))

    def uniformizer(self) -> tuple[int, ...]:
        if self.shift:
            return self.reduce((0, 1))
        return self.reduce((self.prime.q,))

    def residue_reps(self) -> Iterator[tuple[int, ...]]:
        """Representatives of O/P lifted into this ring."""
        if self.shift:
            return (self.reduce((a,)) for a in range(self.prime.q))
        return (self.reduce(c) for c in itertools.product(range(self.prime.q), repeat=self.dim))

    def squaring_table(self):
        """Fast squaring closure for exhaustive enumeration."""
        d = self.dim
        red = [self.reduce([0] * k + [1]) for k in range(2 * d - 1)]
        mods = self.coord_moduli

        def sq(a):
            acc = [0] * d
            for i in range(d):
                ai = a[i]
                if not ai:
                    continue
                for j in range(d):
                    c = ai * a[j]
                    if c:
                        row = red[i + j]
                        for k in range(d):
                            acc[k] += c * row[k]
            return tuple(v % m for v, m in zip(acc, mods))

        return sq

    def to_json(self) -> dict:
        return {
            "prime": self.prime.to_json(),
            "n": self.n,
            "modulus": list(self.modulus),
            "coord_moduli": list(self.coord_moduli),
            "shift": self.shift,
            "size": self.size,
        }


@lru_cache(maxsize=None)
def residue_ring(P: PrimeData, n: int) -> ResidueRing:
    if n < 1:
        raise ValueError("n must be positive")
    F = P.field
    q = P.q
    if P.e == 1 and P.residue_factor is not None:
        if P.g == 1:
            return ResidueRing(P, n, F.min_poly, (q**n,) * F.degree)
        h = P.local_factor(n)
        return ResidueRing(P, n, h.coeffs, (q**n,) * P.f)
    if F.kind == "real_cyclotomic" and q == F.r:
        # psi(y + 2) is Eisenstein at r; v(sum c_i y^i) = min(e v_r(c_i) + i)
        e = P.e
        modulus = poly_compose_shift(F.min_poly, 2)
        moduli = tuple(q ** max(0, -(-(n - i) // e)) for i in range(e))
        return ResidueRing(P, n, tuple(int(c) for c in modulus), moduli, shift=2)
    raise UnsupportedPrime(f"residue rings at {P} are not supported")


def is_square_in_residue_ring(u, R: ResidueRing, method: str = "auto"):
    """Decide whether u is a square in R.

    Returns (True, witness), (False, None) or (None, None) when the question
    cannot be decided by the chosen method.
    """
    if isinstance(u, FieldElement) or isinstance(u, (int, Fraction)):
        u = R.image(u)
    u = R.reduce(u)
    if method == "auto":
        method = "exhaustive" if R.size <= EXHAUSTIVE_LIMIT else "lift"
    if method == "exhaustive":
        sq = R.squaring_table()
        for nu in R.elements():
            if sq(nu) == u:
                return True, nu
        return False, None
    if method == "lift":
        if not R.is_unit(u):
            return None, None
        return _square_by_lifting(u, R)
    raise ValueError(f"unknown method {method!r}")


def _square_by_lifting(u, R: ResidueRing):
    # W_j = { nu mod P^j : nu^2 = u mod P^min(n, j+k) }, k = v_P(2).  For
    # j >= k the square mod P^(j+k) only depends on nu mod P^j, so u is a
    # square mod P^n iff W_(n-k) is nonempty.
    P, n = R.prime, R.n
    k = P.v2()
    j0 = max(k, 1)
    if n - k < j0:
        return is_square_in_residue_ring(u, R, "exhaustive")

    def target(j):
        Rt = residue_ring(P, min(n, j + k))
        return Rt, Rt.reduce(u)

    Rj = residue_ring(P, j0)
    Rt, ut = target(j0)
    W = {nu for nu in Rj.elements() if Rt.square(Rt.reduce(nu)) == ut}
    for j in range(j0, n - k):
        if not W:
            return False, None
        Rn = residue_ring(P, j + 1)
        step = Rn.uniformizer()
        for _ in range(j - 1):
            step = Rn.mul(step, Rn.uniformizer())
        shifts = [Rn.mul(step, w) for w in Rn.residue_reps()]
        Rt, ut = target(j + 1)
        nxt = set()
        for nu in W:
            base = Rn.reduce(nu)
            for s in shifts:
                cand = Rn.add(base, s)
                if Rt.square(Rt.reduce(cand)) == ut:
                    nxt.add(cand)
        W = nxt
    if not W:
        return False, None
    witness = R.reduce(min(W))
    assert R.square(witness) == u
    return True, witness
