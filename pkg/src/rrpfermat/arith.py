"""Exact arithmetic substrate.

Polynomials are stored as tuples of coefficients in ascending degree, with
trailing zeros stripped (the zero polynomial is the empty tuple).  `IntPoly`
wraps integer coefficients, `ModPoly` coefficients reduced modulo m, where m
is a prime or a prime power.  Rationals are plain `fractions.Fraction`.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from sympy import factorint, isprime

Rational = Fraction


# ---------------------------------------------------------------------------
# coefficient-list helpers (work for int and Fraction coefficients)


def trim(coeffs: Iterable) -> tuple:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly_add(a: Sequence, b: Sequence) -> tuple:
    n = max(len(a), len(b))
    return trim((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))


def poly_sub(a: Sequence, b: Sequence) -> tuple:
    n = max(len(a), len(b))
    return trim((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n))


def poly_mul(a: Sequence, b: Sequence) -> tuple:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return trim(out)


def poly_scale(a: Sequence, c) -> tuple:
    return trim(x * c for x in a)


def poly_divmod(a: Sequence, b: Sequence) -> tuple[tuple, tuple]:
    """Division with remainder over a field (Fraction coefficients), or over
    the integers when `b` is monic."""
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(trim(a))
    lead = b[-1]
    db = len(b) - 1
    if len(r) - 1 < db:
        return (), tuple(r)
    q = [0] * (len(r) - db)
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k]
        if c == 0:
            continue
        if lead != 1:
            c = Fraction(c) / lead
        q[k - db] = c
        for i in range(db + 1):
            r[k - db + i] -= c * b[i]
    return trim(q), trim(r[:db])


def poly_rem(a: Sequence, b: Sequence) -> tuple:
    return poly_divmod(a, b)[1]


def poly_eval(a: Sequence, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def poly_compose_shift(a: Sequence, s: int) -> tuple:
    """Coefficients of a(y + s)."""
    out: tuple = ()
    for c in reversed(a):
        out = poly_add(poly_mul(out, (s, 1)), (c,))
    return out


def resultant(f: Sequence, g: Sequence) -> Fraction:
    """Res(f, g) = lc(f)^deg(g) * prod over roots a of f of g(a)."""
    f = tuple(Fraction(c) for c in trim(f))
    g = tuple(Fraction(c) for c in trim(g))
    if not f or not g:
        return Fraction(0)
    acc = Fraction(1)
    while True:
        df, dg = len(f) - 1, len(g) - 1
        if dg == 0:
            return acc * g[0] ** df
        if df == 0:
            return acc * f[0] ** dg
        r = poly_rem(f, g)
        if not r:
            return Fraction(0)
        dr = len(r) - 1
        # Res(f, g) = (-1)^(df*dg) lc(g)^(df-dr) Res(g, r)
        if (df * dg) % 2:
            acc = -acc
        acc *= g[-1] ** (df - dr)
        f, g = g, r


def poly_str(coeffs: Sequence, var: str = "x") -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if mono and c == 1:
            s = mono
        elif mono and c == -1:
            s = "-" + mono
        else:
            s = f"{c}{'*' + mono if mono else ''}"
        terms.append(s)
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += " - " + t[1:] if t.startswith("-") else " + " + t
    return out


# ---------------------------------------------------------------------------
# polynomial types


@dataclass(frozen=True)
class IntPoly:
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", trim(int(c) for c in self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __add__(self, other: IntPoly) -> IntPoly:
        return IntPoly(poly_add(self.coeffs, other.coeffs))

    def __sub__(self, other: IntPoly) -> IntPoly:
        return IntPoly(poly_sub(self.coeffs, other.coeffs))

    def __mul__(self, other: IntPoly) -> IntPoly:
        return IntPoly(poly_mul(self.coeffs, other.coeffs))

    def __call__(self, x):
        return poly_eval(self.coeffs, x)

    def __str__(self) -> str:
        return poly_str(self.coeffs)

    def mod(self, m: int) -> ModPoly:
        return ModPoly(self.coeffs, m)


@dataclass(frozen=True)
class ModPoly:
    coeffs: tuple[int, ...]
    modulus: int

    def __post_init__(self):
        m = self.modulus
        object.__setattr__(self, "coeffs", trim(int(c) % m for c in self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def _same(self, other: ModPoly) -> None:
        if other.modulus != self.modulus:
            raise ValueError("moduli differ")

    def __add__(self, other: ModPoly) -> ModPoly:
        self._same(other)
        return ModPoly(poly_add(self.coeffs, other.coeffs), self.modulus)

    def __sub__(self, other: ModPoly) -> ModPoly:
        self._same(other)
        return ModPoly(poly_sub(self.coeffs, other.coeffs), self.modulus)

    def __mul__(self, other: ModPoly) -> ModPoly:
        self._same(other)
        return ModPoly(poly_mul(self.coeffs, other.coeffs), self.modulus)

    def scale(self, c: int) -> ModPoly:
        return ModPoly(poly_scale(self.coeffs, c), self.modulus)

    def monic(self) -> ModPoly:
        return self.scale(pow(self.lead, -1, self.modulus))

    def __divmod__(self, other: ModPoly) -> tuple[ModPoly, ModPoly]:
        self._same(other)
        m = self.modulus
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        inv = pow(other.lead, -1, m)  # raises when the lead is not a unit
        b = other.coeffs
        db = len(b) - 1
        r = list(self.coeffs)
        if len(r) - 1 < db:
            return ModPoly((), m), self
        q = [0] * (len(r) - db)
        for k in range(len(r) - 1, db - 1, -1):
            c = r[k] * inv % m
            if c == 0:
                continue
            q[k - db] = c
            for i in range(db + 1):
                r[k - db + i] = (r[k - db + i] - c * b[i]) % m
        return ModPoly(q, m), ModPoly(r[:db], m)

    def __floordiv__(self, other: ModPoly) -> ModPoly:
        return divmod(self, other)[0]

    def __mod__(self, other: ModPoly) -> ModPoly:
        return divmod(self, other)[1]

    def powmod(self, e: int, mod: ModPoly) -> ModPoly:
        result = ModPoly((1,), self.modulus)
        base = self % mod
        while e:
            if e & 1:
                result = (result * base) % mod
            base = (base * base) % mod
            e >>= 1
        return result

    def derivative(self) -> ModPoly:
        return ModPoly(tuple(i * c for i, c in enumerate(self.coeffs))[1:], self.modulus)

    def __call__(self, x: int) -> int:
        return poly_eval(self.coeffs, x) % self.modulus

    def __str__(self) -> str:
        return f"{poly_str(self.coeffs)} (mod {self.modulus})"

    def lift(self) -> IntPoly:
        return IntPoly(self.coeffs)


def poly_gcd_mod_p(a: ModPoly, b: ModPoly) -> ModPoly:
    """Monic gcd over the prime field F_p."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def poly_xgcd_mod_p(a: ModPoly, b: ModPoly) -> tuple[ModPoly, ModPoly, ModPoly]:
    """(g, s, t) with s*a + t*b = g monic, over F_p."""
    p = a.modulus
    zero, one = ModPoly((), p), ModPoly((1,), p)
    r0, r1, s0, s1, t0, t1 = a, b, one, zero, zero, one
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    inv = pow(r0.lead, -1, p)
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


# ---------------------------------------------------------------------------
# factorization over F_p


def _pth_root(f: ModPoly) -> ModPoly:
    # f(x) = g(x^p) over F_p; coefficients are their own p-th roots
    p = f.modulus
    return ModPoly(f.coeffs[::p], p)


def squarefree_decomposition(f: ModPoly) -> list[tuple[ModPoly, int]]:
    """Monic f over F_p -> [(g_i, i)] with f = prod g_i^i, g_i squarefree."""
    p = f.modulus
    out: list[tuple[ModPoly, int]] = []

    def rec(f: ModPoly, mult: int) -> None:
        if f.degree < 1:
            return
        df = f.derivative()
        if df.is_zero():
            rec(_pth_root(f), mult * p)
            return
        c = poly_gcd_mod_p(f, df)
        w = f // c
        i = 1
        while w.degree >= 1:
            y = poly_gcd_mod_p(w, c)
            z = w // y
            if z.degree >= 1:
                out.append((z, i * mult))
            i += 1
            w, c = y, c // y
        if c.degree >= 1:
            rec(_pth_root(c), mult * p)

    rec(f, 1)
    return out


def distinct_degree(f: ModPoly) -> list[tuple[ModPoly, int]]:
    """Squarefree monic f -> [(product of all degree-d factors, d)]."""
    p = f.modulus
    x = ModPoly((0, 1), p)
    h = x
    out = []
    d = 0
    while f.degree >= 2 * (d + 1):
        d += 1
        h = h.powmod(p, f)
        g = poly_gcd_mod_p(f, h - x)
        if g.degree >= 1:
            out.append((g, d))
            f = f // g
            h = h % f
    if f.degree >= 1:
        out.append((f, f.degree))
    return out


def equal_degree(f: ModPoly, d: int, rng: random.Random) -> list[ModPoly]:
    """Cantor-Zassenhaus splitting of f, a product of distinct degree-d factors."""
    p = f.modulus
    if f.degree == d:
        return [f]
    while True:
        a = ModPoly([rng.randrange(p) for _ in range(f.degree)], p)
        if a.degree < 1:
            continue
        if p == 2:
            t = a % f
            acc = t
            for _ in range(d - 1):
                t = (t * t) % f
                acc = acc + t
            b = acc
        else:
            b = a.powmod((p**d - 1) // 2, f) - ModPoly((1,), p)
        g = poly_gcd_mod_p(f, b)
        if 1 <= g.degree < f.degree:
            return equal_degree(g, d, rng) + equal_degree(f // g, d, rng)


def factor_mod_p(f: IntPoly | Sequence[int], p: int, seed: int = 0) -> list[tuple[ModPoly, int]]:
    """Factor f over F_p into monic irreducibles with multiplicities.

    The leading unit is dropped.  Output is sorted by (degree, coefficients)
    so it is deterministic regardless of the random splitting.
    """
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    coeffs = f.coeffs if isinstance(f, IntPoly) else tuple(f)
    g = ModPoly(coeffs, p)
    if g.is_zero():
        raise ValueError("vanishing polynomial")
    if g.degree == 0:
        return []
    g = g.monic()
    rng = random.Random(seed)
    out = []
    for sq, mult in squarefree_decomposition(g):
        for part, d in distinct_degree(sq):
            for irr in equal_degree(part, d, rng):
                out.append((irr, mult))
    out.sort(key=lambda t: (t[0].degree, t[0].coeffs, t[1]))
    return out


# ---------------------------------------------------------------------------
# Hensel lifting


def hensel_lift_factor(f: IntPoly | Sequence[int], g0: ModPoly, n: int) -> ModPoly:
    """Lift a simple monic factor g0 of f mod p to a monic factor mod p^n."""
    p = g0.modulus
    coeffs = f.coeffs if isinstance(f, IntPoly) else tuple(f)
    if n < 1:
        raise ValueError("precision must be positive")
    fp = ModPoly(coeffs, p)
    if fp.is_zero() or fp.lead == 0:
        raise ValueError("leading coefficient of f must be a unit mod p")
    g0 = g0.monic()
    h0, rem = divmod(fp.monic(), g0)
    if not rem.is_zero():
        raise ValueError("g0 does not divide f mod p")
    one, s, t = poly_xgcd_mod_p(g0, h0)
    if one.degree != 0:
        raise ValueError("non-separable lift")
    g, h = list(g0.coeffs), list(h0.coeffs)
    pk = p
    for _ in range(1, n):
        m = pk * p
        fm = ModPoly(coeffs, m).monic()
        err = fm - ModPoly(g, m) * ModPoly(h, m)
        # err is divisible by pk; solve e = a*h + b*g mod p
        e = ModPoly([c // pk for c in err.coeffs], p)
        a = (t * e) % g0
        b = (e - a * h0) // g0
        g = list(poly_add(g, poly_scale(a.coeffs, pk)))
        h = list(poly_add(h, poly_scale(b.coeffs, pk)))
        pk = m
    return ModPoly(g, pk)


# ---------------------------------------------------------------------------
# elementary number theory


def v_p(x, p: int) -> int | float:
    """p-adic valuation of an integer or Fraction; +inf for zero."""
    x = Fraction(x)
    if x == 0:
        return math.inf
    v = 0
    n, d = x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def multiplicative_order(a: int, m: int) -> int:
    """Smallest k >= 1 with a^k = 1 mod m."""
    if m < 1:
        raise ValueError("modulus must be positive")
    if math.gcd(a, m) != 1:
        raise ValueError("not a unit")
    if m == 1:
        return 1
    phi = euler_phi(m)
    k = phi
    for q in factorint(phi):
        while k % q == 0 and pow(a, k // q, m) == 1:
            k //= q
    return k


def order_mod_pm1(a: int, r: int) -> int:
    """Order of a in (Z/r)^* / {+1, -1}."""
    k = multiplicative_order(a, r)
    if k % 2 == 0 and pow(a, k // 2, r) == r - 1:
        return k // 2
    return k


def euler_phi(m: int) -> int:
    out = m
    for q in factorint(m):
        out = out // q * (q - 1)
    return out


def squares_mod(m: int) -> frozenset[int]:
    return frozenset(x * x % m for x in range(m))


@lru_cache(maxsize=None)
def odd_square_classes_mod32() -> frozenset[int]:
    return frozenset(x * x % 32 for x in range(1, 32, 2))


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def prime_support(x) -> set[int]:
    """Rational primes dividing numerator or denominator of x (x != 0)."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("zero has no prime support")
    return set(factorint(abs(x.numerator))) | set(factorint(x.denominator))


def is_s_number(x, S: Iterable[int]) -> bool:
    """True when the nonzero rational x is supported on the primes of S."""
    x = Fraction(x)
    if x == 0:
        return False
    n, d = abs(x.numerator), x.denominator
    for p in S:
        while n % p == 0:
            n //= p
        while d % p == 0:
            d //= p
    return n == 1 and d == 1


def integer_root(n: int, k: int) -> int | None:
    """Exact integer k-th root of n (sign-aware for odd k), else None."""
    from sympy import integer_nthroot

    if n < 0:
        if k % 2 == 0:
            return None
        root = integer_root(-n, k)
        return None if root is None else -root
    root, exact = integer_nthroot(n, k)
    return int(root) if exact else None
