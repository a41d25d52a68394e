#!/usr/bin/env python3
"""Print the worked examples: criterion verdicts, the mod-32 square witnesses,
a Frey curve reduction table and the small S-unit sets."""

import argparse

from rrpfermat.criteria import check_cor_Q_prime_d, check_cor_unit_d, check_prop_general
from rrpfermat.frey import build_frey_55p, classify_reduction
from rrpfermat.numfield import rationals
from rrpfermat.sunit import SUnitConfig, enumerate_sunit


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dmax", type=int, default=60, help="largest d for the cor-q-prime-d scan")
    args = ap.parse_args()

    from sympy import primerange

    for r in (7, 11):
        ok = [d for d in primerange(3, args.dmax) if d != r and check_cor_Q_prime_d(r, d).overall == "pass"]
        print(f"cor-q-prime-d r={r}: passing d < {args.dmax}: {ok}")
    for r in (7, 17, 29, 149):
        print(f"cor-unit-d r={r}: {check_cor_unit_d(r).overall}")

    for r, d in ((7, 5), (11, 5), (11, 13)):
        rep = check_prop_general(r, d)
        sq = {c.name: (c.verdict, c.witness) for c in rep.conditions if c.name.endswith("nonsquare")}
        print(f"prop-general r={r} d={d}: {rep.overall}; {sq}")

    E = build_frey_55p(1, 2)
    print(f"55P curve (1,2): Delta={E.discriminant.to_rational()} c4={E.c4.to_rational()}")
    for q in (3, 7, 11, 13):
        v = classify_reduction(E, q)
        print(f"  q={q}: {v.type} (v(Delta)={v.v_delta}, v(c4)={v.v_c4})")

    for S in ((2,), (2, 3)):
        sols = enumerate_sunit(SUnitConfig(rationals(), S, 4))
        print(f"S={S}: {[(str(s.lam), str(s.mu)) for s in sols]}")


if __name__ == "__main__":
    main()
