#!/usr/bin/env python3
"""Tabulate the mod P^n square test for pi, d and pi*d in Q(zeta_r)^+ with 2
inert, next to the norm-reduction filter and the signed norm of pi."""

import argparse
import time

from rrpfermat.criteria import norm_reduction_filter
from rrpfermat.numfield import (
    field_norm,
    is_square_in_residue_ring,
    real_cyclotomic,
    residue_ring,
    splitting_type,
    uniformizer_above_r,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--r", type=int, nargs="+", default=[7, 11, 13])
    ap.add_argument("--d", type=int, nargs="+", default=[5, 13, 29, 37, 53])
    ap.add_argument("--n", type=int, default=5)
    args = ap.parse_args()

    print(f"{'r':>3} {'d':>4} {'elem':>5} {'norm mod 32':>11} {'filter':>12} {'square':>7} {'secs':>6}")
    for r in args.r:
        F = real_cyclotomic(r)
        P = splitting_type(2, F)
        if not P.inert:
            print(f"{r:>3}  2 not inert, skipped")
            continue
        R = residue_ring(P, args.n)
        pi = uniformizer_above_r(F)
        for d in args.d:
            for label, x in (("pi", pi), ("d", F(d)), ("pi*d", pi * d)):
                t0 = time.perf_counter()
                sq, _ = is_square_in_residue_ring(x, R)
                secs = time.perf_counter() - t0
                filt = norm_reduction_filter(x, args.n)
                nm = field_norm(x).numerator % 32
                print(f"{r:>3} {d:>4} {label:>5} {nm:>11} {filt.verdict:>12} {str(sq):>7} {secs:>6.2f}")


if __name__ == "__main__":
    main()
