"""Command-line front end: ``rrpfermat {field,check,frey,sunit,search}``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Any

from sympy import factorint

from . import criteria, frey, jsonio, search, sunit
from .numfield import (
    NumberFieldDesc,
    UnsupportedPrime,
    composite,
    primes_above,
    rationals,
    real_cyclotomic,
    real_quadratic,
)
from .arith import poly_str

EXIT_OK, EXIT_FAIL, EXIT_UNDECIDED, EXIT_USAGE = 0, 1, 2, 64

CRITERIA = ("prop-general", "cor-q-prime-d", "cor-unit-d", "cor-quadratic", "thm2")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    params: dict
    format: str = "human"
    seed: int = 0
    assertion_file: str | None = None
    assertions: dict = field(default_factory=dict)


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="rrpfermat", description=__doc__)
    ap.add_argument("--format", choices=("human", "json"), default="human")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--assert", dest="assert_file", metavar="FILE")
    sub = ap.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = sub.add_parser("field", help="field summary and splitting of small primes")
    p.add_argument("--r", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--d", type=int)

    p = sub.add_parser("check", help="evaluate a local criterion")
    p.add_argument("--criterion", choices=CRITERIA, required=True)
    p.add_argument("--r", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--assert-h-plus-odd", action="store_true",
                   help="assert odd narrow class number for the field under test")

    p = sub.add_parser("frey", help="Frey curve invariants and reduction types")
    p.add_argument("--curve", choices=("rrp", "55p"), required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--c", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--indices", type=_int_list, default=(0, 1, 2))
    p.add_argument("--q", type=_int_list, default=(), help="primes at which to classify reduction")

    p = sub.add_parser("sunit", help="enumerate S-unit equation solutions")
    p.add_argument("--s", type=_int_list, required=True)
    p.add_argument("--bound", type=int, default=sunit.DEFAULT_BOUND)
    p.add_argument("--t", type=int, help="work in Q(sqrt t) instead of Q")
    p.add_argument("--square-sum", action="store_true", help="enumerate alpha + beta = gamma^2 instead")
    p.add_argument("--check-bound-rrp", action="store_true")
    p.add_argument("--check-bound-55p", action="store_true")

    p = sub.add_parser("search", help="box search for x^r + y^r = d z^p")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--field", default="Q", help="Q or quadratic:t")
    p.add_argument("--filter", choices=search.FILTERS, default="all")
    p.add_argument("--vacuity", action="store_true", help="run the 2 | c vacuity check")
    return ap


def _load_assertions(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read assertion file: {exc}")
    if not isinstance(data, dict):
        raise UsageError("assertion file must hold a JSON object")
    return data


def parse_config(argv: list[str] | None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    params = {k: v for k, v in vars(ns).items() if k not in ("format", "seed", "assert_file", "subcommand")}
    cfg = RunConfig(ns.subcommand, params, ns.format, ns.seed, ns.assert_file, _load_assertions(ns.assert_file))
    _validate(cfg)
    return cfg


def _need(params: dict, *names: str) -> None:
    missing = [n for n in names if params.get(n) is None]
    if missing:
        raise UsageError("missing " + ", ".join("--" + n for n in missing))


def _validate(cfg: RunConfig) -> None:
    p = cfg.params
    if cfg.subcommand == "field":
        _need(p, "r")
    elif cfg.subcommand == "check":
        need = {
            "prop-general": ("r", "d"),
            "cor-q-prime-d": ("r", "d"),
            "cor-unit-d": ("r",),
            "cor-quadratic": ("t", "r"),
            "thm2": ("d",),
        }[p["criterion"]]
        _need(p, *need)
    elif cfg.subcommand == "frey":
        if p["curve"] == "rrp":
            _need(p, "r")
        if len(p["indices"]) != 3:
            raise UsageError("--indices takes three integers")
    elif cfg.subcommand == "sunit":
        if p["check_bound_rrp"] and p["square_sum"]:
            raise UsageError("--check-bound-rrp applies to lambda + mu = 1, not --square-sum")
        if p["check_bound_55p"] and not p["square_sum"]:
            raise UsageError("--check-bound-55p requires --square-sum")
    elif cfg.subcommand == "search":
        _parse_field_spec(p["field"])


def _parse_field_spec(text: str) -> NumberFieldDesc:
    if text in ("Q", "rationals"):
        return rationals()
    if text.startswith("quadratic:"):
        try:
            return real_quadratic(int(text.split(":", 1)[1]))
        except ValueError as exc:
            raise UsageError(f"bad field {text!r}: {exc}")
    raise UsageError(f"bad field {text!r}: use Q or quadratic:t")


# ---------------------------------------------------------------------------
# commands; each returns (kind, payload, exit code)


def _splitting(q: int, F: NumberFieldDesc) -> list[dict]:
    try:
        return [{"e": P.e, "f": P.f, "g": P.g, "index": P.index} for P in primes_above(q, F)]
    except UnsupportedPrime as exc:
        return [{"unsupported": str(exc)}]


def cmd_field(cfg: RunConfig):
    p = cfg.params
    F = composite(p["t"], p["r"]) if p["t"] is not None else real_cyclotomic(p["r"])
    qs = [2, p["r"]]
    if p["t"] is not None:
        qs.append(p["t"])
    if p["d"] is not None:
        qs.append(abs(p["d"]))
    splitting = {}
    for q in qs:
        if q > 1 and str(q) not in splitting:
            for prime in factorint(q):
                splitting[str(prime)] = _splitting(prime, F)
    summary = {
        "label": F.label(),
        "kind": F.kind,
        "degree": F.degree,
        "min_poly": list(F.min_poly),
        "min_poly_str": poly_str(F.min_poly),
        "splitting": splitting,
    }
    return "field", summary, EXIT_OK


def _assertions_for(cfg: RunConfig) -> dict:
    out = {k: dict(v) for k, v in cfg.assertions.items()}
    p = cfg.params
    if p.get("assert_h_plus_odd"):
        if p["criterion"] == "cor-quadratic":
            F = composite(p["t"], p["r"])
        elif p.get("r") is not None:
            F = real_cyclotomic(p["r"])
        else:
            F = rationals()
        out.setdefault("h_plus_odd", {})[criteria.field_key(F)] = True
    return out


_VERDICT_EXIT = {criteria.PASS: EXIT_OK, criteria.FAIL: EXIT_FAIL, criteria.UNDECIDED: EXIT_UNDECIDED}


def cmd_check(cfg: RunConfig):
    p = cfg.params
    asr = _assertions_for(cfg)
    crit = p["criterion"]
    if crit == "prop-general":
        rep = criteria.check_prop_general(p["r"], p["d"], asr)
    elif crit == "cor-q-prime-d":
        rep = criteria.check_cor_Q_prime_d(p["r"], p["d"], asr)
    elif crit == "cor-unit-d":
        rep = criteria.check_cor_unit_d(p["r"], asr)
    elif crit == "cor-quadratic":
        rep = criteria.check_cor_quadratic(p["t"], p["r"], asr)
    else:
        F = real_quadratic(p["t"]) if p["t"] is not None else None
        rep = criteria.check_thm2_hypotheses(p["d"], F, asr)
    return "criteria_report", rep, _VERDICT_EXIT[rep.overall]


def cmd_frey(cfg: RunConfig):
    p = cfg.params
    if p["curve"] == "55p":
        curve = frey.build_frey_55p(p["a"], p["b"], p["c"], p["d"], p["p"])
    else:
        curve = frey.frey_rrp_from_indices(p["a"], p["b"], p["r"], *p["indices"], c=None, d=None, p=p["p"])
    verdicts = []
    for q in p["q"]:
        try:
            verdicts.extend(frey.classify_reduction_all(curve, q, p["p"]))
        except ValueError as exc:
            raise UsageError(f"q = {q}: {exc}")
    code = EXIT_FAIL if any(v.violation for v in verdicts) else EXIT_OK
    return "frey", {"curve": curve, "reduction": tuple(verdicts)}, code


def cmd_sunit(cfg: RunConfig):
    p = cfg.params
    F = real_quadratic(p["t"]) if p["t"] is not None else rationals()
    conf = sunit.SUnitConfig(F, p["s"], p["bound"])
    P = primes_above(2, F)[0] if F.degree > 1 else 2
    failures = []
    if p["square_sum"]:
        sols = sunit.enumerate_square_sum(conf)
        if p["check_bound_55p"]:
            failures = [i for i, s in enumerate(sols) if not sunit.check_bound_55p(s, P)]
    else:
        sols = sunit.enumerate_sunit(conf)
        if p["check_bound_rrp"]:
            failures = [i for i, s in enumerate(sols) if not sunit.check_bound_rrp(s, P)]
    payload = {
        "config": conf,
        "solutions": tuple(sols),
        "bound_checked": bool(p["check_bound_rrp"] or p["check_bound_55p"]),
        "bound_failures": tuple(failures),
    }
    return "sunit", payload, EXIT_FAIL if failures else EXIT_OK


def cmd_search(cfg: RunConfig):
    p = cfg.params
    box = search.SearchBox(p["bound"], p["r"], p["p"], p["d"], _parse_field_spec(p["field"]), p["filter"])
    if p["vacuity"]:
        rep = search.verify_vacuity(box)
        bad = rep.hits or rep.parity_violations or rep.coprimality_violations
        return "vacuity", rep, EXIT_FAIL if bad else EXIT_OK
    recs = search.search_solutions(box)
    falsifier = box.filter == "two_divides_c" and bool(recs)
    return "search", {"box": box, "solutions": tuple(recs)}, EXIT_FAIL if falsifier else EXIT_OK


COMMANDS = {"field": cmd_field, "check": cmd_check, "frey": cmd_frey, "sunit": cmd_sunit, "search": cmd_search}


# ---------------------------------------------------------------------------
# output


def _human(obj: Any) -> str:
    enc = jsonio.encode(obj)
    return _flatten(enc)


def _fmt_scalar(x: Any) -> str:
    if isinstance(x, dict):
        if "$q" in x:
            return x["$q"].removesuffix("/1")
        if "$inf" in x:
            return "inf" if x["$inf"] > 0 else "-inf"
        if x.get("$type") == "FieldElement":
            cs = [_fmt_scalar(c) for c in x["coords"]]
            return cs[0] if len(cs) == 1 else "[" + ", ".join(cs) + "]"
    return json.dumps(x)


def _flatten(x: Any, prefix: str = "") -> str:
    lines = []

    def walk(v, key):
        if isinstance(v, dict) and not ("$q" in v or "$inf" in v or v.get("$type") in ("FieldElement", "NumberFieldDesc")):
            for k, sub in v.items():
                if k == "$type":
                    continue
                walk(sub, f"{key}.{k}" if key else k)
        elif isinstance(v, list) and v and any(isinstance(e, (dict, list)) for e in v):
            for i, sub in enumerate(v):
                walk(sub, f"{key}[{i}]")
        elif isinstance(v, dict) and v.get("$type") == "NumberFieldDesc":
            lines.append(f"{key}: {v.get('kind')} {v.get('min_poly')}")
        else:
            lines.append(f"{key}: {_fmt_scalar(v)}")

    walk(x, prefix)
    return "\n".join(lines)


def emit(kind: str, payload: Any, cfg: RunConfig, out=None) -> None:
    out = out or sys.stdout
    if cfg.format == "json":
        env = jsonio.envelope(kind, payload)
        env["seed"] = cfg.seed
        if kind == "search":
            # one JSON document per line: header, then each solution
            header = dict(env, result={"box": jsonio.encode(payload["box"]), "count": len(payload["solutions"])})
            out.write(json.dumps(header, sort_keys=True) + "\n")
            for rec in payload["solutions"]:
                out.write(json.dumps(jsonio.encode(rec), sort_keys=True) + "\n")
        else:
            out.write(json.dumps(env, sort_keys=True) + "\n")
    else:
        out.write(f"# {kind}\n{_human(payload)}\n")


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = parse_config(argv)
        kind, payload, code = COMMANDS[cfg.subcommand](cfg)
    except UsageError as exc:
        print(f"rrpfermat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except ValueError as exc:
        print(f"rrpfermat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    emit(kind, payload, cfg)
    return code


if __name__ == "__main__":
    sys.exit(main())
