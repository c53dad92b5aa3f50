"""Command-line frontend.

Subcommands: group info, structures exists, orbits count-d | count-h |
lower-bound, psl2 table, abelian admits | bounds | construct, invariants
compute, verify all.

json-lines is the canonical output format (sorted keys, compact separators,
rationals as num/den objects); csv and table are lossy views.  Exit codes:
0 success, 1 budget-exceeded / non-realizable / failed-verification under
--strict semantics, 2 usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import abelian, braid, invariants, psl2, spherical, verify
from .groups import (
    AutUnavailableError,
    GroupError,
    GroupSpec,
    InvalidSpecError,
    make_group,
)
from .spherical import BudgetExceededError

DEFAULT_BUDGET = 10**8


def _canon(obj):
    """Canonical JSON form: Fractions become {den, num}; tuples become lists."""
    if isinstance(obj, Fraction):
        if obj.denominator == 1:
            return int(obj)
        return {"num": obj.numerator, "den": obj.denominator}
    if isinstance(obj, dict):
        return {str(k): _canon(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_canon(v) for v in obj]
    if isinstance(obj, (bool, int, str)) or obj is None:
        return obj
    if isinstance(obj, float):
        return obj
    return str(obj)


def _flatten(record: dict, prefix: str = "") -> dict:
    out = {}
    for k in sorted(record):
        v = record[k]
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, list):
            out[key] = ";".join(str(x) for x in v)
        else:
            out[key] = v
    return out


class _Emitter:
    def __init__(self, fmt: str):
        self.fmt = fmt
        self._header_done = False

    def emit(self, record: dict) -> None:
        record = _canon(record)
        if self.fmt == "json-lines":
            line = json.dumps(record, sort_keys=True, separators=(",", ":"))
        elif self.fmt == "csv":
            flat = _flatten(record)
            if not self._header_done:
                print(",".join(flat))
                self._header_done = True
            line = ",".join(str(v) for v in flat.values())
        else:  # table
            flat = _flatten(record)
            line = "  ".join(f"{k}={v}" for k, v in flat.items())
        print(line, flush=True)


def _parse_ints(text: str, what: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise InvalidSpecError(f"malformed {what}: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="beauville",
        description="Ramification structures, braid orbits, and surface "
                    "invariants for finite groups.",
    )
    ap.add_argument("--format", choices=("json-lines", "csv", "table"),
                    default="json-lines")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--strict", action="store_true",
                    help="exit 1 on budget-exceeded or non-realizable outcomes")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("group").add_subparsers(dest="action", required=True)
    gi = g.add_parser("info")
    gi.add_argument("--group", required=True)

    s = sub.add_parser("structures").add_subparsers(dest="action",
                                                    required=True)
    se = s.add_parser("exists")
    se.add_argument("--group", required=True)
    se.add_argument("--sizes", help="r1,r2 (search over all types)")
    se.add_argument("--type1", help="comma-separated orders")
    se.add_argument("--type2", help="comma-separated orders")
    se.add_argument("--mode", choices=("exhaustive", "randomized"),
                    default="exhaustive")
    se.add_argument("--trials", type=int, default=10**6)

    o = sub.add_parser("orbits").add_subparsers(dest="action", required=True)
    od = o.add_parser("count-d")
    od.add_argument("--group", required=True)
    od.add_argument("--type", required=True, dest="tau")
    od.add_argument("--verify", action="store_true")
    oh = o.add_parser("count-h")
    oh.add_argument("--group", required=True)
    oh.add_argument("--type1", required=True)
    oh.add_argument("--type2", required=True)
    ol = o.add_parser("lower-bound")
    ol.add_argument("--group", required=True)
    ol.add_argument("--type1", required=True)
    ol.add_argument("--type2", required=True)

    p = sub.add_parser("psl2").add_subparsers(dest="action", required=True)
    pt = p.add_parser("table")
    pt.add_argument("--p", type=int, required=True)
    pt.add_argument("--max-order", type=int, default=None,
                    help="cap on triple entries (default p)")

    a = sub.add_parser("abelian").add_subparsers(dest="action", required=True)
    aa = a.add_parser("admits")
    aa.add_argument("--factors", required=True)
    aa.add_argument("--r1", type=int, required=True)
    aa.add_argument("--r2", type=int, required=True)
    ab_ = a.add_parser("bounds")
    ab_.add_argument("--n", type=int, required=True)
    ac = a.add_parser("construct")
    ac.add_argument("--p", type=int, required=True)
    ac.add_argument("--r", type=int, required=True)

    i = sub.add_parser("invariants").add_subparsers(dest="action",
                                                    required=True)
    ic = i.add_parser("compute")
    ic.add_argument("--group", required=True)
    ic.add_argument("--type1", required=True)
    ic.add_argument("--type2", required=True)

    v = sub.add_parser("verify").add_subparsers(dest="action", required=True)
    va = v.add_parser("all")
    va.add_argument("--max-order", type=int, default=60)

    return ap


# ---------------------------------------------------------------------------
# subcommand handlers (return process exit code)


def _cmd_group_info(args, emit) -> int:
    G = make_group(args.group)
    rec = {
        "record": "group-info",
        "version": 1,
        "group": str(G.spec),
        "order": G.order,
        "family": G.spec.family,
        "num_classes": len(G.classes),
        "class_sizes": sorted((c.size for c in G.classes), reverse=True),
        "element_orders": sorted(set(int(x) for x in G.element_orders)),
    }
    try:
        rec["aut_order"] = G.aut_order
        rec["inn_order"] = G.inn_order
        rec["out_order"] = G.out_order
    except AutUnavailableError as exc:
        rec["aut_order"] = None
        rec["aut_note"] = str(exc)
    emit(rec)
    return 0


def _all_types_of_size(G, r: int):
    import itertools

    orders = sorted(set(int(x) for x in G.element_orders) - {1})
    yield from itertools.combinations_with_replacement(orders, r)


def _cmd_structures_exists(args, emit) -> int:
    G = make_group(args.group)
    if args.sizes and (args.type1 or args.type2):
        raise InvalidSpecError("give either --sizes or --type1/--type2")
    rc = 0
    if args.type1 or args.type2:
        if not (args.type1 and args.type2):
            raise InvalidSpecError("--type1 and --type2 are both required")
        tau1 = _parse_ints(args.type1, "--type1")
        tau2 = _parse_ints(args.type2, "--type2")
        res = spherical.exists_unmixed_structure(
            G, tau1, tau2, mode=args.mode, budget=args.budget,
            trials=args.trials, seed=args.seed)
        pairs = [(tau1, tau2, res)]
    elif args.sizes:
        r1, r2 = _parse_ints(args.sizes, "--sizes")
        res = None
        tau_pair = None
        if args.mode == "exhaustive":
            res = spherical.exists_unmixed_structure_of_size(G, r1, r2)
            if res.found:
                tau_pair = (res.structure.first.type_vector,
                            res.structure.second.type_vector)
            else:
                tau_pair = (None, None)
        else:
            inconclusive = False
            for tau1 in _all_types_of_size(G, r1):
                for tau2 in _all_types_of_size(G, r2):
                    r = spherical.exists_unmixed_structure(
                        G, tau1, tau2, mode=args.mode, budget=args.budget,
                        trials=args.trials, seed=args.seed)
                    if r.found:
                        res, tau_pair = r, (tau1, tau2)
                        break
                    if not r.certified_none:
                        inconclusive = True
                if res is not None and res.found:
                    break
            if res is None or not res.found:
                status = ("none-inconclusive" if inconclusive
                          else "none-exhaustive")
                res, tau_pair = spherical.SearchResult(status), (None, None)
        pairs = [(tau_pair[0], tau_pair[1], res)]
    else:
        raise InvalidSpecError("either --sizes or --type1/--type2 is required")
    for tau1, tau2, res in pairs:
        rec = {
            "record": "structure-exists",
            "version": 1,
            "group": str(G.spec),
            "tau1": list(tau1) if tau1 else None,
            "tau2": list(tau2) if tau2 else None,
            "mode": args.mode,
            "status": res.status,
        }
        if res.found:
            rec["witness"] = [
                spherical.serialize_system(res.structure.first),
                spherical.serialize_system(res.structure.second),
            ]
        emit(rec)
        if args.strict and res.status == "none-inconclusive":
            rc = 1
    return rc


def _cmd_orbits(args, emit) -> int:
    G = make_group(args.group)
    if args.action == "count-d":
        rep = braid.count_d(G, _parse_ints(args.tau, "--type"),
                            verify=args.verify, budget=args.budget)
        rec = rep.to_record()
        rec["record"] = "orbit-count"
        del rec["seconds"]  # deterministic output
        emit(rec)
        return 0
    tau1 = _parse_ints(args.type1, "--type1")
    tau2 = _parse_ints(args.type2, "--type2")
    if args.action == "count-h":
        rep = braid.count_h(G, tau1, tau2, budget=args.budget)
        rec = rep.to_record()
        rec["record"] = "orbit-count"
        del rec["seconds"]
        emit(rec)
        return 0
    bound = braid.class_tuple_lower_bound(G.spec if G.order > 20000 else G,
                                          tau1, tau2, budget=min(args.budget,
                                                                 20000),
                                          seed=args.seed)
    emit({
        "record": "orbit-lower-bound",
        "version": 1,
        "group": str(G.spec),
        "tau1": list(spherical.normalize_type(tau1)),
        "tau2": list(spherical.normalize_type(tau2)),
        "method": "lower-bound",
        "count": bound,
    })
    return 0


def _cmd_psl2_table(args, emit) -> int:
    p = args.p
    cap = args.max_order if args.max_order is not None else p
    triples = []
    for l in range(2, cap + 1):
        for m in range(max(l, 3), cap + 1):
            for n in range(max(m, 6), cap + 1):
                if psl2._expected_size(p, l) and psl2._expected_size(p, m) \
                        and psl2._expected_size(p, n):
                    triples.append((l, m, n))
    for triple in triples:
        dp = psl2.d_prime(p, triple)
        try:
            closed, tag = psl2.d_prime_closed(p, triple)
            if tag == "exact":
                assert closed == dp, (p, triple, closed, dp)
                method = "closed-form"
            else:
                method = "trace-scan"
        except psl2.HypothesisViolationError:
            method = "trace-scan"
        emit({
            "record": "psl2-table",
            "version": 1,
            "p": p,
            "triple": list(triple),
            "d_prime": dp,
            "d": 2 * dp,
            "method": method,
        })
    return 0


def _cmd_abelian(args, emit) -> int:
    if args.action == "admits":
        profile = abelian.AbelianProfile.from_any_factors(
            _parse_ints(args.factors, "--factors"))
        ok, reason = abelian.admits_structure(profile, args.r1, args.r2)
        emit({
            "record": "abelian-admits",
            "version": 1,
            "factors": list(profile.factors),
            "r1": args.r1,
            "r2": args.r2,
            "admits": ok,
            "reason": reason,
        })
        return 0
    if args.action == "bounds":
        N, lo, hi = abelian.hurwitz_bounds_rank2(args.n)
        emit({
            "record": "abelian-bounds",
            "version": 1,
            "n": args.n,
            "N": N,
            "h_lower": lo,
            "h_upper": hi,
        })
        return 0
    struct = abelian.construct_structure_zpzr(args.p, args.r)
    inv = invariants.structure_invariants(struct)
    emit({
        "record": "abelian-construct",
        "version": 1,
        "p": args.p,
        "r": args.r,
        "group": str(struct.group.spec),
        "system1": spherical.serialize_system(struct.first),
        "system2": spherical.serialize_system(struct.second),
        "invariants": inv.to_record(),
    })
    return 0


def _cmd_invariants(args, emit) -> int:
    G = make_group(args.group)
    tau1 = _parse_ints(args.type1, "--type1")
    tau2 = _parse_ints(args.type2, "--type2")
    try:
        inv = invariants.surface_invariants(G.order, tau1, tau2)
    except invariants.NonRealizableError as exc:
        emit({
            "record": "surface-invariants",
            "version": 1,
            "group": str(G.spec),
            "tau1": sorted(tau1),
            "tau2": sorted(tau2),
            "status": "non-realizable",
            "reason": exc.reason,
        })
        return 1 if args.strict else 0
    rec = {
        "record": "surface-invariants",
        "version": 1,
        "group": str(G.spec),
        "tau1": sorted(tau1),
        "tau2": sorted(tau2),
        "status": "ok",
        "chi_bounds_ok": invariants.chi_bounds_ok(G.order, tau1, tau2,
                                                  inv.chi),
    }
    rec.update(inv.to_record())
    emit(rec)
    return 0


def _cmd_verify(args, emit) -> int:
    records = verify.run_all(max_order=args.max_order, threads=args.threads)
    for rec in records:
        emit(rec)
    return 0 if verify.all_passed(records) else 1


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    emitter = _Emitter(args.format)
    try:
        if args.command == "group":
            return _cmd_group_info(args, emitter.emit)
        if args.command == "structures":
            return _cmd_structures_exists(args, emitter.emit)
        if args.command == "orbits":
            return _cmd_orbits(args, emitter.emit)
        if args.command == "psl2":
            return _cmd_psl2_table(args, emitter.emit)
        if args.command == "abelian":
            return _cmd_abelian(args, emitter.emit)
        if args.command == "invariants":
            return _cmd_invariants(args, emitter.emit)
        if args.command == "verify":
            return _cmd_verify(args, emitter.emit)
        ap.error(f"unknown command {args.command!r}")
    except InvalidSpecError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 1 if args.strict else 0
    except (ValueError, GroupError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        # downstream consumer (e.g. head) closed the pipe; not an error
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
        return 0
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
