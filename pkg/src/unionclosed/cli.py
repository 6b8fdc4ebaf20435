"""Command line interface.

Exit codes: 0 all good, 1 usage or input error, 2 a proven statement failed
(a bug here), 3 a conjectured statement has a counterexample.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from fractions import Fraction

from . import cryptomorphs as cm
from .errors import FamilyError, PreconditionError, ProvenStatementViolation
from .family import SetFamily, classify_family, elements_of, frequency_vector
from .familyfile import format_family, load_family
from .freq_bounds import extremal_family, frequency_profile, lemma_frequency_bound
from .graphs import (
    fano_plane,
    frequency_via_coloring,
    intersecting_frequency_bound,
    max_intersecting_subfamily,
    meets_real_bound,
    turan_bounds,
    verify_turan_exhaustive,
)
from .search import CHECKS, CONJECTURED, PROVEN, random_upset, sweep
from .upsets import construct_halving_upset, max_disjoint_packing

log = logging.getLogger("unionclosed")

EXIT_OK, EXIT_USAGE, EXIT_BUG, EXIT_FINDING = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _fmt_set(mask: int) -> str:
    return "{" + ",".join(map(str, elements_of(mask))) + "}"


def _num(x):
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return x


class Report:
    def __init__(self, command: str, inputs: dict):
        self.command = command
        self.inputs = inputs
        self.verdicts: list[dict] = []
        self.certificates: dict = {}
        self.counterexamples: list[dict] = []
        self.started = time.perf_counter()

    def verdict(self, check: str, passed: bool, kind: str | None = None,
                anchor: str | None = None, **detail):
        if check in CHECKS:
            kind = kind or CHECKS[check][0]
            anchor = anchor or CHECKS[check][1]
        entry = {"check": check, "kind": kind or "info", "anchor": anchor or check, "passed": bool(passed)}
        if detail:
            entry["detail"] = detail
        self.verdicts.append(entry)

    @property
    def exit_code(self) -> int:
        if any(v["kind"] == PROVEN and not v["passed"] for v in self.verdicts):
            return EXIT_BUG
        if self.counterexamples or any(v["kind"] == CONJECTURED and not v["passed"] for v in self.verdicts):
            return EXIT_FINDING
        return EXIT_OK

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "command": self.command,
            "inputs": self.inputs,
            "verdicts": self.verdicts,
            "certificates": self.certificates,
            "counterexamples": self.counterexamples,
        }
        if timing:
            out["timing"] = {"seconds": round(time.perf_counter() - self.started, 6)}
        return out


def _uc_nontrivial(F: SetFamily) -> None:
    flags = classify_family(F)
    if not (flags.union_closed and flags.nontrivial):
        raise PreconditionError("this command needs a nontrivial union-closed family")


def _print_table(rows, header):
    widths = [max(len(str(r[i])) for r in [header, *rows]) for i in range(len(header))]
    line = "  ".join(f"{{:>{w}}}" for w in widths)
    print(line.format(*header))
    for r in rows:
        print(line.format(*map(str, r)))


# ---------------------------------------------------------------- commands

def cmd_check(args, rep: Report):
    F = load_family(args.file)
    flags = classify_family(F)
    rep.certificates["flags"] = vars(flags)
    rep.certificates["size"] = len(F)
    for k, v in vars(flags).items():
        print(f"{k:20} {v}")
    if flags.union_closed and flags.nontrivial:
        prof = frequency_profile(F)
        ok = prof.conjecture_holds
        rep.verdict("union-closed-conjecture", ok, element=prof.ordering[0],
                    frequency=prof.frequencies[0], size=prof.total)
        print(f"most frequent element {prof.ordering[0]}: {prof.frequencies[0]}/{prof.total}"
              f" -> {'ok' if ok else 'COUNTEREXAMPLE'}")
        if not ok:
            rep.counterexamples.append({"check": "union-closed-conjecture", "family": F.to_sets(), "n": F.n})


def cmd_freq(args, rep: Report):
    F = load_family(args.file)
    _uc_nontrivial(F)
    prof = frequency_profile(F)
    rows = []
    for k in range(1, prof.n + 1):
        rows.append((k, prof.ordering[k - 1], prof.frequencies[k - 1],
                     _num(Fraction(prof.total, (1 << (k - 1)) + 1)),
                     "ok" if prof.conjectured[k - 1] else "FAIL",
                     "=" if prof.equality[k - 1] else "",
                     _num(Fraction(prof.total, 1 << k)),
                     "ok" if prof.conditional[k - 1] else "FAIL"))
    _print_table(rows, ("rank", "element", "freq", "#F/(2^(k-1)+1)", "verdict", "eq",
                        "#F/2^k", "conditional"))
    rep.certificates["profile"] = {
        "ordering": list(prof.ordering), "frequencies": list(prof.frequencies), "size": prof.total,
        "equality_ranks": [k + 1 for k, e in enumerate(prof.equality) if e],
    }
    rep.verdict("rank-frequencies", prof.all_conjectured)
    rep.verdict("iterated-frequencies", prof.all_conditional)
    rep.verdict("last-ranks", prof.proven_last and prof.proven_second_last is not False)
    if not prof.all_conjectured:
        rep.counterexamples.append({"check": "rank-frequencies", "family": F.to_sets(), "n": F.n})


def cmd_bound(args, rep: Report):
    F = load_family(args.file)
    _uc_nontrivial(F)
    xs = [args.element] if args.element else range(1, F.n + 1)
    rows, certs = [], []
    ok = True
    for x in xs:
        c = lemma_frequency_bound(F, x)
        ok &= c.holds
        rows.append((x, _fmt_set(c.witness), c.frequency, _num(c.bound), "ok" if c.holds else "FAIL"))
        certs.append({"element": x, "witness": elements_of(c.witness), "frequency": c.frequency,
                      "bound": _num(c.bound), "holds": c.holds})
    _print_table(rows, ("element", "witness", "freq", "bound", "verdict"))
    rep.certificates["lemma"] = certs
    rep.verdict("frequency-lemma", ok)


def _family_with_empty(F: SetFamily) -> SetFamily:
    _uc_nontrivial(F)
    return F if 0 in F else F.with_masks([0])


def cmd_partition(args, rep: Report):
    G = _family_with_empty(load_family(args.file))
    p = cm.partition_of(G)
    classes = []
    for c, lo in enumerate(p.class_min):
        members = p.class_members[c]
        print(f"{_fmt_set(lo):>14} ({len(members)}): " + " ".join(_fmt_set(x) for x in members))
        classes.append({"fixed_point": elements_of(lo), "members": [elements_of(x) for x in members]})
    rep.certificates["classes"] = classes
    exhaustive = G.n <= cm.EXHAUSTIVE_CONGRUENCE_MAX_N
    rep.verdict("cryptomorphism", cm.verify_congruence(p, exhaustive=exhaustive),
                mode="exhaustive" if exhaustive else "sampled")


def cmd_order(args, rep: Report):
    G = _family_with_empty(load_family(args.file))
    ordered = cm.corollary_ordering(G)
    rows = [(i + 1, _fmt_set(m), s) for i, (m, s) in enumerate(zip(ordered.labels, ordered.class_sizes))]
    _print_table(rows, ("i", "F_i", "class size"))
    rep.certificates["ordering"] = [{"set": elements_of(m), "class_size": s}
                                    for m, s in zip(ordered.labels, ordered.class_sizes)]
    rep.verdict("cryptomorphism", cm.check_ordering(ordered))


def cmd_upset(args, rep: Report):
    F = load_family(args.file)
    _uc_nontrivial(F)
    cert = construct_halving_upset(F, args.t)
    print(f"t={cert.t}  #U={len(cert.upset)} <= {cert.size_bound}: {cert.size_ok}")
    print(f"#(F cap U)={cert.intersection_count} >= {cert.family_size}/{cert.t}: {cert.intersection_ok}")
    print(f"up-set: {cert.is_upset}")
    print("U: " + " ".join(_fmt_set(m) for m in cert.upset))
    rep.certificates["upset"] = {
        "t": cert.t, "members": cert.upset.to_sets(), "size_bound": cert.size_bound,
        "intersection_count": cert.intersection_count, "family_size": cert.family_size,
        "is_upset": cert.is_upset, "size_ok": cert.size_ok, "intersection_ok": cert.intersection_ok,
        "dense_in_upset": cert.dense_in_upset,
    }
    rep.verdict("halving-upset", cert.holds)


def cmd_packing(args, rep: Report):
    if args.file:
        U = load_family(args.file)
    else:
        if args.seed is None:
            raise UsageError("--random needs --seed")
        U = random_upset(args.random, seed=args.seed)
    r = max_disjoint_packing(U)
    print(f"#U={len(U)}  max disjoint={r.max_disjoint}  threshold={r.threshold}  holds={r.holds}")
    print("witness: " + " ".join(_fmt_set(m) for m in r.witness))
    rep.certificates["packing"] = {"upset_size": len(U), "max_disjoint": r.max_disjoint,
                                   "witness": [elements_of(m) for m in r.witness],
                                   "threshold": r.threshold, "ratio": r.ratio}
    rep.verdict("disjoint-packing", r.holds)


def cmd_turan(args, rep: Report):
    anchor = "Turan: independence number < t forces >= v^2/(2(t-1)) - v/2 edges"
    if args.exhaustive is not None:
        checked, bad = verify_turan_exhaustive(args.exhaustive)
        print(f"graphs on {args.exhaustive} vertices: {checked}, violations: {len(bad)}")
        rep.certificates["exhaustive"] = {"v": args.exhaustive, "graphs": checked, "violations": bad[:50]}
        rep.verdict("turan-lower", not bad, kind=PROVEN, anchor=anchor)
        return
    if args.v is None or args.t is None:
        raise UsageError("turan needs --v and --t, or --exhaustive V")
    hi, lo = turan_bounds(args.v, args.t)
    print(f"v={args.v} t={args.t}: clique number < t => #E <= {_num(hi)}; "
          f"independence number < t => #E >= {_num(lo)}")
    rep.certificates["bounds"] = {"max_edges_if_omega_lt_t": _num(hi), "min_edges_if_alpha_lt_t": _num(lo)}


def cmd_intersecting(args, rep: Report):
    F = load_family(args.file)
    flags = classify_family(F)
    sub, half = max_intersecting_subfamily(F)
    print(f"largest intersecting subfamily: {len(sub)} of {len(F)}")
    print("  " + " ".join(_fmt_set(m) for m in sub))
    rep.certificates["largest_intersecting"] = {"members": sub.to_sets(), "size": len(sub), "family_size": len(F)}
    if flags.union_closed and flags.nontrivial:
        rep.verdict("half-intersecting", half)
        if not half:
            rep.counterexamples.append({"check": "half-intersecting", "family": F.to_sets(), "n": F.n})
    if len(sub):
        cert = frequency_via_coloring(sub, mode="intersecting")
        exact, simple = intersecting_frequency_bound(len(sub), sub.n)
        fv = frequency_vector(sub)
        print(f"colour {cert.colour}: {cert.mu_prime} vertices; max frequency {max(fv.counts)} "
              f">= {exact:.6f} >= {simple:.6f}")
        rep.certificates["colouring"] = {
            "rule": cert.rule, "colour": cert.colour, "colour_edges": cert.colour_edges,
            "mu_prime": cert.mu_prime, "bound": exact, "simplified_bound": simple,
            "max_frequency": max(fv.counts),
        }
        rep.verdict("intersecting-frequency", meets_real_bound(cert.frequency_bound, exact))


def cmd_gen(args, rep: Report):
    if args.fano:
        F = fano_plane()
    elif args.extremal:
        F = extremal_family(*args.extremal)
    else:
        raise UsageError("gen needs --extremal N K or --fano")
    text = format_family(F)
    if args.out:
        with open(args.out, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    rep.certificates["family"] = {"n": F.n, "members": F.to_sets()}


def cmd_sweep(args, rep: Report):
    if args.random is not None and args.seed is None:
        raise UsageError("random sweeps need an explicit --seed")
    checks = args.checks.split(",") if args.checks is not None else None
    if checks == [""]:
        checks = []
    ts = tuple(int(x) for x in args.t.split(",")) if args.t else None
    kw = {"ts": ts} if ts else {}
    if args.random is not None:
        r = sweep(args.n, checks, population="random", count=args.random, seed=args.seed, **kw)
    else:
        r = sweep(args.n, checks, population="exhaustive", **kw)
    rows = [(name, CHECKS[name][0], t.checked, t.violations, t.equality_cases, t.skipped)
            for name, t in r.tallies.items()]
    print(f"n={r.n}  population={r.population}  families={r.families}")
    _print_table(rows, ("check", "kind", "checked", "violations", "equality", "skipped"))
    body = r.to_dict(include_timing=False)
    rep.certificates["sweep"] = {k: body[k] for k in ("n", "population", "families", "checks", "observations")}
    rep.certificates["sweep"]["equality_cases"] = body["equality_cases"]
    log.info("sweep over %d families took %.2fs", r.families, r.wall_time)
    rep.counterexamples.extend(r.counterexamples)
    for name, t in r.tallies.items():
        rep.verdict(name, t.violations == 0, checked=t.checked)
    for c in r.counterexamples:
        print(f"COUNTEREXAMPLE [{c['check']}] n={c['n']}: {c['family']}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="unionclosed", description=__doc__.splitlines()[0])
    p.add_argument("--json", metavar="FILE", help="write the structured report to FILE")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_file(name, fn, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("file")
        sp.set_defaults(fn=fn)
        return sp

    with_file("check", cmd_check, "classify a family and test the conjecture")
    with_file("freq", cmd_freq, "rank-by-rank frequency profile")
    sp = with_file("bound", cmd_bound, "frequency lemma certificates")
    sp.add_argument("--element", type=int)
    with_file("partition", cmd_partition, "congruence partition of P(n)")
    with_file("order", cmd_order, "class-size ordering of the family")
    sp = with_file("upset", cmd_upset, "halving up-set certificate")
    sp.add_argument("--t", type=int, default=2)
    with_file("intersecting", cmd_intersecting, "largest intersecting subfamily and colouring bound")

    sp = sub.add_parser("packing", help="largest disjoint collection in a small up-set")
    sp.add_argument("file", nargs="?")
    sp.add_argument("--random", type=int, metavar="N", help="use a random up-set over [N]")
    sp.add_argument("--seed", type=int)
    sp.set_defaults(fn=cmd_packing)

    sp = sub.add_parser("turan", help="Turan edge bounds")
    sp.add_argument("--v", type=int)
    sp.add_argument("--t", type=int)
    sp.add_argument("--exhaustive", type=int, metavar="V", help="check every graph on V vertices")
    sp.set_defaults(fn=cmd_turan)

    sp = sub.add_parser("gen", help="write a generated family")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--extremal", nargs=2, type=int, metavar=("N", "K"))
    g.add_argument("--fano", action="store_true")
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_gen)

    sp = sub.add_parser("sweep", help="run checks over a population of families")
    sp.add_argument("--n", type=int, required=True)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--exhaustive", action="store_true")
    g.add_argument("--random", type=int, metavar="COUNT")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--checks", help="comma-separated subset of: " + ",".join(CHECKS))
    sp.add_argument("--t", help="comma-separated t values for halving-upset")
    sp.set_defaults(fn=cmd_sweep)
    return p


def _inputs(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("fn", "json", "verbose")}


def run_command(argv) -> tuple[int, dict | None]:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE, None
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    rep = Report(args.command, _inputs(args))
    try:
        args.fn(args, rep)
        code = rep.exit_code
    except ProvenStatementViolation as exc:
        print(f"BUG: {exc}", file=sys.stderr)
        rep.verdict(exc.check, False, kind=PROVEN, message=str(exc))
        code = EXIT_BUG
    except (UsageError, FamilyError, PreconditionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE, None
    body = rep.to_dict()
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(body, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return code, body


def main(argv=None) -> int:
    code, _ = run_command(sys.argv[1:] if argv is None else argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
