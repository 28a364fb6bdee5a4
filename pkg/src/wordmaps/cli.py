"""Terminal front end: group ingestion, computations, deterministic reports.

Commands: classify, omega, admissible, hall-basis, count-commutators,
normal-form, verify.  JSON output has sorted keys; CSV columns are fixed per
command (see README).  Identical arguments and seed produce byte-identical
output.  Exit status: 0 success (including cap-flagged partial results),
1 usage error, 2 internal invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from typing import Optional, Sequence

from . import admissible as adm
from . import nilpotent as nil
from . import omega as om
from . import words as wd
from .errors import (
    ClassOutOfSupportedRange,
    EnumerationCapExceeded,
    GroupSpecError,
    NotAbelian,
    NotDistinct,
    NotNilpotent,
    OrderLimitExceeded,
    TableCapExceeded,
    VariableOutOfRange,
    WordSyntaxError,
    WordmapsError,
)
from .groups import (
    exp_profile,
    lower_central_series,
    nested_commutator,
    nilpotency_class,
)
from .library import BUILTIN_LIBRARY, group_from_spec, resolve_group

_USAGE_ERRORS = (GroupSpecError, WordSyntaxError, VariableOutOfRange,
                 NotNilpotent, NotAbelian, NotDistinct, OrderLimitExceeded,
                 ClassOutOfSupportedRange, ValueError)


class Report:
    def __init__(self, doc: dict, header: Optional[list[str]] = None,
                 rows: Optional[list[list]] = None, exit_code: int = 0):
        self.doc = doc
        self.header = header
        self.rows = rows if rows is not None else []
        self.exit_code = exit_code


def _emit(report: Report, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report.doc, sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    if report.header is None:
        for row in report.rows:
            buf.write(" ".join(str(x) for x in row) + "\n")
    else:
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(report.header)
        for row in report.rows:
            writer.writerow(["" if x is None else x for x in row])
    return buf.getvalue()


# -- classify -----------------------------------------------------------------


def _cmd_classify(args) -> Report:
    G = resolve_group(args.group, order_cap=args.order_cap)
    series = lower_central_series(G)
    nilpotent, cls = nilpotency_class(G)
    profile = exp_profile(G)
    label = G.label or args.group
    doc = {
        "group": label,
        "order": G.order,
        "abelian": G.is_abelian(),
        "exponent": G.exponent(),
        "nilpotent": nilpotent,
        "class": cls,
        "lower_central_orders": [len(s) for s in series],
        "exp_profile": list(profile.values),
        "exp_profile_stable": profile.set_stable,
    }
    row = [label, G.order, G.is_abelian(), G.exponent(), nilpotent,
           "" if cls is None else cls,
           ";".join(str(len(s)) for s in series),
           ";".join(str(v) for v in profile.values),
           profile.set_stable]
    return Report(doc, header=["group", "order", "abelian", "exponent",
                               "nilpotent", "class", "lcs_orders",
                               "exp_profile", "exp_profile_stable"],
                  rows=[row])


# -- omega --------------------------------------------------------------------

_OMEGA_HEADER = ["group", "d", "mode", "value", "cap_hit", "closure_lower",
                 "upper_formal"]


def _cmd_omega(args) -> Report:
    G = resolve_group(args.group, order_cap=args.order_cap)
    label = G.label or args.group
    mode = args.mode
    if mode == "profile":
        d_max = args.d_max if args.d_max is not None else (args.d or 2)
        profile = om.growth_profile(G, d_max, table_cap=args.table_cap,
                                    closure_cap=args.closure_cap,
                                    workers=args.workers)
        rows = [[r.group_label, r.d, r.exact, r.lower, r.log2_lower_binomial,
                 r.upper, round(r.trivial_upper_log2, 6), r.cap_hit,
                 r.closure_lower] for r in profile.reports]
        return Report(profile.to_dict(),
                      header=["group", "d", "exact", "lower",
                              "log2_lower_binomial", "upper",
                              "trivial_upper_log2", "cap_hit", "closure_lower"],
                      rows=rows)
    if args.d is None:
        raise ValueError("--d is required for omega modes other than profile")
    d = args.d
    cap_hit = False
    closure_lower = None
    upper_formal = None
    if mode == "exact":
        try:
            outcome = om.omega_exact(G, d, table_cap=args.table_cap,
                                     closure_cap=args.closure_cap,
                                     workers=args.workers)
            value: Optional[int] = outcome.count if not outcome.cap_hit else None
            cap_hit = outcome.cap_hit
            closure_lower = outcome.count if outcome.cap_hit else None
        except TableCapExceeded:
            value, cap_hit = None, True
    elif mode == "lower":
        value = om.omega_lower(G, d)
    else:  # upper
        value = om.omega_upper_nilpotent(G, d)
        upper_formal = om.omega_upper_formal_count(G, d)
    doc = {
        "group": label, "d": d, "mode": mode, "value": value,
        "cap_hit": cap_hit, "closure_lower": closure_lower,
        "upper_formal": upper_formal,
    }
    return Report(doc, header=_OMEGA_HEADER,
                  rows=[[label, d, mode, value, cap_hit, closure_lower,
                         upper_formal]])


# -- admissible -----------------------------------------------------------------


def _subset_label(subset: tuple[int, ...]) -> str:
    return ",".join(str(i) for i in subset)


def _cmd_admissible(args) -> Report:
    G = resolve_group(args.group, order_cap=args.order_cap)
    label = G.label or args.group
    d = args.d
    profile = exp_profile(G, r_max=d if d else 1)
    count = adm.admissible_count(G, d, profile)
    bounds = {str(r): profile.value_at(r) for r in range(1, d + 1)}
    if args.mode == "count":
        doc = {"group": label, "d": d, "count": count,
               "exp_bounds": bounds, "cap_hit": False}
        return Report(doc, header=["group", "d", "count", "cap_hit"],
                      rows=[[label, d, count, False]])
    if count > args.enum_cap:
        doc = {"group": label, "d": d, "count": count, "cap_hit": True,
               "note": f"enumeration skipped: {count} exceeds cap {args.enum_cap}"}
        return Report(doc, header=["group", "d", "count", "cap_hit"],
                      rows=[[label, d, count, True]])
    functions = list(adm.enumerate_admissible(G, d, cap=args.enum_cap))
    if args.mode == "enumerate":
        entries = [{_subset_label(s): v for s, v in fn.items()} for fn in functions]
        doc = {"group": label, "d": d, "count": count, "cap_hit": False,
               "functions": entries}
        rows = [[label, d, idx, _subset_label(s), v]
                for idx, fn in enumerate(functions) for s, v in fn.items()]
        return Report(doc, header=["group", "d", "function", "subset", "value"],
                      rows=rows)
    # mode == verify: pairwise distinctness of the induced word maps, with a
    # validated witness per unequal pair.
    tables = [wd.word_map_table(adm.build_admissible_word(fn), G, d,
                                table_cap=args.table_cap)
              for fn in functions]
    keys = {t.key() for t in tables}
    all_distinct = len(keys) == len(functions)
    witnesses_ok = True
    pairs = 0
    words = [adm.build_admissible_word(fn) for fn in functions]
    for i in range(len(functions)):
        for j in range(i + 1, len(functions)):
            pairs += 1
            witness = adm.distinctness_witness(functions[i], functions[j], G)
            if wd.evaluate(words[i], G, witness) == wd.evaluate(words[j], G, witness):
                witnesses_ok = False
    doc = {"group": label, "d": d, "count": count, "cap_hit": False,
           "pairs_checked": pairs, "all_maps_distinct": all_distinct,
           "witnesses_validated": witnesses_ok}
    return Report(doc, header=["group", "d", "count", "pairs", "distinct",
                               "witnesses_ok"],
                  rows=[[label, d, count, pairs, all_distinct, witnesses_ok]])


# -- hall-basis / count-commutators --------------------------------------------


def _cmd_hall_basis(args) -> Report:
    try:
        basis = nil.hall_basis(args.d, args.nilp_class, cap=args.enum_cap)
    except EnumerationCapExceeded as exc:
        doc = {"d": args.d, "class": args.nilp_class, "cap_hit": True,
               "note": str(exc)}
        return Report(doc, header=None, rows=[["cap_hit"]])
    entries = [{"index": t + 1, "weight": fc.weight, "tree": str(fc)}
               for t, fc in enumerate(basis.commutators)]
    doc = {"d": args.d, "class": args.nilp_class, "size": basis.size,
           "cap_hit": False, "entries": entries}
    rows = [[e["index"], e["weight"], e["tree"]] for e in entries]
    return Report(doc, header=None, rows=rows)


def _cmd_count_commutators(args) -> Report:
    rows = []
    entries = []
    for c in range(1, args.nilp_class + 1):
        for d in range(0, args.d + 1):
            count = nil.formal_commutator_count(d, c)
            if count <= args.enum_cap:
                count = nil.count_formal_commutators(d, c, cap=args.enum_cap)
            entries.append({"d": d, "class": c, "count": count})
            rows.append([d, c, count])
    doc = {"d_max": args.d, "class_max": args.nilp_class, "table": entries}
    return Report(doc, header=["d", "class", "count"], rows=rows)


# -- normal-form ----------------------------------------------------------------


def _cmd_normal_form(args) -> Report:
    if args.word is None:
        raise ValueError("--word is required for normal-form")
    word = wd.parse_word(args.word, d=args.d)
    nf = nil.normal_form(word, args.d, args.nilp_class,
                         class_limit=args.class_limit)
    basis = nf.basis
    doc = {
        "d": args.d, "class": args.nilp_class, "word": str(word),
        "exponents": list(nf.exponents),
        "basis": [str(fc) for fc in basis.commutators],
    }
    rows = [[t + 1, fc.weight, str(fc), nf.exponents[t]]
            for t, fc in enumerate(basis.commutators)]
    return Report(doc, header=["index", "weight", "tree", "exponent"], rows=rows)


# -- verify ---------------------------------------------------------------------


def _check(checks: dict, name: str, ok: bool) -> None:
    checks[name] = bool(ok)


def _verify_exp_laws(rng: random.Random) -> dict:
    checks: dict = {}
    for spec in BUILTIN_LIBRARY:
        G = group_from_spec(spec)
        nilpotent, cls = nilpotency_class(G)
        profile = exp_profile(G)
        values = list(profile.values)
        _check(checks, f"{spec}:exp1_is_exponent", values[0] == G.exponent())
        divides = all(values[r + 1] != 0 and values[r] % values[r + 1] == 0
                      for r in range(len(values) - 1))
        _check(checks, f"{spec}:exp_divides", divides)
        if nilpotent:
            ok = (cls == 0 or profile.value_at(cls) >= 2) \
                and profile.value_at(cls + 1) == 1
            _check(checks, f"{spec}:class_matches_exp", ok)
        else:
            _check(checks, f"{spec}:non_nilpotent_exp_stays", values[-1] >= 2)
        series = lower_central_series(G)
        for r in range(1, len(series)):
            if len(series[r]) > 1:
                _check(checks, f"{spec}:gamma{r + 1}_nontrivial_exp{r}_ge_2",
                       profile.value_at(r) >= 2)
    return checks


def _random_word(rng: random.Random, d: int, max_syllables: int, max_exp: int) -> wd.Word:
    raw = [(rng.randint(1, d), rng.randint(-max_exp, max_exp))
           for _ in range(rng.randint(0, max_syllables))]
    return wd.reduce_word(raw, d=d)


def _verify_word_laws(rng: random.Random) -> dict:
    checks: dict = {}
    groups = [group_from_spec(s) for s in ("symmetric:3", "quaternion:8",
                                           "cyclic:6", "dihedral:4")]
    hom_ok = inv_ok = reduce_ok = assoc_ok = nested_ok = True
    for _ in range(60):
        G = rng.choice(groups)
        d = rng.randint(1, 3)
        u = _random_word(rng, d, 8, 3)
        v = _random_word(rng, d, 8, 3)
        w = _random_word(rng, d, 8, 3)
        args_tuple = [rng.randrange(G.order) for _ in range(d)]
        uv = wd.concat(u, v)
        hom_ok &= wd.evaluate(uv, G, args_tuple) == G.mul(
            wd.evaluate(u, G, args_tuple), wd.evaluate(v, G, args_tuple))
        inv_ok &= wd.evaluate(wd.invert(u), G, args_tuple) == G.inverse(
            wd.evaluate(u, G, args_tuple))
        reduce_ok &= wd.reduce_word(uv.syllables, d=uv.d) == uv
        assoc_ok &= wd.concat(wd.concat(u, v), w) == wd.concat(u, wd.concat(v, w))
        gs = [rng.randrange(G.order) for _ in range(rng.randint(1, 4))]
        word = wd.nested_commutator_word(list(range(1, len(gs) + 1)), d=len(gs))
        nested_ok &= wd.evaluate(word, G, gs) == nested_commutator(G, gs)
    _check(checks, "evaluate_is_homomorphic", hom_ok)
    _check(checks, "evaluate_respects_inverse", inv_ok)
    _check(checks, "reduce_idempotent", reduce_ok)
    _check(checks, "concat_associative", assoc_ok)
    _check(checks, "nested_commutator_word_agrees", nested_ok)
    return checks


def _verify_admissible(table_cap: int) -> dict:
    checks: dict = {}
    for spec, d in (("symmetric:3", 2), ("quaternion:8", 2)):
        G = group_from_spec(spec)
        functions = list(adm.enumerate_admissible(G, d))
        count = adm.admissible_count(G, d)
        _check(checks, f"{spec}:enumeration_count", len(functions) == count)
        _check(checks, f"{spec}:count_is_product_bound",
               count == om.omega_lower(G, d))
        _check(checks, f"{spec}:all_admissible",
               all(adm.is_admissible(f, G) for f in functions))
        words = [adm.build_admissible_word(f) for f in functions]
        keys = {wd.word_map_table(w, G, d, table_cap=table_cap).key()
                for w in words}
        _check(checks, f"{spec}:maps_pairwise_distinct", len(keys) == count)
        ok = True
        for i in range(len(functions)):
            for j in range(i + 1, len(functions)):
                witness = adm.distinctness_witness(functions[i], functions[j], G)
                ok &= wd.evaluate(words[i], G, witness) != \
                    wd.evaluate(words[j], G, witness)
        _check(checks, f"{spec}:witnesses_validate", ok)
    return checks


def _verify_hall(rng: random.Random) -> dict:
    checks: dict = {}
    for d in range(0, 4):
        for w in range(1, 5):
            basis = nil.hall_basis(d, w)
            _check(checks, f"witt_d{d}_w{w}",
                   len(basis.entries_of_weight(w)) == nil.witt_count(d, w))
    for d in range(0, 5):
        for c in range(1, 5):
            _check(checks, f"formal_count_d{d}_c{c}",
                   nil.count_formal_commutators(d, c)
                   == nil.formal_commutator_count(d, c))
    for c in range(1, 5):
        counts = [nil.formal_commutator_count(d, c) for d in range(0, c + 3)]
        diffs = counts
        for _ in range(c):
            diffs = [b - a for a, b in zip(diffs, diffs[1:])]
        constant = all(x == diffs[0] for x in diffs)
        final = [b - a for a, b in zip(diffs, diffs[1:])]
        _check(checks, f"degree_exactly_{c}",
               constant and diffs[0] != 0 and all(x == 0 for x in final))
    for d in range(1, 4):
        for c in range(1, 5):
            _check(checks, f"basis_le_formal_d{d}_c{c}",
                   nil.hall_basis(d, c).size <= nil.formal_commutator_count(d, c))
    return checks


def _verify_normal_forms(rng: random.Random) -> dict:
    checks: dict = {}
    sound = True
    for _ in range(20):
        d = rng.randint(1, 2)
        c = rng.randint(1, 2)
        G = group_from_spec(f"unitriangular:{c + 1}:{rng.choice([2, 3])}")
        w = _random_word(rng, d, 10, 3)
        nf = nil.normal_form(w, d, c)
        for _ in range(10):
            args_tuple = [rng.randrange(G.order) for _ in range(d)]
            sound &= wd.evaluate(w, G, args_tuple) == \
                nil.evaluate_normal_form(nf, G, args_tuple)
    _check(checks, "normal_form_sound_in_unitriangular", sound)
    round_ok = True
    hom_ok = True
    basis = nil.hall_basis(2, 3)
    for _ in range(25):
        exps = tuple(rng.randint(-5, 5) for _ in range(basis.size))
        nf = nil.NormalForm(basis, exps)
        round_ok &= nil.normal_form(nil.normal_form_to_word(nf), 2, 3).exponents == exps
        u = _random_word(rng, 2, 8, 2)
        v = _random_word(rng, 2, 8, 2)
        lhs = nil.normal_form(wd.concat(u, v), 2, 3)
        rhs = nil.normal_form(wd.concat(
            nil.normal_form_to_word(nil.normal_form(u, 2, 3)),
            nil.normal_form_to_word(nil.normal_form(v, 2, 3))), 2, 3)
        hom_ok &= lhs == rhs
    _check(checks, "normal_form_round_trip", round_ok)
    _check(checks, "normal_form_homomorphism_certificate", hom_ok)
    return checks


def _verify_omega(table_cap: int, closure_cap: int) -> dict:
    checks: dict = {}
    for spec in ("cyclic:2", "cyclic:3", "cyclic:6", "cyclic:2xcyclic:4"):
        G = group_from_spec(spec)
        ok = all(om.omega_exact(G, d, table_cap=table_cap).count
                 == om.abelian_omega(G, d) for d in range(0, 3))
        _check(checks, f"{spec}:abelian_exact", ok)
    for spec, d in (("quaternion:8", 2), ("dihedral:4", 2),
                    ("unitriangular:3:3", 2)):
        G = group_from_spec(spec)
        outcome = om.omega_exact(G, d, table_cap=table_cap,
                                 closure_cap=closure_cap)
        ok = (not outcome.cap_hit
              and om.omega_lower(G, d) <= outcome.count
              <= om.omega_upper_nilpotent(G, d))
        _check(checks, f"{spec}:sandwich_d{d}", ok)
    S3 = group_from_spec("symmetric:3")
    exact2 = om.omega_exact(S3, 2, table_cap=table_cap, closure_cap=closure_cap)
    _check(checks, "S3:lower_le_exact_d2",
           om.omega_lower(S3, 2) <= exact2.count and not exact2.cap_hit)
    _check(checks, "S3:theorem2_d1",
           om.omega_exact(S3, 1).count.bit_length() - 1 >= 1)
    _check(checks, "S3:theorem2_d2", exact2.count >= 2 ** (2 ** 2 - 1))
    partial = om.omega_exact(S3, 3, table_cap=table_cap, closure_cap=300)
    _check(checks, "S3:partial_d3_exceeds_7_bits",
           partial.cap_hit and partial.count > 2 ** 7)
    one = om.omega_exact(S3, 2, workers=1)
    four = om.omega_exact(S3, 2, workers=4)
    _check(checks, "workers_agree", one == four)
    power_maps = len({wd.word_map_table(wd.word_power(wd.generator_word(1, 1), k),
                                        S3, 1).key()
                      for k in range(S3.exponent())})
    _check(checks, "S3:omega1_counts_power_maps",
           om.omega_exact(S3, 1).count == power_maps)
    return checks


def _cmd_verify(args) -> Report:
    rng = random.Random(args.seed)
    sections = {
        "exp_laws": _verify_exp_laws(rng),
        "word_laws": _verify_word_laws(rng),
        "admissible": _verify_admissible(args.table_cap),
        "hall_and_counts": _verify_hall(rng),
        "normal_forms": _verify_normal_forms(rng),
        "omega": _verify_omega(args.table_cap, args.closure_cap),
    }
    all_passed = all(ok for checks in sections.values() for ok in checks.values())
    doc = {"seed": args.seed, "sections": sections, "all_passed": all_passed}
    rows = [[section, name, ok]
            for section, checks in sections.items()
            for name, ok in checks.items()]
    rows.append(["summary", "all_passed", all_passed])
    return Report(doc, header=["section", "check", "ok"], rows=rows,
                  exit_code=0 if all_passed else 2)


# -- parser ---------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise GroupSpecError(message)


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--format", choices=("json", "csv"), default="json")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--table-cap", dest="table_cap", type=int,
                     default=wd.DEFAULT_TABLE_CAP)
    sub.add_argument("--closure-cap", dest="closure_cap", type=int,
                     default=om.DEFAULT_CLOSURE_CAP)
    sub.add_argument("--enum-cap", dest="enum_cap", type=int,
                     default=nil.DEFAULT_ENUMERATION_CAP)
    sub.add_argument("--order-cap", dest="order_cap", type=int, default=2000)
    sub.add_argument("--workers", type=int, default=1)
    sub.add_argument("--class-limit", dest="class_limit", type=int,
                     default=nil.DEFAULT_CLASS_LIMIT)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wordmaps",
                     description="word-map growth on finite groups")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("classify", help="nilpotency class, series, exp profile")
    p.add_argument("--group", required=True)
    _add_common(p)
    p.set_defaults(handler=_cmd_classify)

    p = subs.add_parser("omega", help="exact/lower/upper counts and profiles")
    p.add_argument("--group", required=True)
    p.add_argument("--d", type=int)
    p.add_argument("--d-max", dest="d_max", type=int)
    p.add_argument("--mode", choices=("exact", "lower", "upper", "profile"),
                   default="exact")
    _add_common(p)
    p.set_defaults(handler=_cmd_omega)

    p = subs.add_parser("admissible", help="count/enumerate/verify admissible words")
    p.add_argument("--group", required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--mode", choices=("count", "enumerate", "verify"),
                   default="count")
    _add_common(p)
    p.set_defaults(handler=_cmd_admissible)

    p = subs.add_parser("hall-basis", help="dump the basic-commutator basis")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--class", dest="nilp_class", type=int, required=True)
    _add_common(p)
    p.set_defaults(handler=_cmd_hall_basis)

    p = subs.add_parser("count-commutators", help="formal d-commutator counts")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--class", dest="nilp_class", type=int, required=True)
    _add_common(p)
    p.set_defaults(handler=_cmd_count_commutators)

    p = subs.add_parser("normal-form", help="free-nilpotent exponent vector")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--class", dest="nilp_class", type=int, required=True)
    p.add_argument("--word", required=True)
    _add_common(p)
    p.set_defaults(handler=_cmd_normal_form)

    p = subs.add_parser("verify", help="run the full property suite")
    _add_common(p)
    p.set_defaults(handler=_cmd_verify)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _USAGE_ERRORS as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help and friends
        return 0 if exc.code in (0, None) else 1
    try:
        report = args.handler(args)
    except _USAGE_ERRORS as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (WordmapsError, AssertionError) as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(_emit(report, args.format))
    return getattr(report, "exit_code", 0)


if __name__ == "__main__":
    sys.exit(main())
