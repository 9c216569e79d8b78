"""Command-line front end.

Commands: classify, correspond, translate, verify, props, report.
Exit codes: 0 success, 2 parse error, 3 unsupported class, 4
verification counterexample, 5 resource cap.  The environment variable
SAHL_MAX_FRAME_N caps exhaustive frame enumeration (default 4).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import classify, correspond, fol, fosimp, modal, orderprops, semantics, translate
from .errors import ModalCorrError, ParseError, ResourceCap, Unsupported

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_UNSUPPORTED = 3
EXIT_COUNTEREXAMPLE = 4
EXIT_RESOURCE = 5


def _enum_cap() -> int:
    raw = os.environ.get("SAHL_MAX_FRAME_N", "")
    try:
        return int(raw) if raw else semantics.DEFAULT_MAX_FRAME_N
    except ValueError:
        raise ResourceCap(f"bad SAHL_MAX_FRAME_N value {raw!r}")


def _scheme_json(scheme: correspond.TameScheme) -> dict:
    out = {}
    for letter, value in scheme.items():
        if isinstance(value, correspond.ConstEmpty):
            out[letter] = {"kind": "const-empty"}
        elif isinstance(value, correspond.ConstFull):
            out[letter] = {"kind": "const-full"}
        elif isinstance(value, correspond.FiniteSet):
            out[letter] = {"kind": "finite-set", "params": list(value.params)}
        elif isinstance(value, correspond.BoxAtomUnion):
            out[letter] = {
                "kind": "box-atom-union",
                "entries": [{"z": z, "k": k} for z, k in value.entries],
            }
        else:
            out[letter] = {
                "kind": "inductive-union",
                "entries": [
                    {"z": z, "rho": list(rho), "k": k} for z, rho, k in value.entries
                ],
            }
    return out


def _scheme_text(scheme: correspond.TameScheme) -> str:
    if not scheme:
        return "(none)"
    parts = []
    for letter, value in scheme.items():
        if isinstance(value, correspond.ConstEmpty):
            parts.append(f"{letter}: empty")
        elif isinstance(value, correspond.ConstFull):
            parts.append(f"{letter}: full")
        elif isinstance(value, correspond.FiniteSet):
            parts.append(f"{letter}: finite-set[{', '.join(value.params)}]")
        elif isinstance(value, correspond.BoxAtomUnion):
            entries = ", ".join(f"({z}, k={k})" for z, k in value.entries)
            parts.append(f"{letter}: box-atom-union[{entries}]")
        else:
            entries = ", ".join(
                f"({z}, rho=[{' '.join(rho)}], k={k})" for z, rho, k in value.entries
            )
            parts.append(f"{letter}: inductive-union[{entries}]")
    return "; ".join(parts)


def _result_json(res: correspond.CorrespondenceResult) -> dict:
    return {
        "input": modal.print_modal(res.formula),
        "class": res.class_used.name,
        "definite": res.report.definite,
        "eliminated_uniform": {
            letter: modal.print_modal(value)
            for letter, value in res.eliminated_uniform.items()
        },
        "conjuncts": [
            {
                "implication": modal.print_modal(c.implication),
                "strategy": c.strategy.name,
                "scheme": _scheme_json(c.scheme),
                "alphas": [str(a) for a in c.alphas],
                "raw": fol.print_fo(c.raw),
                "simplified": fol.print_fo(c.simplified),
            }
            for c in res.conjuncts
        ],
        "combined": fol.print_fo(res.combined),
    }


def cmd_classify(args) -> int:
    report = classify.classify(modal.parse_modal(args.formula))
    if args.format == "json":
        doc = {
            "input": modal.print_modal(report.formula),
            "class": report.syntactic_class.name,
            "definite": report.definite,
            "polarity": {k: v.value for k, v in report.polarity.items()},
            "digraph": sorted(
                f"{a}->{b}" for a, b in (report.digraph.edges if report.digraph else ())
            ),
            "order": list(report.order) if report.order else None,
            "supported": report.supported,
        }
        print(json.dumps(doc, indent=2))
    else:
        print(classify.serialize_report(report))
    return EXIT_OK


def cmd_correspond(args) -> int:
    f = modal.parse_modal(args.formula)
    res = correspond.correspond(f)
    raw_combined = correspond.compose_conjunction([c.raw for c in res.conjuncts])
    shown = raw_combined if (args.raw or args.no_simplify) else res.combined
    if args.format == "json":
        doc = _result_json(res)
        doc["shown"] = fol.print_fo(shown)
        print(json.dumps(doc, indent=2))
        return EXIT_OK
    if args.format == "tptp":
        print(fol.to_tptp(shown, name="corr"))
        return EXIT_OK
    if args.trace:
        print(f"input: {modal.print_modal(f)}")
        print(f"class: {res.class_used.name}")
        if res.eliminated_uniform:
            elim = ", ".join(
                f"{k} := {modal.print_modal(v)}"
                for k, v in res.eliminated_uniform.items()
            )
            print(f"uniform letters eliminated: {elim}")
        for i, c in enumerate(res.conjuncts):
            print(f"conjunct {i}: {modal.print_modal(c.implication)}")
            print(f"  strategy: {c.strategy.name}")
            print(f"  scheme: {_scheme_text(c.scheme)}")
            for a in c.alphas:
                print(f"  {a}")
            print(f"  raw: {fol.print_fo(c.raw)}")
            print(f"  simplified: {fol.print_fo(c.simplified)}")
        print(f"combined: {fol.print_fo(res.combined)}")
    else:
        print(fol.print_fo(shown))
    return EXIT_OK


def cmd_translate(args) -> int:
    f = modal.parse_modal(args.formula)
    st = translate.standard_translation(f)
    so = translate.second_order_translation(f)
    if args.format == "json":
        doc = {
            "input": modal.print_modal(f),
            "st": fol.print_fo(st),
            "so": fol.print_fo(so),
        }
        print(json.dumps(doc, indent=2))
    elif args.format == "tptp":
        print(fol.to_tptp(st, name="st", role="axiom"))
    else:
        print(f"ST: {fol.print_fo(st)}")
        print(f"SO: {fol.print_fo(so)}")
    return EXIT_OK


def cmd_verify(args) -> int:
    f = modal.parse_modal(args.formula)
    if args.against_generated:
        if args.fo is not None:
            raise ParseError("give either a first-order formula or --against-generated", 1, 1)
        alpha = correspond.correspond(f).combined
    else:
        if args.fo is None:
            raise ParseError("a first-order formula or --against-generated is required", 1, 1)
        alpha = fol.parse_fo(args.fo)
    cap = _enum_cap()
    if args.max_n > cap:
        raise ResourceCap(
            f"--max-n {args.max_n} exceeds the frame enumeration cap {cap}"
        )
    bad = semantics.check_local_correspondence(
        f, alpha, args.max_n, sample4=args.sample4, seed=args.seed, enum_cap=cap
    )
    if bad is None:
        print("Pass")
        return EXIT_OK
    print(f"Counterexample: {bad.frame.to_literal()} world={bad.world} ({bad.direction})")
    return EXIT_COUNTEREXAMPLE


def cmd_props(args) -> int:
    f = modal.parse_modal(args.formula)
    if (args.frame is None) == (args.all_frames is None):
        raise ParseError("give exactly one of --frame or --all-frames", 1, 1)
    if args.frame is not None:
        frame = semantics.Frame.from_literal(args.frame)
        checklist = orderprops.validate_conditions(f, frame)
        print(f"frame: {frame.to_literal()}")
        for item in checklist.items:
            print(f"  {item}")
        print("all passed" if checklist.all_passed else "some conditions failed")
        return EXIT_OK
    cap = _enum_cap()
    if args.all_frames > cap:
        raise ResourceCap(
            f"--all-frames {args.all_frames} exceeds the frame enumeration cap {cap}"
        )
    failures: dict[str, str] = {}
    names: list[str] = []
    total = 0
    for n in range(1, args.all_frames + 1):
        for frame in semantics.enumerate_frames(n, max_n=cap):
            total += 1
            checklist = orderprops.validate_conditions(f, frame)
            for item in checklist.items:
                if item.name not in names:
                    names.append(item.name)
                if not item.passed and item.name not in failures:
                    failures[item.name] = frame.to_literal()
    for name in names:
        if name in failures:
            print(f"  {name}: Fail (first at {failures[name]})")
        else:
            print(f"  {name}: Pass (all {total} frames)")
    return EXIT_OK


def cmd_report(args) -> int:
    from . import report as report_mod

    paths = report_mod.write_report(
        args.formulas,
        args.out_dir,
        max_n=args.max_n,
        sample4=args.sample4,
        seed=args.seed,
    )
    for p in paths:
        print(p)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modalcorr",
        description="Classify modal formulas and compute certified first-order frame correspondents.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="print the classification report")
    p.add_argument("formula")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("correspond", help="compute the first-order correspondent")
    p.add_argument("formula")
    p.add_argument("--raw", action="store_true", help="print the unsimplified correspondent")
    p.add_argument("--no-simplify", action="store_true", help="skip the simplifier")
    p.add_argument("--format", choices=("text", "json", "tptp"), default="text")
    p.add_argument("--trace", action="store_true", help="show schemes, definitions and per-conjunct forms")
    p.set_defaults(func=cmd_correspond)

    p = sub.add_parser("translate", help="print the standard and second-order translations")
    p.add_argument("formula")
    p.add_argument("--format", choices=("text", "json", "tptp"), default="text")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("verify", help="certify a correspondent against the frame oracle")
    p.add_argument("formula")
    p.add_argument("fo", nargs="?", default=None)
    p.add_argument("--against-generated", action="store_true")
    p.add_argument("--max-n", type=int, default=3)
    p.add_argument("--sample4", type=int, default=0)
    p.add_argument("--seed", type=int, default=semantics.DEFAULT_SEED)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("props", help="order-theoretic condition checklist")
    p.add_argument("formula")
    p.add_argument("--frame", default=None, help="frame literal n;i->j,...")
    p.add_argument("--all-frames", type=int, default=None)
    p.set_defaults(func=cmd_props)

    p = sub.add_parser("report", help="write a delimited report plus figures")
    p.add_argument("formulas", nargs="+")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--max-n", type=int, default=3)
    p.add_argument("--sample4", type=int, default=0)
    p.add_argument("--seed", type=int, default=semantics.DEFAULT_SEED)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except Unsupported as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        print(classify.serialize_report(exc.report), file=sys.stderr)
        return EXIT_UNSUPPORTED
    except ResourceCap as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ModalCorrError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
