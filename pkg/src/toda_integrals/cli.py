"""Command-line front end.

Exit codes: 0 pass, 1 usage or parse error, 2 unsupported request,
3 verification failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .diffring import DiffRingError, to_latex, to_text
from .dsgauge import reduce_to_slice
from .liedata import AlgebraSpec, LieDataError
from .opfactor import IntegralSet, check_j_relations_g2, quick_integrals
from .verify import characteristic_report, degree_audit, first_monomials, zero_curvature_residual

EXIT_OK, EXIT_USAGE, EXIT_UNSUPPORTED, EXIT_FAILED = 0, 1, 2, 3


class UsageError(Exception):
    pass


class Unsupported(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _parse_spec(text: str) -> AlgebraSpec:
    try:
        return AlgebraSpec.parse(text)
    except LieDataError as exc:
        raise UsageError(str(exc)) from None


def _emit(items, fmt: str) -> str:
    lines = []
    for it in items:
        if fmt == "latex":
            lines.append(f"{it.label} = {to_latex(it.poly)}")
        else:
            lines.append(f"{it.label} = {to_text(it.poly)}")
    return "\n".join(lines)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2)


def cmd_quick(args) -> int:
    spec = _parse_spec(args.spec)
    if spec.branching:
        raise Unsupported(f"{spec}: representation branches; use the ds command")
    S = quick_integrals(spec)
    if args.format == "json":
        print(_dump(S.to_json()))
    else:
        print(_emit(S.integrals + S.residuals, args.format))
    return EXIT_OK


def cmd_ds(args) -> int:
    spec = _parse_spec(args.spec)
    style = args.slice
    if style == "paper":
        if (spec.family, spec.rank) != ("D", 4):
            raise Unsupported("the paper_d4 slice is only available for D4")
        style = "paper_d4"
    res = reduce_to_slice(spec, style)
    if args.format == "json":
        print(_dump(res.to_json()))
    else:
        print(_emit(res.integrals.integrals, args.format))
    return EXIT_OK


def _load_target(target: str) -> tuple[AlgebraSpec, IntegralSet | None]:
    if os.path.exists(target):
        try:
            with open(target, encoding="utf-8") as fh:
                data = json.load(fh)
            S = IntegralSet.from_json(data)
        except (OSError, ValueError, KeyError, TypeError, DiffRingError, LieDataError) as exc:
            raise UsageError(f"cannot read integral set from {target}: {exc}") from None
        return S.spec, S
    return _parse_spec(target), None


def _default_set(spec: AlgebraSpec) -> IntegralSet:
    if spec.branching:
        return reduce_to_slice(spec).integrals
    return quick_integrals(spec)


def cmd_verify(args) -> int:
    spec, S = _load_target(args.target)
    mode = args.mode
    report: dict = {"spec": str(spec), "mode": mode}
    if mode == "integrals":
        S = S or _default_set(spec)
        checks = []
        ok = True
        for item in S.integrals + S.residuals:
            r = characteristic_report(item.poly, spec)
            checks.append({"label": item.label, **r})
            ok = ok and r["ok"]
        report.update(ok=ok, checks=checks)
    elif mode == "zero-curvature":
        res = zero_curvature_residual(spec)
        report.update(ok=res.is_zero(), residual_terms=res.term_count())
    elif mode == "degrees":
        S = S or _default_set(spec)
        report.update(
            ok=degree_audit(S, spec),
            degrees=[i.degree for i in S.integrals],
            expected=spec.degrees(),
        )
    elif mode == "g2-relations":
        if spec.family != "G2":
            raise Unsupported("g2-relations only applies to G2")
        S = S or quick_integrals(spec)
        mismatches: list = []
        ok = check_j_relations_g2(S.polys(), [j.poly for j in S.residuals], mismatches)
        report.update(ok=ok, mismatches=[
            {"label": lab, "residual_terms": len(d), "first_failing_monomials": first_monomials(d)}
            for lab, d in mismatches
        ])
    print(_dump(report))
    return EXIT_OK if report["ok"] else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="toda-integrals", description="Characteristic integrals of Toda field theories.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    q = sub.add_parser("quick", help="factorized-operator method (non-branching algebras)")
    q.add_argument("spec")
    q.add_argument("--format", choices=("text", "latex", "json"), default="text")
    q.set_defaults(func=cmd_quick)

    d = sub.add_parser("ds", help="Drinfeld-Sokolov gauge reduction")
    d.add_argument("spec")
    d.add_argument("--slice", default="canonical")
    d.add_argument("--format", choices=("text", "latex", "json"), default="text")
    d.set_defaults(func=cmd_ds)

    v = sub.add_parser("verify", help="run a checker on a spec or an integral-set JSON file")
    v.add_argument("target")
    v.add_argument("--mode", choices=("integrals", "zero-curvature", "degrees", "g2-relations"),
                   default="integrals")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if getattr(args, "slice", "canonical") not in ("canonical", "paper"):
            raise Unsupported(f"unsupported slice style {args.slice!r}")
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (Unsupported, LieDataError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED


if __name__ == "__main__":
    sys.exit(main())
