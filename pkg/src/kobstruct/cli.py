"""Command-line front end.

Subcommands
-----------
    kgroups EXPR            K-groups of an algebra expression
    classify EXPR_A EXPR_B  run the splitting classifier on a pair
    section EXPR_A EXPR_B   solve for sections of the induced maps
    paper-examples          replay the fixed regression suite

Exit codes: 0 success / splitting possible, 1 obstructed or a failing
regression item, 2 usage or expression errors, 3 non-finitely-generated
input.  Output is deterministic; JSON output is key-sorted.
"""

from __future__ import annotations

import argparse
import json
import sys
from math import gcd

from . import obstruct
from .catalog import (
    NonFinitelyGeneratedError,
    ParseError,
    UnsupportedNestingError,
    evaluate,
)
from .fgab import FgAbGroup, GroupHom, cokernel, compose
from .kinv import KInvariant, KPair, kunneth, pi_star, unital_free_product_k
from .obstruct import (
    OBSTRUCTED,
    classify,
    ex4_no_scaled_section,
    m_oo_unit_divisibility,
    section_exists_k,
)

EXIT_OK = 0
EXIT_OBSTRUCTED = 1
EXIT_ERROR = 2
EXIT_NOT_FG = 3


def _emit(payload: dict, lines: list[str], fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        out.write("\n".join(lines) + "\n")


def _invariant_lines(label: str, inv: KInvariant) -> list[str]:
    return [f"{label}: L = {inv}"]


def _kpair_lines(kp: KPair) -> list[str]:
    lines = [f"K0 = {kp.k0}"]
    if kp.unit is not None:
        lines.append(f"unit class = {list(kp.unit.coords)}")
    lines.append(f"K1 = {kp.k1}")
    if kp.extra_z:
        lines.append("K1 contains an extra Z summand (not canonically placed)")
    return lines


def _cmd_kgroups(args, out) -> int:
    result = evaluate(args.expr)
    if isinstance(result, KInvariant):
        payload = {"command": "kgroups", "expr": args.expr, "result": result.to_json()}
        lines = [f"expr: {args.expr}", f"L = {result}"]
    else:
        payload = {"command": "kgroups", "expr": args.expr, "result": result.to_json()}
        lines = [f"expr: {args.expr}"] + _kpair_lines(result)
    _emit(payload, lines, args.format, out)
    return EXIT_OK


def _require_invariant(value, name: str) -> KInvariant:
    if not isinstance(value, KInvariant):
        raise UnsupportedNestingError(
            f"{name} must evaluate to an algebra invariant; free products "
            "produce K-pairs and cannot be classified as algebras"
        )
    return value


def _section_payload(report) -> dict:
    return {
        "deg0": report.deg0.to_json() if report.deg0 else None,
        "deg1": report.deg1.to_json() if report.deg1 else None,
        "extra_z_ok": report.extra_z_ok,
    }


def _section_lines(report) -> list[str]:
    lines = []
    for deg, hom in (("deg0", report.deg0), ("deg1", report.deg1)):
        if hom is None:
            lines.append(f"section {deg}: none")
        else:
            lines.append(f"section {deg}: matrix {hom.matrix.to_json()}")
    lines.append(f"extra Z summand compatible: {report.extra_z_ok}")
    return lines


def _cmd_classify(args, out) -> int:
    a = _require_invariant(evaluate(args.expr_a), "the first expression")
    b = _require_invariant(evaluate(args.expr_b), "the second expression")
    verdict = classify(a, b)
    ufp = unital_free_product_k(a, b)
    kun = kunneth(a, b)
    pi0, pi1, _ = pi_star(a, b)
    payload = {
        "command": "classify",
        "expr_a": args.expr_a,
        "expr_b": args.expr_b,
        "invariant_a": a.to_json(),
        "invariant_b": b.to_json(),
        "groups": {
            "unital_free_product": ufp.to_json(),
            "tensor": {"k0": kun.k0.to_json(), "k1": kun.k1.to_json()},
        },
        "maps": {"pi0": pi0.to_json(), "pi1": pi1.to_json()},
        "verdict": verdict.to_json(),
    }
    lines = (
        _invariant_lines(f"A = {args.expr_a}", a)
        + _invariant_lines(f"B = {args.expr_b}", b)
        + [
            f"K(unital free product): K0 = {ufp.k0}, K1 = {ufp.k1}"
            + (" (with extra Z)" if ufp.extra_z else ""),
            f"K(tensor product): K0 = {kun.k0}, K1 = {kun.k1}",
            f"verdict: {verdict.outcome}",
        ]
    )
    if verdict.parameters is not None:
        params = ", ".join(f"{k}={v}" for k, v in verdict.parameters)
        lines.append(f"case parameters: {params}")
    if verdict.witness is not None:
        lines.append(f"witness: {verdict.witness.clause}")
        lines.append(f"  {verdict.witness.explanation}")
    if args.mode:
        report = section_exists_k(a, b, args.mode)
        payload["sections"] = {"mode": args.mode, **_section_payload(report)}
        lines.append(f"sections ({args.mode} mode):")
        lines.extend("  " + s for s in _section_lines(report))
    _emit(payload, lines, args.format, out)
    if verdict.outcome == OBSTRUCTED:
        return EXIT_OBSTRUCTED
    if verdict.outcome == obstruct.NOT_APPLICABLE:
        return EXIT_NOT_FG
    return EXIT_OK


def _cmd_section(args, out) -> int:
    a = _require_invariant(evaluate(args.expr_a), "the first expression")
    b = _require_invariant(evaluate(args.expr_b), "the second expression")
    report = section_exists_k(a, b, args.mode or "unital")
    payload = {
        "command": "section",
        "expr_a": args.expr_a,
        "expr_b": args.expr_b,
        "mode": args.mode or "unital",
        "sections": _section_payload(report),
    }
    lines = (
        _invariant_lines(f"A = {args.expr_a}", a)
        + _invariant_lines(f"B = {args.expr_b}", b)
        + [f"mode: {args.mode or 'unital'}"]
        + _section_lines(report)
    )
    _emit(payload, lines, args.format, out)
    return EXIT_OK if report.all_clear else EXIT_OBSTRUCTED


# ---------------------------------------------------------------------------
# Fixed regression suite


def _ex_c2_rank():
    c2 = evaluate("C^2")
    v = classify(c2, c2)
    ok = v.outcome == OBSTRUCTED and v.witness.clause == obstruct.RANK_INEQUALITY
    return ok, f"verdict {v.outcome}/{v.witness.clause if v.witness else '-'}"


def _ex_mn_same():
    details = []
    ok = True
    for n in (2, 3, 4, 6):
        mn = evaluate(f"M_{n}")
        v = classify(mn, mn)
        pi0, _, _ = pi_star(mn, mn)
        coker = cokernel(pi0)
        good = (
            v.outcome == OBSTRUCTED
            and v.witness.clause == obstruct.PI0_NOT_SURJECTIVE
            and coker == FgAbGroup(0, (n,))
        )
        ok = ok and good
        details.append(f"n={n}: {v.outcome}, coker={coker}")
    return ok, "; ".join(details)


def _ex_m2_m3():
    a, b = evaluate("M_2"), evaluate("M_3")
    v = classify(a, b)
    report = section_exists_k(a, b, "unital")
    pi0, _, _ = pi_star(a, b)
    s = report.deg0
    ok = (
        v.outcome == obstruct.POSSIBLE_CASE_III
        and s is not None
        and compose(s, pi0) == GroupHom.identity(pi0.target)
    )
    return ok, f"verdict {v.outcome}, section {s.matrix.to_json() if s else None}"


def _ex_m_oinf_unit():
    x = m_oo_unit_divisibility(2, 3)
    none = m_oo_unit_divisibility(2, 4)
    ok = x is not None and none is None
    if ok:
        kp = unital_free_product_k(evaluate("M_2(Oinf)"), evaluate("M_3(Oinf)"))
        ok = (6 * x) == kp.unit
    return ok, f"(2,3) witness {list(x.coords) if x else None}; (2,4) none: {none is None}"


def _ex_ex4():
    w = ex4_no_scaled_section()
    ok = w.clause == obstruct.NO_SECTION_0
    return ok, f"witness {w.clause}"


def _ex_cuntz_gcd():
    ok = True
    bad = []
    for m in range(2, 13):
        for n in range(2, 13):
            v = classify(evaluate(f"O_{m}"), evaluate(f"O_{n}"))
            want = gcd(m - 1, n - 1) == 1
            got = v.outcome == obstruct.POSSIBLE_CASE_II
            if want != got:
                ok = False
                bad.append((m, n))
    return ok, "all pairs 2<=m,n<=12 agree" if ok else f"mismatches: {bad}"


def _ex_torus_k1():
    ct = evaluate("CT")
    v = classify(ct, ct)
    ok = v.outcome == OBSTRUCTED and v.witness.clause == obstruct.K1_TENSOR_NONZERO
    return ok, f"verdict {v.outcome}/{v.witness.clause if v.witness else '-'}"


def _ex_o2_absorb():
    kp = kunneth(evaluate("O_2"), evaluate("O_2"))
    ok = kp.k0.is_trivial and kp.k1.is_trivial and kp.unit.is_zero
    return ok, f"L(O_2 (x) O_2) = ({kp.k0}, {kp.k1}, {list(kp.unit.coords)})"


def _ex_oinf_absorb():
    from .catalog import catalog_entries

    oinf = evaluate("Oinf")
    ok = True
    bad = []
    for name, inv in catalog_entries():
        for left, right in ((oinf, inv), (inv, oinf)):
            kp = kunneth(left, right)
            if not (kp.k0 == inv.k0 and kp.k1 == inv.k1 and kp.unit == inv.unit):
                ok = False
                bad.append(name)
    return ok, "absorption holds across the catalog" if ok else f"failures: {bad}"


_EXAMPLES = (
    ("c2-rank", "two-point algebras: rank count obstructs a splitting", _ex_c2_rank),
    ("mn-same", "equal matrix algebras: degree-0 map is multiplication by n", _ex_mn_same),
    ("m2-m3", "coprime matrix algebras: case III with an explicit section", _ex_m2_m3),
    ("m-oinf-unit", "unit divisibility in the stabilized matrix free product", _ex_m_oinf_unit),
    ("ex4", "two projections: scale constraints admit no section", _ex_ex4),
    ("cuntz-gcd", "Cuntz algebra pairs: the torsion case applies iff the K0 orders are coprime", _ex_cuntz_gcd),
    ("torus-k1", "two circles: nonzero K1 tensor obstructs", _ex_torus_k1),
    ("o2-absorb", "tensor square of the zero-K-theory Cuntz algebra stays trivial", _ex_o2_absorb),
    ("oinf-absorb", "tensoring with (Z, 0, 1) preserves every catalog invariant", _ex_oinf_absorb),
)


def _cmd_paper_examples(args, out) -> int:
    selected = _EXAMPLES
    if args.only:
        selected = tuple(e for e in _EXAMPLES if e[0] == args.only)
        if not selected:
            known = ", ".join(e[0] for e in _EXAMPLES)
            raise ValueError(f"unknown example id {args.only!r}; known ids: {known}")
    results = []
    for ident, description, runner in selected:
        passed, detail = runner()
        results.append(
            {"id": ident, "description": description, "passed": passed, "detail": detail}
        )
    payload = {
        "command": "paper-examples",
        "passed": all(r["passed"] for r in results),
        "results": results,
    }
    lines = [
        f"{'PASS' if r['passed'] else 'FAIL'} {r['id']:<14} {r['description']}"
        for r in results
    ]
    lines.append(f"{sum(r['passed'] for r in results)}/{len(results)} examples passed")
    _emit(payload, lines, args.format, out)
    return EXIT_OK if payload["passed"] else EXIT_OBSTRUCTED


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kobstruct",
        description=(
            "Exact K-theory of tensor and free products of unital algebras, "
            "and the splitting classifier for the quotient between them."
        ),
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p):
        p.add_argument(
            "--format", choices=("text", "json"), default="text", help="output format"
        )

    p = sub.add_parser("kgroups", help="K-groups of an algebra expression")
    p.add_argument("expr")
    add_common(p)
    p.set_defaults(func=_cmd_kgroups)

    p = sub.add_parser("classify", help="classify a pair of algebras")
    p.add_argument("expr_a")
    p.add_argument("expr_b")
    p.add_argument(
        "--mode",
        choices=("unital", "full"),
        default=None,
        help="additionally solve for sections of the induced maps",
    )
    add_common(p)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("section", help="solve for sections of the induced maps")
    p.add_argument("expr_a")
    p.add_argument("expr_b")
    p.add_argument("--mode", choices=("unital", "full"), default="unital")
    add_common(p)
    p.set_defaults(func=_cmd_section)

    p = sub.add_parser("paper-examples", help="run the fixed regression suite")
    p.add_argument("--only", default=None, help="run a single example by id")
    add_common(p)
    p.set_defaults(func=_cmd_paper_examples)

    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args, out)
    except NonFinitelyGeneratedError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_NOT_FG
    except (ParseError, UnsupportedNestingError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
