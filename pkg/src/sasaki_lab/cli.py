"""Command-line front end.

Algebra arguments are ``fixture:NAME`` or a path to an algebra file.
Exit status: 0 when every requested check holds, 1 when one fails (or a
sweep run with --expect-empty finds hits), 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from sasaki_lab import fixtures as fx
from sasaki_lab.algebras import (
    check,
    direct_product,
    oml_to_pseudoring,
    pseudoring_to_oml,
    subalgebra_generated,
)
from sasaki_lab.errors import SasakiLabError
from sasaki_lab.fileformat import dumps, format_binop, format_unary, load_algebra_file
from sasaki_lab.sasaki import (
    derive_sasaki,
    evaluate_conditions,
    known_conditions,
    pair_adjointness,
    residual_imp_from_odot,
    residual_odot_from_imp,
)
from sasaki_lab.search import REGISTRY, completion_spec, completion_sweep, enumerate_lambda_completions, enumerate_unary_ops, falsify
from sasaki_lab.terms import Verdict


def load_ref(ref: str):
    """Return (algebra, expectations) for ``fixture:NAME`` or a file path."""
    if ref.startswith("fixture:"):
        af = fx.fixture_file(ref.split(":", 1)[1])
    else:
        try:
            af = load_algebra_file(ref)
        except OSError as exc:
            raise SasakiLabError(f"cannot read {ref}: {exc.strerror}") from None
    return af.algebra, af.expect


def _split(s: str | None) -> list[str]:
    return [p.strip() for p in s.split(",") if p.strip()] if s else []


class Report:
    """Collects output lines; renders verdicts as text or JSON lines."""

    def __init__(self, fmt: str, out=None):
        self.fmt = fmt
        self.out = out or sys.stdout
        self.ok = True

    def line(self, text: str = ""):
        if self.fmt == "text":
            self.out.write(text + "\n")

    def record(self, rec: dict):
        if self.fmt == "json-lines":
            self.out.write(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n")

    def verdict(self, v: Verdict, expected: bool | None = None, name: str | None = None):
        name = name or v.name
        if expected is None:
            passed = v.holds
        else:
            passed = v.holds == expected
        self.ok &= passed
        rec = {"name": name, "holds": v.holds, "witness": v.witness, "checked_count": v.checked_count}
        if expected is not None:
            rec["expected"] = expected
        self.record(rec)
        status = "PASS" if passed else "FAIL"
        body = f"{name} = {'true' if v.holds else 'false'}"
        if expected is not None:
            body += f" (expected {'true' if expected else 'false'})"
        if v.witness:
            body += " witness " + " ".join(f"{k}={val}" for k, val in v.witness.items())
        if v.detail:
            body += f" [{v.detail}]"
        self.line(f"{status} {body} (checked {v.checked_count})")


# --------------------------------------------------------------------------
# subcommands


def cmd_check(args, rep: Report) -> int:
    alg, expect = load_ref(args.algebra)
    names = _split(args.conditions)
    if args.expect:
        names = names or list(expect)
    if not names and not args.law:
        names = known_conditions(alg, args.scheme)
    rep.line(f"# {alg.name or args.algebra} ({alg.kind}, {alg.size} elements)")
    verdicts = evaluate_conditions(alg, names, args.scheme)
    for name in names:
        exp = expect.get(name) if args.expect else None
        if args.expect and exp is None:
            raise SasakiLabError(f"no stored expectation for {name}")
        rep.verdict(verdicts[name], exp, name)
    for src in args.law or []:
        rep.verdict(check(alg, src, src))
    return 0 if rep.ok else 1


def cmd_derive(args, rep: Report) -> int:
    alg, _ = load_ref(args.algebra)
    pair = derive_sasaki(alg, args.scheme)
    if args.print_tables:
        text = format_binop("odot", alg.elements, pair.odot) + "\n" + format_binop("imp", alg.elements, pair.imp)
        rep.line(text)
        for key, tbl in (("odot", pair.odot), ("imp", pair.imp)):
            rep.record({"table": key, "rows": {e: [alg.elements[int(v)] for v in row] for e, row in zip(alg.elements, tbl)}})
        return 0
    rep.line(f"# {alg.name or args.algebra}: Sasaki pair by {pair.scheme}")
    report = pair_adjointness(pair)
    rep.verdict(report.a1)
    rep.verdict(report.a2)
    return 0 if rep.ok else 1


def cmd_residual(args, rep: Report) -> int:
    alg, _ = load_ref(args.algebra)
    pair = derive_sasaki(alg, args.scheme)
    rep.line(f"# {alg.name or args.algebra}: residuals of the {pair.scheme} pair")
    jobs = []
    if args.direction in ("imp", "both"):
        jobs.append(("imp", residual_imp_from_odot(pair.order, pair.odot), pair.imp))
    if args.direction in ("odot", "both"):
        jobs.append(("odot", residual_odot_from_imp(pair.order, pair.imp), pair.odot))
    for key, res, derived in jobs:
        if res.ok:
            same = bool((res.table == derived).all())
            rep.ok &= same
            rep.line(f"{'PASS' if same else 'FAIL'} {key} reconstructed, {'equal to' if same else 'differs from'} the derived table")
            rep.record({"name": f"residual_{key}", "holds": same, "witness": None, "checked_count": alg.size**2})
            if args.print_tables:
                rep.line(format_binop(key, alg.elements, res.table))
        else:
            rep.ok = False
            w = " ".join(f"{k}={v}" for k, v in res.witness.items())
            rep.line(f"FAIL {key} has no residual: no extremal element at {w}")
            rep.record({"name": f"residual_{key}", "holds": False, "witness": res.witness, "checked_count": alg.size**2})
    return 0 if rep.ok else 1


def cmd_translate(args, rep: Report) -> int:
    alg, _ = load_ref(args.algebra)
    if alg.kind == "lattice":
        out = oml_to_pseudoring(alg, args.name or "")
    elif alg.kind == "pseudoring":
        out = pseudoring_to_oml(alg, args.name or "")
    else:
        raise SasakiLabError(f"translate needs a lattice or a pseudoring, got a {alg.kind}")
    rep.line(dumps(out).rstrip("\n"))
    rep.record({"algebra": dumps(out)})
    return 0


def cmd_product(args, rep: Report) -> int:
    a, _ = load_ref(args.left)
    b, _ = load_ref(args.right)
    prod = direct_product(a, b, args.name or "")
    names = _split(args.conditions)
    if not names:
        rep.line(dumps(prod).rstrip("\n"))
        rep.record({"algebra": dumps(prod)})
        return 0
    rep.line(f"# {prod.name or 'product'} ({prod.kind}, {prod.size} elements)")
    verdicts = evaluate_conditions(prod, names, args.scheme)
    for name in names:
        rep.verdict(verdicts[name], name=name)
    return 0 if rep.ok else 1


def cmd_subalgebra(args, rep: Report) -> int:
    alg, _ = load_ref(args.algebra)
    sub = subalgebra_generated(alg, _split(args.seed), args.name or "")
    rep.line(dumps(sub).rstrip("\n"))
    rep.record({"algebra": dumps(sub), "elements": list(sub.elements)})
    return 0


def cmd_enumerate(args, rep: Report) -> int:
    alg, _ = load_ref(args.algebra)
    if args.what == "unary":
        count = 0
        for u in enumerate_unary_ops(alg, _split(args.filter)):
            count += 1
            if args.cap is not None and count > args.cap:
                count -= 1
                break
            rep.line(format_unary("neg", alg.elements, u))
            rep.record({"neg": {e: alg.elements[int(v)] for e, v in zip(alg.elements, u)}})
        rep.line(f"# {count} unary operations")
        rep.record({"count": count})
        return 0
    order = alg.order
    names = _split(args.conditions)
    if names:
        neg = alg.interpretation().table("neg")
        res = completion_sweep(order, neg, names, ())
        rep.line(f"# {res.models_examined} completions; {res.hypothesis_count} satisfy {','.join(names)}")
        rep.record({"completions": res.models_examined, "satisfying": res.hypothesis_count})
        return 0
    spec = completion_spec(order)
    stream = enumerate_lambda_completions(order, args.cap)
    count = 0
    for lam in stream:
        count += 1
        choices = []
        for i, j in spec.pairs:
            a, b = order.elements[i], order.elements[j]
            choices.append(f"join {a} {b} = {lam.elements[int(lam.op('lsup')[i, j])]}")
        for i, j in spec.pairs:
            a, b = order.elements[i], order.elements[j]
            choices.append(f"meet {a} {b} = {lam.elements[int(lam.op('linf')[i, j])]}")
        rep.line(f"completion {count}: " + "; ".join(choices))
        rep.record({"completion": count, "choices": choices})
    state = "exhausted" if stream.exhausted else "cap reached"
    rep.line(f"# {count} completions ({state})")
    rep.record({"count": count, "exhausted": stream.exhausted})
    return 0


def cmd_falsify(args, rep: Report) -> int:
    res = falsify(args.conjecture, args.bound, max_bound=args.max_bound, max_hits=args.max_hits)
    conj = REGISTRY[args.conjecture]
    rep.line(f"# {conj.name}: {conj.statement}")
    rep.line(res.summary())
    rep.record(
        {
            "conjecture": res.conjecture,
            "kind": res.kind,
            "bound": res.bound,
            "models_examined": res.models_examined,
            "hypothesis_count": res.hypothesis_count,
            "hits": len(res.hits),
            "exhausted": res.exhausted,
        }
    )
    for k, hit in enumerate(res.hits, 1):
        rep.line(f"## hit {k}")
        rep.line(hit.description.rstrip("\n"))
        for name, v in hit.verdicts.items():
            rep.verdict(v, name=name)
        rep.record({"hit": k, "algebra": hit.description})
    if args.expect_empty and res.hits:
        return 1
    return 0


def cmd_fixtures(args, rep: Report) -> int:
    ids = [args.id] if args.id else list(fx.FIXTURE_IDS)
    if args.list:
        for fid in ids:
            rep.line(fid)
            rep.record({"fixture": fid})
        return 0
    all_ok = True
    for fid in ids:
        alg, rows = fx.validate_fixture(fid)
        ok = all(exp == v.holds for _, exp, v in rows)
        all_ok &= ok
        rep.line(f"{'PASS' if ok else 'FAIL'} {fid} ({alg.kind}, {alg.size} elements, {len(rows)} expectations)")
        rep.record({"fixture": fid, "holds": ok, "expectations": len(rows)})
        if not ok or args.verbose:
            for name, exp, v in rows:
                rep.verdict(v, exp, f"{fid}.{name}")
    rep.ok = all_ok
    return 0 if all_ok else 1


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sasaki-lab", description="Sasaki operations on finite ordered algebras")
    parser.add_argument("--format", choices=("text", "json-lines"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("text", "json-lines"), default=argparse.SUPPRESS)
        return p

    p = common(sub.add_parser("check", help="evaluate conditions and laws"))
    p.add_argument("algebra")
    p.add_argument("--scheme", choices=("S1", "S2", "S3", "S4"))
    p.add_argument("--conditions", help="comma-separated condition names")
    p.add_argument("--law", action="append", help="an extra law, e.g. \"x v x' = 1\"")
    p.add_argument("--expect", action="store_true", help="compare against the stored expectations")
    p.set_defaults(func=cmd_check)

    p = common(sub.add_parser("derive", help="derive the Sasaki pair"))
    p.add_argument("algebra")
    p.add_argument("--scheme", choices=("S1", "S2", "S3", "S4"))
    p.add_argument("--print-tables", action="store_true")
    p.set_defaults(func=cmd_derive)

    p = common(sub.add_parser("residual", help="reconstruct one operation from the other"))
    p.add_argument("algebra")
    p.add_argument("--scheme", choices=("S1", "S2", "S3", "S4"))
    p.add_argument("--direction", choices=("imp", "odot", "both"), default="both")
    p.add_argument("--print-tables", action="store_true")
    p.set_defaults(func=cmd_residual)

    p = common(sub.add_parser("translate", help="orthomodular lattice <-> pseudoring"))
    p.add_argument("algebra")
    p.add_argument("--name")
    p.set_defaults(func=cmd_translate)

    p = common(sub.add_parser("product", help="direct product of two algebras"))
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--name")
    p.add_argument("--scheme", choices=("S1", "S2", "S3", "S4"))
    p.add_argument("--conditions")
    p.set_defaults(func=cmd_product)

    p = common(sub.add_parser("subalgebra", help="subalgebra generated by a seed"))
    p.add_argument("algebra")
    p.add_argument("--seed", required=True, help="comma-separated element names")
    p.add_argument("--name")
    p.set_defaults(func=cmd_subalgebra)

    p = common(sub.add_parser("enumerate", help="unary operations or λ-completions"))
    p.add_argument("what", choices=("unary", "completions"))
    p.add_argument("algebra")
    p.add_argument("--filter", help="unary filters: complementation,involution,antitone,surjective")
    p.add_argument("--cap", type=int)
    p.add_argument("--conditions", help="completions: count those satisfying these conditions")
    p.set_defaults(func=cmd_enumerate)

    p = common(sub.add_parser("falsify", help="countermodel sweep for a registry entry"))
    p.add_argument("conjecture", choices=sorted(REGISTRY))
    p.add_argument("--bound", type=int)
    p.add_argument("--max-bound", type=int)
    p.add_argument("--max-hits", type=int, default=20)
    p.add_argument("--expect-empty", action="store_true")
    p.set_defaults(func=cmd_falsify)

    p = common(sub.add_parser("fixtures", help="list and self-validate the built-in examples"))
    p.add_argument("id", nargs="?")
    p.add_argument("--list", action="store_true")
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_fixtures)
    return parser


def main(argv=None, out=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    rep = Report(args.format, out)
    try:
        return args.func(args, rep)
    except (SasakiLabError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
