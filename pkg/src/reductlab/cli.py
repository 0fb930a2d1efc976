"""Command-line workbench.

Exit codes: 0 verdict pass, 1 verdict fail (a mathematical property is
violated and a witness is printed), 2 input or usage error.  Reports are
JSON on stdout; set REDUCTLAB_OUT to also write them to files, and
REDUCTLAB_THREADS to run verify-all suites on a thread pool (output order
stays deterministic).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from . import jsonio
from .eklab import (
    build_sli_matrix,
    field_named,
    reduced_power_cardinality,
    verify_sli,
    zero_count_bound,
)
from .redprod import (
    ProductFamily,
    detected_filter,
    factor_homomorphism,
    reduced_product,
    verify_surjectivity,
)
from .relcheck import (
    BinaryRelation,
    GROUP_FLAVOR,
    RING_FLAVOR,
    cc_factorization_demo,
    chain_strictness,
    check_dR,
    perp_report,
    verify_almost_facts,
)
from .setfam import Ultrafilter, check_bdd, decompose_filter, least_bdd_n
from .ualg import HomTable, is_identity, parse_term
from .util import InputError, PropertyViolation
from .verify import VerifyCaps, all_suites, fault_corpus, mutate_algebra, run_suite


@dataclass
class Report:
    command: str
    inputs: dict
    verdict: str            # "pass" | "fail" | "error"
    witnesses: list
    payload: dict
    timing: float

    def to_json(self) -> str:
        doc = {
            "command": self.command,
            "inputs": self.inputs,
            "verdict": self.verdict,
            "witnesses": self.witnesses,
            "payload": self.payload,
            "timing": round(self.timing, 6),
        }
        return json.dumps(doc, indent=2, default=str, sort_keys=True)


class Workspace:
    """Loaded documents by path plus environment configuration.

    Documents are cached per resolved path, so a name refers to one object
    for the whole command; the thread count and report directory come from
    REDUCTLAB_THREADS and REDUCTLAB_OUT.
    """

    def __init__(self, environ=None):
        environ = os.environ if environ is None else environ
        raw = environ.get("REDUCTLAB_THREADS", "1")
        try:
            self.threads = int(raw)
        except ValueError as exc:
            raise InputError(f"REDUCTLAB_THREADS must be an integer, got {raw!r}") from exc
        if self.threads < 1:
            raise InputError("REDUCTLAB_THREADS must be >= 1")
        self.out_dir = environ.get("REDUCTLAB_OUT")
        self._algebras = {}

    def load_algebra(self, path: str):
        key = os.path.abspath(path)
        if key not in self._algebras:
            self._algebras[key] = jsonio.load_algebra(key)
        return self._algebras[key]

    def family_from(self, paths):
        return ProductFamily([self.load_algebra(p) for p in paths])


def _require(args, *names):
    for n in names:
        if getattr(args, n, None) is None:
            raise InputError(f"missing required option --{n.replace('_', '-')}")


def _flavor(text: str) -> str:
    if text in ("ring", RING_FLAVOR):
        return RING_FLAVOR
    if text in ("group", GROUP_FLAVOR):
        return GROUP_FLAVOR
    raise InputError(f"unknown flavor {text!r}; use ring or group")


def _parse_parts(text: str) -> list[list[int]]:
    try:
        return [[int(x) for x in block.split(",") if x != ""]
                for block in text.split(";")]
    except ValueError as exc:
        raise InputError(f"bad parts spec {text!r}") from exc


def _load_pairs(a, spec: str) -> BinaryRelation:
    if spec == "full":
        return BinaryRelation.full(a)
    if spec == "diagonal":
        return BinaryRelation.diagonal(a)
    try:
        with open(spec, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read pairs document {spec!r}: {exc}") from exc
    return BinaryRelation(a, frozenset((int(i), int(j)) for i, j in doc["pairs"]))


# ---------------------------------------------------------------------------
# subcommand handlers: return (verdict, witnesses, payload)


def cmd_filter(args, ws):
    f = jsonio.load_filter(args.document)
    if args.action == "check":
        return "pass", [], {
            "base": list(f.base.members()),
            "proper": f.is_proper(),
            "member_count": len(f.member_masks()),
        }
    if args.action == "decompose":
        return "pass", [], {"points": [u.point for u in decompose_filter(f)]}
    if args.action == "bdd":
        if args.n is None:
            return "pass", [], {"least_n": least_bdd_n(f)}
        res = check_bdd(f, args.n)
        if res:
            return "pass", [], {"n": args.n, "holds": True}
        witness = [list(s.members()) for s in res.witness]
        return "fail", [witness], {"n": args.n, "holds": False}
    raise InputError(f"unknown filter action {args.action!r}")


def cmd_algebra(args, ws):
    a = ws.load_algebra(args.document)
    if args.action == "check":
        return "pass", [], {
            "name": a.name,
            "size": a.size,
            "ops": [[s, k] for s, k in a.signature.symbols],
            "tags": {"identity": a.identity, "zero": a.zero},
        }
    if args.action == "identity":
        _require(args, "lhs", "rhs")
        lhs = parse_term(args.lhs, a.signature)
        rhs = parse_term(args.rhs, a.signature)
        res = is_identity(a, lhs, rhs)
        if res:
            return "pass", [], {"identity": True}
        return "fail", [res.witness], {"identity": False}
    raise InputError(f"unknown algebra action {args.action!r}")


def cmd_redprod(args, ws):
    if args.action == "build":
        _require(args, "factors", "filter")
        family = ws.family_from(args.factors)
        filt = jsonio.load_filter(args.filter)
        rp = reduced_product(family, filt)
        return "pass", [], {
            "classes": rp.class_count,
            "factor_sizes": [f.size for f in family.factors],
            "base": list(filt.base.members()),
        }
    if args.action == "detect":
        _require(args, "hom")
        # detection works at the set level: accept plain maps, not just homs
        family, hom = jsonio.load_hom(args.hom, check=False)
        filt = detected_filter(family, hom)
        return "pass", [], {
            "filter_base": list(filt.base.members()),
            "proper": filt.is_proper(),
        }
    if args.action == "factor":
        _require(args, "hom")
        family, hom = jsonio.load_hom(args.hom)
        fac = factor_homomorphism(family, hom)
        return "pass", [], jsonio.factorization_to_doc(fac)
    if args.action == "surj":
        _require(args, "factors", "points")
        family = ws.family_from(args.factors)
        points = [int(p) for p in args.points]
        ultras = [Ultrafilter(family.index_set, p) for p in points]
        res = verify_surjectivity(family, ultras)
        payload = {
            "surjective": res.ok,
            "bijective": res.bijective,
            "target_size": res.target.size,
            "witness_partition": [
                [i for i in range(family.index_set.size) if mask >> i & 1]
                for mask in res.witness_partition
            ],
        }
        if res.ok and res.bijective:
            return "pass", [], payload
        return "fail", [payload["witness_partition"]], payload
    raise InputError(f"unknown redprod action {args.action!r}")


def cmd_rel(args, ws):
    if args.action == "dr":
        _require(args, "algebra", "relation")
        a = ws.load_algebra(args.algebra)
        r = jsonio.load_relation(args.relation)
        res = check_dR(a, r)
        if res:
            return "pass", [], {"relation": r.name, "holds": True}
        return "fail", [res.witness], {"relation": r.name, "holds": False}
    if args.action == "perp":
        _require(args, "algebra", "relations")
        a = ws.load_algebra(args.algebra)
        relations = [jsonio.load_relation(p) for p in args.relations]
        c = _load_pairs(a, args.pairs)
        report = perp_report(a, relations, c)
        return "pass", [], {
            "pairs": sorted(report.perp.pairs),
            "reflexive": report.reflexive,
            "symmetric": report.symmetric,
            "subalgebra": report.subalgebra,
            "transitive": report.transitive,
            "transitivity_witness": report.transitivity_witness,
            "c_is_congruence": report.c_is_congruence,
            "perp_is_congruence": report.perp_is_congruence,
        }
    if args.action == "almost":
        _require(args, "algebra")
        a = ws.load_algebra(args.algebra)
        rep = verify_almost_facts(a, _flavor(args.flavor))
        return "pass", [], {
            "factors": rep.factor_count,
            "contains_zero_part_checked": rep.contains_zero_part_checked,
            "non_self_annihilating_checked": rep.non_self_annihilating_checked,
            "spanning_pairs_checked": rep.spanning_pairs_checked,
        }
    if args.action == "chain":
        _require(args, "hom", "parts")
        family, hom = jsonio.load_hom(args.hom)
        report = chain_strictness(family, hom, _parse_parts(args.parts))
        return "pass", [], {
            "stages": [sorted(i.elements) for i in report.ideals],
            "strict": report.strict,
            "block_image_central": report.block_image_central,
        }
    if args.action == "ccfactor":
        _require(args, "hom")
        family, hom = jsonio.load_hom(args.hom)
        fac = cc_factorization_demo(family, hom, _flavor(args.flavor))
        return "pass", [], jsonio.factorization_to_doc(fac)
    raise InputError(f"unknown rel action {args.action!r}")


def cmd_ek(args, ws):
    if args.action == "build":
        _require(args, "size")
        field = field_named(args.field)
        cert = build_sli_matrix(args.size, field)
        doc = jsonio.matrix_to_doc(cert.matrix)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                json.dump(doc, fh, indent=2)
        return "pass", [], {"matrix": doc, "checked_minors": cert.checked_minors}
    if args.action == "verify":
        _require(args, "matrix")
        m = jsonio.load_matrix(args.matrix)
        res = verify_sli(m)
        if res:
            return "pass", [], {"verified": True}
        return "fail", [list(res.witness)], {"verified": False}
    if args.action == "zerobound":
        _require(args, "matrix", "coeffs")
        m = jsonio.load_matrix(args.matrix)
        coeffs = [c for c in args.coeffs.split(",") if c != ""]
        zeros, ok = zero_count_bound(m, coeffs)
        nonzero = sum(1 for c in coeffs if m.field.coerce(c) != m.field.zero)
        payload = {"zero_count": zeros, "nonzero_coefficients": nonzero, "bound_holds": ok}
        return ("pass" if ok else "fail"), ([] if ok else [payload]), payload
    if args.action == "redpow":
        _require(args, "xsize", "filter")
        f = jsonio.load_filter(args.filter)
        card = reduced_power_cardinality(args.xsize, f)
        return "pass", [], {
            "cardinality": card,
            "decomposition_points": [u.point for u in decompose_filter(f)],
        }
    raise InputError(f"unknown ek action {args.action!r}")


def cmd_verify_all(args, ws):
    caps = VerifyCaps(
        max_index=args.max_index,
        max_size=args.max_size,
        matrix_size=args.matrix_size,
        samples=args.samples,
    )
    witnesses = []
    if args.fault:
        payload = _fault_demo(args.fault)
        if payload["caught"]:
            return "fail", [payload["witness"]], payload
        return "pass", [], payload
    suites = all_suites(caps)
    if ws.threads > 1:
        with ThreadPoolExecutor(max_workers=ws.threads) as pool:
            futures = [(name, pool.submit(run_suite, name, thunk)) for name, thunk in suites]
            results = [f.result() for _name, f in futures]
    else:
        results = [run_suite(name, thunk) for name, thunk in suites]
    lines = []
    ok = True
    for r in results:
        lines.append(r.line())
        if not r.ok:
            ok = False
            witnesses.append({"suite": r.name, "witness": r.witness, "detail": r.detail})
    payload = {
        "suites": lines,
        "passed": sum(1 for r in results if r.ok),
        "failed": sum(1 for r in results if not r.ok),
        "total_checks": sum(r.checked for r in results),
    }
    return ("pass" if ok else "fail"), witnesses, payload


def _fault_demo(spec: str) -> dict:
    """Mutate one corpus table entry and report the homomorphism-law witness."""
    try:
        name, symbol, pos, value = spec.split(":")
        pos, value = int(pos), int(value)
    except ValueError as exc:
        raise InputError(f"bad fault spec {spec!r}; use name:symbol:position:value") from exc
    for pristine, _relations in fault_corpus():
        if pristine.name == name:
            break
    else:
        raise InputError(f"no corpus algebra named {name!r}")
    if symbol not in pristine.signature:
        raise InputError(f"{name} has no operation {symbol!r}")
    if not 0 <= pos < len(pristine.tables[symbol]):
        raise InputError(f"position {pos} out of range for {symbol!r}")
    mutated = mutate_algebra(pristine, symbol, pos, value % pristine.size)
    witness = HomTable(mutated, pristine, list(range(pristine.size)), check=False).law_witness()
    return {
        "algebra": name,
        "mutation": {"symbol": symbol, "position": pos, "value": value % pristine.size},
        "caught": witness is not None,
        "witness": witness,
    }


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reductlab",
        description="Finite-model workbench for filters, reduced products, "
                    "homomorphism factorization, and totally nonsingular matrices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("filter", help="filter documents: check, decompose, bdd")
    p.add_argument("action", choices=["check", "decompose", "bdd"])
    p.add_argument("document")
    p.add_argument("--n", type=int, default=None, help="block bound for bdd")
    p.set_defaults(handler=cmd_filter)

    p = sub.add_parser("algebra", help="algebra documents: check, identity")
    p.add_argument("action", choices=["check", "identity"])
    p.add_argument("document")
    p.add_argument("--lhs", help="left term for identity")
    p.add_argument("--rhs", help="right term for identity")
    p.set_defaults(handler=cmd_algebra)

    p = sub.add_parser("redprod", help="reduced products and factorization")
    p.add_argument("action", choices=["build", "detect", "factor", "surj"])
    p.add_argument("--factors", nargs="+", help="algebra documents")
    p.add_argument("--filter", help="filter document")
    p.add_argument("--hom", help="homomorphism document")
    p.add_argument("--points", nargs="+", help="ultrafilter points for surj")
    p.set_defaults(handler=cmd_redprod)

    p = sub.add_parser("rel", help="relations, annihilators, factor demos")
    p.add_argument("action", choices=["dr", "perp", "almost", "chain", "ccfactor"])
    p.add_argument("--algebra", help="algebra document")
    p.add_argument("--relation", help="relation document")
    p.add_argument("--relations", nargs="+", help="relation documents for perp")
    p.add_argument("--pairs", default="full",
                   help="'full', 'diagonal', or a JSON pairs document")
    p.add_argument("--flavor", default="ring", help="ring or group")
    p.add_argument("--hom", help="homomorphism document")
    p.add_argument("--parts", help="partition like '0,1;2'")
    p.set_defaults(handler=cmd_rel)

    p = sub.add_parser("ek", help="totally nonsingular matrices, reduced powers")
    p.add_argument("action", choices=["build", "verify", "zerobound", "redpow"])
    p.add_argument("--size", type=int, help="matrix size for build")
    p.add_argument("--field", default="rational", help="'rational' or a prime")
    p.add_argument("--seed-order", choices=["canonical"], default="canonical",
                   help="value tie-breaking order (only the canonical one exists)")
    p.add_argument("--out", help="write the built matrix document here")
    p.add_argument("--matrix", help="matrix document")
    p.add_argument("--coeffs", help="comma-separated coefficients")
    p.add_argument("--xsize", type=int, help="carrier size for redpow")
    p.add_argument("--filter", help="filter document")
    p.set_defaults(handler=cmd_ek)

    p = sub.add_parser("verify-all", help="run every invariant suite")
    p.add_argument("--max-index", type=int, default=3)
    p.add_argument("--max-size", type=int, default=4)
    p.add_argument("--matrix-size", type=int, default=4)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--fault", help="inject name:symbol:position:value and expect failure")
    p.set_defaults(handler=cmd_verify_all)

    return parser


def _command_name(args) -> str:
    action = getattr(args, "action", None)
    return f"{args.command} {action}" if action else args.command


def _inputs_of(args) -> dict:
    skip = {"handler", "command", "action"}
    return {k: v for k, v in vars(args).items() if k not in skip and v is not None}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    started = time.perf_counter()
    command = _command_name(args)
    try:
        ws = Workspace()
        verdict, witnesses, payload = args.handler(args, ws)
    except InputError as exc:
        report = Report(command, _inputs_of(args), "error", [str(exc)], {},
                        time.perf_counter() - started)
        _emit(report, None)
        return 2
    except PropertyViolation as exc:
        report = Report(command, _inputs_of(args), "fail",
                        [str(exc), exc.witness], {}, time.perf_counter() - started)
        _emit(report, None)
        return 1
    report = Report(command, _inputs_of(args), verdict, witnesses, payload,
                    time.perf_counter() - started)
    _emit(report, ws)
    return {"pass": 0, "fail": 1}.get(verdict, 2)


def _emit(report: Report, ws) -> None:
    text = report.to_json()
    print(text)
    out_dir = ws.out_dir if ws is not None else os.environ.get("REDUCTLAB_OUT")
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        fname = report.command.replace(" ", "-") + ".json"
        with open(os.path.join(out_dir, fname), "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


if __name__ == "__main__":
    sys.exit(main())
