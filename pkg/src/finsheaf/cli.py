"""Command-line front end.

One verb per invocation; reports are canonical JSON on stdout (or a
derived human-readable text form, never parsed back).  Exit codes: 0 for
a true verdict or successful construction, 1 for a false verdict, 2 for
malformed input or an exceeded enumeration cap.  Wall-clock timing only
appears in text output so JSON reports stay byte-identical across runs.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from .canon import canonical_json, open_key
from .errors import FinsheafError, ParseError
from . import serialize as ser
from .gluing import check_cocycle, check_glued_invariant, glue
from .presheaf import (
    BasisPresheaf,
    Presheaf,
    check_F0,
    check_sheaf,
    check_simple_equivalence,
    extend_from_basis,
    limit_of_sheaves,
    validate_presheaf,
)
from .functors import check_adjunction, pullback, pushforward, sheafify
from .stalks import stalk, support
from .topology import enumerate_antichain_coverings

EXIT_TRUE = 0
EXIT_FALSE = 1
EXIT_BAD_INPUT = 2


def _failures_payload(report) -> list[dict]:
    out = []
    for f in report.failures:
        item = {
            "open": open_key(f.open_set),
            "kind": f.kind,
            "witness": f.witness,
        }
        if f.covering is not None:
            item["covering"] = sorted(open_key(p) for p in f.covering.parts)
        out.append(item)
    return out


def _load_presheaf(path: str) -> Presheaf | BasisPresheaf:
    return ser.presheaf_from_payload(ser.load_json(path), os.path.dirname(path) or ".")


def _need_full(p, what: str) -> Presheaf:
    if isinstance(p, BasisPresheaf):
        raise ParseError(f"{what} needs a full presheaf, got basis data")
    return p


def _need_basis(p, what: str) -> BasisPresheaf:
    if not isinstance(p, BasisPresheaf):
        raise ParseError(f"{what} needs a basis presheaf (file with a 'basis' field)")
    return p


def _capped_coverings(cap: int | None):
    if cap is None:
        return None
    return lambda space, u: enumerate_antichain_coverings(space, u, max_coverings=cap)


def cmd_validate(args) -> tuple[dict, bool]:
    p = _load_presheaf(args.presheaf)
    if isinstance(p, BasisPresheaf):
        verdict = p.validate()
    else:
        verdict = validate_presheaf(p)
    return {"functorial": verdict}, verdict


def cmd_check_sheaf(args) -> tuple[dict, bool]:
    p = _need_full(_load_presheaf(args.presheaf), "check-sheaf")
    report = check_sheaf(p, coverings=_capped_coverings(args.max_coverings))
    return {"failures": _failures_payload(report)}, report.verdict


def cmd_check_f0(args) -> tuple[dict, bool]:
    bp = _need_basis(_load_presheaf(args.presheaf), "check-f0")
    report = check_F0(bp)
    return {"failures": _failures_payload(report)}, report.verdict


def cmd_extend_basis(args) -> tuple[dict, bool]:
    bp = _need_basis(_load_presheaf(args.presheaf), "extend-basis")
    ext = extend_from_basis(bp)
    payload = {
        "sections": {
            open_key(u): len(ext.presheaf.sections[u])
            for u in ext.presheaf.space.sorted_opens()
        },
        "canonical_bijective": {
            open_key(b): ext.can(b).is_bijective()
            for b in bp.basis.sorted_members()
        },
    }
    if args.out:
        ser.dump_json(args.out, ser.presheaf_to_payload(ext.presheaf))
    return payload, True


def cmd_stalk(args) -> tuple[dict, bool]:
    p = _need_full(_load_presheaf(args.presheaf), "stalk")
    st = stalk(p, args.point)
    payload = {
        "point": st.point,
        "object": ser.value_to_payload(st.object),
        "canonical": {
            open_key(u): dict(st.canonical[u].map)
            for u in sorted(st.canonical, key=lambda v: tuple(sorted(v)))
        },
    }
    return payload, True


def cmd_support(args) -> tuple[dict, bool]:
    p = _need_full(_load_presheaf(args.presheaf), "support")
    return {"support": sorted(support(p))}, True


def cmd_pushforward(args) -> tuple[dict, bool]:
    psi = ser.map_from_payload(ser.load_json(args.map), os.path.dirname(args.map) or ".")
    p = _need_full(_load_presheaf(args.presheaf), "pushforward")
    out = pushforward(psi, p)
    if args.out:
        ser.dump_json(args.out, ser.presheaf_to_payload(out))
    return {
        "sections": {open_key(u): len(out.sections[u]) for u in out.space.sorted_opens()}
    }, True


def cmd_pullback(args) -> tuple[dict, bool]:
    psi = ser.map_from_payload(ser.load_json(args.map), os.path.dirname(args.map) or ".")
    p = _need_full(_load_presheaf(args.presheaf), "pullback")
    inv = pullback(psi, p)
    if args.out:
        ser.dump_json(args.out, ser.presheaf_to_payload(inv.sheaf))
    return {
        "sections": {
            open_key(u): len(inv.sheaf.sections[u])
            for u in inv.sheaf.space.sorted_opens()
        },
        "unit": ser.morphism_tables(inv.unit),
    }, True


def cmd_sheafify(args) -> tuple[dict, bool]:
    p = _need_full(_load_presheaf(args.presheaf), "sheafify")
    inv = sheafify(p)
    if args.out:
        ser.dump_json(args.out, ser.presheaf_to_payload(inv.sheaf))
    return {
        "sections": {
            open_key(u): len(inv.sheaf.sections[u])
            for u in inv.sheaf.space.sorted_opens()
        },
        "unit": ser.morphism_tables(inv.unit),
        "unit_is_isomorphism": inv.unit.is_isomorphism(),
    }, True


def cmd_adjunction_test(args) -> tuple[dict, bool]:
    psi = ser.map_from_payload(ser.load_json(args.map), os.path.dirname(args.map) or ".")
    g = _need_full(_load_presheaf(args.presheaf), "adjunction-test")
    f = _need_full(_load_presheaf(args.sheaf), "adjunction-test")
    from .functors import flat
    from .presheaf import enumerate_presheaf_morphisms

    witness = check_adjunction(psi, g, f, max_homs=args.max_homs)
    inv = pullback(psi, g)
    pairs = []
    for nu in enumerate_presheaf_morphisms(inv.sheaf, f, max_homs=args.max_homs):
        pairs.append({
            "nu": ser.morphism_tables(nu),
            "flat": ser.morphism_tables(flat(nu, inv).body),
        })
    payload = {
        "hom_upstairs": witness.hom_upstairs,
        "hom_downstairs": witness.hom_downstairs,
        "transpositions": pairs,
    }
    return payload, witness.verdict


def cmd_glue(args) -> tuple[dict, bool]:
    datum = ser.gluing_from_payload(ser.load_json(args.gluing),
                                    os.path.dirname(args.gluing) or ".")
    cocycle_report = check_cocycle(datum)
    if not cocycle_report.verdict:
        return {"cocycle_violations": cocycle_report.violations}, False
    result = glue(datum)
    if args.out:
        ser.dump_json(args.out, ser.presheaf_to_payload(result.sheaf))
    payload = {
        "sections": {
            open_key(u): len(result.sheaf.sections[u])
            for u in datum.space.sorted_opens()
        },
        "invariant": check_glued_invariant(datum, result),
    }
    return payload, True


def cmd_limit(args) -> tuple[dict, bool]:
    diagram = ser.diagram_from_payload(ser.load_json(args.diagram),
                                       os.path.dirname(args.diagram) or ".")
    result = limit_of_sheaves(diagram)
    if args.out:
        ser.dump_json(args.out, ser.presheaf_to_payload(result.presheaf))
    sheaf_ok = check_sheaf(result.presheaf).verdict
    payload = {
        "sections": {
            open_key(u): len(result.presheaf.sections[u])
            for u in result.presheaf.space.sorted_opens()
        },
        "is_sheaf": sheaf_ok,
    }
    return payload, sheaf_ok


def cmd_simple_check(args) -> tuple[dict, bool]:
    p = _need_full(_load_presheaf(args.presheaf), "simple-check")
    report = check_simple_equivalence(p)
    payload = {
        "is_constant": report.is_constant,
        "sheaf_when_constant": report.sheaf_when_constant,
        "unit_iso_when_constant": report.unit_iso_when_constant,
        "locally_simple": report.locally_simple,
        "constant_forced": report.constant_forced,
    }
    return payload, report.verdict


def _render_text(report: dict, elapsed: float) -> str:
    lines = [f"verb: {report['verb']}"]
    if "verdict" in report:
        lines.append(f"verdict: {'pass' if report['verdict'] else 'FAIL'}")
    for key, value in sorted(report.get("payload", {}).items()):
        lines.append(f"{key}: {value}")
    lines.append(f"elapsed: {elapsed:.3f}s")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "text"], default="json")
    common.add_argument("--out", help="write the constructed artifact here")
    common.add_argument(
        "--max-coverings", type=int,
        default=int(os.environ.get("FINSHEAF_MAX_COVERINGS", "0")) or None,
        help="hard cap on covering enumeration (error, never truncate)")
    common.add_argument(
        "--max-homs", type=int,
        default=int(os.environ.get("FINSHEAF_MAX_HOMS", str(10 ** 6))),
        help="hard cap on Hom-set enumeration (error, never truncate)")
    parser = argparse.ArgumentParser(
        prog="finsheaf",
        description="check and build sheaves on finite topological spaces",
        parents=[common])
    sub = parser.add_subparsers(dest="verb", required=True)

    def add(name, fn, *specs):
        sp = sub.add_parser(name, parents=[common])
        for flag, kwargs in specs:
            sp.add_argument(flag, **kwargs)
        sp.set_defaults(fn=fn)

    presheaf_arg = ("--presheaf", {"required": True, "help": "presheaf file"})
    map_arg = ("--map", {"required": True, "help": "continuous map file"})
    add("validate", cmd_validate, presheaf_arg)
    add("check-sheaf", cmd_check_sheaf, presheaf_arg)
    add("check-f0", cmd_check_f0, presheaf_arg)
    add("extend-basis", cmd_extend_basis, presheaf_arg)
    add("stalk", cmd_stalk, presheaf_arg,
        ("--point", {"required": True}))
    add("support", cmd_support, presheaf_arg)
    add("pushforward", cmd_pushforward, map_arg, presheaf_arg)
    add("pullback", cmd_pullback, map_arg, presheaf_arg)
    add("sheafify", cmd_sheafify, presheaf_arg)
    add("adjunction-test", cmd_adjunction_test, map_arg, presheaf_arg,
        ("--sheaf", {"required": True, "help": "sheaf file on the source space"}))
    add("glue", cmd_glue, ("--gluing", {"required": True, "help": "gluing data file"}))
    add("limit", cmd_limit, ("--diagram", {"required": True, "help": "sheaf diagram file"}))
    add("simple-check", cmd_simple_check, presheaf_arg)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.monotonic()
    try:
        payload, verdict = args.fn(args)
    except FinsheafError as exc:
        sys.stderr.write(canonical_json({
            "schema": ser.REPORT_SCHEMA,
            "error": type(exc).__name__,
            "message": str(exc),
        }))
        return EXIT_BAD_INPUT
    elapsed = time.monotonic() - started
    report = {
        "schema": ser.REPORT_SCHEMA,
        "verb": args.verb,
        "verdict": verdict,
        "payload": payload,
    }
    if args.format == "json":
        sys.stdout.write(canonical_json(report))
    else:
        sys.stdout.write(_render_text(report, elapsed))
    return EXIT_TRUE if verdict else EXIT_FALSE


if __name__ == "__main__":
    raise SystemExit(main())
