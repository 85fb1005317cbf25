"""Command-line interface. JSON on stdout, logs on stderr.

Exit status: 0 success, 1 a verification failed, 2 usage or precondition error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings
from typing import Optional, Sequence

from .expr import ParseError, ZeroMonomialWarning, parse_element
from .fields import field_from_name
from .graph import Graph, GraphError, build_ef, find_cycle, is_acyclic
from .matreg import (CertificateError, PreconditionError, RegularityCertificate, decompose,
                     dimension, drazin_witness, pi_witness_from_drazin, special_clean,
                     unit_regular_inverse, verify_certificate, vn_inverse)
from .obstruction import ObstructionError, refutation_report
from .subalg import SubalgebraError, build_bs, verify_direct_sum, verify_membership
from .theta import build_theta, check_keylemma_properties, check_relations

log = logging.getLogger("leavitt")

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2

KINDS = {"vn": "vonNeumann", "drazin": "drazin", "pi": "piRegular",
         "unit": "unitRegular", "clean": "specialClean"}
_ELEMENT_FIELDS = {"vonNeumann": ["y"], "drazin": ["x"], "piRegular": ["y"],
                   "unitRegular": ["u", "u_inv"], "specialClean": ["e", "u", "u_inv", "q"]}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _split(values: Sequence[str]) -> list[str]:
    out = []
    for v in values:
        out.extend(x.strip() for x in v.split(",") if x.strip())
    return out


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="leavitt", description="Leavitt path algebra toolkit")
    p.add_argument("--field", default="q", help="q or gf:<p> (default q)")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="acyclicity, sinks, regular vertices")
    a.add_argument("graph")

    e = sub.add_parser("ef", help="build E_F")
    e.add_argument("graph")
    e.add_argument("--edges", nargs="+", required=True)

    t = sub.add_parser("theta-check", help="check the relations of E_F under theta")
    t.add_argument("graph")
    t.add_argument("--edges", nargs="+", required=True)
    t.add_argument("--bound", type=int, default=4)

    b = sub.add_parser("bs", help="the subalgebra B(a_1, ..., a_l)")
    b.add_argument("graph")
    b.add_argument("--exprs", nargs="+", required=True)
    b.add_argument("--bound", type=int, default=3)

    d = sub.add_parser("decompose", help="matrix block sizes")
    d.add_argument("graph")

    i = sub.add_parser("inverse", help="regularity certificate for an element")
    i.add_argument("graph")
    i.add_argument("--expr")
    i.add_argument("--kind", choices=sorted(KINDS))
    i.add_argument("--verify", metavar="CERT", help="re-check a certificate JSON file")

    r = sub.add_parser("refute", help="cycle obstruction report for v + c")
    r.add_argument("graph")
    r.add_argument("--cycle", nargs="+", required=True)
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--tmax", type=int, required=True)
    r.add_argument("--basis-length", type=int, default=None)
    return p


def _load(path: str) -> Graph:
    try:
        return Graph.load(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _parse(text: str, g: Graph, field):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ZeroMonomialWarning)
        x = parse_element(text, g, field)
    for w in caught:
        log.warning("%s: %s", text, w.message)
    return x


def cmd_analyze(args, field):
    g = _load(args.graph)
    cyc = find_cycle(g)
    return EXIT_OK, {
        "acyclic": is_acyclic(g),
        "sinks": g.sinks(),
        "regular_vertices": g.regular_vertices(),
        "infinite_emitters": sorted(g.infinite_emitters),
        "cycle": None if cyc is None else list(cyc.edges),
        "vertices": len(g.vertices),
        "edges": len(g.edges),
    }


def cmd_ef(args, field):
    g = _load(args.graph)
    return EXIT_OK, build_ef(g, _split(args.edges)).to_json()


def cmd_theta_check(args, field):
    g = _load(args.graph)
    t = build_theta(g, _split(args.edges), field)
    report = check_relations(t)
    props = check_keylemma_properties(t, args.bound)
    out = report.to_json()
    out["keylemma"] = props
    ok = report.all_pass and all(props.values())
    return (EXIT_OK if ok else EXIT_FAILED), out


def cmd_bs(args, field):
    g = _load(args.graph)
    inputs = [_parse(x, g, field) for x in args.exprs]
    data = build_bs(inputs)
    out = data.to_json()
    checks = {"direct_sum": verify_direct_sum(data),
              "membership": verify_membership(data, args.bound)}
    out["checks"] = checks
    return (EXIT_OK if all(checks.values()) else EXIT_FAILED), out


def cmd_decompose(args, field):
    g = _load(args.graph)
    d = decompose(g, field)
    return EXIT_OK, {"blocks": d.sizes, "sinks": d.sinks, "dimension": dimension(g),
                     "paths": {b.sink: [list(p) for p in b.paths] for b in d.blocks}}


def make_certificate(g: Graph, field, kind: str, a) -> RegularityCertificate:
    d = decompose(g, field)
    if kind == "vn":
        return vn_inverse(d, a)
    if kind == "drazin":
        return drazin_witness(d, a)
    if kind == "pi":
        return pi_witness_from_drazin(drazin_witness(d, a))
    if kind == "unit":
        return unit_regular_inverse(d, a)
    return special_clean(d, a)


def certificate_from_json(data: dict, g: Graph, field) -> RegularityCertificate:
    kind = data.get("kind")
    if kind not in _ELEMENT_FIELDS:
        raise UsageError(f"unknown certificate kind {kind!r}")
    if "subject" not in data:
        raise UsageError("certificate lacks a subject")
    witness = {}
    for key in _ELEMENT_FIELDS[kind]:
        if key not in data:
            raise UsageError(f"certificate lacks {key!r}")
        witness[key] = _parse(data[key], g, field)
    if kind in ("drazin", "piRegular"):
        if not isinstance(data.get("n"), int):
            raise UsageError("certificate lacks an integer 'n'")
        witness["n"] = data["n"]
    return RegularityCertificate(kind, _parse(data["subject"], g, field), witness)


def cmd_inverse(args, field):
    g = _load(args.graph)
    if args.verify:
        try:
            with open(args.verify) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read certificate {args.verify}: {exc}") from exc
        cert = certificate_from_json(data, g, field)
        ok = verify_certificate(cert)
        return (EXIT_OK if ok else EXIT_FAILED), {"kind": cert.kind, "verified": ok}
    if not args.expr or not args.kind:
        raise UsageError("inverse needs --expr and --kind (or --verify)")
    a = _parse(args.expr, g, field)
    out = make_certificate(g, field, args.kind, a).to_json()
    return (EXIT_OK if out["verified"] else EXIT_FAILED), out


def cmd_refute(args, field):
    g = _load(args.graph)
    edges = _split(args.cycle)
    if not g.path_ok(edges):
        raise UsageError(f"{edges} is not a path in the graph")
    c = g.path(edges)
    rep = refutation_report(g, c, args.n, args.tmax, field, args.basis_length)
    return (EXIT_OK if rep.contradiction else EXIT_FAILED), rep.to_json()


COMMANDS = {"analyze": cmd_analyze, "ef": cmd_ef, "theta-check": cmd_theta_check,
            "bs": cmd_bs, "decompose": cmd_decompose, "inverse": cmd_inverse,
            "refute": cmd_refute}


def run_command(argv: Optional[Sequence[str]] = None) -> tuple[int, dict]:
    """Parse ``argv`` and run it; returns (exit code, JSON payload)."""
    try:
        args = build_parser().parse_args(argv)
        try:
            field = field_from_name(args.field)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                            stream=sys.stderr, format="%(levelname)s %(message)s")
        return COMMANDS[args.command](args, field)
    except UsageError as exc:
        return EXIT_USAGE, {"error": "usage", "message": str(exc)}
    except ParseError as exc:
        return EXIT_USAGE, {"error": "parse", "message": str(exc), "position": exc.position}
    except (GraphError, PreconditionError, SubalgebraError, ObstructionError,
            CertificateError) as exc:
        return EXIT_USAGE, {"error": type(exc).__name__, "message": str(exc)}


def main(argv: Optional[Sequence[str]] = None) -> int:
    code, payload = run_command(argv)
    json.dump(payload, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
