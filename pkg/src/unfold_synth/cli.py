"""Batch driver: validate, encode, unfold, synth, simulate, verify, phi,
and an end-to-end pipeline command.

Exit codes: 0 success, 1 validation/verification failure, 2 usage error.
All output is deterministic given the flags; randomness enters only
through an explicit ``--seed``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import automaton as am
from . import circuit as cc
from . import encoding as en
from . import partitions as pt
from . import synthesis as sy
from . import iit
from .errors import UnfoldSynthError


def _load_json(path: str):
    return json.loads(Path(path).read_text())


def _dump(doc, path: str | None = None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _read_fsa(path: str) -> am.Automaton:
    a = am.automaton_from_json(_load_json(path))
    report = am.validate(a)
    if not report.ok:
        for line in report:
            print(f"invalid FSA: {line}", file=sys.stderr)
        raise SystemExit(1)
    return a


def _read_encoding(a: am.Automaton, path: str) -> en.Encoding:
    e = en.encoding_from_json(_load_json(path))
    return en.encode(a, e.labels)


def _parse_fix(pairs: list[str]) -> dict[str, str]:
    fixed = {}
    for pair in pairs:
        state, _, code = pair.partition("=")
        if not state or not code:
            raise SystemExit(2)
        fixed[state] = code
    return fixed


def cmd_validate(args) -> int:
    a = am.automaton_from_json(_load_json(args.fsa))
    report = am.validate(a)
    _dump({"violations": list(report.violations)})
    return 0 if report.ok else 1


def cmd_encode(args) -> int:
    a = _read_fsa(args.fsa)
    if args.labels:
        e = _read_encoding(a, args.labels)
    elif args.random:
        width = args.width or max(1, (len(a.states) - 1).bit_length())
        e = en.random_encoding(a, width, args.seed, _parse_fix(args.fix))
    else:
        print("encode needs --labels FILE or --random", file=sys.stderr)
        return 2
    _dump(en.encoding_to_json(e), args.out)
    return 0


def cmd_unfold(args) -> int:
    a = _read_fsa(args.fsa)
    ns = pt.find_nested_sequence(a)
    e = pt.encoding_from_sequence(ns)
    if args.sequence:
        _dump(pt.sequence_to_json(ns), args.sequence)
    _dump(en.encoding_to_json(e), args.out)
    return 0


def _synthesize(a: am.Automaton, e: en.Encoding, basis: sy.Basis):
    csa = en.derive_csa(a, e)
    excitation = sy.excitation_from_csa(csa, e, a)
    netlist = sy.build_netlist(excitation, basis)
    return csa, netlist


def cmd_synth(args) -> int:
    a = _read_fsa(args.fsa)
    e = _read_encoding(a, args.labels)
    basis = sy.Basis.NAND_ONLY if args.basis == "nand" else sy.Basis.AND_OR_NOT_XOR
    _, netlist = _synthesize(a, e, basis)
    if args.dot:
        Path(args.dot).write_text(sy.netlist_to_dot(netlist))
    _dump(sy.netlist_to_json(netlist), args.out)
    return 0


def cmd_simulate(args) -> int:
    netlist = sy.netlist_from_json(_load_json(args.netlist))
    start = cc.state_from_code(netlist, args.start)
    trace = cc.run(netlist, start, args.steps)
    names = "".join(netlist.flipflops)
    for t, state in enumerate(trace):
        print(f"t={t} {names}={cc.code_from_state(netlist, state)}")
    return 0


def cmd_verify(args) -> int:
    a = _read_fsa(args.fsa)
    e = _read_encoding(a, args.labels)
    netlist = sy.netlist_from_json(_load_json(args.netlist))
    report = cc.verify_against_fsa(netlist, a, e)
    _dump({"mismatches": list(report.violations)})
    return 0 if report.ok else 1


def cmd_phi(args) -> int:
    if args.tpm:
        tpm = iit.tpm_from_json(_load_json(args.tpm))
    else:
        if not (args.fsa and args.labels):
            print("phi needs --tpm FILE, or --fsa and --labels", file=sys.stderr)
            return 2
        a = _read_fsa(args.fsa)
        e = _read_encoding(a, args.labels)
        tpm = iit.tpm_from_csa(en.derive_csa(a, e))
    if args.tpm_out:
        _dump(iit.tpm_to_json(tpm), args.tpm_out)
    results = iit.phi_all_states(tpm)
    _dump(iit.phi_report_json(results), args.out)
    return 0


def cmd_pipeline(args) -> int:
    a = _read_fsa(args.fsa)
    artifacts: dict[str, str] = {}
    outdir = Path(args.artifacts) if args.artifacts else None
    if outdir:
        outdir.mkdir(parents=True, exist_ok=True)

    def save(name: str, doc) -> None:
        if outdir:
            path = outdir / name
            _dump(doc, str(path))
            artifacts[name] = str(path)

    if args.unfold:
        ns = pt.find_nested_sequence(a)
        e = pt.encoding_from_sequence(ns)
        save("sequence.json", pt.sequence_to_json(ns))
    elif args.labels:
        e = _read_encoding(a, args.labels)
    else:
        print("pipeline needs --labels FILE or --unfold", file=sys.stderr)
        return 2
    save("encoding.json", en.encoding_to_json(e))

    basis = sy.Basis.NAND_ONLY if args.basis == "nand" else sy.Basis.AND_OR_NOT_XOR
    csa, netlist = _synthesize(a, e, basis)
    save("netlist.json", sy.netlist_to_json(netlist))
    if args.dot:
        Path(args.dot).write_text(sy.netlist_to_dot(netlist))

    graph = en.dependency_graph(csa)
    feed_forward = en.is_feed_forward(graph)
    if outdir:
        (outdir / "dependencies.dot").write_text(en.dependency_graph_to_dot(graph))
        artifacts["dependencies.dot"] = str(outdir / "dependencies.dot")
    verification = cc.verify_against_fsa(netlist, a, e)

    report = {
        "fsa_digest": am.digest(a),
        "encoding": en.encoding_to_json(e),
        "basis": basis.value,
        "dependency_edges": sorted(
            [f"Q{j}", f"Q{i}"] for j, i in graph.edges
        ),
        "feed_forward": feed_forward,
        "verified": verification.ok,
        "verification_mismatches": list(verification.violations),
        "artifacts": artifacts,
    }
    if args.phi:
        tpm = iit.tpm_from_csa(csa)
        save("tpm.json", iit.tpm_to_json(tpm))
        results = iit.phi_all_states(tpm)
        report["phi"] = iit.phi_report_json(results)
        save("phi.json", report["phi"])
        if feed_forward and any(r.big_phi > 1e-9 for r in results):
            print(
                "invariant violation: feed-forward dependency graph with "
                "nonzero integrated information",
                file=sys.stderr,
            )
            _dump(report, args.out)
            return 1
    _dump(report, args.out)
    return 0 if verification.ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unfold-synth",
        description="FSA -> encoding -> JK netlist synthesis, isomorphic "
        "unfolding, and integrated-information analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check an FSA file's invariants")
    p.add_argument("--fsa", required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("encode", help="attach binary labels to an FSA")
    p.add_argument("--fsa", required=True)
    p.add_argument("--labels")
    p.add_argument("--random", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--width", type=int)
    p.add_argument("--fix", action="append", default=[], metavar="STATE=CODE")
    p.add_argument("--out")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("unfold", help="derive a hierarchical (feed-forward) encoding")
    p.add_argument("--fsa", required=True)
    p.add_argument("--sequence", help="also write the partition chain JSON here")
    p.add_argument("--out")
    p.set_defaults(func=cmd_unfold)

    p = sub.add_parser("synth", help="synthesize a JK flip-flop netlist")
    p.add_argument("--fsa", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--basis", choices=["and", "nand"], default="and")
    p.add_argument("--dot")
    p.add_argument("--out")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("simulate", help="clock a netlist and print the trace")
    p.add_argument("--netlist", required=True)
    p.add_argument("--start", required=True)
    p.add_argument("--steps", type=int, required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="check a netlist against its source FSA")
    p.add_argument("--fsa", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--netlist", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("phi", help="per-state integrated information")
    p.add_argument("--fsa")
    p.add_argument("--labels")
    p.add_argument("--tpm", help="analyze a TPM file directly")
    p.add_argument("--tpm-out", help="export the node-level TPM JSON")
    p.add_argument("--out")
    p.set_defaults(func=cmd_phi)

    p = sub.add_parser("pipeline", help="run every stage end to end")
    p.add_argument("--fsa", required=True)
    p.add_argument("--labels")
    p.add_argument("--unfold", action="store_true")
    p.add_argument("--basis", choices=["and", "nand"], default="and")
    p.add_argument("--phi", action="store_true")
    p.add_argument("--dot")
    p.add_argument("--artifacts", help="directory for stage output files")
    p.add_argument("--out")
    p.set_defaults(func=cmd_pipeline)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UnfoldSynthError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
