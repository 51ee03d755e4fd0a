"""Command line entry point ``oredim``.

Exit codes: 0 all checks pass, 1 a checked assertion failed, 2 input or usage error.
"""

from __future__ import annotations

import argparse
import sys

from . import harness, lattice
from .errors import CapExceededError, InvalidSpecError, LawViolationError
from .fixtures import Caps, bundled_paths, corpus_paths, load_instance
from .report import make_report, render_text, write_report

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_INPUT)


def _caps(args) -> Caps:
    if args.cap is None:
        return Caps()
    return Caps(truncation=args.cap, lattice=args.cap)


def _emit(args, command: str, body: dict) -> int:
    report = make_report(command, body)
    sys.stdout.write(render_text(report))
    if args.report:
        write_report(report, args.report)
    return EXIT_OK if body["status"] == "pass" else EXIT_FAIL


def cmd_verify(args) -> int:
    inst = load_instance(args.fixture, _caps(args))
    laws = {k: v.to_dict() for k, v in inst.laws.items()}
    comp = harness.compat_section(inst)
    props = comp["propositions"]
    ok = (all(v["ok"] for v in laws.values()) and comp["witnesses_revalidate"]
          and (not props["applicable"] or props["ok"]))
    body = {"id": inst.id, "fixture": inst.spec, "laws": laws, "compat": comp,
            "right_perfect": inst.perfect, "status": "pass" if ok else "fail"}
    return _emit(args, "verify", body)


def cmd_dim(args) -> int:
    inst = load_instance(args.fixture, _caps(args))
    if args.depth is None:
        lat, obj = inst.lattice, "M"
    else:
        lat, obj = inst.truncation_lattice(args.depth), f"M[x^-1]<={args.depth}"
    if args.kind == "rudim":
        res = lattice.uniform_dimension(lat)
    else:
        res = lattice.corank(lat)
    body = {"id": inst.id, "kind": args.kind, "object": obj, "result": res.to_dict(lat),
            "status": "pass"}
    return _emit(args, "dim", body)


def cmd_check(args) -> int:
    inst = load_instance(args.fixture, _caps(args))
    run = harness.run_theorem(inst, args.theorem, range(1, args.depth + 1))
    body = {"id": inst.id, "scope": harness.SCOPE_NOTE, "run": run.to_dict(),
            "status": "fail" if run.status == harness.FAIL else "pass"}
    return _emit(args, "check", body)


def cmd_suite(args) -> int:
    paths = corpus_paths(args.corpus) if args.corpus else bundled_paths()
    caps = _caps(args)
    instances = [load_instance(p, caps) for p in paths]
    body = harness.run_suite(instances, args.depth)
    return _emit(args, "suite", body)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--report", metavar="PATH", help="also write the JSON report to PATH")
    common.add_argument("--cap", type=int, metavar="N", help="override the truncation and lattice size caps")

    p = _Parser(prog="oredim", description="Skew Ore polynomial rings, inverse-polynomial modules and their dimensions.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", parents=[common], help="verify ring, map and module laws and compatibility")
    v.add_argument("fixture")
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("dim", parents=[common], help="uniform (rudim) or couniform (corank) dimension")
    d.add_argument("--kind", choices=["rudim", "corank"], required=True)
    d.add_argument("--depth", type=int, default=None, help="use the depth-d truncation instead of M")
    d.add_argument("fixture")
    d.set_defaults(func=cmd_dim)

    c = sub.add_parser("check", parents=[common], help="one truncated lemma or theorem check")
    c.add_argument("--theorem", choices=sorted(harness.THEOREMS), required=True)
    c.add_argument("--depth", type=int, default=2)
    c.add_argument("fixture")
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("suite", parents=[common], help="all checks over a fixture corpus")
    s.add_argument("--depth", type=int, default=2)
    s.add_argument("--corpus", metavar="DIR", help="directory of fixture JSON files (default: bundled corpus)")
    s.set_defaults(func=cmd_suite)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "depth", None) is not None and args.depth < 0:
        print("oredim: error: --depth must be non-negative", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except LawViolationError as exc:
        print(f"oredim: rejected: {exc}", file=sys.stderr)
        if exc.report is not None:
            for v in exc.report.violations:
                print(f"  {v.law}: {v.count} violations, first witness {v.witness}", file=sys.stderr)
        return EXIT_INPUT
    except (InvalidSpecError, CapExceededError) as exc:
        print(f"oredim: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
