"""Command-line entry point.

Exit codes: 0 success or a positive answer, 1 a certified negative answer,
2 usage, parse, or cap errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .census import census_csv, census_summary, run_census
from .flows import Z2xZ3, Zk, default_orientation
from .graph import GraphError, parse_signed_graph
from .oracle import DEFAULT_CAPS, Caps, CapError, FlowQuery, flow_number, nz_z_flow_obstruction, search_flow
from .pipeline import CertificateError, NoZFlow, ReductionTrace, twelve_flow, verify_certificate


class UsageError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="signedflow", description="Nowhere-zero flows on signed graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="decide whether a nowhere-zero Z-flow exists")
    c.add_argument("file")

    s = sub.add_parser("solve", help="search for a group-valued flow")
    s.add_argument("file")
    s.add_argument("--group", default="z2xz3", help="z2xz3 or z<k> with k <= 16")
    s.add_argument("--balanced", action="store_true", help="require a positive-sign Z2 support")
    s.add_argument("--allow-zero", action="store_true", help="drop the nowhere-zero requirement")
    s.add_argument("--fix", action="append", default=[], metavar="E=VAL", help="prescribe a value (repeatable)")
    s.add_argument("--max-edges", type=int, default=DEFAULT_CAPS.search_edges)

    t = sub.add_parser("twelve-flow", help="run the constructive pipeline")
    t.add_argument("file")
    t.add_argument("--trace", action="store_true", help="print the reduction steps to stderr")
    t.add_argument("--out", help="certificate path (default stdout)")

    f = sub.add_parser("flow-number", help="least k with a nowhere-zero k-flow, by exhaustive search")
    f.add_argument("file")
    f.add_argument("--max-edges", type=int, default=DEFAULT_CAPS.search_edges)

    n = sub.add_parser("census", help="flow numbers of all small signed graphs up to switching")
    n.add_argument("--max-vertices", type=int, required=True)
    n.add_argument("--cubic", action="store_true", help="connected cubic multigraphs instead of simple graphs")
    n.add_argument("--max-edges", type=int, default=None)
    n.add_argument("--jobs", type=int, default=1)
    n.add_argument("--out", required=True)

    v = sub.add_parser("verify", help="check a 12-flow certificate")
    v.add_argument("file")
    v.add_argument("cert")
    return p


def _load(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_signed_graph(text)
    except GraphError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _group(name: str):
    name = name.lower()
    if name == "z2xz3":
        return Z2xZ3
    if name.startswith("z") and name[1:].isdigit():
        k = int(name[1:])
        if not 2 <= k <= 16:
            raise UsageError("Z_k needs 2 <= k <= 16")
        return Zk(k)
    raise UsageError(f"unknown group {name!r}")


def _fixes(specs, group, g) -> dict:
    out = {}
    for spec in specs:
        if "=" not in spec:
            raise UsageError(f"--fix expects E=VAL, got {spec!r}")
        e, val = spec.split("=", 1)
        try:
            e = int(e)
            if group.kind == "Z2xZ3":
                a, b = (int(x) for x in val.strip("()").split(","))
                out[e] = (a % 2, b % 3)
            else:
                out[e] = int(val) % group.k
        except ValueError:
            raise UsageError(f"bad --fix value {spec!r}") from None
        if e not in g.edges:
            raise UsageError(f"--fix names unknown edge {e}")
    return out


def _cmd_check(a) -> int:
    g = _load(a.file)
    obs = nz_z_flow_obstruction(g)
    if obs is None:
        print("NZ Z-flow: yes")
        return 0
    print(f"NZ Z-flow: no ({obs.describe()})")
    return 1


def _cmd_solve(a) -> int:
    g = _load(a.file)
    group = _group(a.group)
    try:
        q = FlowQuery(group, _fixes(a.fix, group, g), a.balanced, not a.allow_zero)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    tau = default_orientation(g)
    phi = search_flow(g, tau, q, caps=Caps(search_edges=a.max_edges))
    if phi is None:
        print("no flow")
        return 1
    vals = {str(e): (list(x) if isinstance(x, tuple) else x) for e, x in sorted(phi.items())}
    print(json.dumps({"group": str(group), "orientation": {str(h): t for h, t in sorted(tau.items())},
                      "values": vals}, sort_keys=True))
    return 0


def _cmd_twelve(a) -> int:
    g = _load(a.file)
    trace = ReductionTrace()
    res = twelve_flow(g, trace)
    if a.trace:
        for line in trace.lines():
            print(line, file=sys.stderr)
    if isinstance(res, NoZFlow):
        print(res.describe())
        return 1
    text = res.to_json()
    if a.out:
        Path(a.out).write_text(text + "\n")
        print(f"certificate written to {a.out}")
    else:
        print(text)
    return 0


def _cmd_flow_number(a) -> int:
    g = _load(a.file)
    k = flow_number(g, Caps(search_edges=a.max_edges))
    if k is None:
        print("flow number: none (no nowhere-zero Z-flow)")
        return 1
    print(f"flow number: {k}")
    return 0


def _cmd_census(a) -> int:
    if a.max_vertices < 1 or a.jobs < 1:
        raise UsageError("--max-vertices and --jobs must be positive")
    rows = run_census(a.max_vertices, a.cubic, a.jobs, a.max_edges)
    Path(a.out).write_text(census_csv(rows))
    s = census_summary(rows)
    print(f"instances: {s['instances']}, with NZ Z-flow: {s['with_nz_z_flow']}, "
          f"max flow number: {s['max_flow_number']}, histogram: {s['histogram']}")
    bad = s["falsification_candidates"]
    for r in bad:
        print(f"FALSIFICATION CANDIDATE: {r.graph} negative={r.negative_edges} flow number {r.flow_number}")
    return 1 if bad else 0


def _cmd_verify(a) -> int:
    g = _load(a.file)
    try:
        text = Path(a.cert).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {a.cert}: {exc.strerror}") from None
    try:
        ok = verify_certificate(g, text)
    except CertificateError as exc:
        raise UsageError(str(exc)) from None
    print("certificate: valid" if ok else "certificate: INVALID")
    return 0 if ok else 1


COMMANDS = {
    "check": _cmd_check,
    "solve": _cmd_solve,
    "twelve-flow": _cmd_twelve,
    "flow-number": _cmd_flow_number,
    "census": _cmd_census,
    "verify": _cmd_verify,
}


def run(argv: list[str] | None = None) -> int:
    try:
        a = _parser().parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return COMMANDS[a.command](a)
    except (UsageError, CapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
