"""Command-line interface: ``hyperminor <command> --in FILE ...``.

Exit status 0 on success, 1 on a domain rejection (bad document, failed
guard, invalid certificate) and 2 on a usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import List, Optional, Union

from .classification import NAMES, Certificate, classify, forbidden_catalog, verify_certificate
from .core import Hypergraph, HypergraphError, check_valid, parse, serialize, validate
from .minor_ops import Trace, apply, parse_trace
from .normalization import normalize
from .oracle import SearchBudget, enumerate_hypergraphs, minor_search
from .reduction import reduce


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _dot_body(H: Hypergraph, prefix: str, indent: str) -> List[str]:
    out = []
    for v in H.vertices:
        out.append(f"{indent}{_quote(prefix + 'v:' + v)} [label={_quote(v)}, shape=point, xlabel={_quote(v)}];")
    for e in H.edges:
        node = _quote(prefix + "e:" + e.id)
        out.append(f"{indent}{node} [label={_quote(e.id)}, shape=box, style=rounded];")
        for v in sorted(e.source):
            out.append(f"{indent}{_quote(prefix + 'v:' + v)} -> {node} [dir=none];")
        for v in sorted(e.range):
            out.append(f"{indent}{node} -> {_quote(prefix + 'v:' + v)};")
    return out


def export_dot(obj: Union[Hypergraph, Trace]) -> str:
    """Dot text; hyperedges are box nodes joined to their sources by plain
    lines and to their ranges by arrows. A trace gives one cluster per step."""
    lines = ["digraph hypergraph {"]
    if isinstance(obj, Trace):
        H = obj.start
        for i, op in enumerate(obj.steps, 1):
            H = apply(H, op)
            lines.append(f"  subgraph cluster_{i} {{")
            lines.append(f"    label={_quote(f'{i}: {op.to_line()}')};")
            lines += _dot_body(H, f"{i}/", "    ")
            lines.append("  }")
    else:
        lines += _dot_body(obj, "", "  ")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- plumbing ------------------------------------------------------------------

class _Fail(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _Fail(json.dumps({"error": "io", "message": str(exc)})) from None


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="\n")


def _load(path: str) -> Hypergraph:
    H = parse(_read(path))
    check_valid(H)
    return H


def _target(spec: str) -> Hypergraph:
    if spec in NAMES:
        return forbidden_catalog()[NAMES.index(spec)]
    return _load(spec)


def _emit(obj: dict) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def _error(payload: dict) -> None:
    tag = "error:"
    if sys.stderr.isatty() and "NO_COLOR" not in os.environ:
        tag = "\033[31merror:\033[0m"
    sys.stderr.write(f"{tag} {json.dumps(payload, sort_keys=True)}\n")


# -- commands -----------------------------------------------------------------

def cmd_validate(a) -> int:
    H = parse(_read(a.inp))
    rep = validate(H)
    _emit(rep.to_dict())
    return 0 if rep.ok else 1


def cmd_normalize(a) -> int:
    R, tr = normalize(_load(a.inp))
    _write(a.out, serialize(R))
    if a.trace:
        _write(a.trace, tr.to_text())
    return 0


def cmd_reduce(a) -> int:
    R, tr = reduce(_load(a.inp))
    _write(a.out, serialize(R))
    if a.trace:
        _write(a.trace, tr.to_text())
    return 0


def cmd_classify(a) -> int:
    v = classify(_load(a.inp))
    out = v.to_dict()
    if a.emit_reduced:
        _write(a.emit_reduced, serialize(v.reduced))
        out["reduced_file"] = a.emit_reduced
    cert = v.full_certificate()
    if a.emit_certificate and cert is not None:
        _write(a.emit_certificate, cert.to_text())
        out["certificate_file"] = a.emit_certificate
    _emit(out)
    return 0


def cmd_minor_check(a) -> int:
    H = _load(a.inp)
    budget = SearchBudget.parse(a.budget) if a.budget else SearchBudget()
    cert = minor_search(H, _target(a.target), budget)
    out = {"found": cert is not None, "target": a.target}
    if cert is not None:
        out["steps"] = len(cert.steps)
        if a.emit_certificate:
            _write(a.emit_certificate, cert.to_text())
            out["certificate_file"] = a.emit_certificate
    _emit(out)
    return 0


def cmd_enumerate(a) -> int:
    out = Path(a.out)
    out.mkdir(parents=True, exist_ok=True)
    n = 0
    for n, H in enumerate(enumerate_hypergraphs(a.max_v, a.max_e, not a.no_empty_range, a.exact), 1):
        (out / f"h{n:05d}.hg").write_text(serialize(H), encoding="utf-8", newline="\n")
    _emit({"count": n, "out": str(out)})
    return 0


def cmd_replay(a) -> int:
    H = _load(a.inp)
    text = _read(a.trace)
    steps, meta = parse_trace(text)
    if meta.get("target") in NAMES:
        cert = Certificate.from_text(H, text)
        if not verify_certificate(H, cert):
            _error({"error": "bad-certificate", "message": "certificate does not verify"})
            return 1
        end = cert.endpoint()
    else:
        end = Trace(H, steps).replay()
    _write(a.out, serialize(end))
    return 0


def cmd_export_dot(a) -> int:
    H = _load(a.inp)
    if a.trace:
        steps, _ = parse_trace(_read(a.trace))
        _write(a.out, export_dot(Trace(H, steps)))
    else:
        _write(a.out, export_dot(H))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hyperminor", description="Hypergraph minors and reduction.")
    sub = p.add_subparsers(dest="command", required=True)

    def cmd(name, fn, help_):
        s = sub.add_parser(name, help=help_)
        s.add_argument("--in", dest="inp", required=True, metavar="PATH", help="input document or - for stdin")
        s.set_defaults(fn=fn)
        return s

    cmd("validate", cmd_validate, "check a hypergraph document")
    for name, fn in (("normalize", cmd_normalize), ("reduce", cmd_reduce)):
        s = cmd(name, fn, f"{name} a hypergraph")
        s.add_argument("--out", metavar="PATH")
        s.add_argument("--trace", metavar="PATH")
    s = cmd("classify", cmd_classify, "reduce and classify")
    s.add_argument("--emit-certificate", metavar="PATH")
    s.add_argument("--emit-reduced", metavar="PATH")
    s = cmd("minor-check", cmd_minor_check, "bounded search for a minor")
    s.add_argument("--target", required=True, help="g1..g4 or a document path")
    s.add_argument("--budget", help="k=v list over steps, sep, dec, frontier")
    s.add_argument("--emit-certificate", metavar="PATH")
    s = cmd("replay", cmd_replay, "replay a trace or certificate")
    s.add_argument("--trace", required=True, metavar="PATH")
    s.add_argument("--out", metavar="PATH")
    s = cmd("export-dot", cmd_export_dot, "render as dot")
    s.add_argument("--trace", metavar="PATH")
    s.add_argument("--out", metavar="PATH")

    s = sub.add_parser("enumerate", help="write one document per isomorphism class")
    s.add_argument("--max-v", type=int, required=True)
    s.add_argument("--max-e", type=int, required=True)
    s.add_argument("--out", required=True, metavar="DIR")
    s.add_argument("--exact", action="store_true", help="exactly max-v vertices and max-e edges")
    s.add_argument("--no-empty-range", action="store_true")
    s.set_defaults(fn=cmd_enumerate)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(a, "max_v", 0) < 0 or getattr(a, "max_e", 0) < 0:
        parser.print_usage(sys.stderr)
        return 2
    try:
        return a.fn(a)
    except HypergraphError as exc:
        payload = {"error": exc.code, "message": str(exc), "ids": list(exc.ids)}
        for k in ("line", "column"):
            if getattr(exc, k, 0):
                payload[k] = getattr(exc, k)
        _error(payload)
        return 1
    except ValueError as exc:
        _error({"error": "usage", "message": str(exc)})
        return 2
    except _Fail as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
