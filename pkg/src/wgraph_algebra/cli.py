"""Command-line front end: build-omega, verify-wgraph, verify-conjecture, export-graph.

Exit codes: 0 pass, 1 verification failure, 2 usage error, 3 stabilization
failure or a type outside the certified scope (graphs are still exported).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from dataclasses import dataclass

from .coxeter import CoxeterError, CoxeterSystem, build_system, parse_type
from .decomp import SUPPORTED, UnsupportedType, refined_graph, refined_graph_dot, verify_conjecture, build_family
from .omega import QuotientConfig, StabilizationError, compute_quotient
from .pathalg import build_compatibility_graph, quiver_json
from .report import Report
from .wgraph import WGraphError, load_wgraph, validate_wgraph, wgraph_to_module

log = logging.getLogger("wgraph_algebra")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_SCOPE = 0, 1, 2, 3

# types whose quotient is certified and whose family construction exists
CERTIFIED = ("A1xN", "I2", "A3", "B3", "A4")


@dataclass
class Config:
    type: str
    m: int | None = None
    n: int | None = None
    L_start: int = 4
    max_length: int = 12
    report: str | None = None
    format: str = "text"
    out_dir: str | None = None
    threads: int = 1
    verbose: int = 0

    def system(self) -> CoxeterSystem:
        t = self.type
        if t.startswith("I2(") or t.startswith("A1^"):
            return parse_type(t)
        if t == "I2":
            return build_system("I2", m=self.m)
        if t in ("A1xN", "A1") and self.n is not None:
            return build_system("A1xN", n=self.n)
        return build_system(t)

    def validate(self):
        if self.max_length < self.L_start or self.L_start < 1:
            raise ValueError("need 1 <= start length <= --max-length")
        if self.format not in ("json", "text"):
            raise ValueError("--format must be json or text")


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False, default=str) + "\n"


def _write(path: str, text: str):
    d = os.path.dirname(path)
    if d:
        os.makedirs(d, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _emit(cfg: Config, rep: Report, extra: dict | None = None):
    payload = {"schema": 1, **rep.to_json(), **(extra or {})}
    if cfg.report:
        _write(cfg.report, dumps(payload))
    if cfg.format == "json":
        sys.stdout.write(dumps(payload))
    else:
        print(rep.text())
        for k, v in sorted((extra or {}).items()):
            print(f"{k}: {json.dumps(v, sort_keys=True, ensure_ascii=False, default=str)}")


def _fname(system: CoxeterSystem) -> str:
    return system.name.replace("(", "").replace(")", "").replace("^", "x")


def export_graphs(cfg: Config, system: CoxeterSystem, alg=None, fam=None) -> list[str]:
    out_dir = cfg.out_dir or "."
    os.makedirs(out_dir, exist_ok=True)
    q = build_compatibility_graph(system)
    base = os.path.join(out_dir, f"compat_{_fname(system)}")
    _write(base + ".dot", q.to_dot())
    _write(base + ".json", dumps(quiver_json(q)))
    written = [base + ".dot", base + ".json"]
    if fam is not None:
        g = refined_graph(alg, fam)
        rb = os.path.join(out_dir, f"refined_{_fname(system)}")
        _write(rb + ".dot", refined_graph_dot(g))
        _write(rb + ".json", dumps(g))
        written += [rb + ".dot", rb + ".json"]
    return written


def _quotient(cfg: Config, system: CoxeterSystem):
    return compute_quotient(system, config=QuotientConfig(cfg.L_start, cfg.max_length))


def cmd_build_omega(cfg: Config) -> int:
    system = cfg.system()
    if system.type_tag not in CERTIFIED:
        files = export_graphs(cfg, system)
        print(f"unsupported-for-certification: {system.name}; exported {', '.join(files)}", file=sys.stderr)
        return EXIT_SCOPE
    t0 = time.monotonic()
    alg = _quotient(cfg, system)
    rad = alg.radical()
    rep = Report(f"kOmega for {system.name}")
    rep.add("closure certificate", True)
    info = {"dim": alg.dim, "dim_radical": rad.dim, "dim_semisimple": rad.quotient_dim,
            "certified_length": alg.length_bound}
    if cfg.out_dir:
        path = os.path.join(cfg.out_dir, f"omega_{_fname(system)}.json")
        _write(path, alg.dumps() + "\n")
    log.info("built %s in %.2fs", system.name, time.monotonic() - t0)
    _emit(cfg, rep, info)
    return EXIT_OK


def cmd_verify_wgraph(cfg: Config, path: str) -> int:
    system = cfg.system() if cfg.type else None
    system, g = load_wgraph(path, system)
    rep = validate_wgraph(system, g)
    extra = {}
    if rep.ok:
        mod = wgraph_to_module(system, g, check=False)
        rep.extend(mod.check_relations(), "relators: ")
        extra["dim"] = g.size
    _emit(cfg, rep, extra)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_verify_conjecture(cfg: Config) -> int:
    system = cfg.system()
    if system.type_tag not in SUPPORTED:
        print(f"unsupported: no idempotent construction for {system.name}", file=sys.stderr)
        return EXIT_SCOPE
    alg = _quotient(cfg, system)
    rep, fam = verify_conjecture(alg, strict=False)
    if cfg.out_dir:
        export_graphs(cfg, system, alg, fam)
    _emit(cfg, rep)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_export_graph(cfg: Config) -> int:
    system = cfg.system()
    alg = fam = None
    if system.type_tag in SUPPORTED:
        alg = _quotient(cfg, system)
        fam = build_family(alg)
    for f in export_graphs(cfg, system, alg, fam):
        print(f)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--type", help='Coxeter type: A1, A1^2, A3, A4, B3, D4, B4, F4, H3, I2 (with --m) or "I2(5)"')
    common.add_argument("--m", type=int, help="m for I2(m)")
    common.add_argument("--n", type=int, help="number of factors for A1xN")
    common.add_argument("--max-length", type=int, default=12, help="largest completion length to try")
    common.add_argument("--report", help="write a JSON report to this file")
    common.add_argument("--format", default="text", choices=["json", "text"])
    common.add_argument("--threads", type=int, default=1, help="accepted for compatibility; work is single-threaded")
    common.add_argument("--out-dir", help="directory for bundles and graphs")
    common.add_argument("-v", "--verbose", action="count", default=0)

    p = argparse.ArgumentParser(prog="wgraph-algebra", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)
    sub.add_parser("build-omega", parents=[common], help="compute and certify kOmega")
    vw = sub.add_parser("verify-wgraph", parents=[common], help="validate a W-graph JSON file")
    vw.add_argument("file")
    sub.add_parser("verify-conjecture", parents=[common], help="build F^lambda and check Z1-Z4")
    sub.add_parser("export-graph", parents=[common], help="write compatibility (and refined) graphs")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(message)s")
    if args.cmd != "verify-wgraph" and not args.type:
        parser.error("--type is required")
    cfg = Config(args.type, args.m, args.n, min(4, args.max_length), args.max_length, args.report,
                 args.format, args.out_dir, args.threads, args.verbose)
    try:
        cfg.validate()
        if args.cmd == "build-omega":
            return cmd_build_omega(cfg)
        if args.cmd == "verify-wgraph":
            return cmd_verify_wgraph(cfg, args.file)
        if args.cmd == "verify-conjecture":
            return cmd_verify_conjecture(cfg)
        return cmd_export_graph(cfg)
    except (CoxeterError, ValueError, OSError, WGraphError, json.JSONDecodeError) as exc:
        if isinstance(exc, UnsupportedType):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_SCOPE
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StabilizationError as exc:
        print(f"stabilization failure: {exc}", file=sys.stderr)
        return EXIT_SCOPE


if __name__ == "__main__":
    sys.exit(main())
