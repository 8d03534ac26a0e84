"""Command-line front end: build, verify, certify, stats, sfamily, replay.

Exit codes: 0 success, 1 verification failure, 2 parse or usage error,
3 Phase B exhaustion, 4 certificate precondition failure.
"""

from __future__ import annotations

import argparse
import json
import platform
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .certificate import CertificateError, certify
from .core import DomainError, ParseError, find_violations, load_coloring, save_coloring
from .gadget import load_universe, save_universe
from .phase_a import PhaseAConfig, class_shape_errors, run_phase_a, setup
from .phase_b import PhaseBConfig, PhaseBFailure, PhaseBReport, assign_colors, build_lists
from .sfamily import UncoloredClasses, dump_entries, enumerate_S
from .stats import quasi_report

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_PHASE_B, EXIT_CERT = 0, 1, 2, 3, 4
SCHEMA_VERSION = 1

# fixed offsets deriving per-phase seeds from the master seed
UNIVERSE_OFFSET, GREEDY_OFFSET, PHASE_B_OFFSET, STATS_OFFSET = 0, 1_000_003, 2_000_006, 3_000_009

ARTIFACTS = {
    "coloring": "coloring.txt",
    "phase_a": "phase_a.txt",
    "universe": "universe.txt",
    "certificate": "certificate.json",
    "stats": "stats.json",
    "phase_b": "phase_b.json",
}


def _dump_json(obj, path: Path) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _parse_edge(text: str) -> tuple[int, int]:
    try:
        u, v = (int(x) for x in text.replace(",", "-").split("-"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"edge must look like 3-7, got {text!r}")
    return u, v


def build(n: int, seed: int = 0, out: str | Path = "out", delta: float = 0.25, p: float | None = None,
          max_failures: int | None = None, max_restarts: int = 50, d_b: int | None = None,
          sample_size: int = 10, log=print) -> int:
    """Run the full pipeline and write every artifact plus a manifest."""
    start = time.perf_counter()
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    cfg_a = PhaseAConfig(n=n, delta=delta, p=p, seed=seed, max_consecutive_failures=max_failures)
    universe = setup(cfg_a, np.random.default_rng(seed + UNIVERSE_OFFSET))
    partial, _, _, stats_a = run_phase_a(cfg_a, universe, np.random.default_rng(seed + GREEDY_OFFSET))
    save_universe(universe, out / ARTIFACTS["universe"])
    save_coloring(partial, out / ARTIFACTS["phase_a"])
    log(f"phase A: {stats_a.placed} gadgets, {stats_a.colored_edges} edges colored")

    quasi = quasi_report(partial, universe, sample_size, np.random.default_rng(seed + STATS_OFFSET))
    _dump_json({"phase_a": stats_a.as_dict(), "quasi": quasi.as_dict()}, out / ARTIFACTS["stats"])

    cfg_b = PhaseBConfig(n=n, d_b=d_b, seed=seed + PHASE_B_OFFSET, max_restarts=max_restarts)
    classes = UncoloredClasses.from_phase_a(partial, universe)
    lists = build_lists(classes, cfg_b, first_color=len(universe.all_colors()))
    report = PhaseBReport()
    config = {
        "n": n, "delta": delta, "p": cfg_a.prob, "seed": seed, "max_failures": cfg_a.failure_cap,
        "max_restarts": max_restarts, "d_b": cfg_b.d_b, "sample_size": sample_size,
        "seeds": {"universe": seed + UNIVERSE_OFFSET, "greedy": seed + GREEDY_OFFSET,
                  "phase_b": seed + PHASE_B_OFFSET, "stats": seed + STATS_OFFSET},
        "pools": {"C_A1": len(universe.a1), "C_A2": len(universe.a2), "C_B1": len(lists.b1), "C_B2": len(lists.b2)},
    }
    manifest = {
        "schema_version": SCHEMA_VERSION,
        "command": "build",
        "config": config,
        "artifacts": dict(ARTIFACTS),
        "versions": {"ramsey58": __version__, "numpy": np.__version__, "python": platform.python_version()},
    }
    try:
        final = assign_colors(partial, lists, cfg_b, np.random.default_rng(cfg_b.seed), report)
    except PhaseBFailure as exc:
        _dump_json({"schema_version": SCHEMA_VERSION, **report.as_dict(), "error": str(exc),
                    "blocked_list": list(exc.blocked)}, out / ARTIFACTS["phase_b"])
        manifest["status"] = "phase_b_failure"
        _write_manifest(manifest, out, start)
        log(f"phase B failed: {exc}")
        return EXIT_PHASE_B
    _dump_json({"schema_version": SCHEMA_VERSION, **report.as_dict()}, out / ARTIFACTS["phase_b"])
    save_coloring(final, out / ARTIFACTS["coloring"])

    status = EXIT_OK
    shape = class_shape_errors(partial, universe)
    witness = find_violations(final, 5, 8, limit=1)
    if shape or witness or not final.is_full():
        log(f"verification failed: shape={shape[:3]} witness={witness}")
        status = EXIT_VERIFY
    try:
        cert = certify(final)
        _dump_json(cert.as_dict(), out / ARTIFACTS["certificate"])
        log(f"certificate: {cert.colors_used} colors, bound {cert.bound_ceil}, passed={cert.passed}")
        if not cert.passed:
            status = EXIT_VERIFY
    except CertificateError as exc:
        log(f"certificate precondition failed: {exc}")
        status = status or EXIT_CERT
    manifest["status"] = "ok" if status == EXIT_OK else "failed"
    _write_manifest(manifest, out, start)
    return status


def _write_manifest(manifest: dict, out: Path, start: float) -> None:
    manifest["wall_clock_seconds"] = round(time.perf_counter() - start, 3)
    _dump_json(manifest, out / "manifest.json")


def cmd_build(args) -> int:
    return build(args.n, args.seed, args.out, args.delta, args.p, args.max_failures, args.max_restarts,
                 args.db_override, args.sample)


def cmd_replay(args) -> int:
    cfg = json.loads(Path(args.manifest).read_text(encoding="utf-8"))["config"]
    return build(cfg["n"], cfg["seed"], args.out, cfg["delta"], cfg["p"], cfg["max_failures"],
                 cfg["max_restarts"], cfg["d_b"], cfg["sample_size"])


def cmd_verify(args) -> int:
    col = load_coloring(args.file)
    found = find_violations(col, args.p, args.q, limit=1)
    if not found:
        print(f"ok: no ({args.p},{args.q})-violation")
        return EXIT_OK
    S = found[0]
    cols = sorted({col.get(u, v) for i, u in enumerate(S) for v in S[i + 1:]} - {None})
    print(f"violation: vertices {' '.join(map(str, S))} colors {cols}")
    return EXIT_VERIFY


def cmd_certify(args) -> int:
    col = load_coloring(args.file)
    try:
        cert = certify(col)
    except CertificateError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_CERT
    print(json.dumps(cert.as_dict(), indent=2, sort_keys=True))
    return EXIT_OK if cert.passed else EXIT_VERIFY


def cmd_stats(args) -> int:
    col = load_coloring(args.coloring)
    universe = load_universe(args.universe)
    rep = quasi_report(col, universe, args.sample, np.random.default_rng(args.seed))
    text = json.dumps(rep.as_dict(), indent=2, sort_keys=True) + "\n"
    if args.json:
        Path(args.json).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if args.csv:
        rows = ["vertex,uncolored_degree"] + [f"{v},{d}" for v, d in enumerate(rep.uncolored_degree)]
        Path(args.csv).write_text("\n".join(rows) + "\n", encoding="utf-8")
    return EXIT_OK


def cmd_sfamily(args) -> int:
    col = load_coloring(args.file)
    if args.universe:
        classes = UncoloredClasses.from_phase_a(col, load_universe(args.universe))
    else:
        classes = UncoloredClasses.single_class(col)
    entries = enumerate_S(col, classes, args.edge, args.a, args.b)
    sys.stdout.write(dump_entries(col, entries))
    print(f"# {len(entries)} entries, {len({x.S for x in entries})} sets", file=sys.stderr)
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ramsey58", description="Build and check (5,8)-colorings of K_n.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="run Phase A, Phase B, verification and certificate")
    b.add_argument("--n", type=int, required=True)
    g = b.add_mutually_exclusive_group()
    g.add_argument("--delta", type=float, default=0.25, help="sampling probability n^-delta")
    g.add_argument("--p", type=float, default=None, help="explicit sampling probability")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--max-failures", type=int, default=None, help="consecutive failed anchors before Phase A stops")
    b.add_argument("--max-restarts", type=int, default=50)
    b.add_argument("--db-override", type=int, default=None, help="Phase B budget d_B")
    b.add_argument("--sample", type=int, default=10, help="edges sampled for the family statistics")
    b.add_argument("--out", default="out")
    b.set_defaults(func=cmd_build)

    r = sub.add_parser("replay", help="rerun a build from its manifest")
    r.add_argument("manifest")
    r.add_argument("--out", required=True)
    r.set_defaults(func=cmd_replay)

    v = sub.add_parser("verify", help="exhaustive (p,q) check of a coloring file")
    v.add_argument("file")
    v.add_argument("--p", type=int, default=5)
    v.add_argument("--q", type=int, default=8)
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("certify", help="lower-bound certificate of a full (5,8)-coloring")
    c.add_argument("file")
    c.set_defaults(func=cmd_certify)

    s = sub.add_parser("stats", help="quasirandomness report of a Phase A output")
    s.add_argument("coloring")
    s.add_argument("universe")
    s.add_argument("--sample", type=int, default=10)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--json", default=None)
    s.add_argument("--csv", default=None)
    s.set_defaults(func=cmd_stats)

    f = sub.add_parser("sfamily", help="list S_{a,b}(e) for one uncolored edge")
    f.add_argument("file")
    f.add_argument("--edge", type=_parse_edge, required=True)
    f.add_argument("--a", type=int, choices=(4, 5), required=True)
    f.add_argument("--b", type=int, required=True)
    f.add_argument("--universe", default=None, help="split uncolored edges into E'' and E''' classes")
    f.set_defaults(func=cmd_sfamily)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, DomainError, FileNotFoundError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
