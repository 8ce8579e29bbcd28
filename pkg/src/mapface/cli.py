"""Command-line front end: every module behind one binary.

All subcommands write CSV to stdout (or one JSON document with --out json)
with a header row and a trailing manifest comment.  Wall time goes to
stderr, so the output bytes depend only on the argument vector and the
seed, never on timing or the degree of parallelism.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import platform
import shlex
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import enumerate as census
from .bounds import asymptotic_upper, beta_table, logsq_upper, lower_bound
from .combmap import Graph, count_face_orbits
from .configmodel import (
    DegreeSequence,
    FixedRotation,
    expected_faces_exact_cm,
    expected_faces_formula,
    face_oracle,
    matching_is_simple,
    sample_matching,
    to_combmap,
)
from .embed_random import (
    _random_gnp_graph,
    estimate_expected_faces,
    gnp_experiment,
    sample_process_a,
    sample_process_b,
    sample_statistics,
)
from .errors import RefusalError, ValidationError
from .rng import substream


def _package_version() -> str:
    try:
        from importlib.metadata import version
        return version("mapface")
    except Exception:
        return "unknown"


@dataclass(frozen=True)
class RunManifest:
    """Provenance record emitted with every run.

    The comment line leaves out the wall time on purpose: identical
    manifests must imply identical output bytes, and timing never
    qualifies.  Wall time is reported on stderr instead.
    """

    subcommand: str
    argv: tuple[str, ...]
    seed: int | None
    versions: dict
    wall_time_s: float
    output_digest: str

    def comment_line(self) -> str:
        vs = " ".join(f"{k}={v}" for k, v in self.versions.items())
        seed = "-" if self.seed is None else str(self.seed)
        return (f"# manifest subcommand={self.subcommand} seed={seed} {vs} "
                f"digest={self.output_digest} argv={shlex.join(self.argv)}")

    def json_dict(self) -> dict:
        return {
            "subcommand": self.subcommand,
            "argv": list(self.argv),
            "seed": self.seed,
            "versions": self.versions,
            "digest": self.output_digest,
        }


def _versions() -> dict:
    return {
        "mapface": _package_version(),
        "numpy": np.__version__,
        "python": platform.python_version(),
    }


def _cell(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


# ---------------------------------------------------------------------------
# graph specifiers


def parse_graph_specifier(text: str):
    """kn:N | gnp:N:P | file:PATH | degrees:3,3,4 -> (kind, payload)."""
    kind, sep, rest = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError(
            f"graph specifier {text!r} needs kn:N, gnp:N:P, file:PATH, "
            f"or degrees:D1,D2,...")
    try:
        if kind == "kn":
            n = int(rest)
            if n < 1:
                raise ValueError
            return "kn", n
        if kind == "gnp":
            ns, _, ps = rest.partition(":")
            n, p = int(ns), float(ps)
            if n < 1 or not 0.0 < p <= 1.0:
                raise ValueError
            return "gnp", (n, p)
        if kind == "file":
            return "file", rest
        if kind == "degrees":
            return "degrees", tuple(int(d) for d in rest.split(","))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"malformed graph specifier {text!r}")
    raise argparse.ArgumentTypeError(
        f"unknown graph kind {kind!r}; use kn, gnp, file, or degrees")


def load_graph_file(path: str) -> Graph:
    """Edge-list text (one `u v` per line, 1-based) or JSON {n, edges}."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise RefusalError(f"cannot read graph file {path}: {e}")
    stripped = text.lstrip()
    if stripped.startswith("{"):
        doc = json.loads(text)
        return Graph(int(doc["n"]), [tuple(e) for e in doc["edges"]])
    edges = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise RefusalError(f"bad edge line {line!r} in {path}")
        edges.append((int(parts[0]), int(parts[1])))
    if not edges:
        raise RefusalError(f"no edges found in {path}")
    n = max(max(u, v) for u, v in edges)
    return Graph(n, edges)


def _realize_graph(kind, payload, seed: int) -> Graph:
    if kind == "kn":
        return Graph.complete(payload)
    if kind == "file":
        return load_graph_file(payload)
    if kind == "gnp":
        n, p = payload
        return _random_gnp_graph(n, p, substream(seed, 7, 0))
    raise RefusalError(
        "degree sequences are served by the configmodel subcommand")


def _parse_shard(text: str | None) -> tuple[int, int] | None:
    if text is None:
        return None
    i, sep, t = text.partition("/")
    if not sep:
        raise argparse.ArgumentTypeError("shard must look like i/t, e.g. 0/4")
    i, t = int(i), int(t)
    if not (t >= 1 and 0 <= i < t):
        raise argparse.ArgumentTypeError(f"shard index {i} outside 0..{t - 1}")
    return i, t


# ---------------------------------------------------------------------------
# subcommand handlers: each returns (header, rows, seed, artifacts)


def _run_enumerate(args):
    kind, payload = args.graph
    graph = _realize_graph(kind, payload, args.seed)
    dist = census.face_distribution(
        graph, fix_first_rotation=args.fix_first, shard=args.shard,
        workers=args.threads)
    if args.by == "genus":
        counts, header = dist.by_genus, ["genus", "embeddings"]
    else:
        counts, header = dist.by_faces, ["faces", "embeddings"]
    rows = [[k, counts[k]] for k in sorted(counts)]
    seed = args.seed if kind == "gnp" else None
    return header, rows, seed, {}


def _run_sample(args):
    kind, payload = args.graph
    if args.process in ("a", "b"):
        if kind != "kn":
            raise RefusalError(
                "processes a and b build complete graphs; use --graph kn:N")
        n = payload
        builder = sample_process_a if args.process == "a" else sample_process_b
        source = lambda rng: builder(n, rng)
        label = f"kn:{n}"
    else:
        graph = _realize_graph(kind, payload, args.seed)
        source = graph
        label = f"{kind}:{payload}" if kind != "kn" else f"kn:{payload}"
    if args.per_trial:
        pairs = sample_statistics(source, args.trials, args.seed)
        rows = [[t, f, g] for t, (f, g) in enumerate(pairs)]
        return ["trial", "faces", "genus"], rows, args.seed, {}
    est = estimate_expected_faces(source, args.trials, args.seed,
                                  statistic=args.statistic,
                                  workers=args.threads)
    row = [label, args.process, args.statistic, est.trials, est.seed,
           est.mean, est.stderr, est.ci95[0], est.ci95[1]]
    header = ["graph", "process", "statistic", "trials", "seed", "mean",
              "stderr", "ci95_lo", "ci95_hi"]
    return header, [row], args.seed, {}


def _run_bounds(args):
    header = ["n", "bound", "mode", "nu", "mu", "ref_five_log",
              "ref_five_log_plus_5", "ref_half_log_minus_2"]

    def refs(n):
        ln = math.log(n)
        return [5.0 * ln, 5.0 * ln + 5.0, 0.5 * ln - 2.0]

    rows = []
    artifacts = {}
    if args.mode == "logsq":
        for n in range(4, args.n_max + 1):
            rows.append([n, logsq_upper(n), "log-squared", "", "", *refs(n)])
    elif args.mode == "lower":
        for n in range(3, args.n_max + 1):
            rows.append([n, lower_bound(n), "lower", "", "", *refs(n)])
    elif args.mode == "envelope":
        if args.n_max < 4158:
            raise RefusalError(
                "the closed envelope starts at n = 4158; smaller n is "
                "covered by --mode beta")
        for n in range(4158, args.n_max + 1):
            rows.append([n, asymptotic_upper(n), "asymptotic", "", "",
                         *refs(n)])
    else:
        table = beta_table(args.n_max, workers=args.threads)
        for n in sorted(table.values):
            prov = table.provenance[n]
            nu = "" if prov.get("nu") is None else repr(prov["nu"])
            mu = "" if prov.get("mu") is None else repr(prov["mu"])
            rows.append([n, table.values[n], prov["mode"], nu, mu, *refs(n)])
        artifacts[args.beta_json] = json.dumps(
            table.to_json_dict(), sort_keys=True, indent=1) + "\n"
    return header, rows, None, artifacts


def _run_configmodel(args):
    ds = DegreeSequence(args.degrees)
    rotation = FixedRotation.canonical(ds)
    label = ",".join(str(d) for d in ds.degrees)
    if args.action == "exact":
        value = expected_faces_exact_cm(rotation)
        header = ["degrees", "mode", "expected_faces", "expected_faces_float"]
        return header, [[label, "exact", value, float(value)]], None, {}
    if args.action == "formula":
        oracle = face_oracle(rotation)
        value = expected_faces_formula(oracle.h, ds.m)
        header = ["degrees", "mode", "expected_faces", "expected_faces_float"]
        return header, [[label, "formula", value, float(value)]], None, {}
    rows = []
    attempts_left = 1000 * args.trials
    for t in range(args.trials):
        rng = substream(args.seed, t)
        while True:
            matching = sample_matching(ds, rng)
            simple = matching_is_simple(ds, matching)
            attempts_left -= 1
            if simple or not args.simple:
                break
            if attempts_left <= 0:
                raise RefusalError(
                    "simple-graph rejection sampling made no progress; "
                    "the degree sequence almost never yields a simple graph")
        orbits = count_face_orbits(to_combmap(rotation, matching))
        rows.append([t, orbits, int(simple)])
    return ["trial", "face_orbits", "simple"], rows, args.seed, {}


def _run_gnp(args):
    est, reference, ratio = gnp_experiment(
        args.n, args.p, args.trials, args.seed,
        connected_only=args.connected_only)
    header = ["n", "p", "trials", "seed", "connected_only", "mean", "stderr",
              "ci95_lo", "ci95_hi", "ref_log_pn2", "ratio"]
    row = [args.n, args.p, est.trials, est.seed, int(args.connected_only),
           est.mean, est.stderr, est.ci95[0], est.ci95[1], reference, ratio]
    return header, [row], args.seed, {}


# ---------------------------------------------------------------------------
# parser and dispatch


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mapface",
        description="Random 2-cell embeddings: censuses, samplers, bounds.")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    default_threads = os.cpu_count() or 1

    def common(p, seeded=True):
        p.add_argument("--out", choices=("csv", "json"), default="csv")
        p.add_argument("--threads", type=int, default=default_threads)
        if seeded:
            p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("enumerate", help="exact census of rotation systems")
    p.add_argument("--graph", type=parse_graph_specifier, required=True)
    p.add_argument("--fix-first", action="store_true",
                   help="census the reduced space with vertex 1 pinned")
    p.add_argument("--shard", type=_parse_shard, default=None,
                   metavar="I/T", help="process shard I of T")
    p.add_argument("--by", choices=("faces", "genus"), default="faces")
    common(p)
    p.set_defaults(run=_run_enumerate)

    p = sub.add_parser("sample", help="Monte Carlo embedding statistics")
    p.add_argument("--graph", type=parse_graph_specifier, required=True)
    p.add_argument("--process", choices=("uniform", "a", "b"),
                   default="uniform")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--statistic", choices=("faces", "genus"),
                   default="faces")
    p.add_argument("--per-trial", action="store_true",
                   help="emit one row per trial instead of the summary")
    common(p)
    p.set_defaults(run=_run_sample)

    p = sub.add_parser("bounds", help="bound tables and reference lines")
    p.add_argument("--mode", choices=("logsq", "beta", "lower", "envelope"),
                   required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--beta-json", default="beta_table.json",
                   help="artifact path for the beta table provenance")
    common(p, seeded=False)
    p.set_defaults(run=_run_bounds)

    p = sub.add_parser("configmodel",
                       help="fixed-rotation random multigraph statistics")
    p.add_argument("action", choices=("exact", "formula", "sample"))
    p.add_argument("--degrees", required=True,
                   type=lambda s: tuple(int(d) for d in s.split(",")))
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--simple", action="store_true",
                   help="keep resampling each trial until the graph is simple")
    common(p)
    p.set_defaults(run=_run_configmodel)

    p = sub.add_parser("gnp", help="sparse random graph face experiment")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--connected-only", action="store_true")
    common(p)
    p.set_defaults(run=_run_gnp)
    return parser


def _emit(args, argv, header, rows, seed, artifacts, wall_start) -> None:
    cells = [[_cell(v) for v in row] for row in rows]
    if args.out == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(cells)
        payload = buf.getvalue()
        digest = "sha256:" + hashlib.sha256(payload.encode()).hexdigest()
        manifest = RunManifest(args.subcommand, tuple(argv), seed,
                               _versions(),
                               time.perf_counter() - wall_start, digest)
        sys.stdout.write(payload)
        sys.stdout.write(manifest.comment_line() + "\n")
    else:
        data = {"header": header, "rows": cells}
        canonical = json.dumps(data, sort_keys=True, separators=(",", ":"))
        digest = "sha256:" + hashlib.sha256(canonical.encode()).hexdigest()
        manifest = RunManifest(args.subcommand, tuple(argv), seed,
                               _versions(),
                               time.perf_counter() - wall_start, digest)
        doc = {"data": data, "manifest": manifest.json_dict()}
        sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    for path, text in artifacts.items():
        with open(path, "w") as fh:
            fh.write(text)
    print(f"wall-time: {manifest.wall_time_s:.2f}s", file=sys.stderr)


def main(argv=None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    start = time.perf_counter()
    try:
        header, rows, seed, artifacts = args.run(args)
    except (RefusalError, ValidationError) as e:
        print(f"refused: {e}", file=sys.stderr)
        return 1
    _emit(args, argv, header, rows, seed, artifacts, start)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
