"""Exhaustive census of rotation systems: exact face and genus distributions.

The rotation space of a graph is the product over vertices of the
(deg-1)! cyclic dart orders.  Embeddings are indexed by a mixed-radix
odometer (vertex 1 is the slowest digit, the last vertex the fastest),
decoded in vectorized chunks and processed with the batch orbit counter.
Counts are exact integers; expected values are exact rationals.
"""
from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _batch
from .combmap import Graph
from .errors import RefusalError

DEFAULT_BUDGET = 10**9
MAX_VERTEX_CLASSES = 40320  # tabulated cyclic orders per vertex: degree <= 9
CHUNK = 1 << 15


def enumeration_budget() -> int:
    """Active embedding-count budget; MAPFACE_BUDGET overrides the default."""
    raw = os.environ.get("MAPFACE_BUDGET", "").strip()
    return int(raw) if raw else DEFAULT_BUDGET


def is_complete(graph: Graph) -> bool:
    """True when the graph is the complete simple graph on its vertices."""
    want = graph.n * (graph.n - 1) // 2
    if graph.num_edges != want:
        return False
    pairs = set()
    for u, v in graph.edges:
        if u == v:
            return False
        pairs.add((min(u, v), max(u, v)))
    return len(pairs) == want


@dataclass
class FaceCensus:
    """Exact histogram of a graph's embeddings by face count and genus.

    Counts from a reduced (first-rotation-fixed) run are already rescaled
    to the full rotation space, so ``total`` always sums ``by_faces``.
    """
    by_faces: dict[int, int]
    by_genus: dict[int, int]
    total: int
    space_size: int
    reduced: bool
    rescale: int
    shard: tuple[int, int] | None = None

    @property
    def expected_faces(self) -> Fraction:
        return Fraction(sum(f * c for f, c in self.by_faces.items()), self.total)

    @property
    def expected_genus(self) -> Fraction:
        return Fraction(sum(g * c for g, c in self.by_genus.items()), self.total)

    @property
    def expected_faces_float(self) -> float:
        return float(self.expected_faces)

    @property
    def expected_genus_float(self) -> float:
        return float(self.expected_genus)

    def merge(self, other: "FaceCensus") -> "FaceCensus":
        """Union of two shard censuses of the same job."""
        if (self.space_size, self.reduced, self.rescale) != (
                other.space_size, other.reduced, other.rescale):
            raise ValueError("shards come from different census jobs")
        by_faces = dict(self.by_faces)
        for f, c in other.by_faces.items():
            by_faces[f] = by_faces.get(f, 0) + c
        by_genus = dict(self.by_genus)
        for g, c in other.by_genus.items():
            by_genus[g] = by_genus.get(g, 0) + c
        return FaceCensus(by_faces, by_genus, self.total + other.total,
                          self.space_size, self.reduced, self.rescale, None)


class _OdometerPlan:
    """Per-vertex cyclic-order templates plus the mixed-radix layout."""

    def __init__(self, graph: Graph, reduced: bool):
        self.graph = graph
        self.reduced = reduced
        blocks = []
        radices = []
        for v in range(1, graph.n + 1):
            darts = graph.darts_at(v)
            deg = len(darts)
            if deg == 0:
                continue
            fixed = reduced and v == 1
            radix = 1 if fixed else math.factorial(deg - 1)
            if radix > MAX_VERTEX_CLASSES:
                raise RefusalError(
                    f"vertex {v} has {radix} cyclic orders; "
                    f"at most {MAX_VERTEX_CLASSES} per vertex can be tabulated")
            if fixed:
                cycles = [tuple(darts)]
            else:
                cycles = [(darts[0],) + rest
                          for rest in itertools.permutations(darts[1:])]
            templates = np.empty((radix, deg), dtype=np.int32)
            for c, cyc in enumerate(cycles):
                succ_local = {cyc[i]: cyc[(i + 1) % deg] for i in range(deg)}
                templates[c] = [succ_local[d] for d in darts]
            blocks.append((np.asarray(darts, dtype=np.int64), templates))
            radices.append(radix)
        weights = []
        w = 1
        for radix in reversed(radices):
            weights.append(w)
            w *= radix
        weights.reverse()
        self.space = w if radices else 1
        self._blocks = [(cols, templates, weight, radix)
                        for (cols, templates), weight, radix
                        in zip(blocks, weights, radices)]
        self.rescale = 1
        if reduced and graph.degree(1) >= 1:
            self.rescale = math.factorial(graph.degree(1) - 1)

    def rotations(self, idx: np.ndarray) -> np.ndarray:
        """Decode odometer indices into successor arrays, one per row."""
        succ = np.empty((len(idx), self.graph.num_darts), dtype=np.int32)
        for cols, templates, weight, radix in self._blocks:
            digits = (idx // weight) % radix
            succ[:, cols] = templates[digits]
        return succ


def _shard_range(space: int, shard: tuple[int, int] | None) -> tuple[int, int]:
    if shard is None:
        return 0, space
    index, total = shard
    if not (0 < total and 0 <= index < total):
        raise RefusalError(f"shard {index}/{total} is not a valid partition slot")
    return index * space // total, (index + 1) * space // total


def _count_range(plan: _OdometerPlan, lo: int, hi: int) -> dict[int, int]:
    graph = plan.graph
    base = graph.edgeless_component_count - graph.component_count + 1
    flip = np.arange(graph.num_darts) ^ 1
    hist: dict[int, int] = {}
    for start in range(lo, hi, CHUNK):
        idx = np.arange(start, min(start + CHUNK, hi), dtype=np.int64)
        faces = _batch.batch_cycle_counts(plan.rotations(idx)[:, flip]) + base
        for f, c in enumerate(np.bincount(faces)):
            if c:
                hist[f] = hist.get(f, 0) + int(c)
    return hist


def face_distribution(graph: Graph, fix_first_rotation: bool = False,
                      shard: tuple[int, int] | None = None,
                      budget: int | None = None,
                      assert_vertex_transitive: bool = False,
                      workers: int = 1) -> FaceCensus:
    """Exact census of every rotation system of the graph.

    With fix_first_rotation the census runs over the reduced space with
    vertex 1's rotation pinned and rescales the counts by (deg(1)-1)!.
    The reduction is only valid for vertex-transitive graphs, so it is
    refused unless the graph is complete or the caller asserts
    transitivity.  The (possibly reduced) space size must stay within the
    budget (default 10^9, MAPFACE_BUDGET overrides).
    """
    if fix_first_rotation and not (is_complete(graph) or assert_vertex_transitive):
        raise RefusalError(
            "fixing the first rotation is only valid for vertex-transitive "
            "graphs; pass assert_vertex_transitive for a non-complete input "
            "you know to be vertex-transitive")
    if budget is None:
        budget = enumeration_budget()
    plan = _OdometerPlan(graph, fix_first_rotation)
    if plan.space > budget:
        raise RefusalError(
            f"rotation space holds {plan.space} embeddings, over the budget "
            f"of {budget}; raise MAPFACE_BUDGET to run anyway")
    lo, hi = _shard_range(plan.space, shard)
    if workers > 1 and hi - lo > CHUNK:
        cuts = np.linspace(lo, hi, workers * 4 + 1, dtype=np.int64)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda ab: _count_range(plan, int(ab[0]), int(ab[1])),
                                  zip(cuts[:-1], cuts[1:])))
        hist: dict[int, int] = {}
        for part in parts:
            for f, c in part.items():
                hist[f] = hist.get(f, 0) + c
    else:
        hist = _count_range(plan, lo, hi)

    by_faces = {f: c * plan.rescale for f, c in sorted(hist.items())}
    total = sum(by_faces.values())
    m, n, comp = graph.num_edges, graph.n, graph.component_count
    by_genus: dict[int, int] = {}
    for f, c in by_faces.items():
        twice = m - n - f + comp + 1
        if twice < 0 or twice % 2:
            raise AssertionError(f"census produced impossible face count {f}")
        g = twice // 2
        by_genus[g] = by_genus.get(g, 0) + c
    by_genus = dict(sorted(by_genus.items()))
    return FaceCensus(by_faces, by_genus, total,
                      plan.space * plan.rescale, fix_first_rotation,
                      plan.rescale, shard)


def genus_distribution(graph: Graph, fix_first_rotation: bool = False,
                       shard: tuple[int, int] | None = None,
                       budget: int | None = None,
                       assert_vertex_transitive: bool = False,
                       workers: int = 1) -> FaceCensus:
    """Same census as face_distribution, emphasised by its genus view."""
    return face_distribution(graph, fix_first_rotation, shard, budget,
                             assert_vertex_transitive, workers)


def expected_faces_exact(graph: Graph, budget: int | None = None,
                         workers: int = 1) -> Fraction:
    """Exact average face count over every rotation system."""
    return face_distribution(graph, budget=budget, workers=workers).expected_faces


@lru_cache(maxsize=8)
@lru_cache(maxsize=None)
def _short_face_sweep(n: int) -> tuple[tuple[int, ...], int]:
    """Total short-face counts over the rotation space of the complete graph.

    Returns (totals, space): totals[k] sums, over every embedding in the
    space, the number of faces of walk length k with k distinct vertices
    and k distinct edges.  For n = 6 the sweep runs on the reduced space
    (first rotation fixed); the statistic's average is invariant under
    that reduction, which the tests confirm against the full space at
    n = 4 and 5.
    """
    graph = Graph.complete(n)
    reduced = n >= 6
    plan = _OdometerPlan(graph, reduced)
    if plan.space > enumeration_budget():
        raise RefusalError(
            f"rotation space holds {plan.space} embeddings, over the budget "
            f"of {enumeration_budget()}")
    flip = np.arange(graph.num_darts) ^ 1
    dart_vertex = graph.dart_vertex.astype(np.int32)
    totals = np.zeros(n + 1, dtype=np.int64)
    for start in range(0, plan.space, CHUNK):
        idx = np.arange(start, min(start + CHUNK, plan.space), dtype=np.int64)
        face_perm = plan.rotations(idx)[:, flip]
        totals += _batch.short_walk_dart_counts(face_perm, dart_vertex, n)
    counts = []
    for k in range(n + 1):
        if k >= 3:
            if totals[k] % k:
                raise AssertionError(f"length-{k} dart total not divisible by {k}")
            counts.append(int(totals[k]) // k)
        else:
            counts.append(0)
    return tuple(counts), plan.space


def expected_short_faces_exact(n: int, k: int) -> Fraction:
    """Exact average number of faces with k distinct vertices and k distinct
    edges over all embeddings of the complete graph on n vertices."""
    if not 3 <= n <= 6:
        raise RefusalError(
            f"exact short-face averages need a full census; n={n} is outside 3..6")
    if not 3 <= k <= n:
        raise RefusalError(f"face size k={k} is outside 3..{n}")
    counts, space = _short_face_sweep(n)
    return Fraction(counts[k], space)
