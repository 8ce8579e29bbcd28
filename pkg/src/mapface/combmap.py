"""Combinatorial maps: graphs carrying rotation systems and dart pairings.

A graph with m edges is represented by 2m darts (half-edges), two per
edge: edge e owns darts 2e and 2e+1, anchored at its first and second
endpoint.  A rotation system gives every vertex one cyclic order of its
darts; together with the pairing of darts into edges it determines a
2-cell embedding in an orientable surface.  Faces are the orbits of the
composite step dart -> successor(partner(dart)); the genus follows from
Euler's formula.

Partial maps leave some edges unpaired.  Their temporary faces (boundary
walks that pass through unpaired stubs) and the per-step classification
of a newly attached vertex's darts drive the stepwise samplers in
``embed_random``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

UNPAIRED = -1


def dart_edge(d: int) -> int:
    return d >> 1


def edge_partner(d: int) -> int:
    """The other dart of d's edge under the canonical numbering."""
    return d ^ 1


class Graph:
    """Undirected multigraph on vertices 1..n; loops and parallel edges allowed."""

    def __init__(self, n: int, edges, validate: bool = True):
        self.n = int(n)
        self.edges = [(int(u), int(v)) for u, v in edges]
        if validate:
            self.revalidate()
        dv = np.empty(2 * len(self.edges), dtype=np.int64)
        darts_at: list[list[int]] = [[] for _ in range(self.n + 1)]
        for e, (u, v) in enumerate(self.edges):
            dv[2 * e] = u
            dv[2 * e + 1] = v
            darts_at[u].append(2 * e)
            darts_at[v].append(2 * e + 1)
        self.dart_vertex = dv
        self._darts_at = darts_at
        self._components: tuple[int, np.ndarray, int] | None = None

    def revalidate(self) -> None:
        if self.n < 1:
            raise ValidationError("graph needs at least one vertex",
                                  invariant="vertex-count")
        for i, (u, v) in enumerate(self.edges):
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValidationError(
                    f"edge {i} endpoint out of range: ({u}, {v}) with n={self.n}",
                    invariant="endpoint-range", offender=i)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def num_darts(self) -> int:
        return 2 * len(self.edges)

    def darts_at(self, v: int) -> list[int]:
        """Darts anchored at v, ascending.  Do not mutate."""
        return self._darts_at[v]

    def degree(self, v: int) -> int:
        # a loop contributes both of its darts, hence 2
        return len(self._darts_at[v])

    @classmethod
    def complete(cls, n: int) -> "Graph":
        edges = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
        return cls(n, edges, validate=False)

    def _component_data(self) -> tuple[int, np.ndarray, int]:
        """(component count, 1-based vertex labels, edgeless component count)."""
        if self._components is None:
            parent = list(range(self.n + 1))

            def find(x: int) -> int:
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            for u, v in self.edges:
                ru, rv = find(u), find(v)
                if ru != rv:
                    parent[ru] = rv
            labels = np.zeros(self.n + 1, dtype=np.int64)
            roots: dict[int, int] = {}
            for v in range(1, self.n + 1):
                r = find(v)
                labels[v] = roots.setdefault(r, len(roots))
            edgeless = sum(1 for v in range(1, self.n + 1) if not self._darts_at[v])
            self._components = (len(roots), labels, edgeless)
        return self._components

    @property
    def component_count(self) -> int:
        return self._component_data()[0]

    @property
    def edgeless_component_count(self) -> int:
        # a connected component without edges is exactly an isolated vertex
        return self._component_data()[2]

    def component_labels(self) -> np.ndarray:
        return self._component_data()[1]

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges})"


class RotationSystem:
    """Cyclic dart order at every vertex, stored as one successor array."""

    def __init__(self, graph: Graph, successor, validate: bool = True):
        self.graph = graph
        self.successor = np.asarray(successor, dtype=np.int64)
        self._predecessor: np.ndarray | None = None
        if validate:
            self.revalidate()

    def revalidate(self) -> None:
        g = self.graph
        if self.successor.shape != (g.num_darts,):
            raise ValidationError(
                f"successor array has shape {self.successor.shape}, "
                f"expected ({g.num_darts},)", invariant="successor-shape")
        succ = self.successor.tolist()
        seen = bytearray(g.num_darts)
        for v in range(1, g.n + 1):
            darts = g.darts_at(v)
            if not darts:
                continue
            d0 = darts[0]
            cur = d0
            count = 0
            while True:
                if not (0 <= cur < g.num_darts) or g.dart_vertex[cur] != v:
                    raise ValidationError(
                        f"rotation at vertex {v} leaves the vertex at dart {cur}",
                        invariant="vertex-closure", offender=v)
                if seen[cur]:
                    raise ValidationError(
                        f"unicyclicity violation at vertex {v}",
                        invariant="unicyclicity", offender=v)
                seen[cur] = 1
                count += 1
                cur = succ[cur]
                if cur == d0:
                    break
                if count > len(darts):
                    raise ValidationError(
                        f"unicyclicity violation at vertex {v}",
                        invariant="unicyclicity", offender=v)
            if count != len(darts):
                raise ValidationError(
                    f"unicyclicity violation at vertex {v}",
                    invariant="unicyclicity", offender=v)

    @classmethod
    def canonical(cls, graph: Graph) -> "RotationSystem":
        """Each vertex's darts in ascending order."""
        succ = np.empty(graph.num_darts, dtype=np.int64)
        for v in range(1, graph.n + 1):
            darts = graph.darts_at(v)
            for i, d in enumerate(darts):
                succ[d] = darts[(i + 1) % len(darts)]
        return cls(graph, succ, validate=False)

    @classmethod
    def from_cycles(cls, graph: Graph, cycles) -> "RotationSystem":
        """Build from explicit per-vertex cycles (vertices without darts omitted)."""
        succ = np.full(graph.num_darts, -1, dtype=np.int64)
        for cycle in cycles:
            for i, d in enumerate(cycle):
                succ[d] = cycle[(i + 1) % len(cycle)]
        if np.any(succ < 0):
            missing = int(np.flatnonzero(succ < 0)[0])
            raise ValidationError(f"dart {missing} appears in no cycle",
                                  invariant="successor-total", offender=missing)
        return cls(graph, succ)

    @property
    def predecessor(self) -> np.ndarray:
        if self._predecessor is None:
            pred = np.empty_like(self.successor)
            pred[self.successor] = np.arange(len(self.successor), dtype=np.int64)
            self._predecessor = pred
        return self._predecessor

    def cycle_at(self, v: int) -> list[int]:
        """The rotation at v as a list starting from its smallest dart."""
        darts = self.graph.darts_at(v)
        if not darts:
            return []
        succ = self.successor
        out = [darts[0]]
        cur = int(succ[darts[0]])
        while cur != darts[0]:
            out.append(cur)
            cur = int(succ[cur])
        return out


class EdgeMatching:
    """Fixed-point-free involution pairing the darts into edges."""

    def __init__(self, partner, validate: bool = True):
        self.partner = np.asarray(partner, dtype=np.int64)
        if validate:
            self.revalidate()

    def revalidate(self) -> None:
        p = self.partner
        d_count = len(p)
        if d_count % 2:
            raise ValidationError("odd number of darts cannot be fully paired",
                                  invariant="even-darts")
        if np.any(p < 0) or np.any(p >= d_count):
            bad = int(np.flatnonzero((p < 0) | (p >= d_count))[0])
            raise ValidationError(f"partner of dart {bad} out of range",
                                  invariant="partner-range", offender=bad)
        fixed = np.flatnonzero(p == np.arange(d_count))
        if len(fixed):
            d = int(fixed[0])
            raise ValidationError(f"fixed-point violation at dart {d}",
                                  invariant="fixed-point-free", offender=d)
        bad = np.flatnonzero(p[p] != np.arange(d_count))
        if len(bad):
            d = int(bad[0])
            raise ValidationError(f"involution violation at dart {d}",
                                  invariant="involution", offender=d)

    @classmethod
    def canonical(cls, num_darts: int) -> "EdgeMatching":
        return cls(np.arange(num_darts, dtype=np.int64) ^ 1, validate=False)


class CombMap:
    """A 2-cell embedding: graph + rotation system + edge pairing.

    Immutable after construction; all queries are pure.
    """

    def __init__(self, graph: Graph, rotation, matching: EdgeMatching | None = None,
                 validate: bool = True):
        self.graph = graph
        if not isinstance(rotation, RotationSystem):
            rotation = RotationSystem(graph, rotation, validate=validate)
        self.rotation = rotation
        if matching is None:
            matching = EdgeMatching.canonical(graph.num_darts)
        self.matching = matching
        if validate:
            self.revalidate()

    def revalidate(self) -> None:
        self.graph.revalidate()
        self.rotation.revalidate()
        self.matching.revalidate()
        if len(self.matching.partner) != self.graph.num_darts:
            raise ValidationError(
                "matching and graph disagree on the number of darts",
                invariant="dart-count")
        # with darts numbered 2e, 2e+1 the only pairing within each edge is d^1
        ids = np.arange(self.graph.num_darts, dtype=np.int64)
        bad = np.flatnonzero(self.matching.partner != (ids ^ 1))
        if len(bad):
            d = int(bad[0])
            raise ValidationError(
                f"partner of dart {d} is not the other dart of its edge",
                invariant="edge-pairing", offender=d)

    @property
    def num_darts(self) -> int:
        return self.graph.num_darts

    def __repr__(self) -> str:
        return f"CombMap({self.graph!r})"


class PartialMap:
    """A map whose pairing covers only a subset of edges.

    ``partner[d]`` is the paired dart or UNPAIRED (-1).  The rotation is
    total.  In the canonical numbering a paired dart always pairs with the
    other dart of its own edge, so the state is determined by which edges
    are paired.
    """

    def __init__(self, graph: Graph, rotation, partner, validate: bool = True):
        self.graph = graph
        if not isinstance(rotation, RotationSystem):
            rotation = RotationSystem(graph, rotation, validate=validate)
        self.rotation = rotation
        self.partner = np.asarray(partner, dtype=np.int64)
        if validate:
            self.revalidate()

    def revalidate(self) -> None:
        self.graph.revalidate()
        self.rotation.revalidate()
        g = self.graph
        p = self.partner
        if p.shape != (g.num_darts,):
            raise ValidationError(
                f"partner array has shape {p.shape}, expected ({g.num_darts},)",
                invariant="partner-shape")
        for d in range(g.num_darts):
            mate = int(p[d])
            if mate == UNPAIRED:
                continue
            if mate != (d ^ 1):
                raise ValidationError(
                    f"partner of dart {d} is not the other dart of its edge",
                    invariant="edge-pairing", offender=d)
            if int(p[mate]) != d:
                raise ValidationError(f"involution violation at dart {d}",
                                      invariant="involution", offender=d)

    @classmethod
    def from_paired_edges(cls, graph: Graph, rotation, edge_ids) -> "PartialMap":
        partner = np.full(graph.num_darts, UNPAIRED, dtype=np.int64)
        for e in edge_ids:
            if not (0 <= e < graph.num_edges):
                raise ValidationError(f"edge id {e} out of range",
                                      invariant="edge-range", offender=e)
            partner[2 * e] = 2 * e + 1
            partner[2 * e + 1] = 2 * e
        return cls(graph, rotation, partner)

    def is_paired(self, d: int) -> bool:
        return int(self.partner[d]) != UNPAIRED

    def paired_darts(self) -> np.ndarray:
        return np.flatnonzero(self.partner != UNPAIRED)

    def unpaired_darts(self) -> np.ndarray:
        return np.flatnonzero(self.partner == UNPAIRED)

    def without_edges(self, edge_ids) -> "PartialMap":
        """A copy with the given edges unpaired."""
        partner = self.partner.copy()
        for e in edge_ids:
            partner[2 * e] = UNPAIRED
            partner[2 * e + 1] = UNPAIRED
        return PartialMap(self.graph, self.rotation, partner, validate=False)


def validate(obj) -> ValidationError | None:
    """Re-run every structural check; None when fine, else the violation."""
    try:
        obj.revalidate()
    except ValidationError as err:
        return err
    return None


# ---------------------------------------------------------------------------
# faces and genus


def trace_faces(m: CombMap) -> list[tuple[int, ...]]:
    """The facial walks: orbits of dart -> successor(partner(dart)).

    Each walk starts at its smallest dart; walks are ordered by that dart.
    Every dart appears in exactly one walk.
    """
    succ = m.rotation.successor.tolist()
    partner = m.matching.partner.tolist()
    d_count = m.num_darts
    visited = bytearray(d_count)
    faces = []
    for d0 in range(d_count):
        if visited[d0]:
            continue
        walk = []
        cur = d0
        while not visited[cur]:
            visited[cur] = 1
            walk.append(cur)
            cur = succ[partner[cur]]
        faces.append(tuple(walk))
    return faces


def count_face_orbits(m: CombMap) -> int:
    succ = m.rotation.successor.tolist()
    partner = m.matching.partner.tolist()
    d_count = m.num_darts
    visited = bytearray(d_count)
    orbits = 0
    for d0 in range(d_count):
        if visited[d0]:
            continue
        orbits += 1
        cur = d0
        while not visited[cur]:
            visited[cur] = 1
            cur = succ[partner[cur]]
    return orbits


def count_faces(m: CombMap) -> int:
    """Face count with the disconnected convention.

    For a connected map this is the number of facial orbits.  For k
    components it is the sum of per-component face counts minus (k - 1),
    so gluing two maps at no shared point merges one face from each.  An
    isolated vertex carries one face of its own and therefore contributes
    zero net.
    """
    g = m.graph
    orbits = count_face_orbits(m)
    return orbits + g.edgeless_component_count - g.component_count + 1


def genus(m: CombMap) -> int:
    """Total genus via Euler's formula, using the face-count convention."""
    g = m.graph
    f = count_faces(m)
    twice = g.num_edges - g.n - f + g.component_count + 1
    if twice < 0 or twice % 2:
        raise ValidationError(
            f"Euler count 2g = {twice} is not an even non-negative integer; "
            "the map is structurally inconsistent", invariant="euler-consistency")
    return twice // 2


# ---------------------------------------------------------------------------
# partial maps: temporary faces and step classification


@dataclass(frozen=True)
class TemporaryFace:
    """One boundary walk of a partial map.

    ``darts`` are the paired darts of the walk in traversal order,
    starting from the smallest; ``open_darts`` are the unpaired stubs the
    walk passes, in the same traversal order.
    """
    darts: tuple[int, ...]
    open_darts: tuple[int, ...]
    strongly_2_open: bool

    @property
    def k_open(self) -> int:
        return len(self.open_darts)


def _boundary_scan(cycles, partner, dart_vertex, d_count):
    """Shared core of the temporary-face walk.

    Takes vertex rotation cycles, a partner list with UNPAIRED holes, the
    dart-to-vertex lookup and the dart count; returns (walk, opens,
    strongly_2_open) triples.  Kept representation-agnostic so stepwise
    samplers can run it on their own internal dart labelling.
    """
    next_paired = [UNPAIRED] * d_count
    gap: list[list[int] | None] = [None] * d_count

    for cycle in cycles:
        if not cycle:
            continue
        paired_pos = [i for i, d in enumerate(cycle) if partner[d] != UNPAIRED]
        if not paired_pos:
            continue
        deg = len(cycle)
        for idx, i in enumerate(paired_pos):
            j = paired_pos[(idx + 1) % len(paired_pos)]
            stubs = []
            p = (i + 1) % deg
            while p != j:
                stubs.append(cycle[p])
                p = (p + 1) % deg
            next_paired[cycle[i]] = cycle[j]
            gap[cycle[i]] = stubs

    visited = bytearray(d_count)
    faces = []
    for d0 in range(d_count):
        if partner[d0] == UNPAIRED or visited[d0]:
            continue
        walk = []
        opens: list[int] = []
        cur = d0
        while not visited[cur]:
            visited[cur] = 1
            walk.append(cur)
            mate = partner[cur]
            opens.extend(gap[mate])  # type: ignore[arg-type]
            cur = next_paired[mate]
        strongly = (len(opens) == 2
                    and dart_vertex[opens[0]] != dart_vertex[opens[1]])
        faces.append((tuple(walk), tuple(opens), strongly))
    return faces


def temporary_faces(pm: PartialMap) -> list[TemporaryFace]:
    """Boundary walks over the paired darts of a partial map.

    The walk steps from a paired dart to its partner, then around that
    vertex's rotation to the next paired dart, collecting the unpaired
    stubs in between as the face's open darts.  Darts at vertices with no
    paired dart lie on no temporary face.
    """
    g = pm.graph
    cycles = (pm.rotation.cycle_at(v) for v in range(1, g.n + 1))
    triples = _boundary_scan(cycles, pm.partner.tolist(), g.dart_vertex,
                             g.num_darts)
    return [TemporaryFace(w, o, s) for w, o, s in triples]


def open_dart_walk_end(pm: PartialMap, s: int) -> int:
    """The next unpaired dart along the boundary walk leaving stub s."""
    if pm.is_paired(s):
        raise ValueError(f"dart {s} is paired; walks run between unpaired darts")
    succ = pm.rotation.successor
    partner = pm.partner
    cur = int(succ[s])
    for _ in range(pm.graph.num_darts + 1):
        if int(partner[cur]) == UNPAIRED:
            return cur
        cur = int(succ[int(partner[cur])])
    raise AssertionError("boundary walk failed to terminate")


def open_dart_walk_start(pm: PartialMap, t: int) -> int:
    """Inverse of open_dart_walk_end: the stub whose walk ends at t."""
    if pm.is_paired(t):
        raise ValueError(f"dart {t} is paired; walks run between unpaired darts")
    pred = pm.rotation.predecessor
    partner = pm.partner
    z = t
    for _ in range(pm.graph.num_darts + 1):
        p = int(pred[z])
        if int(partner[p]) == UNPAIRED:
            return p
        z = int(partner[p])
    raise AssertionError("boundary walk failed to terminate")


@dataclass(frozen=True)
class StepClassification:
    """Categories of the attached vertex's darts at one growth step.

    ``one_open``: paired darts whose upper-side mate ends its own walk
    (pairing it is guaranteed to close that face).  ``potential``: paired
    darts whose walk starts at a different active stub.  Everything else
    at the vertex, including its still-unpaired darts, is
    ``noncontributing``.  ``strongly_2_open_count`` is measured on the
    state before the vertex was attached.
    """
    step: int
    one_open: tuple[int, ...]
    potential: tuple[int, ...]
    noncontributing: tuple[int, ...]
    strongly_2_open_count: int

    @property
    def one_open_count(self) -> int:
        return len(self.one_open)

    @property
    def potential_count(self) -> int:
        return len(self.potential)

    @property
    def insertion_order(self) -> tuple[int, ...]:
        """Darts grouped one_open, potential, noncontributing; ids ascend
        within each group."""
        return self.one_open + self.potential + self.noncontributing


def classify_step(pm: PartialMap, k: int) -> StepClassification:
    """Classify vertex k's darts in a growth state of a complete graph.

    Expects the state right after vertex k was paired into the map built
    on vertices k+1..n: exactly the edges with both endpoints >= k are
    paired.  Counting happens on the pre-attachment state (vertex k's
    pairings removed), where each edge (j, k) with j > k designates one
    active stub at j.
    """
    g = pm.graph
    n = g.n
    if not (1 <= k <= n - 2):
        raise ValidationError(f"step index {k} outside 1..{n - 2}",
                              invariant="step-range", offender=k)
    edge_set = {frozenset(e) for e in g.edges}
    if g.num_edges != n * (n - 1) // 2 or len(edge_set) != g.num_edges:
        raise ValidationError("step classification requires a complete graph",
                              invariant="complete-graph")

    upper_edges = []
    vk_edges = []
    for e, (u, v) in enumerate(g.edges):
        lo, hi = min(u, v), max(u, v)
        paired = pm.is_paired(2 * e)
        if lo >= k:
            if not paired:
                raise ValidationError(
                    f"edge ({u}, {v}) should be paired at step {k}",
                    invariant="step-state", offender=e)
            if lo == k:
                vk_edges.append(e)
            else:
                upper_edges.append(e)
        elif paired:
            raise ValidationError(
                f"edge ({u}, {v}) should be unpaired at step {k}",
                invariant="step-state", offender=e)

    before = pm.without_edges(vk_edges)

    active = set()
    vk_paired = []
    for e in vk_edges:
        u, v = g.edges[e]
        # the dart at the endpoint that is not k is the active stub
        if u == k:
            vk_paired.append(2 * e)
            active.add(2 * e + 1)
        else:
            vk_paired.append(2 * e + 1)
            active.add(2 * e)

    one_open = []
    potential = []
    noncontributing = []
    for x in sorted(vk_paired):
        a = x ^ 1
        s = open_dart_walk_start(before, a)
        if s == a:
            one_open.append(x)
        elif s in active:
            potential.append(x)
        else:
            noncontributing.append(x)
    for d in sorted(g.darts_at(k)):
        if not pm.is_paired(d):
            noncontributing.append(d)
    noncontributing.sort()

    l2 = sum(1 for f in temporary_faces(before) if f.strongly_2_open)
    return StepClassification(k, tuple(one_open), tuple(potential),
                              tuple(noncontributing), l2)


# ---------------------------------------------------------------------------
# serialization


def parse_edge_list(text: str) -> Graph:
    """Graph from plain text: one ``u v`` pair per line, 1-based vertices,
    ``#`` starts a comment.  The vertex count is the largest endpoint."""
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValidationError(
                f"line {lineno}: expected 'u v', got {raw!r}",
                invariant="edge-list-syntax", offender=lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ValidationError(
                f"line {lineno}: vertices must be integers, got {raw!r}",
                invariant="edge-list-syntax", offender=lineno) from None
        if u < 1 or v < 1:
            raise ValidationError(
                f"line {lineno}: vertices are 1-based, got {raw!r}",
                invariant="edge-list-syntax", offender=lineno)
        edges.append((u, v))
    if not edges:
        raise ValidationError("edge list is empty", invariant="edge-list-syntax")
    n = max(max(u, v) for u, v in edges)
    return Graph(n, edges)


def format_edge_list(g: Graph) -> str:
    return "".join(f"{u} {v}\n" for u, v in g.edges)


def map_to_json(m: CombMap) -> dict:
    """JSON-ready dict: {n, edges, rotation}; the pairing is implicit in
    the dart numbering (edge e owns darts 2e and 2e+1)."""
    return {
        "n": m.graph.n,
        "edges": [[u, v] for u, v in m.graph.edges],
        "rotation": [m.rotation.cycle_at(v) for v in range(1, m.graph.n + 1)],
    }


def map_from_json(obj: dict) -> CombMap:
    g = Graph(obj["n"], [tuple(e) for e in obj["edges"]])
    cycles = [c for c in obj["rotation"] if c]
    rot = RotationSystem.from_cycles(g, cycles)
    return CombMap(g, rot)
