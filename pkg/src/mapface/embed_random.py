"""Random embedding samplers and the Monte Carlo estimation harness.

Three ways to draw a random 2-cell embedding of a graph: directly (one
uniform cyclic rotation per vertex), or through either of two stepwise
builders for complete graphs that attach vertices one at a time and report
what happens to the boundary walks along the way.  A chunked estimator
turns any of them into a mean-faces figure with error bars.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _batch
from .combmap import (
    UNPAIRED,
    CombMap,
    Graph,
    RotationSystem,
    _boundary_scan,
    count_faces,
    genus,
)
from .rng import substream

CHUNK = 8192


@dataclass(frozen=True)
class Estimate:
    mean: float
    stderr: float
    trials: int
    ci95: tuple[float, float]
    seed: int


@dataclass(frozen=True)
class StepRecord:
    """Observables for one vertex-attachment step of the stepwise builder."""

    step: int
    one_open: int
    potential: int
    strongly_2_open: int
    faces_closed: int
    temporary_faces_after: int


@dataclass(frozen=True)
class ProcessTrace:
    steps: list[StepRecord] = field(default_factory=list)

    @property
    def total_faces_closed(self) -> int:
        return sum(r.faces_closed for r in self.steps)


# ---------------------------------------------------------------------------
# direct sampler


def sample_uniform(graph: Graph, rng: np.random.Generator) -> CombMap:
    """One embedding with an independent uniform rotation at each vertex."""
    succ = np.full(graph.num_darts, -1, dtype=np.int64)
    for v in range(1, graph.n + 1):
        darts = graph.darts_at(v)
        if not darts:
            continue
        if len(darts) == 1:
            succ[darts[0]] = darts[0]
            continue
        rest = [darts[i + 1] for i in rng.permutation(len(darts) - 1)]
        cycle = [darts[0]] + rest
        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            succ[a] = b
    return CombMap(graph, RotationSystem(graph, succ))


# ---------------------------------------------------------------------------
# slot bookkeeping shared by the stepwise builders
#
# While a complete graph is being assembled vertex by vertex, darts cannot
# use the canonical edge numbering: which edge a dart belongs to is only
# settled when it gets paired.  Instead vertex i owns the residue block of
# n-1 "slots" and pairing is tracked on slots; the finished slot map is
# relabelled onto the canonical dart numbering at emission.


def _slot_cycle(base: int, width: int) -> list[int]:
    return list(range(base, base + width))


def _emit(n: int, slot_partner: list[int], slot_succ: list[int]) -> CombMap:
    graph = Graph.complete(n)
    edge_index = {pair: e for e, pair in enumerate(graph.edges)}
    width = n - 1
    to_dart = [-1] * (n * width)
    for s, t in enumerate(slot_partner):
        if s > t:
            continue
        a, b = s // width + 1, t // width + 1
        e = edge_index[(a, b) if a < b else (b, a)]
        if a < b:
            to_dart[s], to_dart[t] = 2 * e, 2 * e + 1
        else:
            to_dart[s], to_dart[t] = 2 * e + 1, 2 * e
    succ = np.empty(graph.num_darts, dtype=np.int64)
    for s in range(n * width):
        succ[to_dart[s]] = to_dart[slot_succ[s]]
    return CombMap(graph, RotationSystem(graph, succ))


def _closed_orbits_after_pairing(x: int, y: int, slot_partner, slot_succ):
    """Face orbits completed by adding the pairing (x, y).

    The face step maps a dart to the rotation successor of its partner, so
    the new pairing contributes the links x -> succ(y) and y -> succ(x).
    An orbit is complete once every dart on it is paired and has a defined
    successor; only orbits through x or y can have become complete.
    """
    limit = len(slot_partner) + 1

    def orbit_if_closed(d0):
        seen = [d0]
        cur = d0
        for _ in range(limit):
            mate = slot_partner[cur]
            if mate == UNPAIRED:
                return None
            cur = slot_succ[mate]
            if cur == -1:
                return None
            if cur == d0:
                return seen
            seen.append(cur)
        raise AssertionError("face walk failed to terminate")

    first = orbit_if_closed(x)
    closed = 0
    if first is not None:
        closed += 1
        if y in first:
            return closed
    if orbit_if_closed(y) is not None:
        closed += 1
    return closed


# ---------------------------------------------------------------------------
# stepwise builder, symbol-drawing variant


def sample_process_a(n: int, rng: np.random.Generator):
    """Assemble a uniform embedding of the complete graph dart by dart.

    Vertices are attached from the top label down.  Each dart of the
    current vertex draws a symbol naming the higher vertex it will lead to
    (or a leave-unpaired marker) and then picks a uniform free dart there.
    Every vertex's rotation is the fixed cycle on its slot block; all the
    randomness lives in the pairing.

    Returns the finished map and a per-step log: step -> list of how many
    faces closed when each of that vertex's darts was processed.
    """
    if n < 3:
        raise ValueError("stepwise builders need at least 3 vertices")
    width = n - 1
    total = n * width
    slot_succ = [0] * total
    for v in range(n):
        base = v * width
        for j in range(width):
            slot_succ[base + j] = base + (j + 1) % width
    slot_partner = [UNPAIRED] * total
    unpaired_at = {v: _slot_cycle((v - 1) * width, width)
                   for v in range(1, n + 1)}

    def pair(a, b):
        slot_partner[a] = b
        slot_partner[b] = a
        unpaired_at[a // width + 1].remove(a)
        unpaired_at[b // width + 1].remove(b)

    pair((n - 1) * width, (n - 2) * width)

    log: dict[int, list[int]] = {}
    for k in range(n - 2, 0, -1):
        pool = list(range(k + 1, n + 1)) + [0] * (k - 1)
        drawn = [pool.pop(int(rng.integers(len(pool)))) for _ in range(n - 1)]
        # process around the rotation starting at a stay-unpaired dart, so
        # mid-step pairings can complete at most one boundary walk; only
        # the very last vertex (no unpaired darts left) can close two on
        # its final dart
        first = drawn.index(0) if k > 1 else 0
        closed_here = []
        for off in range(n - 1):
            j = (first + off) % (n - 1)
            sym = drawn[j]
            if sym == 0:
                closed_here.append(0)
                continue
            frees = unpaired_at[sym]
            assert len(frees) == k
            target = frees[int(rng.integers(len(frees)))]
            mine = (k - 1) * width + j
            pair(mine, target)
            closed = _closed_orbits_after_pairing(mine, target,
                                                  slot_partner, slot_succ)
            assert closed <= (2 if k == 1 and off == n - 2 else 1), \
                f"step {k} dart {off + 1} closed {closed} faces"
            closed_here.append(closed)
        log[k] = closed_here
    m = _emit(n, slot_partner, slot_succ)
    assert sum(map(sum, log.values())) == count_faces(m)
    return m, log


# ---------------------------------------------------------------------------
# stepwise builder, guided-rotation variant


def sample_process_b(n: int, rng: np.random.Generator):
    """Assemble a uniform embedding of the complete graph vertex by vertex.

    At each attachment every higher vertex first sends one uniformly chosen
    free dart down to the new vertex.  The new vertex's rotation is then
    built one successor link at a time, in an order that handles darts on
    single-stub boundary walks first, then darts whose boundary walk could
    close a face, then the rest; each link picks uniformly among the darts
    that keep the rotation a single cycle, tracked through chain ancestors.

    Returns the finished map and a trace with per-step observables.
    """
    if n < 3:
        raise ValueError("stepwise builders need at least 3 vertices")
    width = n - 1
    total = n * width
    slot_succ = [-1] * total
    slot_pred = [-1] * total
    for v in (n - 1, n):
        base = (v - 1) * width
        for j in range(width):
            slot_succ[base + j] = base + (j + 1) % width
            slot_pred[base + (j + 1) % width] = base + j
    slot_partner = [UNPAIRED] * total
    unpaired_at = {v: _slot_cycle((v - 1) * width, width)
                   for v in range(1, n + 1)}

    def pair(a, b):
        slot_partner[a] = b
        slot_partner[b] = a
        unpaired_at[a // width + 1].remove(a)
        unpaired_at[b // width + 1].remove(b)

    pair((n - 1) * width, (n - 2) * width)

    dart_vertex = [s // width + 1 for s in range(total)]

    def walk_start_before(e, active):
        # backward chase over the state in which the new vertex is not yet
        # attached: pairings into it (the active darts) do not count
        cur = e
        for _ in range(total + 1):
            x = slot_pred[cur]
            if slot_partner[x] == UNPAIRED or x in active:
                return x
            cur = slot_partner[x]
        raise AssertionError("backward walk failed to terminate")

    def built_cycle(v):
        base = (v - 1) * width
        cycle = [base]
        while len(cycle) < width:
            cycle.append(slot_succ[cycle[-1]])
        assert slot_succ[cycle[-1]] == base
        return cycle

    def upper_scan(k_low, ignore):
        cycles = [built_cycle(v) for v in range(k_low, n + 1)]
        partner = [UNPAIRED if d in ignore else p
                   for d, p in enumerate(slot_partner)]
        for d in ignore:
            partner[slot_partner[d]] = UNPAIRED
        return _boundary_scan(cycles, partner, dart_vertex, total)

    records = []
    for k in range(n - 2, 0, -1):
        base_k = (k - 1) * width
        active = set()
        for j, v_up in enumerate(range(n, k, -1)):
            frees = unpaired_at[v_up]
            assert len(frees) == k
            chosen = frees[int(rng.integers(k))]
            pair(base_k + j, chosen)
            active.add(chosen)

        one_open, potential, noncontrib = [], [], []
        for j in range(n - k):
            mine = base_k + j
            start = walk_start_before(slot_partner[mine], active)
            if start == slot_partner[mine]:
                one_open.append(mine)
            elif start in active:
                potential.append(mine)
            else:
                noncontrib.append(mine)
        noncontrib += [base_k + j for j in range(n - k, width)]
        strongly = sum(1 for _, _, s in upper_scan(k + 1, active) if s)
        order = sorted(one_open) + sorted(potential) + sorted(noncontrib)

        chain_start = {d: d for d in order}
        chain_end = {d: d for d in order}
        no_pred = set(order)
        closed_total = 0
        for i, d in enumerate(order):
            if i < width - 1:
                banned = chain_start[d]
                options = sorted(no_pred - {banned})
                assert len(options) == width - i - 1
                nxt = options[int(rng.integers(len(options)))]
            else:
                nxt = chain_start[d]
            slot_succ[d] = nxt
            slot_pred[nxt] = d

            closed = 0
            mate = slot_partner[d]
            if mate != UNPAIRED:
                cur = nxt
                for _ in range(total + 1):
                    if cur == mate:
                        closed = 1
                        break
                    m2 = slot_partner[cur]
                    if m2 == UNPAIRED or slot_succ[m2] == -1:
                        break
                    cur = slot_succ[m2]
                else:
                    raise AssertionError("face walk failed to terminate")
            assert closed <= (2 if k == 1 and i == width - 1 else 1)
            closed_total += closed

            no_pred.discard(nxt)
            start = chain_start.pop(d)
            end = chain_end.pop(nxt)
            if nxt != start:
                chain_start[end] = start
                chain_end[start] = end

        records.append(StepRecord(
            step=k,
            one_open=len(one_open),
            potential=len(potential),
            strongly_2_open=strongly,
            faces_closed=closed_total,
            temporary_faces_after=len(upper_scan(k, set())),
        ))

    m = _emit(n, slot_partner, slot_succ)
    trace = ProcessTrace(records)
    assert trace.total_faces_closed == count_faces(m)
    return m, trace


# ---------------------------------------------------------------------------
# Monte Carlo harness


def _chunk_sizes(trials: int):
    sizes = []
    left = trials
    while left > 0:
        take = min(CHUNK, left)
        sizes.append(take)
        left -= take
    return sizes


def _batch_face_counts(graph: Graph, size: int, rng) -> np.ndarray:
    rotations = _batch.batch_uniform_rotations(graph, size, rng)
    orbit = _batch.batch_cycle_counts(_batch.face_permutation(rotations))
    shift = graph.edgeless_component_count - graph.component_count + 1
    return orbit.astype(np.int64) + shift


def _collect_chunk(source, size: int, rng, statistic: str) -> np.ndarray:
    if isinstance(source, Graph):
        faces = _batch_face_counts(source, size, rng)
        if statistic == "faces":
            return faces
        g = source
        euler = len(g.edges) - g.n + g.component_count + 1
        twice = euler - faces
        assert not np.any(twice & 1), "odd Euler defect in genus statistic"
        return twice >> 1
    values = np.empty(size, dtype=np.int64)
    for i in range(size):
        m = source(rng)
        if isinstance(m, tuple):
            m = m[0]
        values[i] = count_faces(m) if statistic == "faces" else genus(m)
    return values


def estimate_expected_faces(source, trials: int, seed: int,
                            statistic: str = "faces",
                            workers: int = 1) -> Estimate:
    """Chunked Monte Carlo mean of a face statistic.

    `source` is either a Graph (sampled with uniform independent rotations)
    or a callable rng -> CombMap (or (CombMap, extras) tuple).  Chunk c of
    trials draws from the (seed, c) substream and sums are integer-exact,
    so the result does not depend on the worker count.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    if statistic not in ("faces", "genus"):
        raise ValueError(f"unknown statistic {statistic!r}")
    sizes = _chunk_sizes(trials)

    def run(c):
        values = _collect_chunk(source, sizes[c], substream(seed, c),
                                statistic)
        return int(values.sum()), int((values * values).sum())

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, range(len(sizes))))
    else:
        parts = [run(c) for c in range(len(sizes))]
    sx = sum(p[0] for p in parts)
    sxx = sum(p[1] for p in parts)

    mean = sx / trials
    if trials > 1:
        var = (sxx - sx * sx / trials) / (trials - 1)
        stderr = math.sqrt(max(var, 0.0) / trials)
    else:
        stderr = 0.0
    half = 1.96 * stderr
    return Estimate(mean=mean, stderr=stderr, trials=trials,
                    ci95=(mean - half, mean + half), seed=seed)


def sample_statistics(source, trials: int, seed: int):
    """Per-trial (faces, genus) pairs for CSV output, chunk-deterministic."""
    sizes = _chunk_sizes(trials)
    out = []
    for c, size in enumerate(sizes):
        rng = substream(seed, c)
        if isinstance(source, Graph):
            faces = _batch_face_counts(source, size, rng)
            g = source
            euler = len(g.edges) - g.n + g.component_count + 1
            for f in faces.tolist():
                out.append((f, (euler - f) // 2))
        else:
            for _ in range(size):
                m = source(rng)
                if isinstance(m, tuple):
                    m = m[0]
                out.append((count_faces(m), genus(m)))
    return out


# ---------------------------------------------------------------------------
# sparse random graphs


def _random_gnp_graph(n: int, p: float, rng) -> Graph:
    pairs = [(a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1)]
    keep = rng.random(len(pairs)) < p
    return Graph(n, [pr for pr, k in zip(pairs, keep) if k])


def gnp_experiment(n: int, p: float, trials: int, seed: int,
                   connected_only: bool = False):
    """Mean faces of a random embedding of G(n, p) against ln(p n^2).

    Returns (Estimate, ln(p n^2), mean / ln(p n^2)).  Disconnected samples
    are kept and counted under the face convention unless connected_only
    asks for rejection sampling.
    """
    if not 0 < p <= 1:
        raise ValueError("edge probability must be in (0, 1]")
    if trials < 1:
        raise ValueError("trials must be positive")
    values = []
    chunk = 0
    while len(values) < trials:
        rng = substream(seed, chunk)
        chunk += 1
        for _ in range(min(CHUNK, trials - len(values))):
            g = _random_gnp_graph(n, p, rng)
            if connected_only and g.component_count > 1:
                continue
            values.append(count_faces(sample_uniform(g, rng)))
        if chunk > 1000 * (trials // CHUNK + 1):
            raise RuntimeError("rejection sampling made no progress")
    sx = sum(values)
    sxx = sum(v * v for v in values)
    mean = sx / trials
    if trials > 1:
        var = (sxx - sx * sx / trials) / (trials - 1)
        stderr = math.sqrt(max(var, 0.0) / trials)
    else:
        stderr = 0.0
    half = 1.96 * stderr
    est = Estimate(mean=mean, stderr=stderr, trials=trials,
                   ci95=(mean - half, mean + half), seed=seed)
    reference = math.log(p * n * n)
    return est, reference, mean / reference
