"""Vectorized batch engines shared by the census and the Monte Carlo harness.

Everything here works on stacks of successor arrays: shape (batch, darts),
one embedding per row.  The face step for row r is
column view P[r, d] = successor[partner(d)], with the canonical pairing
partner(d) = d ^ 1.
"""
from __future__ import annotations

import numpy as np


def face_permutation(rotations: np.ndarray) -> np.ndarray:
    """Batch face-step permutation: P[:, d] = rotations[:, d ^ 1]."""
    d_count = rotations.shape[1]
    flip = np.arange(d_count) ^ 1
    return rotations[:, flip]


def batch_cycle_counts(perm: np.ndarray) -> np.ndarray:
    """Number of cycles of each row's permutation.

    Pointer doubling: propagate the minimum dart id along orbits while
    squaring the permutation, ceil(log2(width)) rounds; a cycle is then
    counted at the dart holding its own id.  O(batch * width * log(width)).
    """
    b, d = perm.shape
    ident = np.arange(d, dtype=perm.dtype)
    labels = np.broadcast_to(ident, (b, d)).copy()
    hop = perm.copy()
    for _ in range(max(1, int(d - 1).bit_length())):
        np.minimum(labels, np.take_along_axis(labels, hop, axis=1), out=labels)
        hop = np.take_along_axis(hop, hop, axis=1)
    return (labels == ident).sum(axis=1)


def batch_uniform_rotations(graph, batch: int, rng: np.random.Generator,
                            dtype=np.int32) -> np.ndarray:
    """A stack of independent uniform rotation systems of the graph.

    Each vertex's cyclic order is uniform over the (deg-1)! possibilities:
    the smallest dart is the anchor and the rest are shuffled after it.
    """
    succ = np.empty((batch, graph.num_darts), dtype=dtype)
    for v in range(1, graph.n + 1):
        darts = graph.darts_at(v)
        deg = len(darts)
        if deg == 0:
            continue
        if deg == 1:
            succ[:, darts[0]] = darts[0]
            continue
        if deg == 2:
            succ[:, darts[0]] = darts[1]
            succ[:, darts[1]] = darts[0]
            continue
        rest = np.asarray(darts[1:], dtype=dtype)
        ranks = np.argsort(rng.random((batch, deg - 1)), axis=1)
        order = np.empty((batch, deg), dtype=dtype)
        order[:, 0] = darts[0]
        order[:, 1:] = rest[ranks]
        np.put_along_axis(succ, order, np.roll(order, -1, axis=1), axis=1)
    return succ


def short_walk_dart_counts(face_perm: np.ndarray, dart_vertex: np.ndarray,
                           kmax: int) -> np.ndarray:
    """Darts on short fully-distinct faces, totalled over the batch.

    Entry k of the result counts darts whose facial walk first returns
    after exactly k steps while visiting k pairwise distinct vertices and
    k pairwise distinct edges.  Each such face of a row contributes k
    darts, so face totals are the entries divided by k.  Entries below
    k = 3 stay zero (no loops or parallel edges in the intended inputs).
    """
    b, d = face_perm.shape
    ident = np.broadcast_to(np.arange(d, dtype=face_perm.dtype), (b, d))
    walks = [ident]
    cur = face_perm
    returned = np.zeros((b, d), dtype=bool)
    counts = np.zeros(kmax + 1, dtype=np.int64)
    for k in range(1, kmax + 1):
        walks.append(cur)
        if k >= 3:
            ok = (cur == ident) & ~returned
            verts = [dart_vertex[w] for w in walks[:k]]
            edges = [w >> 1 for w in walks[:k]]
            for i in range(k):
                for j in range(i + 1, k):
                    ok &= (verts[i] != verts[j]) & (edges[i] != edges[j])
            counts[k] = int(ok.sum())
        returned |= cur == ident
        if k < kmax:
            cur = np.take_along_axis(face_perm, cur, axis=1)
    return counts
