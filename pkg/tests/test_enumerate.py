from fractions import Fraction

import numpy as np
import pytest

from mapface import _batch
from mapface.combmap import Graph
from mapface.enumerate import (
    FaceCensus,
    _OdometerPlan,
    _short_face_sweep,
    enumeration_budget,
    expected_faces_exact,
    expected_short_faces_exact,
    face_distribution,
    genus_distribution,
    is_complete,
)
from mapface.errors import RefusalError


def test_is_complete():
    assert is_complete(Graph.complete(5))
    assert not is_complete(Graph(3, [(1, 2), (2, 3)]))
    assert not is_complete(Graph(2, [(1, 2), (1, 2)]))
    assert not is_complete(Graph(1, [(1, 1)]))


def test_k3_census():
    c = face_distribution(Graph.complete(3))
    assert c.by_faces == {2: 1}
    assert c.total == 1
    assert c.expected_faces == 2


def test_k4_census_matches_known_distribution():
    c = face_distribution(Graph.complete(4))
    assert c.by_faces == {2: 14, 4: 2}
    assert c.by_genus == {0: 2, 1: 14}
    assert c.total == 16 == c.space_size
    assert c.expected_faces == Fraction(9, 4)
    assert c.expected_genus == Fraction(7, 8)
    assert c.expected_genus_float == 0.875


def test_k5_census_matches_known_distribution():
    c = face_distribution(Graph.complete(5))
    assert c.by_faces == {1: 2340, 3: 4974, 5: 462}
    assert c.by_genus == {1: 462, 2: 4974, 3: 2340}
    assert c.total == 6**5
    assert c.expected_faces == Fraction(19572, 7776)
    assert round(c.expected_faces_float, 3) == 2.517
    assert c.expected_genus == Fraction(17430, 7776)
    assert round(c.expected_genus_float, 2) == 2.24


def test_genus_distribution_is_same_census():
    c = genus_distribution(Graph.complete(4))
    assert c.by_genus == {0: 2, 1: 14}


def test_genus_view_connected_by_euler_buckets():
    c = face_distribution(Graph.complete(5))
    for f, cnt in c.by_faces.items():
        g = (10 - 5 - f + 2) // 2
        assert c.by_genus[g] == cnt


def test_reduced_census_equals_full_after_rescale():
    for n, factor in ((4, 2), (5, 6)):
        full = face_distribution(Graph.complete(n))
        red = face_distribution(Graph.complete(n), fix_first_rotation=True)
        assert red.rescale == factor
        assert red.by_faces == full.by_faces
        assert red.by_genus == full.by_genus
        assert red.total == full.total


def test_reduction_on_asserted_vertex_transitive_graph():
    # complete bipartite 3+3 graph is vertex-transitive but not complete
    edges = [(i, j) for i in (1, 2, 3) for j in (4, 5, 6)]
    g = Graph(6, edges)
    full = face_distribution(g)
    with pytest.raises(RefusalError):
        face_distribution(g, fix_first_rotation=True)
    red = face_distribution(g, fix_first_rotation=True,
                            assert_vertex_transitive=True)
    assert red.by_faces == full.by_faces
    assert full.total == 2**6


def test_shard_union_equals_unsharded():
    g = Graph.complete(5)
    whole = face_distribution(g)
    for parts in (3, 7):
        shards = [face_distribution(g, shard=(i, parts)) for i in range(parts)]
        merged = shards[0]
        for s in shards[1:]:
            merged = merged.merge(s)
        assert merged.by_faces == whole.by_faces
        assert merged.total == whole.total


def test_bad_shard_rejected():
    with pytest.raises(RefusalError):
        face_distribution(Graph.complete(4), shard=(3, 3))


def test_workers_do_not_change_counts():
    g = Graph.complete(5)
    assert face_distribution(g, workers=3).by_faces == \
        face_distribution(g).by_faces


def test_budget_refusal_names_space_size():
    with pytest.raises(RefusalError) as exc:
        face_distribution(Graph.complete(5), budget=100)
    assert "7776" in str(exc.value)


def test_budget_env_override(monkeypatch):
    monkeypatch.setenv("MAPFACE_BUDGET", "100")
    assert enumeration_budget() == 100
    with pytest.raises(RefusalError):
        face_distribution(Graph.complete(5))
    monkeypatch.setenv("MAPFACE_BUDGET", "10000")
    assert face_distribution(Graph.complete(5)).total == 7776


def test_expected_faces_exact_small_values():
    assert expected_faces_exact(Graph.complete(3)) == 2
    assert expected_faces_exact(Graph.complete(4)) == Fraction(9, 4)


def test_disconnected_census_uses_face_convention():
    # two triangles: each factor contributes independently, faces add minus 1
    g = Graph(6, [(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)])
    c = face_distribution(g)
    assert c.by_faces == {3: 1}
    assert c.by_genus == {0: 1}


# ---------------------------------------------------------------------------
# short faces


def falling(n, k):
    out = 1
    for i in range(k):
        out *= n - i
    return out


@pytest.mark.parametrize("n", [4, 5])
def test_short_face_averages_match_product_formula(n):
    for k in range(3, n + 1):
        got = expected_short_faces_exact(n, k)
        assert got == Fraction(falling(n, k), k * (n - 2) ** k)


def test_short_face_frozen_values():
    assert expected_short_faces_exact(5, 3) == Fraction(20, 27)
    assert expected_short_faces_exact(5, 4) == Fraction(10, 27)
    assert expected_short_faces_exact(5, 5) == Fraction(8, 81)
    assert expected_short_faces_exact(4, 3) == 1
    assert expected_short_faces_exact(4, 4) == Fraction(3, 8)


def reduced_sweep_average(n, k):
    graph = Graph.complete(n)
    plan = _OdometerPlan(graph, reduced=True)
    flip = np.arange(graph.num_darts) ^ 1
    dart_vertex = graph.dart_vertex.astype(np.int32)
    idx = np.arange(plan.space, dtype=np.int64)
    totals = _batch.short_walk_dart_counts(plan.rotations(idx)[:, flip],
                                           dart_vertex, n)
    assert totals[k] % k == 0
    return Fraction(int(totals[k]) // k, plan.space)


@pytest.mark.parametrize("n", [4, 5])
def test_reduced_sweep_matches_full_space(n):
    # validates the first-rotation reduction for the short-face statistic
    # before it is trusted at n = 6
    for k in range(3, n + 1):
        assert reduced_sweep_average(n, k) == expected_short_faces_exact(n, k)


def test_short_face_domain_refusals():
    with pytest.raises(RefusalError):
        expected_short_faces_exact(7, 3)
    with pytest.raises(RefusalError):
        expected_short_faces_exact(5, 2)
    with pytest.raises(RefusalError):
        expected_short_faces_exact(5, 6)
    with pytest.raises(RefusalError):
        expected_short_faces_exact(2, 3)


# ---------------------------------------------------------------------------
# batch engine


def test_batch_cycle_counts_against_direct_trace():
    rng = np.random.default_rng(5)
    for width in (2, 6, 12, 30):
        perms = np.stack([rng.permutation(width) for _ in range(40)])
        got = _batch.batch_cycle_counts(perms.astype(np.int32))
        for row, count in zip(perms, got):
            seen = set()
            orbits = 0
            for d in range(width):
                if d in seen:
                    continue
                orbits += 1
                cur = d
                while cur not in seen:
                    seen.add(cur)
                    cur = row[cur]
            assert count == orbits


def test_batch_uniform_rotation_rows_are_valid():
    from mapface.combmap import CombMap, RotationSystem
    g = Graph.complete(5)
    rng = np.random.default_rng(9)
    rows = _batch.batch_uniform_rotations(g, 50, rng)
    for row in rows:
        CombMap(g, RotationSystem(g, row.astype(np.int64)))  # validates
