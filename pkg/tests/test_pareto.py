import random

import pytest

from rakelink.model import Bounds
from rakelink.objectives import ObjectiveVector
from rakelink.pareto import (
    clusters_csv,
    dominates,
    find_clusters,
    front_minima,
    front_minima_csv,
    fronts_csv,
    sort_fronts,
)
from rakelink.sweep import SweepRecord


def peel_oracle(vectors):
    """Repeatedly strip the non-dominated set; the obvious quadratic method."""
    remaining = list(range(len(vectors)))
    fronts = []
    while remaining:
        front = [
            i
            for i in remaining
            if not any(dominates(vectors[j], vectors[i]) for j in remaining if j != i)
        ]
        fronts.append(tuple(sorted(front)))
        remaining = [i for i in remaining if i not in front]
    return tuple(fronts)


def random_vectors(rng, n, dims=5, levels=8):
    return [tuple(rng.randrange(levels) for _ in range(dims)) for _ in range(n)]


class TestDominates:
    def test_front1_minima_dominate_front11_minima(self):
        assert dominates((92, 720, 0, 0.82, 43.75), (95, 13080, 9.46, 2.77, 118.85))

    def test_not_reflexive(self):
        v = (1.0, 2.0, 3.0, 4.0, 5.0)
        assert not dominates(v, v)

    def test_incomparable(self):
        assert not dominates((1, 5, 0, 0, 0), (2, 3, 0, 0, 0))
        assert not dominates((2, 3, 0, 0, 0), (1, 5, 0, 0, 0))

    def test_single_strict_improvement_suffices(self):
        assert dominates((1, 2, 3), (1, 2, 4))


class TestSortFronts:
    def test_totally_ordered_chain(self):
        vectors = [(k, k, k, k, k) for k in range(5)]
        fa = sort_fronts(vectors)
        assert fa.fronts == ((0,), (1,), (2,), (3,), (4,))
        assert fa.front_of == (1, 2, 3, 4, 5)

    def test_mutually_incomparable(self):
        vectors = [(1, 5), (2, 4), (3, 3), (4, 2), (5, 1)]
        fa = sort_fronts(vectors)
        assert fa.fronts == ((0, 1, 2, 3, 4),)

    def test_duplicates_share_a_front(self):
        vectors = [(1, 1), (1, 1), (2, 2)]
        fa = sort_fronts(vectors)
        assert fa.fronts == ((0, 1), (2,))

    def test_empty_input(self):
        fa = sort_fronts([])
        assert fa.fronts == ()
        assert fa.front_of == ()

    def test_matches_peeling_oracle(self):
        rng = random.Random(300)
        vectors = random_vectors(rng, 300)
        fa = sort_fronts(vectors)
        assert fa.fronts == peel_oracle(vectors)

    def test_matches_peeling_oracle_small_batches(self):
        rng = random.Random(9)
        for _ in range(20):
            vectors = random_vectors(rng, rng.randrange(1, 40), dims=rng.choice([2, 3, 5]))
            assert sort_fronts(vectors).fronts == peel_oracle(vectors)

    def test_no_intra_front_domination_and_witnesses(self):
        rng = random.Random(31)
        vectors = random_vectors(rng, 120)
        fa = sort_fronts(vectors)
        for members in fa.fronts:
            for i in members:
                for j in members:
                    assert not dominates(vectors[i], vectors[j])
        for k in range(1, len(fa.fronts)):
            for i in fa.fronts[k]:
                assert any(dominates(vectors[j], vectors[i]) for j in fa.fronts[k - 1])

    def test_fronts_partition_records(self):
        rng = random.Random(13)
        vectors = random_vectors(rng, 80)
        fa = sort_fronts(vectors)
        flat = sorted(i for members in fa.fronts for i in members)
        assert flat == list(range(80))

    def test_permutation_invariant_partition(self):
        rng = random.Random(5)
        vectors = random_vectors(rng, 50)
        fa = sort_fronts(vectors)
        perm = list(range(50))
        rng.shuffle(perm)
        shuffled = [vectors[p] for p in perm]
        fa2 = sort_fronts(shuffled)
        for new_idx, old_idx in enumerate(perm):
            assert fa2.front_of[new_idx] == fa.front_of[old_idx]


class TestFrontMinima:
    def test_singleton_front_is_itself(self):
        fa = sort_fronts([(3, 1, 4, 1, 5)])
        assert front_minima(fa, [(3, 1, 4, 1, 5)]) == ((1, (3, 1, 4, 1, 5)),)

    def test_componentwise(self):
        vectors = [(1, 9), (9, 1)]
        fa = sort_fronts(vectors)
        assert front_minima(fa, vectors) == ((1, (1, 1)),)

    def test_minima_attained_by_members(self):
        rng = random.Random(2)
        vectors = random_vectors(rng, 60)
        fa = sort_fronts(vectors)
        for k, mins in front_minima(fa, vectors):
            members = fa.fronts[k - 1]
            for d, m in enumerate(mins):
                assert any(vectors[i][d] == m for i in members)


class TestFindClusters:
    def test_all_distinct_one_cluster_each(self):
        vectors = [(1, 2), (2, 1), (0, 5)]
        fa = sort_fronts(vectors)
        clusters = find_clusters(fa, vectors, 0)
        assert all(len(c.members) == 1 for c in clusters)
        assert sum(len(c.members) for c in clusters) == 3

    def test_identical_vectors_cluster_together(self):
        vectors = [(1, 1, 1, 1, 1), (1, 1, 1, 1, 1)]
        fa = sort_fronts(vectors)
        clusters = find_clusters(fa, vectors, 0)
        assert len(clusters) == 1
        assert clusters[0].members == (0, 1)

    def test_matches_group_by_oracle(self):
        rng = random.Random(44)
        vectors = random_vectors(rng, 150, dims=3, levels=3)  # dense duplicates
        fa = sort_fronts(vectors)
        clusters = find_clusters(fa, vectors, 0)
        for members in fa.fronts:
            groups = {}
            for i in members:
                groups.setdefault(tuple(vectors[i]), []).append(i)
            ours = {c.representative: list(c.members) for c in clusters if set(c.members) <= set(members)}
            assert ours == groups
        assert len(clusters) == len({(fa.front_of[i], tuple(v)) for i, v in enumerate(vectors)})

    def test_total_clusters_equal_unique_vectors(self):
        # duplicates always land in one front, so per-front grouping is global
        rng = random.Random(45)
        vectors = random_vectors(rng, 200, dims=2, levels=4)
        fa = sort_fronts(vectors)
        clusters = find_clusters(fa, vectors, 0)
        assert len(clusters) == len(set(vectors))

    def test_epsilon_membership_anchored_to_representative(self):
        # mutually incomparable, so all three share front 1
        vectors = [(0.0, 1.0), (0.4, 0.6), (0.8, 0.2)]
        fa = sort_fronts(vectors)
        assert fa.fronts == ((0, 1, 2),)
        clusters = find_clusters(fa, vectors, 0.5)
        for c in clusters:
            for i in c.members:
                assert all(abs(x - r) <= e for x, r, e in zip(vectors[i], c.representative, c.epsilon))
        # (0.8, 0.2) sits within 0.5 of member (0.4, 0.6) but not of the
        # seed, so it starts its own cluster rather than chaining in
        assert [c.members for c in clusters] == [(0, 1), (2,)]

    def test_epsilon_scalar_equals_vector_form(self):
        rng = random.Random(46)
        vectors = [tuple(rng.uniform(0, 3) for _ in range(5)) for _ in range(40)]
        fa = sort_fronts(vectors)
        assert find_clusters(fa, vectors, 0.25) == find_clusters(fa, vectors, [0.25] * 5)

    def test_huge_epsilon_one_cluster_per_front(self):
        rng = random.Random(47)
        vectors = random_vectors(rng, 50)
        fa = sort_fronts(vectors)
        clusters = find_clusters(fa, vectors, 1e9)
        assert len(clusters) == len(fa.fronts)

    def test_epsilon_growth_never_increases_cluster_count(self):
        rng = random.Random(48)
        vectors = [tuple(rng.uniform(0, 2) for _ in range(3)) for _ in range(60)]
        fa = sort_fronts(vectors)
        counts = [len(find_clusters(fa, vectors, eps)) for eps in (0.0, 0.1, 0.5, 2.5)]
        assert counts == sorted(counts, reverse=True)

    def test_negative_epsilon_rejected(self):
        fa = sort_fronts([(1, 2)])
        with pytest.raises(ValueError):
            find_clusters(fa, [(1, 2)], -0.1)

    def test_wrong_epsilon_width_rejected(self):
        fa = sort_fronts([(1, 2)])
        with pytest.raises(ValueError):
            find_clusters(fa, [(1, 2)], [0.1, 0.1, 0.1])


class TestCsvExports:
    def _records(self):
        vecs = [
            ObjectiveVector(f1=3, f2=600, f3=0.0, f4=0.5, f5=2.0),
            ObjectiveVector(f1=4, f2=900, f3=1.0, f4=0.7, f5=3.0),
        ]
        return [
            SweepRecord(bounds=Bounds(0, 3600, 0, 40), objectives=vecs[0], solution_ref="x"),
            SweepRecord(bounds=Bounds(60, 3600, 5, 40), objectives=vecs[1], solution_ref="y"),
        ]

    def test_fronts_csv(self):
        fa = sort_fronts([(1, 1), (2, 2)])
        assert fronts_csv(fa) == "record_id,front\n0,1\n1,2\n"

    def test_front_minima_csv_header(self):
        vectors = [(1, 2, 3, 4, 5)]
        text = front_minima_csv(sort_fronts(vectors), vectors)
        lines = text.splitlines()
        assert lines[0] == "front,min_f1,min_f2,min_f3,min_f4,min_f5"
        assert lines[1] == "1,1,2,3,4,5"

    def test_clusters_csv_includes_bounds(self):
        records = self._records()
        vectors = [r.objectives.as_tuple() for r in records]
        fa = sort_fronts(vectors)
        clusters = find_clusters(fa, vectors, 0)
        lines = clusters_csv(clusters, records).splitlines()
        assert lines[0] == "front,cluster_id,record_id,w_min,w_max,d_max,v_avg_max,f1,f2,f3,f4,f5"
        assert lines[1] == "1,1,0,0,3600,0,40,3,600,0,0.5,2"
