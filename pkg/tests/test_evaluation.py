import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from simgraph.evaluation import ContingencyTable, all_indices, clustering_error, nmi, purity, rand_index
from simgraph.spectral import ClusteringResult

TARGET = [1, 1, 2, 2]
CROSSED = [1, 2, 1, 2]
ONE_THREE = [1, 2, 2, 2]

label_pairs = st.integers(1, 10).flatmap(
    lambda n: st.tuples(st.lists(st.integers(1, 4), min_size=n, max_size=n),
                        st.lists(st.integers(1, 4), min_size=n, max_size=n))
)


def test_contingency_table():
    t = ContingencyTable.from_labels(ONE_THREE, TARGET)
    assert t.counts.tolist() == [[1, 0], [1, 2]]
    assert t.n == 4 and t.row_sums.tolist() == [1, 3] and t.col_sums.tolist() == [2, 2]
    with pytest.raises(ValueError):
        ContingencyTable.from_labels([1, 2], [1])


def test_identical_partitions():
    for labels in ([1, 1, 2, 2, 3], [5, 3, 3, 1]):
        assert (nmi(labels, labels), purity(labels, labels), rand_index(labels, labels),
                clustering_error(labels, labels)) == (1.0, 1.0, 1.0, 0.0)


def test_crossed_partition():
    assert nmi(CROSSED, TARGET) == pytest.approx(0.0, abs=1e-15)
    assert rand_index(CROSSED, TARGET) == pytest.approx(1 / 3, rel=1e-15)


def test_one_vs_three():
    # frozen from the entropy oracle in tests/oracles.py
    assert nmi(ONE_THREE, TARGET) == pytest.approx(0.3437110184854508, abs=1e-12)
    assert purity(ONE_THREE, TARGET) == 0.75
    assert clustering_error(ONE_THREE, TARGET) == 0.25


def test_degenerate_cases():
    assert purity([1, 1, 1, 1], TARGET) == 0.5
    assert rand_index([1, 2, 3, 4], [1, 1, 1, 1]) == 0.0
    assert nmi([1, 1, 1], [1, 1, 1]) == 1.0
    assert nmi([1, 1, 1], [1, 2, 3]) == 0.0
    assert clustering_error([2, 2, 1, 1], TARGET) == 0.0


def test_accepts_clustering_result():
    res = ClusteringResult(np.array([2, 2, 1, 1]), 2, 2)
    assert all_indices(res, TARGET) == {"nmi": 1.0, "purity": 1.0, "rand": 1.0, "ce": 0.0}


@given(label_pairs)
def test_match_brute_force(pair):
    a, b = pair
    assert abs(nmi(a, b) - oracles.nmi(a, b)) <= 1e-12
    assert abs(purity(a, b) - oracles.purity(a, b)) <= 1e-12
    assert abs(rand_index(a, b) - oracles.rand_index(a, b)) <= 1e-12
    assert abs(clustering_error(a, b) - oracles.clustering_error(a, b)) <= 1e-12


@given(label_pairs, st.permutations([1, 2, 3, 4]), st.permutations([1, 2, 3, 4]))
def test_relabeling_invariance(pair, p, q):
    a, b = pair
    a2 = [p[x - 1] for x in a]
    b2 = [q[x - 1] for x in b]
    assert all_indices(a2, b2) == pytest.approx(all_indices(a, b), abs=1e-12)


@given(label_pairs)
def test_nmi_symmetric_and_bounded(pair):
    a, b = pair
    assert nmi(a, b) == pytest.approx(nmi(b, a), abs=1e-12)
    for v in all_indices(a, b).values():
        assert 0.0 <= v <= 1.0
