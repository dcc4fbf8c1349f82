"""
Tests for relation partitions, scheme verification, fibers and uniformity.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add the project root to Python path for imports
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from mubh.core_matrix import BinMatrix
from mubh.errors import DimensionError, EntryError, ImprimitivityError, SchemeAxiomError
from mubh.hadamard import build_mubh
from mubh.mubh_scheme import build_five_class, gramian
from mubh.scheme_core import (
    RelationPartition,
    fibers,
    fuse,
    is_deza,
    is_srg,
    is_uniform,
    quotient_scheme,
    recomposition_holds,
    relation_classes,
    verify_scheme,
)


def pentagon():
    """Distance classes of the 5-cycle."""
    v = np.arange(5)
    gap = np.abs(v[:, None] - v[None, :])
    return RelationPartition(np.minimum(gap, 5 - gap))


@pytest.fixture(scope="module")
def five_2_2():
    return build_five_class(gramian(build_mubh(2, 2), 2))


class TestRelationPartition:
    """Partition axioms are checked on construction."""

    def test_asymmetric_map_names_the_pair(self):
        with pytest.raises(SchemeAxiomError) as excinfo:
            RelationPartition([[0, 1, 2], [1, 0, 1], [1, 2, 0]])
        assert excinfo.value.counterexample == {"x": 0, "y": 2}

    def test_nonzero_diagonal(self):
        with pytest.raises(SchemeAxiomError) as excinfo:
            RelationPartition([[0, 1], [1, 1]])
        assert excinfo.value.counterexample == {"x": 1, "y": 1}

    def test_off_diagonal_zero(self):
        with pytest.raises(SchemeAxiomError):
            RelationPartition([[0, 0], [0, 0]])

    def test_empty_class(self):
        with pytest.raises(SchemeAxiomError) as excinfo:
            RelationPartition([[0, 1], [1, 0]], d=2)
        assert excinfo.value.counterexample == {"k": 2}

    def test_negative_entry(self):
        with pytest.raises(EntryError):
            RelationPartition([[0, -1], [-1, 0]])

    def test_non_square(self):
        with pytest.raises(DimensionError):
            RelationPartition([[0, 1]])

    def test_adjacency_and_valencies(self):
        rels = pentagon()
        assert rels.d == 2
        assert rels.valencies().tolist() == [1, 2, 2]
        assert isinstance(rels.adjacency(1), BinMatrix)
        with pytest.raises(DimensionError):
            rels.adjacency(3)

    def test_permuted_relabels_vertices(self):
        rels = pentagon()
        perm = [2, 0, 1, 4, 3]
        moved = rels.permuted(perm)
        assert moved.relmap[0, 1] == rels.relmap[2, 0]
        with pytest.raises(DimensionError):
            rels.permuted([0, 0, 1, 2, 3])

    def test_restricted(self):
        sub, present = pentagon().restricted([0, 1, 2])
        assert present == [0, 1, 2]
        assert sub.size == 3


class TestVerifyScheme:
    """Both verification paths give the same tensor and name counterexamples."""

    def test_pentagon_tensor(self):
        tensor = verify_scheme(pentagon())
        assert tensor.valencies().tolist() == [1, 2, 2]
        assert tensor.coefficients(1, 1) == {0: 2, 2: 1}
        assert tensor[1, 2, 1] == 1

    def test_counting_matches_products(self, five_2_2):
        by_products = verify_scheme(five_2_2.rels, method="products")
        by_counting = verify_scheme(five_2_2.rels, method="counting")
        assert by_products == by_counting

    def test_recomposition(self, five_2_2):
        assert recomposition_holds(five_2_2.rels, five_2_2.tensor)

    @pytest.mark.parametrize("method", ["products", "counting"])
    def test_flipped_symmetric_pair_is_caught(self, five_2_2, method):
        relmap = five_2_2.rels.relmap.copy()
        x, y = (int(v) for v in np.argwhere(relmap == 4)[0])
        relmap[x, y] = relmap[y, x] = 5
        with pytest.raises(SchemeAxiomError) as excinfo:
            verify_scheme(RelationPartition(relmap, 5), method=method)
        assert set(excinfo.value.counterexample) == {"i", "j", "k", "x", "y"}

    def test_non_scheme_path_graph(self):
        # The path on three vertices: distance classes are not a scheme
        rels = RelationPartition([[0, 1, 2], [1, 0, 1], [2, 1, 0]])
        with pytest.raises(SchemeAxiomError):
            verify_scheme(rels)

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            verify_scheme(pentagon(), method="guess")


class TestImprimitivity:
    """Fibers, quotients and uniformity of the 5-class scheme."""

    def test_fibers_of_the_five_class_scheme(self, five_2_2):
        partition = fibers(five_2_2.rels, (0, 1, 2))
        assert partition.count == 3
        assert partition.fiber_size == 16
        assert partition.permutation() == list(range(48))

    def test_index_set_must_contain_zero(self, five_2_2):
        with pytest.raises(ImprimitivityError):
            fibers(five_2_2.rels, (1, 2))

    def test_non_clique_components(self, five_2_2):
        with pytest.raises(ImprimitivityError):
            fibers(five_2_2.rels, (0, 2))

    def test_relation_classes(self, five_2_2):
        classes = relation_classes(five_2_2.tensor, (0, 1, 2))
        assert classes[0] == (0, 1, 2)
        assert classes[1] == (3, 4, 5)

    def test_quotient_is_complete(self, five_2_2):
        quotient = quotient_scheme(five_2_2.rels, (0, 1, 2), five_2_2.tensor)
        assert quotient.rels.d == 1
        assert quotient.rels.size == 3

    def test_five_class_scheme_is_uniform(self, five_2_2):
        result = is_uniform(five_2_2.rels, fibers(five_2_2.rels, (0, 1, 2)), five_2_2.tensor)
        assert result
        assert result.counterexample == {}

    @pytest.mark.parametrize("n, m", [(1, 1), (2, 2), (2, 3), pytest.param(4, 7, marks=pytest.mark.slow)])
    def test_uniform_across_the_grid(self, n, m):
        scheme = build_five_class(gramian(build_mubh(n, m), n, relaxed=True))
        assert is_uniform(scheme.rels, fibers(scheme.rels, (0, 1, 2)), scheme.tensor)

    def test_swapped_cross_block_is_not_uniform(self, five_2_2):
        relmap = five_2_2.rels.relmap.astype(np.int64).copy()
        cross = relmap[:16, 16:32]
        swapped = np.where(cross == 4, 5, np.where(cross == 5, 4, cross))
        relmap[:16, 16:32] = swapped
        relmap[16:32, :16] = swapped.T
        scrambled = RelationPartition(relmap, 5)
        result = is_uniform(scrambled, fibers(scrambled, (0, 1, 2)), five_2_2.tensor)
        assert not result
        assert set(result.counterexample) == {"U", "V", "W", "i", "j", "k", "x", "y"}

    def test_quotient_by_the_diagonal_is_the_scheme(self, five_2_2):
        quotient = quotient_scheme(five_2_2.rels, (0,), five_2_2.tensor)
        assert quotient.classes == tuple((i,) for i in range(6))
        assert quotient.fibers.fiber_size == 1
        assert quotient.rels == five_2_2.rels

    def test_quotient_by_blocks(self, five_2_2):
        quotient = quotient_scheme(five_2_2.rels, (0, 1), five_2_2.tensor)
        assert quotient.classes == ((0, 1), (2,), (3,), (4, 5))
        assert quotient.fibers.count == 12
        assert quotient.fibers.fiber_size == 4
        assert quotient.rels.valencies().tolist() == [1, 3, 2, 6]


class TestGraphs:
    """SRG and Deza recognition."""

    def test_pentagon_is_strongly_regular(self):
        assert is_srg(pentagon().adjacency(1)) == (5, 2, 0, 1)

    def test_pentagon_is_deza(self):
        assert is_deza(pentagon().adjacency(1)) == (5, 2, 1, 0)

    def test_irregular_graph(self):
        star = BinMatrix([[0, 1, 1], [1, 0, 0], [1, 0, 0]])
        assert is_srg(star) is None
        assert is_deza(star) is None

    def test_loops_are_rejected(self):
        with pytest.raises(EntryError):
            is_srg(BinMatrix([[1, 0], [0, 0]]))


class TestFuse:
    """Fusion of relation classes."""

    def test_fused_classes(self, five_2_2):
        fused = fuse(five_2_2.rels, ([0], [3, 4], [5], [1, 2]))
        assert fused.d == 3
        assert verify_scheme(fused).valencies().tolist() == [1, 20, 12, 15]

    def test_groups_must_partition(self, five_2_2):
        with pytest.raises(DimensionError):
            fuse(five_2_2.rels, ([0], [1, 2]))

    def test_first_group_is_zero(self, five_2_2):
        with pytest.raises(DimensionError):
            fuse(five_2_2.rels, ([0, 1], [2], [3], [4], [5]))
