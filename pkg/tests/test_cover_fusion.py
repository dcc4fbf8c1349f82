"""
Tests for the 9-class double cover and its 4-class fusion.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add the project root to Python path for imports
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from mubh.cover_fusion import (
    COVER_FIBER_CLASSES,
    double_cover,
    fusion_four,
    project_to_base,
    verify_cover_tables,
)
from mubh.hadamard import build_mubh
from mubh.mubh_scheme import build_five_class, gramian
from mubh.scheme_core import RelationPartition, fibers, is_uniform, verify_scheme
from mubh.spectral import (
    closed_form_PQ,
    find_q_polynomial_ordering,
    idempotents_from_Q,
    krein_params,
    q_structure,
)


@pytest.fixture(scope="module")
def cover():
    return double_cover(build_five_class(gramian(build_mubh(2, 3), 2)))


@pytest.fixture(scope="module")
def fused(cover):
    return fusion_four(cover)


class TestDoubleCover:
    """Nine relations on two copies of the base scheme."""

    def test_size_and_classes(self, cover):
        assert cover.rels.size == 128
        assert cover.rels.d == 8

    def test_valencies(self, cover):
        assert cover.tensor.valencies().tolist() == [1, 3, 3, 24, 12, 12, 36, 36, 1]

    def test_projection_recovers_the_base(self, cover):
        assert project_to_base(cover) == cover.base.rels

    def test_inconsistent_copies_do_not_project(self, cover):
        relmap = cover.rels.relmap.astype(np.int64).copy()
        size = cover.rels.size // 2
        x, y = (int(v) for v in np.argwhere(relmap[:size, size:] == 5)[0])
        relmap[x, size + y] = relmap[size + y, x] = 4
        broken = type(cover)(cover.base, RelationPartition(relmap, 8), cover.tensor)
        assert project_to_base(broken) is None

    def test_cover_is_uniform(self, cover):
        result = is_uniform(cover.rels, fibers(cover.rels, COVER_FIBER_CLASSES), cover.tensor)
        assert result.uniform

    @pytest.mark.parametrize("n, m", [(1, 1), (2, 2), pytest.param(4, 7, marks=pytest.mark.slow)])
    def test_uniform_across_the_grid(self, n, m):
        other = double_cover(build_five_class(gramian(build_mubh(n, m), n, relaxed=True)))
        assert is_uniform(other.rels, fibers(other.rels, COVER_FIBER_CLASSES), other.tensor)

    def test_printed_tables(self, cover):
        report = verify_cover_tables(cover)
        assert report.q_certified
        assert report.krein_nonnegative
        assert report.displayed_index == 8
        assert 8 in report.matching_indices
        assert report.krein_mismatch is None
        assert report.passed


class TestFusionFour:
    """The 4-class fusion of the cover."""

    def test_is_a_four_class_scheme(self, fused):
        assert fused.d == 4
        assert verify_scheme(fused).valencies().tolist() == [1, 30, 48, 48, 1]

    def test_q_table_and_flags(self, fused):
        eig = idempotents_from_Q(fused, closed_form_PQ(2, 3, "fusion4")[1])
        krein = krein_params(eig)
        assert krein.first_negative() is None
        flags = q_structure(krein, find_q_polynomial_ordering(krein))
        assert flags.q_polynomial
        assert flags.q_bipartite
        assert flags.q_antipodal
