"""
Tests for Hadamard predicates and the MUBH construction.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add the project root to Python path for imports
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from mubh.core_matrix import SignMatrix
from mubh.errors import ConstructionError, DimensionError, NotHadamardError
from mubh.hadamard import (
    BushLayout,
    HadamardMatrix,
    build_mubh,
    bush_product_check,
    check_mubh_parameters,
    enumerate_bush_type,
    find_unbiased_pair,
    is_bush_type,
    is_bush_type_by_block_sums,
    is_regular,
    row_and_column_sums,
    sylvester,
    unbiased_witness,
    verify_mubh_family,
)


@pytest.fixture(scope="module")
def family_2_3():
    return build_mubh(2, 3)


class TestHadamardMatrix:
    """Orthogonality is checked on construction."""

    def test_sylvester_orders(self):
        for k in range(5):
            h = sylvester(k)
            assert h.order == 2 ** k
            assert np.all(h.entries[0] == 1)

    def test_non_orthogonal_rows_are_rejected(self):
        with pytest.raises(NotHadamardError) as excinfo:
            HadamardMatrix(SignMatrix([[1, 1], [1, 1]]))
        assert "Rows 0 and 1" in str(excinfo.value)

    def test_zero_entry_is_rejected(self):
        with pytest.raises(NotHadamardError):
            HadamardMatrix(SignMatrix([[1, 0], [0, 1]]))

    def test_non_square_is_rejected(self):
        with pytest.raises(DimensionError):
            HadamardMatrix(SignMatrix([[1, 1]]))

    def test_bush_layout(self):
        layout = BushLayout.for_order(16)
        assert (layout.block, layout.n) == (4, 2)
        with pytest.raises(DimensionError):
            BushLayout.for_order(8)


class TestPredicates:
    """Bush-type, regularity and unbiasedness."""

    def test_sylvester_is_not_bush_type(self):
        h = sylvester(4)
        assert not is_bush_type(h)
        assert not is_bush_type_by_block_sums(h)

    def test_sylvester_16_is_not_regular(self):
        rows, _ = row_and_column_sums(sylvester(4))
        assert rows[0] == 16 and rows[1] == 0
        assert not is_regular(sylvester(4))

    def test_constructed_matrices_are_bush_type_and_regular(self, family_2_3):
        for h in family_2_3:
            assert is_bush_type(h)
            assert is_bush_type_by_block_sums(h)
            assert is_regular(h)
            rows, cols = row_and_column_sums(h)
            assert np.all(rows == 4) and np.all(cols == 4)

    def test_constructed_family_is_pairwise_unbiased(self, family_2_3):
        for a in range(3):
            for b in range(a + 1, 3):
                witness = unbiased_witness(family_2_3[a], family_2_3[b])
                assert witness is not None
                assert bush_product_check(family_2_3[a], family_2_3[b])

    def test_matrix_is_not_unbiased_with_itself(self, family_2_3):
        assert unbiased_witness(family_2_3[0], family_2_3[0]) is None

    def test_witness_needs_square_order(self):
        with pytest.raises(DimensionError):
            unbiased_witness(sylvester(3), sylvester(3))

    def test_bush_product_check_needs_an_unbiased_pair(self, family_2_3):
        with pytest.raises(NotHadamardError):
            bush_product_check(family_2_3[0], family_2_3[0])


class TestConstruction:
    """build_mubh and its parameter checks."""

    def test_family_2_3(self, family_2_3):
        assert len(family_2_3) == 3
        assert all(h.order == 16 for h in family_2_3)
        verify_mubh_family(family_2_3)

    def test_construction_is_deterministic(self, family_2_3):
        again = build_mubh(2, 3)
        assert all(a == b for a, b in zip(family_2_3, again))

    def test_smallest_family(self):
        family = build_mubh(1, 1)
        assert len(family) == 1
        assert family[0].order == 4

    def test_m_above_the_bound_cites_it(self):
        with pytest.raises(ConstructionError) as excinfo:
            check_mubh_parameters(2, 4)
        assert "2n - 1 = 3" in str(excinfo.value)

    def test_n_three_is_unavailable(self):
        with pytest.raises(ConstructionError) as excinfo:
            build_mubh(3, 2)
        assert "power of two" in str(excinfo.value)

    def test_m_zero(self):
        with pytest.raises(ConstructionError):
            check_mubh_parameters(2, 0)

    def test_duplicate_member_fails_verification(self, family_2_3):
        with pytest.raises(ConstructionError):
            verify_mubh_family([family_2_3[0], family_2_3[0]])

    @pytest.mark.slow
    def test_family_4_7(self):
        family = build_mubh(4, 7)
        assert len(family) == 7
        assert all(h.order == 64 for h in family)


class TestOddSearch:
    """Exhaustive search at order 4."""

    def test_exactly_four_bush_type_matrices(self):
        found = enumerate_bush_type(4)
        assert len(found) == 4
        assert all(is_bush_type(h) and is_regular(h) for h in found)

    def test_no_unbiased_pair_at_order_four(self):
        assert find_unbiased_pair(enumerate_bush_type(4)) is None

    def test_search_is_limited_to_order_four(self):
        with pytest.raises(ConstructionError):
            enumerate_bush_type(16)
