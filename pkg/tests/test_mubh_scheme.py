"""
Tests for the Gramian bundle, the 3- and 5-class schemes, and MUBH extraction.
"""

import logging
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

# Add the project root to Python path for imports
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from mubh.errors import ConstructionError, DimensionError, ExtractionError
from mubh.hadamard import build_mubh, sylvester
from mubh.mubh_scheme import (
    build_five_class,
    build_three_class,
    extract_mubh,
    first_mismatch,
    five_class_tensor,
    gramian,
    j_form_holds,
    srg_deza_parameters,
    three_class_tensor,
    unbiased_pairs,
)
from mubh.scheme_core import fuse, is_deza, is_srg, verify_scheme


@pytest.fixture(scope="module")
def family():
    return build_mubh(2, 3)


@pytest.fixture(scope="module")
def bundle(family):
    return gramian(family, 2)


@pytest.fixture(scope="module")
def five(bundle):
    return build_five_class(bundle)


@pytest.fixture(scope="module")
def three(bundle):
    return build_three_class(bundle)


class TestGramian:
    """B = 2n(M - I) split into B1 - B2."""

    def test_shape_and_symmetry(self, bundle):
        assert bundle.size == 64
        assert bundle.order == 16
        assert np.array_equal(bundle.B.entries, bundle.B.entries.T)

    def test_diagonal_blocks_vanish(self, bundle):
        assert not bundle.B.entries[:16, :16].any()

    def test_m_is_the_identity_plus_scaled_b(self, bundle):
        assert bundle.M.entries[0, 0] == 1
        assert abs(bundle.M.entries[0, 16]) == Fraction(1, 4)

    def test_single_matrix_needs_relaxed(self, family):
        with pytest.raises(ConstructionError):
            gramian(family[:1], 2)

    def test_wrong_order(self, family):
        with pytest.raises(DimensionError):
            gramian(family, 4)

    def test_non_regular_input(self):
        with pytest.raises(ConstructionError):
            gramian([sylvester(4), sylvester(4)], 2)

    def test_regular_but_not_bush_type(self, family):
        swapped = np.array(family[0].entries)
        swapped[:, [0, 4]] = swapped[:, [4, 0]]
        with pytest.raises(ConstructionError, match="Bush-type"):
            gramian([swapped, family[1]], 2)

    def test_unbiased_pairs_of_the_family(self, family):
        witnesses = unbiased_pairs(family)
        assert set(witnesses) == {(1, 2), (1, 3), (2, 3)}
        assert all(w is not None for w in witnesses.values())


class TestFiveClass:
    """The 5-class scheme against every closed form."""

    def test_valencies(self, five):
        assert five.tensor.valencies().tolist() == [1, 3, 12, 12, 18, 18]

    def test_matches_closed_form(self, five):
        assert first_mismatch(five.tensor, five_class_tensor(2, 3)) is None

    def test_selected_intersection_numbers(self, five):
        assert five.tensor[1, 4, 4] == 1
        assert five.tensor[3, 3, 0] == 12

    def test_a4_and_a5_have_equal_squares(self, five):
        assert np.array_equal(five.tensor.p[4, 4], five.tensor.p[5, 5])
        assert j_form_holds(five.tensor, 2, 3)

    def test_srg_and_deza_at_the_bound(self, five):
        srg, deza = srg_deza_parameters(2)
        assert is_srg(five.adjacency(5)) == srg == (64, 18, 2, 6)
        assert is_deza(five.adjacency(4)) == deza == (64, 18, 6, 2)
        assert is_srg(five.adjacency(4)) is None

    def test_srg_deza_closed_form_n4(self):
        srg, deza = srg_deza_parameters(4)
        assert srg == (512, 196, 60, 84)
        assert deza == (512, 196, 84, 60)

    def test_relaxed_single_matrix(self, family, caplog):
        with caplog.at_level(logging.WARNING):
            scheme = build_five_class(gramian(family[:1], 2, relaxed=True))
        assert scheme.rels.size == 32
        assert "m = 1" in caplog.text

    @pytest.mark.slow
    def test_closed_form_at_4_7(self):
        scheme = build_five_class(gramian(build_mubh(4, 7), 4))
        assert scheme.rels.size == 512
        assert first_mismatch(scheme.tensor, five_class_tensor(4, 7)) is None


class TestThreeClass:
    """The 3-class scheme and the fusion that reproduces it."""

    def test_valencies(self, three):
        assert three.tensor.valencies().tolist() == [1, 30, 18, 15]

    def test_b3_coefficients_carry_m(self, three):
        assert three.tensor[1, 1, 3] == 18
        assert three.tensor[2, 2, 3] == 6
        assert three.tensor[1, 2, 3] == 12

    def test_matches_closed_form(self, three):
        assert first_mismatch(three.tensor, three_class_tensor(2, 3)) is None

    def test_fusion_of_the_five_class_scheme(self, five, three):
        fused = fuse(five.rels, ([0], [3, 4], [5], [1, 2]))
        assert verify_scheme(fused) == three.tensor

    def test_needs_two_matrices(self, family):
        with pytest.raises(ConstructionError):
            build_three_class(gramian(family[:1], 2, relaxed=True))


class TestExtraction:
    """Reading the MUBH family back off the 5-class scheme."""

    def test_canonical_input(self, five, family):
        extracted = extract_mubh(five.rels, 2, 3)
        assert extracted.permutation == list(range(64))
        assert all(a == b for a, b in zip(extracted.hadamards, family))

    def test_shuffled_input_round_trips(self, five):
        perm = np.random.default_rng(11).permutation(64)
        shuffled = five.rels.permuted(perm)
        extracted = extract_mubh(shuffled, 2, 3)
        regenerated = build_five_class(gramian(extracted.hadamards, 2))
        assert regenerated.rels == shuffled.permuted(extracted.permutation)

    def test_three_class_input_is_rejected(self, three):
        with pytest.raises(ExtractionError):
            extract_mubh(three.rels, 2, 3)

    def test_wrong_parameters(self, five):
        with pytest.raises(ExtractionError):
            extract_mubh(five.rels, 2, 2)

    @pytest.mark.slow
    def test_round_trip_at_4_7(self):
        scheme = build_five_class(gramian(build_mubh(4, 7), 4))
        extracted = extract_mubh(scheme.rels, 4, 7)
        assert len(extracted.hadamards) == 7
        assert build_five_class(gramian(extracted.hadamards, 4)).rels == scheme.rels
