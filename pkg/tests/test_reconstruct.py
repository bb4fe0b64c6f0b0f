"""Tests for recovering a g-circulant from its diagonal."""

import numpy as np
import pytest

from gcirc.errors import DomainError
from gcirc.matcore import to_dense
from gcirc.models import DiagonalVector, GCirculant, TargetList
from gcirc.niep import realize
from gcirc.numtheory import list_generators
from gcirc.reconstruct import (
    complete_with_perron,
    diagonal_of,
    diagonal_permutation,
    first_row_from_diagonal,
)


@pytest.fixture
def three_circulant():
    """The 3-circulant of order 7 with first row 1..7."""
    return GCirculant(n=7, g=3, row=[1, 2, 3, 4, 5, 6, 7])


class TestDiagonal:
    """Test the diagonal map."""

    def test_diagonal_of(self, three_circulant):
        """Test the diagonal of the 3-circulant of order 7."""
        diagonal = diagonal_of(three_circulant)
        assert diagonal.real.tolist() == [1, 6, 4, 2, 7, 5, 3]
        assert np.array_equal(diagonal, np.diag(to_dense(three_circulant)))

    def test_diagonal_permutation(self):
        """Test the permutation sending the first row onto the diagonal."""
        perm = diagonal_permutation(7, 3)
        row = np.arange(7)
        assert row[perm.image].tolist() == [0, 5, 3, 1, 6, 4, 2]

    def test_circulant_diagonal_is_constant(self):
        """Test that g = 1 gives no information beyond the first entry."""
        with pytest.raises(DomainError, match="does not determine"):
            diagonal_permutation(7, 1)


class TestReconstruction:
    """Test first-row recovery."""

    def test_round_trip(self, three_circulant):
        """Test recovering the first row from the full diagonal."""
        d = DiagonalVector(n=7, g=3, values=list(diagonal_of(three_circulant)))
        assert first_row_from_diagonal(d) == three_circulant

    @pytest.mark.parametrize("p", [3, 5, 11, 13])
    def test_round_trip_all_generators(self, p):
        """Test recovery for every generator of small primes."""
        rng = np.random.default_rng(p)
        for g in list_generators(p):
            a = GCirculant(n=p, g=g, row=list(rng.standard_normal(p)))
            d = DiagonalVector(n=p, g=g, values=list(diagonal_of(a)))
            assert first_row_from_diagonal(d).row == a.row

    def test_unknown_entry_needs_completion(self):
        """Test that an unknown entry blocks plain recovery."""
        d = DiagonalVector(n=7, g=3, values=[1, 6, 4, 2, 7, 5, None])
        with pytest.raises(DomainError, match="complete_with_perron"):
            first_row_from_diagonal(d)

    def test_complete_with_perron(self, three_circulant):
        """Test filling the unknown entry from the trace."""
        d = DiagonalVector(n=7, g=3, values=[1, 6, 4, 2, 7, 5, None])
        assert d.unknown_index == 6
        completed = complete_with_perron(d, 28)
        assert np.allclose(completed.row_array(), three_circulant.row_array())

    def test_complete_without_unknown(self):
        """Test that completion needs an unknown entry."""
        d = DiagonalVector(n=7, g=3, values=[1, 6, 4, 2, 7, 5, 3])
        with pytest.raises(DomainError, match="found none"):
            complete_with_perron(d, 28)


class TestDiagonalVector:
    """Test validation of diagonal inputs."""

    def test_two_unknowns(self):
        """Test that at most one entry may be unknown."""
        with pytest.raises(ValueError, match="At most one"):
            DiagonalVector(n=7, g=3, values=[1, 6, None, 2, 7, 5, None])

    def test_wrong_length(self):
        """Test the length check."""
        with pytest.raises(ValueError, match="expected 7"):
            DiagonalVector(n=7, g=3, values=[1, 2, 3])

    def test_not_generator(self):
        """Test that the shift must be a cyclic generator."""
        with pytest.raises(ValueError, match="not a cyclic generator"):
            DiagonalVector(n=7, g=2, values=[1, 2, 3, 4, 5, 6, 7])

    def test_string_values(self):
        """Test complex strings in the diagonal."""
        d = DiagonalVector(n=3, g=2, values=["1+2i", None, "3"])
        assert d.values[0] == 1 + 2j
        assert d.unknown_index == 1

    def test_recover_hidden_entry_of_realization(self):
        """Test completing a realized matrix from its trace."""
        a = realize(TargetList(beta1=6, beta2=5, p=7, g=3)).matrix
        values = list(diagonal_of(a))
        hidden = values[2]
        values[2] = None
        completed = complete_with_perron(DiagonalVector(n=7, g=3, values=values), 6)
        assert abs(diagonal_of(completed)[2] - hidden) < 1e-10
        assert np.allclose(completed.row_array(), a.row_array(), atol=1e-10)
