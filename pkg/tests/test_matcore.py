"""Tests for dense g-circulant constructions and permutation structure."""

import math

import numpy as np
import pytest

from gcirc.errors import DomainError, NotInvertible, NotPrime
from gcirc.matcore import (
    build_g_circulant,
    build_qg,
    circulant,
    cycle_decomposition,
    dft_matrix,
    factor_qc,
    inverse_g_circulant,
    is_g_circulant,
    is_permutation_matrix,
    is_primary,
    is_symmetric_gcirc,
    is_unitary,
    qg_permutation,
    require_square,
    to_dense,
    w_submatrix,
)
from gcirc.models import GCirculant
from gcirc.numtheory import has_distinct_powers, is_cyclic_generator, mod_inverse


@pytest.fixture
def two_circulant():
    """The 2-circulant of order 5 with first row 1..5."""
    return GCirculant(n=5, g=2, row=[1, 2, 3, 4, 5])


class TestConstruction:
    """Test dense builders."""

    def test_rows_shift_by_g(self, two_circulant):
        """Test that each row is the previous one shifted g places right."""
        dense = to_dense(two_circulant).real
        assert dense[0].tolist() == [1, 2, 3, 4, 5]
        assert dense[1].tolist() == [4, 5, 1, 2, 3]
        assert dense[2].tolist() == [2, 3, 4, 5, 1]

    def test_is_g_circulant(self, two_circulant):
        """Test the shift recurrence predicate."""
        dense = to_dense(two_circulant)
        assert is_g_circulant(dense, 2)
        assert is_g_circulant(dense, 7)
        assert not is_g_circulant(dense, 1)

    def test_circulant_is_one_circulant(self):
        """Test that circulant() agrees with g = 1."""
        row = [3.0, -1.0, 2.0, 0.5]
        assert np.array_equal(circulant(row), build_g_circulant(row, 1))
        assert is_g_circulant(circulant(row), 1)

    def test_empty_row(self):
        """Test that an empty row is rejected."""
        with pytest.raises(DomainError, match="nonempty"):
            build_g_circulant([], 2)

    def test_require_square(self):
        """Test the squareness guard."""
        with pytest.raises(DomainError, match="square"):
            require_square(np.zeros((2, 3)))


class TestQg:
    """Test the permutation matrix Q_g and the factorization A = Q_g C."""

    def test_qg_is_permutation(self):
        """Test that Q_g has its 1 in column i*g mod n."""
        qg = build_qg(5, 2)
        assert is_permutation_matrix(qg)
        assert is_unitary(qg)
        for i in range(5):
            assert qg[i, (2 * i) % 5] == 1

    def test_not_a_permutation(self):
        """Test the permutation predicate on a non-permutation."""
        assert not is_permutation_matrix(np.ones((3, 3)))
        assert not is_permutation_matrix(2 * np.eye(3))

    def test_factor_qc(self, two_circulant):
        """Test that Q_g times the circulant reproduces A."""
        qg, c = factor_qc(two_circulant)
        assert c.g == 1
        assert c.row == two_circulant.row
        assert np.allclose(qg @ to_dense(c), to_dense(two_circulant))

    def test_dft_is_unitary(self):
        """Test unitarity of the DFT matrix."""
        for n in (1, 2, 5, 12):
            assert is_unitary(dft_matrix(n))
        assert dft_matrix(1)[0, 0] == pytest.approx(1.0)

    def test_dft_diagonalizes_circulants(self):
        """Test that F* C F is diagonal."""
        f = dft_matrix(6)
        similar = f.conj().T @ circulant([1, 4, -2, 0, 3, 1]) @ f
        assert np.allclose(similar - np.diag(np.diag(similar)), 0, atol=1e-12)


class TestPermutations:
    """Test cycle structure of Q_g and its W submatrix."""

    def test_cycle_decomposition(self):
        """Test cycles listed from their minimum, fixed points kept."""
        spec = cycle_decomposition([1, 2, 0, 4, 3, 5])
        assert spec.cycles == [[0, 1, 2], [3, 4], [5]]
        assert spec.cycle_lengths == [3, 2, 1]

    def test_cycle_decomposition_not_bijection(self):
        """Test that a non-bijection is rejected."""
        with pytest.raises(DomainError, match="bijection"):
            cycle_decomposition([0, 0, 1])

    def test_qg_permutation(self):
        """Test the permutation carried by Q_2 of order 5."""
        spec = qg_permutation(5, 2)
        assert spec.image == [0, 2, 4, 1, 3]
        assert spec.cycles == [[0], [1, 2, 4, 3]]
        assert np.array_equal(spec.to_matrix(), build_qg(5, 2))

    def test_qg_permutation_order_one(self):
        """Test the trivial order."""
        assert qg_permutation(1, 4).image == [0]

    def test_qg_permutation_not_unit(self):
        """Test that a non-unit shift is rejected."""
        with pytest.raises(NotInvertible):
            qg_permutation(6, 2)

    def test_inverse_permutation(self):
        """Test that inverse() undoes the permutation."""
        spec = qg_permutation(7, 3)
        inverse = spec.inverse()
        assert np.allclose(spec.to_matrix() @ inverse.to_matrix(), np.eye(7))
        assert inverse.image == qg_permutation(7, 5).image

    def test_w_submatrix_is_primary(self):
        """Test the W permutation of Q_7 modulo 11."""
        w = w_submatrix(11, 7)
        assert w.image == [6, 2, 9, 5, 1, 8, 4, 0, 7, 3]
        assert is_primary(w)

    def test_w_submatrix_non_generator(self):
        """Test that a non-generator splits W into several cycles."""
        w = w_submatrix(11, 3)
        assert not is_primary(w)
        assert w.cycle_lengths == [5, 5]


class TestSymmetryAndInverse:
    """Test symmetry and inversion of g-circulants."""

    def test_symmetric_only_for_n_minus_one(self):
        """Test symmetry of prime-order g-circulants."""
        assert is_symmetric_gcirc(7, 6)
        assert not is_symmetric_gcirc(7, 3)
        dense = build_g_circulant([1, 2, 3, 4, 5, 6, 7], 6)
        assert np.array_equal(dense, dense.T)

    def test_symmetric_rejects_bad_input(self):
        """Test the hypotheses of the symmetry test."""
        with pytest.raises(NotPrime):
            is_symmetric_gcirc(9, 2)
        with pytest.raises(DomainError, match="1 < g < 7"):
            is_symmetric_gcirc(7, 1)

    def test_inverse_is_g_inverse_circulant(self, two_circulant):
        """Test that the inverse of a 2-circulant of order 5 is a 3-circulant."""
        inverse = inverse_g_circulant(two_circulant)
        assert inverse.g == 3
        product = to_dense(inverse) @ to_dense(two_circulant)
        assert np.allclose(product, np.eye(5), atol=1e-10)

    def test_inverse_singular(self):
        """Test that a singular g-circulant is refused."""
        with pytest.raises(DomainError, match="singular"):
            inverse_g_circulant(GCirculant(n=5, g=2, row=[1, 1, 1, 1, 1]))


class TestStructuralIdentities:
    """Test identities that hold for every order and shift."""

    @pytest.mark.parametrize("n", range(1, 17))
    def test_builder_satisfies_predicate(self, n):
        """Test that every built g-circulant passes the shift recurrence."""
        rng = np.random.default_rng(n)
        row = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        for g in range(-1, n + 1):
            assert is_g_circulant(build_g_circulant(row, g), g)

    @pytest.mark.parametrize("n", range(1, 13))
    def test_qg_permutation_iff_unit(self, n):
        """Test that Q_g is a permutation matrix exactly when gcd(n, g) = 1."""
        for g in range(n):
            qg = build_qg(n, g)
            assert is_permutation_matrix(qg) == (math.gcd(n, g) == 1)
            if math.gcd(n, g) != 1:
                assert not np.all(qg.sum(axis=0) == 1)

    @pytest.mark.parametrize("n", range(2, 14))
    def test_dft_intertwines_qg(self, n):
        """Test F Q_g = Q_{g^-1} F for every unit g."""
        f = dft_matrix(n)
        for g in range(1, n):
            if math.gcd(n, g) != 1:
                continue
            left = f @ build_qg(n, g)
            right = build_qg(n, mod_inverse(g, n)) @ f
            assert np.allclose(left, right, rtol=0.0, atol=1e-12)

    @pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
    def test_primary_iff_generator(self, p):
        """Test that W is a single cycle exactly for cyclic generators."""
        for g in range(1, p):
            certificate = is_cyclic_generator(g, p)
            assert is_primary(w_submatrix(p, g)) == certificate.is_generator

    @pytest.mark.parametrize("n", range(2, 17))
    def test_primary_iff_distinct_powers(self, n):
        """Test the primary-submatrix criterion for prime and composite n."""
        for g in range(1, n):
            if math.gcd(n, g) != 1:
                continue
            assert is_primary(w_submatrix(n, g)) == has_distinct_powers(g, n)
