"""Tests for closed-form spectra, the dense oracle and spectrum matching."""

import numpy as np
import pytest

from gcirc.errors import DomainError, NotGenerator, NotPrime
from gcirc.matcore import build_g_circulant, dft_matrix, to_dense
from gcirc.models import GCirculant, Spectrum
from gcirc.spectra import (
    ConjugateSymmetricList,
    circulant_eigenvalues,
    circulant_from_eigenvalues,
    dense_eigen_oracle,
    g_circulant_spectrum,
    is_conjugate_symmetric,
    pd_form,
    pd_spectrum,
    realness_defect,
    spectra_match,
)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


class TestCirculantSpectrum:
    """Test forward and inverse circulant eigenvalue maps."""

    def test_matches_fft(self):
        """Test lambda_k = sum_l c_l tau^(kl) against numpy's FFT."""
        row = [1.0, 2.0, 3.0, 4.0, 5.0]
        expected = len(row) * np.fft.ifft(row)
        assert np.allclose(circulant_eigenvalues(row), expected)

    def test_known_values(self):
        """Test the spectrum of circ(1, 2, 3, 4, 5)."""
        lam = circulant_eigenvalues([1, 2, 3, 4, 5])
        assert lam[0] == pytest.approx(15)
        assert np.allclose(lam[1:].real, -2.5)
        assert sorted(np.abs(lam[1:].imag)) == pytest.approx(
            [0.8123, 0.8123, 3.441, 3.441], abs=1e-3
        )

    def test_round_trip(self, rng):
        """Test that the inverse map recovers the row."""
        for n in (1, 2, 7, 16):
            row = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            back = circulant_from_eigenvalues(circulant_eigenvalues(row))
            assert np.allclose(back, row, atol=1e-12)

    def test_empty(self):
        """Test empty inputs."""
        with pytest.raises(DomainError):
            circulant_eigenvalues([])
        with pytest.raises(DomainError):
            circulant_from_eigenvalues([])


class TestConjugateSymmetry:
    """Test the pairing lambda[n-k] = conj(lambda[k])."""

    def test_real_row_is_paired(self, rng):
        """Test that a real row has paired eigenvalues."""
        for n in (4, 5):
            lam = circulant_eigenvalues(rng.standard_normal(n))
            assert realness_defect(lam) < 1e-12
            assert is_conjugate_symmetric(lam)

    def test_unpaired(self):
        """Test lists that break the pairing."""
        assert is_conjugate_symmetric([1, 2 + 1j, 2 - 1j])
        assert not is_conjugate_symmetric([1, 2 + 1j, 2 + 1j])
        assert not is_conjugate_symmetric([1j, 2, 2])
        assert not is_conjugate_symmetric([1, 2, 3, 2 + 1j])

    def test_model_rejects_unpaired(self):
        """Test the validated list model."""
        assert len(ConjugateSymmetricList(values=[3, "1+2i", "1-2i"]).values) == 3
        with pytest.raises(ValueError, match="not conjugate-symmetric"):
            ConjugateSymmetricList(values=[3, "1+2i", "1+2i"])


class TestGCirculantSpectrum:
    """Test the closed-form spectrum of Q_g C."""

    def test_two_circulant_of_order_five(self):
        """Test the spectrum of the 2-circulant with first row 1..5."""
        row = [1, 2, 3, 4, 5]
        spectrum = g_circulant_spectrum(circulant_eigenvalues(row), 5, 2)
        assert spectrum.values[0] == pytest.approx(15)
        r = 3.3437
        expected = [15, r, -r, r * 1j, -r * 1j]
        assert spectra_match(spectrum, expected, 5e-4).matched

    def test_agrees_with_oracle(self, rng):
        """Test the closed form against the dense oracle."""
        for p, g in ((5, 2), (5, 3), (7, 3), (7, 5), (11, 2), (11, 7), (13, 6)):
            row = rng.standard_normal(p)
            closed = g_circulant_spectrum(circulant_eigenvalues(row), p, g)
            oracle = dense_eigen_oracle(build_g_circulant(row, g))
            assert spectra_match(closed, oracle, 1e-6).matched

    def test_order_two(self):
        """Test that order two returns the circulant spectrum."""
        spectrum = g_circulant_spectrum([3, -1], 2, 1)
        assert spectrum.values == [3, -1]

    def test_not_prime(self):
        """Test composite orders."""
        with pytest.raises(NotPrime):
            g_circulant_spectrum(np.ones(9), 9, 2)

    def test_not_generator(self):
        """Test non-generator shifts."""
        with pytest.raises(NotGenerator):
            g_circulant_spectrum(np.ones(11), 11, 3)

    def test_complex_row(self):
        """Test that a non-real product of eigenvalues is refused."""
        lam = circulant_eigenvalues([1, 2j, 0, 0, 0])
        with pytest.raises(DomainError, match="not a nonnegative real"):
            g_circulant_spectrum(lam, 5, 2)

    def test_wrong_length(self):
        """Test an eigenvalue list of the wrong size."""
        with pytest.raises(DomainError, match="Expected 5"):
            g_circulant_spectrum([1, 2, 3], 5, 2)


class TestPDForm:
    """Test the monomial form F* A F = Q_{g^-1} D."""

    def test_unitary_similarity(self):
        """Test that the PD-matrix is F* A F."""
        a = GCirculant(n=5, g=2, row=[1, 2, 3, 4, 5])
        pd = pd_form(a)
        assert pd.perm.image == [0, 3, 1, 4, 2]
        f = dft_matrix(5)
        assert np.allclose(f.conj().T @ to_dense(a) @ f, pd.to_matrix(), atol=1e-12)

    def test_composite_order(self, rng):
        """Test the PD spectrum where no generator exists."""
        for n, g in ((6, 5), (8, 3), (9, 2), (10, 7)):
            row = rng.standard_normal(n)
            a = GCirculant(n=n, g=g, row=list(row))
            oracle = dense_eigen_oracle(to_dense(a))
            assert spectra_match(pd_spectrum(pd_form(a)), oracle, 1e-6).matched

    def test_not_invertible_shift(self):
        """Test that a shift sharing a factor with n is refused."""
        with pytest.raises(DomainError):
            pd_form(GCirculant(n=6, g=2, row=[1, 2, 3, 4, 5, 6]))


class TestOracle:
    """Test the dense eigenvalue oracle."""

    def test_zero_matrix(self):
        """Test the oracle on the zero matrix."""
        spectrum = dense_eigen_oracle(np.zeros((3, 3)))
        assert np.allclose(spectrum.as_array(), 0)

    def test_order_cap(self):
        """Test the order limit."""
        with pytest.raises(DomainError, match="capped at 128"):
            dense_eigen_oracle(np.eye(129))

    def test_non_finite(self):
        """Test matrices with NaN entries."""
        with pytest.raises(DomainError, match="non-finite"):
            dense_eigen_oracle(np.array([[1.0, np.nan], [0.0, 1.0]]))

    def test_not_square(self):
        """Test rectangular input."""
        with pytest.raises(DomainError, match="square"):
            dense_eigen_oracle(np.ones((2, 3)))


class TestSpectraMatch:
    """Test multiset comparison."""

    def test_order_independent(self):
        """Test that permuted lists match."""
        report = spectra_match([1, 2j, -3], [-3, 1, 2j], 1e-12)
        assert report.matched
        assert report.max_residual == 0
        assert len(report.pairs) == 3

    def test_mismatch(self):
        """Test the residual of a mismatch."""
        report = spectra_match([1, 2], [1, 2.5], 0.1)
        assert not report.matched
        assert report.max_residual == pytest.approx(0.5)

    def test_default_tolerance(self):
        """Test that the first spectrum's tolerance is used by default."""
        report = spectra_match(Spectrum(values=[1, 2], tol=0.6), [1, 2.5])
        assert report.matched
        assert report.tol == 0.6

    def test_cardinality(self):
        """Test lists of different sizes."""
        with pytest.raises(DomainError, match="cardinalities"):
            spectra_match([1, 2, 3], [1, 2])

    def test_empty(self):
        """Test two empty spectra."""
        assert spectra_match([], [], 1e-6).matched
