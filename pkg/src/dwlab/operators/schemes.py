"""Derivative stencils and exact Fourier-basis operators on uniform lattices.

Two families are used throughout:

* one-sided difference pairs (forward in one chiral channel, backward in the
  other), which remove doublers the way an r = 1 Wilson term folded into the
  mass channel would, while keeping the assembled 2-component operator exactly
  odd with respect to the site-diagonal grading;
* exact Fourier differentiation on periodic lattices, which is nonlocal but
  diagonalizes shift-invariant pieces with no discretization error.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp


def shift_matrix(n: int, periodic: bool) -> sp.csr_matrix:
    """Forward shift T: (Tψ)(i) = ψ(i+1), with zero ghost beyond the last site
    for open chains."""
    if periodic:
        cols = (np.arange(n) + 1) % n
        return sp.csr_matrix((np.ones(n), (np.arange(n), cols)), shape=(n, n))
    rows = np.arange(n - 1)
    return sp.csr_matrix((np.ones(n - 1), (rows, rows + 1)), shape=(n, n))


def forward_difference(n: int, spacing: float, periodic: bool) -> sp.csr_matrix:
    """∇₊ = (T − 1)/a. Its negative adjoint is the backward difference."""
    t = shift_matrix(n, periodic)
    return ((t - sp.identity(n, format="csr")) / spacing).tocsr()


def central_difference(n: int, spacing: float, periodic: bool) -> sp.csr_matrix:
    """Skew-symmetric central difference (T − T†)/(2a)."""
    t = shift_matrix(n, periodic)
    return ((t - t.T) / (2.0 * spacing)).tocsr()


def wilson_term(n: int, spacing: float, periodic: bool, r: float = 1.0) -> sp.csr_matrix:
    """(r/2a)(2 − T − T†) with zero Dirichlet ghosts on open chains."""
    t = shift_matrix(n, periodic)
    return ((r / (2.0 * spacing)) * (2.0 * sp.identity(n, format="csr") - t - t.T)).tocsr()


def fourier_mode_numbers(n: int) -> np.ndarray:
    """Integer mode numbers in FFT storage order: 0, 1, …, n/2−1, −n/2, …, −1."""
    return np.rint(np.fft.fftfreq(n) * n).astype(int)


def spectral_derivative(n: int, spacing: float) -> np.ndarray:
    """Exact periodic differentiation matrix (real, exactly skew-symmetric).

    The Nyquist mode of an even-length lattice is its own conjugate, so its
    derivative is set to zero; all other modes differentiate exactly.
    """
    length = n * spacing
    k = fourier_mode_numbers(n).astype(float)
    if n % 2 == 0:
        k[n // 2] = 0.0
    omega = 1j * (2.0 * np.pi / length) * k
    mat = np.fft.ifft(omega[:, None] * np.fft.fft(np.eye(n), axis=0), axis=0)
    mat = mat.real
    return 0.5 * (mat - mat.T)


def spectral_circle_operator(n: int, circumference: float, holonomy: float) -> np.ndarray:
    """Dense Hermitian matrix of −i∂ + holonomy·(2π/circumference) on a ring.

    Exactly diagonal in the Fourier basis with eigenvalues
    (2π/circumference)(k + holonomy) over the integer window of the truncation.
    """
    k = fourier_mode_numbers(n).astype(float)
    omega = (2.0 * np.pi / circumference) * (k + holonomy)
    mat = np.fft.ifft(omega[:, None] * np.fft.fft(np.eye(n), axis=0), axis=0)
    return 0.5 * (mat + mat.conj().T)


def circle_eigenvalues(n: int, circumference: float, holonomy: float) -> np.ndarray:
    """The exact spectrum of spectral_circle_operator, sorted ascending."""
    k = fourier_mode_numbers(n).astype(float)
    return np.sort((2.0 * np.pi / circumference) * (k + holonomy))
