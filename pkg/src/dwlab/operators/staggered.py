"""Staggered two-channel chains over an arbitrary base fiber.

The two chirality channels live on offset sublattices: one on the columns of a
1D chain, the other on the midpoints between them (plus the two outer
midpoints of an open chain). The off-diagonal block is

    X = (forward difference) + (midpoint-averaged mass operator),

mapping column functions to midpoint functions. Midpoint sampling makes the
zero-mode recursion a Cayley ratio, so wall-bound modes decay symmetrically
with an O(a²) rate error, and the rectangular shape of X forces the exact
number of exact zero modes predicted by the boundary data: at an open end the
outer-midpoint degrees of freedom are kept only along selected spectral
subspaces of the asymptotic mass operator, which is the lattice form of a
spectral (decaying-solution) boundary condition.

Orientation conventions, fixed once for the whole package: columns carry
grading −1 and midpoints +1; the kept outer subspace is the positive spectral
subspace of the asymptotic mass operator on the left end and the negative one
on the right end. With these choices the count

    (#column dofs) − (#midpoint dofs) = n₊(A_right) − n₊(A_left)

is the forced signed dimension of the exact kernel, sitting in the −1 channel
when positive.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from ..errors import DegenerateLattice, ZeroModeOnBoundary


def spectral_selector(a_end: np.ndarray, keep: str, gap_tol: float = 1e-10):
    """Rows spanning the kept outer-midpoint subspace for one open end.

    keep is "positive" or "negative": which spectral subspace of the gapped
    asymptotic mass operator survives at that end. For the standard chain
    orientation (derivative_sign = +1) the decay analysis keeps the positive
    subspace on the left end and the negative one on the right; a flipped
    chain swaps the two.
    """
    a_end = np.atleast_2d(np.asarray(a_end, dtype=complex))
    vals, vecs = np.linalg.eigh(a_end)
    scale = max(1.0, float(np.max(np.abs(vals))) if vals.size else 1.0)
    if np.min(np.abs(vals)) <= gap_tol * scale:
        raise ZeroModeOnBoundary(
            "asymptotic mass operator at an open end is not gapped")
    mask = vals > 0 if keep == "positive" else vals < 0
    return vecs[:, mask].conj().T  # (k × base) with orthonormal rows


def end_selectors(a_left, a_right, derivative_sign: int = 1):
    """The decay-selected outer subspaces for both ends of an open chain."""
    if derivative_sign == 1:
        return (spectral_selector(a_left, "positive"),
                spectral_selector(a_right, "negative"))
    return (spectral_selector(a_left, "negative"),
            spectral_selector(a_right, "positive"))


def _as_block(m, base_dim: int) -> np.ndarray:
    block = np.atleast_2d(np.asarray(m, dtype=complex))
    if block.shape != (base_dim, base_dim):
        raise DegenerateLattice(
            f"mass block has shape {block.shape}, expected ({base_dim}, {base_dim})")
    return block


def staggered_offdiagonal_block(n_cols: int, spacing: float, mid_masses,
                                periodic: bool, base_dim: int = 1,
                                left_rows=None, right_rows=None,
                                derivative_sign: int = 1) -> sp.csr_matrix:
    """Assemble X (midpoint space × column space) from per-midpoint mass blocks.

    mid_masses: sequence of base_dim×base_dim Hermitian blocks, length n_cols
    for periodic chains (midpoint j between columns j and j+1) and n_cols+1
    for open chains (midpoint 0 and n_cols are the outer ones). left_rows /
    right_rows restrict the outer midpoints to the span of the given
    orthonormal rows; None keeps the full fiber. derivative_sign = −1 flips
    the derivative channel (the chain coordinate runs against the collar
    coordinate of the operator being modelled).
    """
    inv_a = derivative_sign / spacing
    eye = np.eye(base_dim)
    blocks_rows = []
    if periodic:
        if len(mid_masses) != n_cols:
            raise DegenerateLattice("periodic chain needs n_cols midpoint masses")
        rows, cols, vals = [], [], []
        for j in range(n_cols):
            m_j = _as_block(mid_masses[j], base_dim)
            right = inv_a * eye + 0.5 * m_j
            left = -inv_a * eye + 0.5 * m_j
            for (c, blk) in ((j, left), ((j + 1) % n_cols, right)):
                r0, c0 = j * base_dim, c * base_dim
                for bi in range(base_dim):
                    for bj in range(base_dim):
                        v = blk[bi, bj]
                        if v != 0.0:
                            rows.append(r0 + bi)
                            cols.append(c0 + bj)
                            vals.append(v)
        n = n_cols * base_dim
        return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))

    if len(mid_masses) != n_cols + 1:
        raise DegenerateLattice("open chain needs n_cols+1 midpoint masses")
    for j in range(n_cols + 1):
        m_j = _as_block(mid_masses[j], base_dim)
        row = sp.lil_matrix((base_dim, n_cols * base_dim), dtype=complex)
        if j > 0:
            row[:, (j - 1) * base_dim:j * base_dim] = -inv_a * eye + 0.5 * m_j
        if j < n_cols:
            row[:, j * base_dim:(j + 1) * base_dim] = inv_a * eye + 0.5 * m_j
        row = row.tocsr()
        if j == 0 and left_rows is not None:
            row = sp.csr_matrix(np.asarray(left_rows)) @ row
        if j == n_cols and right_rows is not None:
            row = sp.csr_matrix(np.asarray(right_rows)) @ row
        blocks_rows.append(row)
    return sp.vstack(blocks_rows, format="csr")


def chiral_from_block(x_block: sp.csr_matrix):
    """H = [[0, X], [X†, 0]] with midpoint dofs first; returns (H, grading)."""
    n_b, n_a = x_block.shape
    h = sp.bmat([[None, x_block], [x_block.getH(), None]], format="csr")
    grading = np.concatenate([np.ones(n_b, dtype=int), -np.ones(n_a, dtype=int)])
    return h, grading
