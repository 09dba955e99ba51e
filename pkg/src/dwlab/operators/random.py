"""Randomized graded operators with planted kernels of known chirality content."""

from __future__ import annotations

import numpy as np

from .graded import GradedOperator


def random_chiral_operator(rng: np.random.Generator, dim_plus: int, dim_minus: int,
                           rank: int | None = None,
                           sval_range=(0.5, 2.0)) -> GradedOperator:
    """Block-off-diagonal Hermitian matrix with exact index dim_plus − dim_minus.

    The off-diagonal block has the requested rank with singular values drawn
    from sval_range, so the kernel splits into dim_plus − rank positive-chirality
    and dim_minus − rank negative-chirality vectors.
    """
    max_rank = min(dim_plus, dim_minus)
    if rank is None:
        rank = max_rank
    if not 0 <= rank <= max_rank:
        raise ValueError(f"rank must lie in [0, {max_rank}]")
    svals = rng.uniform(*sval_range, size=rank)
    u, _ = np.linalg.qr(rng.normal(size=(dim_minus, dim_minus))
                        + 1j * rng.normal(size=(dim_minus, dim_minus)))
    v, _ = np.linalg.qr(rng.normal(size=(dim_plus, dim_plus))
                        + 1j * rng.normal(size=(dim_plus, dim_plus)))
    block = np.zeros((dim_minus, dim_plus), dtype=complex)
    block[:rank, :rank] = np.diag(svals)
    # lower-left block maps the +1 eigenspace into the −1 eigenspace
    d_plus = u @ block @ v.conj().T
    n = dim_plus + dim_minus
    mat = np.zeros((n, n), dtype=complex)
    mat[dim_plus:, :dim_plus] = d_plus
    mat[:dim_plus, dim_plus:] = d_plus.conj().T
    grading = np.concatenate([np.ones(dim_plus, dtype=int),
                              -np.ones(dim_minus, dtype=int)])
    tag = {"kind": "random_chiral", "dim_plus": dim_plus, "dim_minus": dim_minus,
           "rank": rank, "index": dim_plus - dim_minus}
    return GradedOperator(mat, grading=grading, chiral_flag=True, geometry_tag=tag)
