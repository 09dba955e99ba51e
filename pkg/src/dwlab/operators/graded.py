"""Hermitian finite-dimensional operators with an optional chirality grading.

All gradings used here are diagonal in the chosen basis, so the involution is
stored as a vector of ±1 entries. Construction validates hermiticity, the
involution property, and (when flagged) exact anti-commutation with the
grading; these residuals travel with the operator into its serialized header.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from ..errors import DegenerateLattice

HERMITICITY_RTOL = 1e-12
CHIRALITY_RTOL = 1e-10


def _as_csr(matrix) -> sp.csr_matrix:
    if sp.issparse(matrix):
        return matrix.tocsr().astype(np.complex128)
    return sp.csr_matrix(np.asarray(matrix, dtype=np.complex128))


def _max_abs(m: sp.spmatrix) -> float:
    if m.nnz == 0:
        return 0.0
    return float(np.max(np.abs(m.data)))


@dataclass(frozen=True)
class CliffordTriple:
    """The 2×2 generators c, ε, Γ with c² = −1, ε² = Γ² = 1, Γ = cε.

    Entries are exact integers so all algebraic identities hold with zero
    floating error; pairwise anti-commutation is validated at construction.
    """

    c: np.ndarray = field(default_factory=lambda: np.array([[0, 1], [-1, 0]], dtype=complex))
    eps: np.ndarray = field(default_factory=lambda: np.array([[0, 1], [1, 0]], dtype=complex))
    gamma: np.ndarray = field(default_factory=lambda: np.array([[1, 0], [0, -1]], dtype=complex))

    def __post_init__(self):
        eye = np.eye(2)
        checks = [
            (self.c @ self.c + eye, "c^2 = -1"),
            (self.eps @ self.eps - eye, "eps^2 = 1"),
            (self.gamma @ self.gamma - eye, "gamma^2 = 1"),
            (self.gamma - self.c @ self.eps, "gamma = c eps"),
            (self.c @ self.eps + self.eps @ self.c, "{c, eps} = 0"),
            (self.c @ self.gamma + self.gamma @ self.c, "{c, gamma} = 0"),
            (self.eps @ self.gamma + self.gamma @ self.eps, "{eps, gamma} = 0"),
        ]
        for residual, name in checks:
            if np.max(np.abs(residual)) != 0.0:
                raise ValueError(f"Clifford identity violated: {name}")


CLIFFORD = CliffordTriple()


class GradedOperator:
    """Finite Hermitian matrix, optionally carrying a diagonal involution Γ.

    chiral_flag is True only when the matrix anti-commutes with Γ to entrywise
    roundoff; operators may carry a grading without being odd (e.g. the Wilson
    discretization, whose even part is the doubler-removal term).
    """

    def __init__(self, matrix, grading=None, chiral_flag=False, geometry_tag=None,
                 validate=True):
        self.matrix = _as_csr(matrix)
        n, m = self.matrix.shape
        if n != m:
            raise DegenerateLattice("operator matrix must be square")
        self.grading = None if grading is None else np.asarray(grading)
        self.chiral_flag = bool(chiral_flag)
        self.geometry_tag = dict(geometry_tag or {})
        self.hermiticity_residual = 0.0
        self.chirality_residual = 0.0
        if validate:
            self._validate()

    # -- invariants ---------------------------------------------------------

    def _validate(self):
        scale = _max_abs(self.matrix)
        herm = _max_abs(self.matrix - self.matrix.getH())
        self.hermiticity_residual = herm
        if herm > HERMITICITY_RTOL * (1.0 + scale):
            raise DegenerateLattice(
                f"matrix not Hermitian: residual {herm:.3e} vs scale {scale:.3e}")
        if self.grading is not None:
            g = self.grading
            if g.shape != (self.n,):
                raise DegenerateLattice("grading must be a diagonal of matching size")
            if not np.all(np.abs(g) == 1):
                raise DegenerateLattice("grading diagonal entries must be ±1")
        if self.chiral_flag:
            if self.grading is None:
                raise DegenerateLattice("chiral_flag requires a grading")
            anti = _max_abs(self.anticommutator_with_grading())
            self.chirality_residual = anti
            if anti > CHIRALITY_RTOL * max(scale, 1e-300):
                raise DegenerateLattice(
                    f"operator is not odd: anticommutator residual {anti:.3e}")

    def anticommutator_with_grading(self) -> sp.csr_matrix:
        g = self.grading.astype(np.complex128)
        gm = self.matrix.multiply(g[:, None])
        mg = self.matrix.multiply(g[None, :])
        return (gm + mg).tocsr()

    # -- basic views --------------------------------------------------------

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def grading_matrix(self) -> sp.csr_matrix:
        if self.grading is None:
            raise DegenerateLattice("operator has no grading")
        return sp.diags(self.grading.astype(np.complex128)).tocsr()

    def scale(self) -> float:
        return _max_abs(self.matrix)

    def __repr__(self):
        kind = self.geometry_tag.get("kind", "operator")
        graded = "graded" if self.grading is not None else "ungraded"
        chiral = ", odd" if self.chiral_flag else ""
        return f"<GradedOperator {kind} n={self.n} {graded}{chiral}>"


# -- sparse triplet serialization ------------------------------------------

FORMAT_NAME = "dwlab-operator-triplets-v1"


def operator_to_payload(op: GradedOperator) -> dict:
    """Sparse triplet payload: COO (row, col, re, im) plus a descriptive header."""
    coo = op.matrix.tocoo()
    return {
        "format": FORMAT_NAME,
        "header": {
            "n": op.n,
            "nnz": int(coo.nnz),
            "geometry_tag": op.geometry_tag,
            "has_grading": op.grading is not None,
            "chiral_flag": op.chiral_flag,
            "hermiticity_residual": op.hermiticity_residual,
            "chirality_residual": op.chirality_residual,
        },
        "grading": None if op.grading is None else [int(v) for v in op.grading],
        "triplets": {
            "row": [int(v) for v in coo.row],
            "col": [int(v) for v in coo.col],
            "re": [float(v) for v in coo.data.real],
            "im": [float(v) for v in coo.data.imag],
        },
    }


def payload_to_operator(payload: dict) -> GradedOperator:
    if payload.get("format") != FORMAT_NAME:
        raise ValueError(f"unknown operator payload format {payload.get('format')!r}")
    head = payload["header"]
    t = payload["triplets"]
    data = np.asarray(t["re"], dtype=float) + 1j * np.asarray(t["im"], dtype=float)
    mat = sp.coo_matrix((data, (t["row"], t["col"])), shape=(head["n"], head["n"]))
    grading = payload.get("grading")
    return GradedOperator(mat.tocsr(),
                          grading=None if grading is None else np.asarray(grading),
                          chiral_flag=head["chiral_flag"],
                          geometry_tag=head.get("geometry_tag", {}))


def save_operator(op: GradedOperator, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(operator_to_payload(op)))
    return path


def load_operator(path) -> GradedOperator:
    payload = json.loads(Path(path).read_text())
    return payload_to_operator(payload)
