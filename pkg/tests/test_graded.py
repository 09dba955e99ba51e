"""Graded operator invariants and the sparse-triplet serialization."""

import numpy as np
import pytest

from dwlab.errors import DegenerateLattice
from dwlab.operators import (GradedOperator, load_operator, operator_to_payload,
                             payload_to_operator, random_chiral_operator,
                             save_operator)


def test_hermiticity_enforced():
    bad = np.array([[0.0, 1.0], [0.5, 0.0]])
    with pytest.raises(DegenerateLattice):
        GradedOperator(bad)


def test_grading_must_be_involution():
    mat = np.diag([1.0, -1.0])
    with pytest.raises(DegenerateLattice):
        GradedOperator(mat, grading=np.array([1, 2]))


def test_chiral_flag_checked():
    mat = np.diag([1.0, -1.0])  # commutes with the grading, not odd
    with pytest.raises(DegenerateLattice):
        GradedOperator(mat, grading=np.array([1, -1]), chiral_flag=True)


def test_random_chiral_planted_structure(rng):
    op = random_chiral_operator(rng, 7, 4, rank=3)
    assert op.chiral_flag
    w = np.sort(np.linalg.eigvalsh(op.dense()))
    assert np.max(np.abs(w + w[::-1])) < 1e-12
    # kernel: (7-3) positive-chirality + (4-3) negative-chirality vectors
    assert int(np.sum(np.abs(w) < 1e-12)) == 5


def test_triplet_roundtrip(tmp_path, rng):
    op = random_chiral_operator(rng, 5, 3, rank=2)
    payload = operator_to_payload(op)
    assert payload["header"]["has_grading"]
    back = payload_to_operator(payload)
    assert np.max(np.abs((op.matrix - back.matrix).toarray())) < 1e-15
    assert np.array_equal(op.grading, back.grading)
    assert back.chiral_flag == op.chiral_flag
    path = save_operator(op, tmp_path / "op.json")
    loaded = load_operator(path)
    assert np.max(np.abs((op.matrix - loaded.matrix).toarray())) < 1e-15
    assert loaded.geometry_tag == op.geometry_tag
