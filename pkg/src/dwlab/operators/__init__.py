"""Operator constructors: lattices, profiles, graded matrices, and builders."""

from .cylinder import (CYLINDER_INDEX_SIGN, build_aps_extended_operator,
                       build_cylinder_extension, torus_column_signs)
from .gauge import GaugeLinkField, make_gauge_flux
from .graded import (CLIFFORD, CliffordTriple, GradedOperator, load_operator,
                     operator_to_payload, payload_to_operator, save_operator)
from .lattices import DIRICHLET, PERIODIC, Lattice1D, TorusLattice2D
from .line import build_circle_operator_A, build_jackiw_rebbi_line, line_grading
from .profiles import (WallProfile, constant_profile, smooth_wall_profile,
                       step_profile_1d, step_profile_torus)
from .random import random_chiral_operator
from .schemes import circle_eigenvalues
from .torus import apply_domain_wall, build_torus_dirac, torus_grading

__all__ = [
    "CLIFFORD", "CYLINDER_INDEX_SIGN", "CliffordTriple", "DIRICHLET",
    "GaugeLinkField", "GradedOperator", "Lattice1D", "PERIODIC",
    "TorusLattice2D", "WallProfile", "apply_domain_wall",
    "build_aps_extended_operator", "build_circle_operator_A",
    "build_cylinder_extension", "build_jackiw_rebbi_line", "build_torus_dirac",
    "circle_eigenvalues", "constant_profile", "line_grading", "load_operator",
    "make_gauge_flux", "operator_to_payload", "payload_to_operator",
    "random_chiral_operator", "save_operator", "smooth_wall_profile",
    "step_profile_1d", "step_profile_torus", "torus_column_signs",
    "torus_grading",
]
