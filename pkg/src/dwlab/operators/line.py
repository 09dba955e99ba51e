"""1D wall operators on segments and circles, and the boundary ring operator.

Three discretizations of c∂_t + m·κ(t)·ε are available:

* "staggered" (default): the two spinor components live on offset sublattices
  with the mass sampled at midpoints and spectral end conditions on open
  chains. Wall kernels are exact zero eigenvalues with exact chirality, decay
  rates are symmetric with O(a²) error, and no doublers or edge artifacts
  appear. Nonzero column dofs carry grading −1, midpoint dofs +1.
* "wilson": site-diagonal mass in the ε channel plus a doubler-removal term in
  the Γ channel; local, graded but not odd, with the wall-mode eigenvalue
  shifted by O(a·m²). This is the 1D restriction of the 2D torus scheme and
  the right testbed for the localization machinery, whose potential must be a
  sitewise involution.
* "spectral" (periodic only): exact Fourier differentiation, site-diagonal
  mass, exactly odd, interleaved site-major/spinor-minor layout.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from ..errors import DegenerateLattice, ZeroModeOnBoundary
from .graded import CLIFFORD, GradedOperator
from .lattices import PERIODIC, Lattice1D
from .profiles import WallProfile
from .schemes import (central_difference, spectral_circle_operator,
                      spectral_derivative, wilson_term)
from .staggered import (chiral_from_block, end_selectors,
                        staggered_offdiagonal_block)

SCHEME_STAGGERED = "staggered"
SCHEME_WILSON = "wilson"
SCHEME_SPECTRAL = "spectral"


def line_grading(n_sites: int) -> np.ndarray:
    """Grading of the interleaved (site-major, spinor-minor) layouts."""
    return np.tile(np.array([1, -1]), n_sites)


def _staggered_line(lat: Lattice1D, m: float, profile: WallProfile):
    n = lat.n_sites
    a = lat.spacing
    if m * a >= 2.0:
        raise DegenerateLattice(
            f"lattice too coarse for mass {m}: need m*spacing < 2, got {m * a:.3f}")
    x = lat.site_coords
    periodic = lat.boundary == PERIODIC
    if periodic:
        mids = x + a / 2.0
        masses = m * profile.evaluate(mids)
        block = staggered_offdiagonal_block(n, a, masses, periodic=True)
        mid_coords = mids
    else:
        mids = np.concatenate([[x[0] - a / 2.0], x[:-1] + a / 2.0, [x[-1] + a / 2.0]])
        masses = m * profile.evaluate(mids)
        left, right = end_selectors(masses[0], masses[-1])
        block = staggered_offdiagonal_block(n, a, masses, periodic=False,
                                            left_rows=left, right_rows=right)
        keep = []
        if left.shape[0]:
            keep.append(mids[0])
        keep.extend(mids[1:-1])
        if right.shape[0]:
            keep.append(mids[-1])
        mid_coords = np.asarray(keep)
    mat, grading = chiral_from_block(block)
    coords = np.concatenate([mid_coords, x])
    return mat, grading, coords


def build_jackiw_rebbi_line(lat: Lattice1D, m: float, profile: WallProfile,
                            scheme: str | None = None,
                            wilson_r: float = 1.0) -> GradedOperator:
    """Wall operator on a 1D lattice; see the module docstring for schemes."""
    if lat.n_sites < 8:
        raise DegenerateLattice("need at least 8 sites")
    if m <= 0:
        raise DegenerateLattice("mass must be positive")
    plat = profile.lattice
    if plat is not lat and (getattr(plat, "n_sites", None), getattr(plat, "boundary", None)) \
            != (lat.n_sites, lat.boundary):
        raise DegenerateLattice("profile sampled on a different lattice")
    if scheme is None:
        scheme = SCHEME_STAGGERED

    n = lat.n_sites
    a = lat.spacing
    coords = None

    if scheme == SCHEME_STAGGERED:
        mat, grading, coords = _staggered_line(lat, m, profile)
        chiral = True
    elif scheme == SCHEME_SPECTRAL:
        if lat.boundary != PERIODIC:
            raise DegenerateLattice("spectral differentiation needs a periodic lattice")
        deriv = sp.csr_matrix(spectral_derivative(n, a))
        mass = sp.diags(m * profile.samples)
        mat = (sp.kron(deriv, CLIFFORD.c) + sp.kron(mass, CLIFFORD.eps)).tocsr()
        grading = line_grading(n)
        coords = np.repeat(lat.site_coords, 2)
        chiral = True
    elif scheme == SCHEME_WILSON:
        deriv = central_difference(n, a, lat.boundary == PERIODIC)
        wil = wilson_term(n, a, lat.boundary == PERIODIC, r=wilson_r)
        mass = sp.diags(m * profile.samples)
        mat = (sp.kron(deriv, CLIFFORD.c) + sp.kron(mass, CLIFFORD.eps)
               + sp.kron(wil, CLIFFORD.gamma)).tocsr()
        grading = line_grading(n)
        coords = np.repeat(lat.site_coords, 2)
        chiral = False
    else:
        raise DegenerateLattice(f"unknown scheme {scheme!r}")

    tag = {"kind": "jackiw_rebbi_line", "n_sites": n, "extent": lat.extent,
           "boundary": lat.boundary, "m": m, "scheme": scheme,
           "profile_kind": profile.kind, "walls": list(profile.wall_positions)}
    op = GradedOperator(mat, grading=grading, chiral_flag=chiral, geometry_tag=tag)
    op.dof_coords = coords
    op.lattice = lat
    return op


def build_circle_operator_A(n: int, holonomy: float, circumference: float) -> GradedOperator:
    """Boundary ring operator −i∂ + holonomy·(2π/circumference), exactly
    Fourier-diagonal; refuses integer holonomy, where it would be gapless."""
    if n < 8:
        raise DegenerateLattice("need at least 8 Fourier modes")
    if circumference <= 0:
        raise DegenerateLattice("circumference must be positive")
    if abs(holonomy - round(holonomy)) < 1e-12:
        raise ZeroModeOnBoundary(
            f"holonomy {holonomy} is an integer; the ring operator has a zero eigenvalue")
    mat = spectral_circle_operator(n, circumference, holonomy)
    tag = {"kind": "circle_A", "n": n, "holonomy": holonomy,
           "circumference": circumference}
    return GradedOperator(mat, grading=None, chiral_flag=False, geometry_tag=tag)
