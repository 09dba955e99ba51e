"""Operators on product geometries: the doubled cylinder extension of a graded
operator, and the open chiral half-lattice with flat cylindrical ends.

Both are staggered chiral chains (see staggered.py) over a base fiber: the
cylinder extension over the base operator's whole Hilbert space, the
half-lattice over the boundary ring. The rectangular structure plus spectral
end selection force the exact integer kernel the continuum predicts.
"""

from __future__ import annotations

import numpy as np

from ..errors import (BoundaryNotProductForm, DegenerateLattice, GeometryMismatch,
                      ProfileNotAsymptoticallyConstant)
from .gauge import GaugeLinkField
from .graded import GradedOperator
from .lattices import DIRICHLET, Lattice1D, TorusLattice2D
from .profiles import WallProfile
from .schemes import spectral_circle_operator
from .staggered import (chiral_from_block, end_selectors,
                        staggered_offdiagonal_block)

#: Sign relating the index of a graded operator to the index of its doubled
#: cylinder extension with the block grading used here: the kernel forced by
#: the end data lands in the column channel (grading −1), with multiplicity
#: n₊(D+mΓ) − n₊(D−mΓ) = index(D). Asserted across every run.
CYLINDER_INDEX_SIGN = -1


def _check_profile_asymptotics(values: np.ndarray, what: str):
    n = values.shape[0]
    edge = max(2, int(0.1 * n))
    scale = 1.0 + float(np.max(np.abs(values)))
    for name, chunk in (("left", values[:edge]), ("right", values[-edge:])):
        if np.max(chunk) - np.min(chunk) > 1e-12 * scale:
            raise ProfileNotAsymptoticallyConstant(
                f"{what} varies within the {name} 10% of the s-lattice")


def build_cylinder_extension(D: GradedOperator, m: float, s_profile: WallProfile,
                             lat_s: Lattice1D,
                             transverse_signs: np.ndarray | None = None) -> GradedOperator:
    """Doubled operator  [[0, (D + m·κ̂·Γ) + ∂_s], [(D + m·κ̂·Γ) − ∂_s, 0]].

    The first (midpoint) block carries grading +1, the second (column) block
    −1; the assembled operator is exactly odd regardless of D's own chirality
    defect. κ̂ is the s-profile sampled at midpoints; when transverse_signs is
    given (±1 per base dof) the wall bends: κ̂(s, d) takes the profile's plus
    level only where the s-step and the transverse sign are both positive.

    The open s-ends impose spectral conditions built from the asymptotic mass
    operators D + m·κ̂(±end)·Γ, which must be gapped. This forces exactly
    |index(D)| exact zero modes with index −index(D).
    """
    if D.grading is None:
        raise GeometryMismatch("cylinder extension needs a graded base operator")
    if lat_s.boundary != DIRICHLET:
        raise DegenerateLattice("the s-lattice must be a dirichlet truncation")
    if m <= 0:
        raise DegenerateLattice("mass must be positive")
    n_s, a_s = lat_s.n_sites, lat_s.spacing
    if m * a_s >= 2.0:
        raise DegenerateLattice(
            f"s-lattice too coarse for mass {m}: m*spacing = {m * a_s:.3f}")
    n_base = D.n
    dense_d = D.matrix.toarray()
    gamma = D.grading.astype(float)

    x = lat_s.site_coords
    mids = np.concatenate([[x[0] - a_s / 2.0], x[:-1] + a_s / 2.0, [x[-1] + a_s / 2.0]])
    s_vals = np.asarray(s_profile.evaluate(mids), dtype=float)
    _check_profile_asymptotics(s_vals, "s-profile")

    if transverse_signs is None:
        kappa = np.repeat(s_vals[:, None], n_base, axis=1)
    else:
        w = np.asarray(transverse_signs, dtype=float)
        if w.shape != (n_base,):
            raise GeometryMismatch("transverse_signs must have one entry per base dof")
        lp, lm = s_profile.level_plus, s_profile.level_minus
        s_step = s_vals[:, None] >= 0.5 * (lp + lm)
        kappa = np.where(s_step & (w[None, :] > 0), lp, lm)

    masses = [dense_d + m * np.diag(kappa[j] * gamma) for j in range(n_s + 1)]
    left, right = end_selectors(masses[0], masses[-1])
    block = staggered_offdiagonal_block(n_s, a_s, masses, periodic=False,
                                        base_dim=n_base, left_rows=left,
                                        right_rows=right)
    mat, grading = chiral_from_block(block)
    tag = {"kind": "cylinder_extension", "m": m, "n_s": n_s,
           "s_extent": lat_s.extent, "base_kind": D.geometry_tag.get("kind"),
           "base_dim": n_base, "profile_kind": s_profile.kind,
           "bent": transverse_signs is not None,
           "index_sign": CYLINDER_INDEX_SIGN}
    return GradedOperator(mat, grading=grading, chiral_flag=True, geometry_tag=tag)


def torus_column_signs(lat: TorusLattice2D, n_spinor: int = 2) -> np.ndarray:
    """±1 per base dof of a torus operator: +1 on the inner (X₊) columns."""
    cols = np.arange(lat.n_x)
    per_site = np.where(lat.in_plus(cols), 1.0, -1.0)
    return np.repeat(np.repeat(per_site, lat.n_y), n_spinor)


def build_aps_extended_operator(lat: TorusLattice2D, gauge: GaugeLinkField,
                                extension_columns: int):
    """Exactly chiral staggered operator on the cut-open inner half with flat
    cylindrical extensions at both cut rings, outer midpoints unconstrained.

    Per column the transverse operator is the exact Fourier ring operator at
    that ring's accumulated holonomy; midpoint mass blocks are neighbour
    averages. Returns (operator, meta); meta carries the boundary ring
    operators and dof bookkeeping needed to impose spectral conditions there.
    The unconstrained operator has an n_y-dimensional forced kernel in the
    midpoint channel, removed once boundary conditions are applied.
    """
    if extension_columns < 4:
        raise DegenerateLattice("extension must be at least 4 columns")
    n_y, l_y, a_x = lat.n_y, lat.extent_y, lat.spacing_x
    inner = list(range(lat.cut_a, lat.cut_b))
    for c in inner:
        if not gauge.ring_links_constant(c):
            raise DegenerateLattice("ring links must be constant within each ring")

    hol_left = gauge.ring_holonomy_windings(inner[0])
    hol_right = gauge.ring_holonomy_windings(inner[-1])
    hols = ([hol_left] * extension_columns
            + [gauge.ring_holonomy_windings(c) for c in inner]
            + [hol_right] * extension_columns)
    n_cols = len(hols)

    guard = lat.collar_halfwidth
    for name, lo in (("left", extension_columns - guard),
                     ("right", n_cols - extension_columns - guard)):
        block = hols[lo:lo + 2 * guard]
        if max(block) - min(block) > 1e-10:
            raise BoundaryNotProductForm(
                f"ring holonomy varies across the {name} collar; flux reaches the cut")

    rings = [spectral_circle_operator(n_y, l_y, h) for h in hols]
    masses = [rings[0]]
    masses += [0.5 * (rings[j - 1] + rings[j]) for j in range(1, n_cols)]
    masses += [rings[-1]]
    # the chain coordinate runs against the collar coordinate of the torus
    # operator (see build_torus_dirac), hence the flipped derivative channel
    block = staggered_offdiagonal_block(n_cols, a_x, masses, periodic=False,
                                        base_dim=n_y, left_rows=None,
                                        right_rows=None, derivative_sign=-1)
    mat, grading = chiral_from_block(block)

    n_b = (n_cols + 1) * n_y
    tag = {"kind": "aps_extended", "n_cols": n_cols, "n_y": n_y,
           "extension_columns": extension_columns,
           "holonomy_left": hol_left, "holonomy_right": hol_right,
           "charge_inside": gauge.total_charge()}
    op = GradedOperator(mat, grading=grading, chiral_flag=True, geometry_tag=tag)
    meta = {
        "n_cols": n_cols,
        "n_y": n_y,
        "n_midpoint_dofs": n_b,
        "circumference": l_y,
        "spacing_x": a_x,
        "derivative_sign": -1,
        "holonomy_left": hol_left,
        "holonomy_right": hol_right,
        "ring_left": rings[0],
        "ring_right": rings[-1],
        "left_outer_dofs": np.arange(n_y),
        "right_outer_dofs": n_cols * n_y + np.arange(n_y),
    }
    return op, meta
