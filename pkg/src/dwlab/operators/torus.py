"""2D torus Dirac operators and the domain-wall mass deformation.

Two schemes. "wilson" is the doubler-free gauged finite-difference operator:
the assembled Hermitian matrix is Γ·D_W for the γ-Hermitian Wilson operator
D_W, carries the grading but is not odd (the doubler-removal term is even).
"spectral_chiral" uses exact Fourier differentiation in both directions, is
exactly odd, and exists only for flux-free link fields.

Spinor layout is site-major (x outermost, then y), spinor-minor, with the
derivative along x in the c channel, the ring operator along y in the ε
channel, and the grading Γ site-diagonal.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from ..errors import ChiralSchemeWithFlux, DegenerateLattice, GeometryMismatch
from .gauge import GaugeLinkField
from .graded import CLIFFORD, GradedOperator
from .lattices import TorusLattice2D
from .profiles import WallProfile
from .schemes import spectral_circle_operator, spectral_derivative


def torus_grading(lat: TorusLattice2D) -> np.ndarray:
    return np.tile(np.array([1, -1]), lat.n_sites)


def _covariant_shifts(lat: TorusLattice2D, gauge: GaugeLinkField):
    """Sparse forward shifts T_x, T_y with links attached: (T_x ψ)(p) = U_x(p) ψ(p+x̂)."""
    n_x, n_y = lat.n_x, lat.n_y
    n = n_x * n_y
    xs, ys = np.meshgrid(np.arange(n_x), np.arange(n_y), indexing="ij")
    p = (xs * n_y + ys).ravel()
    px = (((xs + 1) % n_x) * n_y + ys).ravel()
    py = (xs * n_y + (ys + 1) % n_y).ravel()
    t_x = sp.csr_matrix((gauge.link_x.ravel(), (p, px)), shape=(n, n))
    t_y = sp.csr_matrix((gauge.link_y.ravel(), (p, py)), shape=(n, n))
    return t_x, t_y


def build_torus_dirac(lat: TorusLattice2D, gauge: GaugeLinkField, scheme="wilson",
                      wilson_r: float = 1.0) -> GradedOperator:
    """Hermitian 2-component torus Dirac operator for the given link field."""
    if gauge.lattice is not lat and (gauge.lattice.n_x, gauge.lattice.n_y) != (lat.n_x, lat.n_y):
        raise GeometryMismatch("gauge field sampled on a different lattice")
    q = gauge.total_charge()

    if scheme == "spectral_chiral":
        if q != 0:
            raise ChiralSchemeWithFlux(
                f"spectral_chiral needs a flat bundle, got charge {q}")
        if np.max(np.abs(gauge.plaquette_angles())) > 1e-12:
            raise ChiralSchemeWithFlux("spectral_chiral needs vanishing plaquettes")
        if np.max(np.abs(gauge.link_x - 1.0)) > 1e-12 or not gauge.ring_links_constant(0):
            raise ChiralSchemeWithFlux("spectral_chiral needs the flat gauge choice")
        d_x = sp.csr_matrix(spectral_derivative(lat.n_x, lat.spacing_x))
        ring = spectral_circle_operator(lat.n_y, lat.extent_y, gauge.holonomy_y)
        site_dx = sp.kron(d_x, sp.identity(lat.n_y, format="csr"))
        site_a = sp.kron(sp.identity(lat.n_x, format="csr"), sp.csr_matrix(ring))
        # the collar coordinate u runs against x, so the c channel carries −∂_x;
        # this orients positive flux to positive index
        mat = -sp.kron(site_dx, CLIFFORD.c) + sp.kron(site_a, CLIFFORD.eps)
        chiral = True
    elif scheme == "wilson":
        if wilson_r <= 0:
            raise DegenerateLattice("wilson coefficient must be positive")
        a_x, a_y = lat.spacing_x, lat.spacing_y
        t_x, t_y = _covariant_shifts(lat, gauge)
        eye = sp.identity(lat.n_sites, format="csr")
        d_x = (t_x - t_x.getH()) / (2.0 * a_x)
        k_y = -1j * (t_y - t_y.getH()) / (2.0 * a_y)
        wil = (wilson_r / (2.0 * a_x)) * (2.0 * eye - t_x - t_x.getH()) \
            + (wilson_r / (2.0 * a_y)) * (2.0 * eye - t_y - t_y.getH())
        mat = -sp.kron(d_x, CLIFFORD.c) + sp.kron(k_y, CLIFFORD.eps) \
            + sp.kron(wil, CLIFFORD.gamma)
        chiral = False
    else:
        raise DegenerateLattice(f"unknown scheme {scheme!r}")

    tag = {"kind": "torus_dirac", "scheme": scheme, "n_x": lat.n_x, "n_y": lat.n_y,
           "extent_x": lat.extent_x, "extent_y": lat.extent_y,
           "charge": q, "holonomy": gauge.holonomy_y}
    if scheme == "wilson":
        tag["wilson_r"] = wilson_r
    return GradedOperator(mat.tocsr(), grading=torus_grading(lat), chiral_flag=chiral,
                          geometry_tag=tag)


def apply_domain_wall(D: GradedOperator, m: float, profile: WallProfile) -> GradedOperator:
    """D + m·diag(κ)·Γ. The result is Hermitian but no longer odd, so it is
    returned without a grading; the tag records (m, profile).

    κ is resolved per degree of freedom: constant profiles broadcast to any
    dimension, operators carrying dof coordinates (offset sublattices) sample
    the profile there, and site-major layouts repeat per internal component.
    """
    if D.grading is None:
        raise GeometryMismatch("domain wall deformation needs a graded operator")
    if m <= 0:
        raise DegenerateLattice("mass must be positive")
    samples = np.asarray(profile.samples, dtype=float)
    n_sites = samples.size
    if profile.kind == "constant":
        per_dof = np.full(D.n, profile.level_plus)
    elif getattr(D, "dof_coords", None) is not None and D.n == np.size(D.dof_coords):
        per_dof = np.asarray(profile.evaluate(D.dof_coords), dtype=float)
    elif D.n % n_sites == 0:
        per_dof = np.repeat(samples, D.n // n_sites)
    else:
        raise GeometryMismatch(
            f"profile has {n_sites} sites but operator dimension is {D.n}")
    mass = sp.diags(m * per_dof * D.grading.astype(float))
    tag = dict(D.geometry_tag)
    tag.update({"kind": "domain_wall", "base_kind": D.geometry_tag.get("kind"),
                "m": m, "profile_kind": profile.kind,
                "levels": [profile.level_plus, profile.level_minus]})
    return GradedOperator((D.matrix + mass).tocsr(), grading=None, chiral_flag=False,
                          geometry_tag=tag)
