"""U(1) link fields on the torus with prescribed integer flux."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateLattice, FluxInCollar
from .lattices import TorusLattice2D

UNIT_TOL = 1e-14
CHARGE_TOL = 1e-10


@dataclass(frozen=True)
class GaugeLinkField:
    """Unit-modulus links on a torus; link_x[x, y] points to (x+1, y), link_y to (x, y+1)."""

    lattice: TorusLattice2D
    link_x: np.ndarray
    link_y: np.ndarray
    holonomy_y: float = 0.0

    def __post_init__(self):
        for name, arr in (("link_x", self.link_x), ("link_y", self.link_y)):
            arr = np.asarray(arr, dtype=complex)
            if arr.shape != (self.lattice.n_x, self.lattice.n_y):
                raise DegenerateLattice(f"{name} must have shape (n_x, n_y)")
            if np.max(np.abs(np.abs(arr) - 1.0)) > UNIT_TOL:
                raise DegenerateLattice(f"{name} entries must be unit modulus")
            object.__setattr__(self, name, arr)

    def plaquette_angles(self) -> np.ndarray:
        """Principal-branch angle of each plaquette, indexed by its lower-left site."""
        ux = self.link_x
        uy = self.link_y
        ux_up = np.roll(ux, -1, axis=1)   # U_x at (x, y+1)
        uy_right = np.roll(uy, -1, axis=0)  # U_y at (x+1, y)
        w = ux * uy_right * ux_up.conj() * uy.conj()
        return np.angle(w)

    def total_charge(self) -> int:
        total = self.plaquette_angles().sum() / (2.0 * np.pi)
        q = round(total)
        if abs(total - q) > CHARGE_TOL:
            raise DegenerateLattice(
                f"plaquette angles sum to a non-integer charge {total}")
        return int(q)

    def ring_holonomy_windings(self, column: int) -> float:
        """Winding number (in units of 2π) of the y-links around one ring."""
        return float(np.angle(self.link_y[column]).sum() / (2.0 * np.pi))

    def ring_links_constant(self, column: int, tol: float = 1e-12) -> bool:
        col = self.link_y[column]
        return bool(np.max(np.abs(col - col[0])) <= tol)


def make_gauge_flux(lat: TorusLattice2D, Q: int, placement="uniform",
                    holonomy: float = 0.0) -> GaugeLinkField:
    """Link field with total flux 2πQ and flat transverse holonomy.

    placement "uniform" spreads the flux evenly over every plaquette;
    placement ("localized", (lo, hi)) supports the flux on the plaquette
    columns lo..hi−1, which must stay clear of both collar neighbourhoods.
    The y-holonomy factor exp(2πi·holonomy/n_y) multiplies every y-link, so
    each ring carries flat holonomy `holonomy` (mod 1) plus the accumulated
    flux winding.
    """
    n_x, n_y = lat.n_x, lat.n_y
    link_x = np.ones((n_x, n_y), dtype=complex)
    hol_factor = np.exp(2j * np.pi * holonomy / n_y)

    if placement == "uniform":
        phi = 2.0 * np.pi * Q / (n_x * n_y)
        if abs(phi) >= np.pi:
            raise DegenerateLattice("flux density too large for principal-branch charge")
        xs = np.arange(n_x)
        link_y = np.exp(1j * phi * xs)[:, None] * np.ones((1, n_y))
        # wrap column carries the compensating x-links so every plaquette is phi
        link_x[n_x - 1, :] = np.exp(-1j * phi * n_x * np.arange(n_y))
    else:
        kind, window = placement
        if kind != "localized":
            raise DegenerateLattice(f"unknown placement {placement!r}")
        lo, hi = int(window[0]), int(window[1])
        if not (0 <= lo < hi < n_x):
            raise DegenerateLattice("localized window must satisfy 0 <= lo < hi < n_x")
        guard = lat.collar_halfwidth
        cols = np.arange(lo, hi)
        if np.any(lat.distance_to_cuts(cols) < guard + 0.5):
            raise FluxInCollar(
                f"window [{lo},{hi}] intersects a collar neighbourhood")
        theta_top = 2.0 * np.pi * Q / n_y
        if abs(theta_top) / (hi - lo) >= np.pi:
            raise DegenerateLattice("window too narrow for principal-branch plaquettes")
        ramp = np.clip((np.arange(n_x) - lo) / float(hi - lo), 0.0, 1.0)
        theta = theta_top * ramp
        link_y = np.exp(1j * theta)[:, None] * np.ones((1, n_y))
        # wrap column compensates the winding so the seam plaquettes are trivial
        link_x[n_x - 1, :] = np.exp(-1j * theta_top * np.arange(n_y))

    link_y = link_y * hol_factor
    field = GaugeLinkField(lattice=lat, link_x=link_x, link_y=link_y,
                           holonomy_y=float(holonomy % 1.0))
    q = field.total_charge()
    if q != Q:
        raise DegenerateLattice(f"constructed charge {q} != requested {Q}")
    return field
