"""Lattice geometries: 1D segments/circles and 2D tori with a marked collar."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateLattice

PERIODIC = "periodic"
DIRICHLET = "dirichlet"


@dataclass(frozen=True)
class Lattice1D:
    """Uniform 1D lattice on a segment (dirichlet) or circle (periodic).

    For dirichlet boundaries the sites sit strictly inside (−extent/2, extent/2),
    spacing extent/(n_sites+1), with implicit zero ghost sites at both ends. For
    periodic boundaries the spacing is extent/n_sites and site 0 sits at
    −extent/2.
    """

    n_sites: int
    extent: float
    boundary: str = DIRICHLET

    def __post_init__(self):
        if self.n_sites < 1:
            raise DegenerateLattice("n_sites must be positive")
        if self.extent <= 0:
            raise DegenerateLattice("extent must be positive")
        if self.boundary not in (PERIODIC, DIRICHLET):
            raise DegenerateLattice(f"unknown boundary {self.boundary!r}")

    @property
    def spacing(self) -> float:
        if self.boundary == PERIODIC:
            return self.extent / self.n_sites
        return self.extent / (self.n_sites + 1)

    @property
    def site_coords(self) -> np.ndarray:
        a = self.spacing
        left = -self.extent / 2.0
        if self.boundary == PERIODIC:
            return left + a * np.arange(self.n_sites)
        return left + a * (1.0 + np.arange(self.n_sites))

    def wrap_distance(self, x: np.ndarray, y: float) -> np.ndarray:
        """Signed displacement x − y, reduced to (−extent/2, extent/2] on circles."""
        d = np.asarray(x, dtype=float) - y
        if self.boundary == PERIODIC:
            d = (d + self.extent / 2.0) % self.extent - self.extent / 2.0
        return d


@dataclass(frozen=True)
class TorusLattice2D:
    """2D torus lattice; x is the direction that gets cut, y the boundary circle.

    The torus is split into two half-open column ranges by two cut rings placed
    at the dual positions x = cut_a and x = cut_b (between columns). The inner
    half X₊ spans columns [cut_a, cut_b); the primary collar band is the run of
    columns around cut_a where the operator is required to look like the flat
    product form.
    """

    n_x: int
    n_y: int
    extent_x: float | None = None
    extent_y: float | None = None
    collar_halfwidth: int = 2

    def __post_init__(self):
        if self.n_x < 8 or self.n_y < 4:
            raise DegenerateLattice("torus needs n_x >= 8 and n_y >= 4")
        if self.extent_x is None:
            object.__setattr__(self, "extent_x", float(self.n_x))
        if self.extent_y is None:
            object.__setattr__(self, "extent_y", float(self.n_y))
        if self.n_x % 4 != 0:
            raise DegenerateLattice("n_x must be a multiple of 4 so the cuts fall on columns")
        clamped = max(1, min(self.collar_halfwidth, self.cut_a - 1))
        object.__setattr__(self, "collar_halfwidth", clamped)
        lo, hi = self.collar_band
        if not (0 < lo and hi < self.n_x):
            raise DegenerateLattice("collar band must sit strictly inside the x-range")

    @property
    def spacing_x(self) -> float:
        return self.extent_x / self.n_x

    @property
    def spacing_y(self) -> float:
        return self.extent_y / self.n_y

    @property
    def n_sites(self) -> int:
        return self.n_x * self.n_y

    @property
    def cut_a(self) -> int:
        """Left cut: ring between columns cut_a−1 and cut_a."""
        return self.n_x // 4

    @property
    def cut_b(self) -> int:
        return 3 * self.n_x // 4

    @property
    def collar_band(self) -> tuple[int, int]:
        """Inclusive column range [lo, hi] around the primary cut."""
        return (self.cut_a - self.collar_halfwidth, self.cut_a + self.collar_halfwidth - 1)

    @property
    def plus_columns(self) -> np.ndarray:
        return np.arange(self.cut_a, self.cut_b)

    def site_index(self, x, y):
        """Site-major flattening, x outermost: index = x*n_y + y."""
        return np.asarray(x) * self.n_y + np.asarray(y)

    def column_of_site(self, site):
        return np.asarray(site) // self.n_y

    def in_plus(self, column) -> np.ndarray:
        c = np.asarray(column)
        return (c >= self.cut_a) & (c < self.cut_b)

    def distance_to_cuts(self, column) -> np.ndarray:
        """Distance in columns from the nearest cut ring (dual positions)."""
        c = np.asarray(column, dtype=float) + 0.5  # dual coordinate of the column center
        d_a = np.abs((c - self.cut_a + self.n_x / 2.0) % self.n_x - self.n_x / 2.0)
        d_b = np.abs((c - self.cut_b + self.n_x / 2.0) % self.n_x - self.n_x / 2.0)
        return np.minimum(d_a, d_b)
