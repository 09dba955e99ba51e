"""Domain-wall mass profiles sampled on lattices.

A profile stores the per-site values of the function that multiplies the mass
term: a sharp step between two levels, a tanh-mollified version of it, or a
constant. Walls live at dual positions (between sites) whenever possible; a
step evaluated exactly on a wall returns the mid-level, matching the
convention that the wall itself carries no preferred side.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateLattice, OddWallCountOnCircle, WidthBelowResolution
from .lattices import PERIODIC, Lattice1D, TorusLattice2D

STEP = "step"
TANH = "tanh"
CONSTANT = "constant"

_WALL_TOL = 1e-12


@dataclass(frozen=True)
class WallProfile:
    """Per-site samples of a domain-wall function with level bookkeeping.

    `rightmost` records which level the region at the largest coordinate
    carries; together with the wall positions it determines the profile at
    arbitrary points, not only at the sampled sites.
    """

    kind: str
    level_plus: float
    level_minus: float
    wall_positions: tuple
    samples: np.ndarray
    lattice: object
    width: float | None = None
    rightmost: str = "plus"

    def __post_init__(self):
        lo = min(self.level_minus, self.level_plus)
        hi = max(self.level_minus, self.level_plus)
        s = np.asarray(self.samples, dtype=float)
        tol = 1e-12 * (1.0 + abs(hi) + abs(lo))
        if s.min() < lo - tol or s.max() > hi + tol:
            raise DegenerateLattice("profile samples escape the level interval")
        object.__setattr__(self, "samples", s)

    @property
    def is_wall(self) -> bool:
        return self.level_plus * self.level_minus < 0

    @property
    def mid_level(self) -> float:
        return 0.5 * (self.level_plus + self.level_minus)

    # -- pointwise evaluation (1D profiles) ---------------------------------

    def _side(self, x: np.ndarray) -> np.ndarray:
        """+1 on level_plus regions, −1 on level_minus, 0 exactly on a wall.

        Crossings are counted in the fundamental domain [−extent/2, extent/2);
        with an even wall count on circles the pattern closes across the seam.
        """
        lat = self.lattice
        if not isinstance(lat, Lattice1D):
            raise DegenerateLattice("pointwise evaluation needs a 1D profile")
        x = np.asarray(x, dtype=float)
        half = lat.extent / 2.0
        if lat.boundary == PERIODIC:
            x = (x + half) % lat.extent - half
        n_right = np.zeros(x.shape, dtype=int)
        on_wall = np.zeros(x.shape, dtype=bool)
        for w in self.wall_positions:
            n_right += (x < w - _WALL_TOL).astype(int)
            on_wall |= np.abs(x - w) <= _WALL_TOL
        base = 0 if self.rightmost == "plus" else 1
        side = np.where((n_right + base) % 2 == 0, 1.0, -1.0)
        return np.where(on_wall, 0.0, side)

    def evaluate(self, x) -> np.ndarray:
        """Profile value at arbitrary coordinates (1D lattices only)."""
        x = np.asarray(x, dtype=float)
        if self.kind == CONSTANT:
            return np.full(x.shape, self.level_plus)
        half = 0.5 * (self.level_plus - self.level_minus)
        if self.kind == STEP:
            return self.mid_level + half * self._side(x)
        # tanh
        lat = self.lattice
        d = np.min(np.abs(np.stack([lat.wrap_distance(x, w)
                                    for w in self.wall_positions])), axis=0)
        return self.mid_level + half * self._side(x) * np.tanh(d / self.width)

    def signed_distance(self) -> np.ndarray:
        """Distance to the nearest wall at each site, positive on the plus side."""
        lat = self.lattice
        if isinstance(lat, Lattice1D):
            x = lat.site_coords
            d = np.min(np.abs(np.stack([lat.wrap_distance(x, w)
                                        for w in self.wall_positions])), axis=0)
            return self._side(x) * d
        if isinstance(lat, TorusLattice2D):
            cols = np.arange(lat.n_x)
            d_cols = lat.distance_to_cuts(cols) * lat.spacing_x
            sign = np.where(lat.in_plus(cols), 1.0, -1.0)
            return np.repeat(sign * d_cols, lat.n_y)
        raise TypeError(f"unsupported lattice {type(lat)!r}")


class FreeSites:
    """Degenerate geometry: n abstract sites with no coordinates. Lets constant
    profiles deform operators that carry no lattice (e.g. random graded
    matrices)."""

    def __init__(self, n_sites: int):
        self.n_sites = int(n_sites)


def constant_profile(lattice, value: float) -> WallProfile:
    """Constant profile on a lattice object or on a bare site count."""
    if isinstance(lattice, (int, np.integer)):
        lattice = FreeSites(lattice)
    return WallProfile(kind=CONSTANT, level_plus=float(value), level_minus=float(value),
                       wall_positions=(), samples=np.full(lattice.n_sites, float(value)),
                       lattice=lattice)


def step_profile_1d(lattice: Lattice1D, walls, level_plus: float = 1.0,
                    level_minus: float = -1.0, rightmost: str = "plus") -> WallProfile:
    """Sharp alternating-step profile with walls at the given coordinates.

    Regions alternate between the two levels; `rightmost` fixes the level of
    the region containing the largest coordinates.
    """
    walls = tuple(sorted(float(w) for w in walls))
    if lattice.boundary == PERIODIC and len(walls) % 2 == 1:
        raise OddWallCountOnCircle(
            f"{len(walls)} sign changes on a circle cannot close up")
    prof = WallProfile(kind=STEP, level_plus=float(level_plus),
                       level_minus=float(level_minus), wall_positions=walls,
                       samples=np.zeros(lattice.n_sites), lattice=lattice,
                       rightmost=rightmost)
    object.__setattr__(prof, "samples", prof.evaluate(lattice.site_coords))
    return prof


def step_profile_torus(lattice: TorusLattice2D, level_plus: float = 1.0,
                       level_minus: float = -1.0) -> WallProfile:
    """Step profile on the torus: level_plus on the X₊ columns, level_minus outside."""
    cols = np.arange(lattice.n_x)
    per_col = np.where(lattice.in_plus(cols), float(level_plus), float(level_minus))
    samples = np.repeat(per_col, lattice.n_y)
    walls = ((lattice.cut_a - 0.5) * lattice.spacing_x,
             (lattice.cut_b - 0.5) * lattice.spacing_x)
    return WallProfile(kind=STEP, level_plus=float(level_plus),
                       level_minus=float(level_minus), wall_positions=walls,
                       samples=samples, lattice=lattice)


def smooth_wall_profile(profile: WallProfile, width: float):
    """Mollify a step profile with a tanh ramp of the given width.

    Returns the smoothed profile together with its discrete L² distance to the
    original step (cell measure = lattice spacing, or the plaquette area in 2D).
    """
    if profile.kind != STEP:
        raise DegenerateLattice("smoothing is defined for step profiles")
    lat = profile.lattice
    if isinstance(lat, Lattice1D):
        spacing = lat.spacing
        measure = lat.spacing
    elif isinstance(lat, TorusLattice2D):
        spacing = lat.spacing_x
        measure = lat.spacing_x * lat.spacing_y
    else:
        raise TypeError(f"unsupported lattice {type(lat)!r}")
    if width <= 2.0 * spacing:
        raise WidthBelowResolution(
            f"width {width} must exceed twice the spacing {spacing}")
    d = profile.signed_distance()
    half = 0.5 * (profile.level_plus - profile.level_minus)
    samples = profile.mid_level + half * np.tanh(d / width)
    smooth = WallProfile(kind=TANH, level_plus=profile.level_plus,
                         level_minus=profile.level_minus,
                         wall_positions=profile.wall_positions,
                         samples=samples, lattice=lat, width=float(width),
                         rightmost=profile.rightmost)
    l2 = float(np.sqrt(measure * np.sum((samples - profile.samples) ** 2)))
    return smooth, l2
