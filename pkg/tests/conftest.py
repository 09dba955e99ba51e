import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


@pytest.fixture(scope="session")
def jr_line_512():
    """The reference single-wall segment operator (built once per session)."""
    from dwlab.operators import Lattice1D, build_jackiw_rebbi_line, step_profile_1d
    lat = Lattice1D(512, 40.0, "dirichlet")
    prof = step_profile_1d(lat, [0.0])
    op = build_jackiw_rebbi_line(lat, 1.0, prof)
    return lat, prof, op


@pytest.fixture(scope="session")
def torus16():
    from dwlab.operators import TorusLattice2D
    return TorusLattice2D(16, 16)
