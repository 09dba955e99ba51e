"""Partitions of unity, symbol constants, splitting identities, bounds, excision."""

import dataclasses

import numpy as np
import pytest

from dwlab.errors import (GapNotSatisfied, MassTooSmall, NonLocalStencil,
                          OverlapTooThin, PreconditionViolated)
from dwlab.localization import (RegionPartition, build_cutoffs,
                                check_localization_bounds,
                                check_pointwise_splitting, commutator_symbol,
                                excision_count_compare,
                                make_wall_excision_instance,
                                splitting_cross_term, symbol_constants,
                                wall_line_operator)
from dwlab.operators import (Lattice1D, TorusLattice2D,
                             apply_domain_wall, build_jackiw_rebbi_line,
                             build_torus_dirac, make_gauge_flux,
                             step_profile_1d, step_profile_torus)
from dwlab.spectral import eigen


@pytest.fixture(scope="module")
def wilson_line():
    lat = Lattice1D(512, 40.0, "dirichlet")
    prof = step_profile_1d(lat, [0.0])
    op = build_jackiw_rebbi_line(lat, 4.0, prof, scheme="wilson")
    spec = {"u0": [(-13.0, 13.0)], "u1": [(-40.0, -2.5), (2.5, 40.0)]}
    part = build_cutoffs(lat, spec, transition_width=10.0)
    return lat, prof, op, part


class TestPartitions:
    def test_invariants_sitewise(self, wilson_line):
        _, _, _, part = wilson_line
        assert np.max(np.abs(part.beta0 ** 2 + part.beta1 ** 2 - 1.0)) < 1e-12
        assert np.max(np.abs(part.gamma0 ** 2 + part.gamma1 ** 2 - 1.0)) < 1e-12
        assert np.all(part.gamma1[part.supp_dbeta] == 1.0)
        v = 1.0 - part.eta0
        assert np.all(part.beta1[v <= 0.5] == 0.0)
        assert np.all(part.gamma1[v >= 0.5] == 1.0)

    def test_overlap_too_thin(self):
        lat = Lattice1D(64, 16.0, "dirichlet")
        with pytest.raises(OverlapTooThin):
            build_cutoffs(lat, {"u0": [(-8.0, 0.2)], "u1": [(0.0, 8.0)]}, 0.1)

    def test_torus_bands_per_column(self):
        lat = TorusLattice2D(32, 8)
        spec = {"u0": [(3.5, 28.5)], "u1": [(25.5, 6.5)]}
        part = build_cutoffs(lat, spec, transition_width=3.0)
        grid = part.beta0.reshape(32, 8)
        assert np.allclose(grid, grid[:, :1])  # constant along the rings
        assert np.all(part.gamma1[part.supp_dbeta] == 1.0)
        v = 1.0 - part.eta0
        assert np.all(part.beta1[v <= 0.5] == 0.0)

    def test_too_steep_transition_rejected(self):
        lat = TorusLattice2D(16, 16)
        spec = {"u0": [(0.5, 14.5)], "u1": [(10.5, 4.5)]}
        with pytest.raises(OverlapTooThin):
            build_cutoffs(lat, spec, transition_width=1.0)


class TestSymbolConstants:
    def test_ramp_slope_scaling(self):
        """Halving the transition width doubles the measured constant (10%)."""
        lat = Lattice1D(1024, 40.0, "periodic")
        prof = step_profile_1d(lat, [-15.0, 15.0], rightmost="minus")
        op = build_jackiw_rebbi_line(lat, 1.0, prof, scheme="wilson")
        spec = {"u0": [(-12.0, 12.0)], "u1": [(2.0, -2.0)]}
        consts = {}
        for w in (8.0, 4.0):
            part = build_cutoffs(lat, spec, transition_width=w)
            consts[w] = symbol_constants(op, part)
        ratio = np.sqrt(consts[4.0].C1_sq / consts[8.0].C1_sq)
        assert abs(ratio - 2.0) < 0.2

    def test_constant_cutoff_zero_symbol(self, wilson_line):
        lat, _, op, part = wilson_line
        # where the cutoff is flat the commutator vanishes identically
        sig = commutator_symbol(op, part, "gamma1")
        rows = np.unique(sig.tocoo().row) // 2
        flat_sites = np.flatnonzero(np.abs(np.diff(part.gamma1, prepend=part.gamma1[0]))
                                    + np.abs(np.diff(part.gamma1, append=part.gamma1[-1])) == 0)
        assert not set(rows.tolist()) & set(flat_sites[2:-2].tolist())

    def test_mass_term_does_not_change_constants(self, wilson_line):
        lat, prof, op, part = wilson_line
        massless = wall_line_operator(512, 40.0, [0.0], 4.0, wilson_r=1.0)[2]
        c_massive = symbol_constants(op, part)
        c_massless = symbol_constants(massless, part)
        assert abs(c_massive.C1_sq - c_massless.C1_sq) < 1e-10
        assert abs(c_massive.C2_sq - c_massless.C2_sq) < 1e-10

    def test_nonsubordinate_cutoff_rejected(self):
        lat = Lattice1D(64, 16.0, "dirichlet")
        prof = step_profile_1d(lat, [0.0])
        op = build_jackiw_rebbi_line(lat, 1.0, prof, scheme="wilson")
        n = lat.n_sites
        x = lat.site_coords
        theta = 0.5 * np.pi * np.clip((x + 8.0) / 16.0, 0, 1)  # ramps everywhere
        part = RegionPartition(
            lattice=lat, region_u0=np.arange(n), region_u1=np.arange(n),
            eta0=np.zeros(n), beta0=np.cos(theta), beta1=np.sin(theta),
            gamma0=np.zeros(n), gamma1=np.ones(n),
            supp_dbeta=np.arange(n), overlap=np.arange(28, 36), guard=0.01)
        with pytest.raises(NonLocalStencil):
            symbol_constants(op, part)


class TestSplitting:
    def test_exact_identity_on_random_vectors(self, wilson_line, rng):
        _, _, op, part = wilson_line
        scale = max(op.scale(), 1.0) ** 2
        for _ in range(100):
            phi = rng.normal(size=op.n) + 1j * rng.normal(size=op.n)
            phi /= np.linalg.norm(phi)
            assert check_pointwise_splitting(op, part, phi) <= 1e-10 * scale

    def test_interior_supported_vector_exactly_zero(self, wilson_line, rng):
        lat, _, op, part = wilson_line
        phi = np.zeros(op.n, dtype=complex)
        core = np.flatnonzero((part.beta0 == 1.0) & (np.abs(lat.site_coords) < 2.0))
        phi[2 * core] = rng.normal(size=core.size)
        phi[2 * core + 1] = rng.normal(size=core.size)
        assert check_pointwise_splitting(op, part, phi) == 0.0
        assert splitting_cross_term(op, part, phi) == 0.0

    def test_zero_vector(self, wilson_line):
        _, _, op, part = wilson_line
        assert check_pointwise_splitting(op, part, np.zeros(op.n)) == 0.0

    def test_anomaly_shrinks_under_refinement(self, rng):
        """The cross term is the continuum-vanishing remainder; refining the
        lattice at fixed profile shrinks it."""
        sizes = (256, 1024)
        vals = {}
        for n in sizes:
            lat = Lattice1D(n, 40.0, "dirichlet")
            prof = step_profile_1d(lat, [0.0])
            op = build_jackiw_rebbi_line(lat, 4.0, prof, scheme="wilson")
            spec = {"u0": [(-13.0, 13.0)], "u1": [(-40.0, -2.5), (2.5, 40.0)]}
            part = build_cutoffs(lat, spec, transition_width=10.0)
            gen = np.random.default_rng(5)
            worst = 0.0
            for _ in range(10):
                phi = gen.normal(size=op.n) + 1j * gen.normal(size=op.n)
                phi /= np.linalg.norm(phi)
                worst = max(worst, splitting_cross_term(op, part, phi))
            vals[n] = worst
        assert vals[1024] < vals[256]


class TestBounds:
    def test_wall_mode_bounds_with_margin(self, jr_line_512):
        """Exact-kernel wall geometry: margins at least 0.9 of the norm."""
        lat, prof, _ = jr_line_512
        op = build_jackiw_rebbi_line(lat, 4.0, prof)
        spec = {"u0": [(-13.0, 13.0)], "u1": [(-40.0, -2.5), (2.5, 40.0)]}
        part = build_cutoffs(lat, spec, transition_width=10.0)
        consts = symbol_constants(op, part)
        assert consts.C0 < 0.32 * 4.0
        data = eigen(op, want_vectors=True, k_lowest=3)
        mask = np.abs(data.eigenvalues) <= 0.1
        rep = check_localization_bounds(op, part, consts, 0.1,
                                        data.eigenvalues[mask],
                                        data.eigenvectors[:, mask], mass=4.0)
        assert rep.all_hold()
        for mode in rep.modes:
            assert not mode["localisation_vacuous"]
            assert mode["localisation_lhs"] >= 0.9  # unit-norm modes
            assert mode["weak_lhs"] <= 1e-6

    def test_small_mass_vacuous_not_failed(self, wilson_line):
        lat, _, op, part = wilson_line
        consts = symbol_constants(op, part)
        data = eigen(op, want_vectors=True, k_lowest=3)
        mask = np.abs(data.eigenvalues) <= 1.0
        rep = check_localization_bounds(op, part, consts, 1.0,
                                        data.eigenvalues[mask],
                                        data.eigenvectors[:, mask], mass=1.0)
        assert all(m["localisation_vacuous"] for m in rep.modes)
        assert all(m["weak_holds"] for m in rep.modes)

    def test_precondition_violation_reported(self, wilson_line):
        lat, _, op, part = wilson_line
        consts = symbol_constants(op, part)
        data = eigen(op, want_vectors=True)
        with pytest.raises(PreconditionViolated) as err:
            check_localization_bounds(op, part, consts, 0.1,
                                      data.eigenvalues, data.eigenvectors,
                                      mass=4.0)
        assert len(err.value.offending) > 0

    def test_torus_edge_modes(self):
        lat = TorusLattice2D(32, 8)
        gauge = make_gauge_flux(lat, 1, ("localized", (12, 18)), holonomy=0.3)
        base = build_torus_dirac(lat, gauge, "wilson")
        mass = 1.0
        op = apply_domain_wall(base, mass, step_profile_torus(lat))
        spec = {"u0": [(3.5, 28.5)], "u1": [(25.5, 6.5)]}
        part = build_cutoffs(lat, spec, transition_width=3.0)
        consts = symbol_constants(op, part)
        data = eigen(op, want_vectors=True)
        lam = 2 * np.pi * 0.3 / 8 * 1.7
        mask = np.abs(data.eigenvalues) <= lam
        assert mask.sum() >= 2
        rep = check_localization_bounds(op, part, consts, lam,
                                        data.eigenvalues[mask],
                                        data.eigenvectors[:, mask], mass=mass)
        assert all(m["weak_holds"] and m["eigenvalue_comparison_holds"]
                   for m in rep.modes)


class TestExcision:
    def test_line_line_counts(self):
        inst = make_wall_excision_instance("line_line")
        rep = excision_count_compare(inst)
        assert rep.gap_certified
        assert (rep.count_L, rep.count_Lp) == (1, 1)
        assert rep.equal
        assert inst.m ** 2 > rep.mass_bound

    def test_line_circle_counts(self):
        inst = make_wall_excision_instance("line_circle")
        rep = excision_count_compare(inst)
        assert (rep.count_L, rep.count_Lp) == (2, 2)
        assert rep.equal

    def test_identical_operators_trivially_equal(self):
        inst = make_wall_excision_instance("line_circle")
        same = dataclasses.replace(inst, op_Lp=inst.op_L, hp=inst.h,
                                   shared_dofs_Lp=inst.shared_dofs_L,
                                   part_Lp=inst.part_L)
        rep = excision_count_compare(same)
        assert rep.equal

    def test_mass_too_small(self):
        inst = make_wall_excision_instance("line_line", transition_width=3.0)
        with pytest.raises(MassTooSmall) as err:
            excision_count_compare(inst)
        assert err.value.bound > inst.m ** 2

    def test_gap_hypothesis_enforced(self):
        inst = make_wall_excision_instance("line_line")
        l0, l1, l2 = inst.lambdas
        bad = dataclasses.replace(inst, lambdas=(1e-9, l1, l2))
        with pytest.raises(GapNotSatisfied):
            excision_count_compare(bad)
