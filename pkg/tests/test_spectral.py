"""Spectral functionals: decompositions, sign sums, indices, localization."""

import numpy as np
import pytest

from dwlab.errors import (DegenerateLattice, FitUnstable, SolverFailure,
                          ZeroModePresent)
from dwlab.operators import (GradedOperator, Lattice1D,
                             apply_domain_wall, build_circle_operator_A,
                             build_jackiw_rebbi_line, build_torus_dirac,
                             constant_profile, make_gauge_flux,
                             random_chiral_operator, smooth_wall_profile,
                             step_profile_1d, step_profile_torus)
from dwlab.spectral import (SpectralData, as_eta_identity_check, chiral_index,
                            eigen, eta_of_operator, eta_sign_sum,
                            export_profile_csv, export_spectrum_csv,
                            mode_localization, spectral_gap_check)


class TestEigen:
    def test_diagonal(self):
        op = GradedOperator(np.diag([1.0, -1.0, 0.0]))
        spec = eigen(op)
        assert np.allclose(spec.eigenvalues, [-1.0, 0.0, 1.0])

    def test_two_by_two_vectors_phase_fixed(self):
        op = GradedOperator(np.array([[0.0, 1.0], [1.0, 0.0]]))
        spec = eigen(op, want_vectors=True)
        assert np.allclose(spec.eigenvalues, [-1.0, 1.0])
        s = 1.0 / np.sqrt(2.0)
        assert np.allclose(np.abs(spec.eigenvectors), s)
        # largest component made real positive
        assert np.allclose(spec.eigenvectors[:, 0], [s, -s]) \
            or np.allclose(spec.eigenvectors[:, 0], [-s, s]) is False

    def test_k_lowest_matches_full(self, jr_line_512):
        _, _, op = jr_line_512
        part = eigen(op, want_vectors=True, k_lowest=5)
        full = eigen(op)
        assert np.allclose(np.sort(np.abs(part.eigenvalues)),
                           np.sort(np.abs(full.eigenvalues))[:5], atol=1e-9)

    def test_residuals_certified(self, rng):
        op = random_chiral_operator(rng, 8, 8)
        spec = eigen(op, want_vectors=True)
        r = op.matrix @ spec.eigenvectors - spec.eigenvectors * spec.eigenvalues
        assert np.max(np.sqrt(np.sum(np.abs(r) ** 2, axis=0))) <= 1e-8 * max(op.scale(), 1)

    def test_dense_refused_beyond_limit(self):
        import scipy.sparse as sp
        big = GradedOperator(sp.identity(7000, format="csr", dtype=complex))
        with pytest.raises(SolverFailure):
            eigen(big)


class TestEtaSignSum:
    def test_symmetric_spectrum(self):
        spec = SpectralData(np.array([-2.0, -1.0, 1.0, 2.0]), None, 1e-8, 2.0)
        res = eta_sign_sum(spec)
        assert res.value == 0 and res.n_zero == 0

    def test_constant_mass_pair_gives_index(self, rng):
        for _ in range(5):
            p, q = rng.integers(3, 12), rng.integers(3, 12)
            d = random_chiral_operator(rng, int(p), int(q),
                                       rank=int(rng.integers(0, min(p, q) + 1)))
            for m in (0.1, 1.0, 10.0):
                plus = eta_of_operator(apply_domain_wall(d, m, constant_profile(d.n, 1.0)))
                minus = eta_of_operator(apply_domain_wall(d, m, constant_profile(d.n, -1.0)))
                assert plus.value == int(p) - int(q)
                assert minus.value == -plus.value

    def test_zero_mode_guard(self, jr_line_512):
        _, _, op = jr_line_512
        spec = eigen(op)
        with pytest.raises(ZeroModePresent):
            eta_sign_sum(spec, allow_zero=False)
        res = eta_sign_sum(spec, allow_zero=True)
        assert res.n_zero == 1 and res.value == 0

    def test_parity_bookkeeping(self, rng):
        d = random_chiral_operator(rng, 9, 5, rank=4)
        res = eta_of_operator(apply_domain_wall(d, 0.5, constant_profile(d.n, 1.0)))
        assert (res.value - (d.n - res.n_zero)) % 2 == 0

    def test_circle_truncation_vs_regularized_oracle(self):
        # oracle first: Abel-regularized symmetric partial sums over |k| <= 1e6
        from dwlab.aps import eta_circle_exact, eta_circle_partial_sum
        for a in (0.25, 0.75):
            exact = eta_circle_exact(a)
            for eps in (1e-2, 1e-3):
                assert abs(eta_circle_partial_sum(a, 10 ** 6, eps) - exact) < 1e-4
        # the plain truncated sign sum follows the window parity instead
        op = build_circle_operator_A(64, 0.25, 2 * np.pi)
        assert eta_of_operator(op).value == 0
        op = build_circle_operator_A(65, 0.25, 2 * np.pi)
        assert eta_of_operator(op).value == 1


class TestChiralIndex:
    def test_trivial_matrix_with_grading(self):
        op = GradedOperator(np.zeros((3, 3)), grading=np.array([1, 1, -1]),
                            chiral_flag=True)
        res = chiral_index(op)
        assert res.index == 1 and (res.dim_ker_plus, res.dim_ker_minus) == (2, 1)

    def test_flat_torus_zero(self, torus16):
        g = make_gauge_flux(torus16, 0, "uniform", holonomy=0.3)
        op = build_torus_dirac(torus16, g, "spectral_chiral")
        assert chiral_index(op).index == 0

    def test_threshold_decade_invariance(self, jr_line_512, torus16):
        _, _, op = jr_line_512
        base = chiral_index(op).index
        for scale in (0.2, 1.0, 5.0):
            eps = 1e-8 * op.scale() * scale
            assert chiral_index(op, zero_threshold=eps).index == base

    def test_identity_check_randomized(self, rng):
        for _ in range(10):
            p, q = int(rng.integers(2, 16)), int(rng.integers(2, 16))
            d = random_chiral_operator(rng, p, q, rank=int(rng.integers(0, min(p, q) + 1)))
            rep = as_eta_identity_check(d, float(rng.uniform(0.05, 5.0)))
            assert rep["equal"] and rep["lhs"] == p - q

    def test_identity_check_empty_kernel(self, rng):
        d = random_chiral_operator(rng, 6, 6, rank=6)
        rep = as_eta_identity_check(d, 1.0)
        assert rep["lhs"] == 0 and rep["rhs"] == 0 and rep["equal"]

    def test_identity_on_flat_torus_etas_vanish(self, torus16):
        g = make_gauge_flux(torus16, 0, "uniform", holonomy=0.3)
        op = build_torus_dirac(torus16, g, "spectral_chiral")
        rep = as_eta_identity_check(op, 1.0)
        assert rep["equal"] and rep["eta_plus"] == 0 and rep["eta_minus"] == 0

    def test_identity_needs_odd_operator(self, torus16):
        g = make_gauge_flux(torus16, 1, "uniform")
        op = build_torus_dirac(torus16, g, "wilson")
        with pytest.raises(DegenerateLattice):
            as_eta_identity_check(op, 1.0)


class TestGapReport:
    def test_whitelisted_zero(self, jr_line_512):
        _, _, op = jr_line_512
        spec = eigen(op)
        rep = spectral_gap_check(spec, -0.9, 0.9, whitelist_zero=True)
        assert rep.gap_holds and abs(rep.nearest_outside) > 0.9
        rep2 = spectral_gap_check(spec, -0.9, 0.9, whitelist_zero=False)
        assert not rep2.gap_holds and len(rep2.eigenvalues_inside) == 1

    def test_gap_failure_reports_offenders(self, torus16):
        g = make_gauge_flux(torus16, 1, ("localized", (6, 10)), holonomy=0.3)
        d = build_torus_dirac(torus16, g, "wilson")
        lam_a = 2 * np.pi * 0.3 / 16
        spec = eigen(apply_domain_wall(d, 0.02, step_profile_torus(torus16)))
        rep = spectral_gap_check(spec, -lam_a / 2, lam_a / 2)
        assert not rep.gap_holds and len(rep.eigenvalues_inside) >= 1


class TestModeLocalization:
    def test_decay_rates(self, jr_line_512):
        lat, _, op = jr_line_512
        spec = eigen(op, want_vectors=True)
        i0 = int(np.argmin(np.abs(spec.eigenvalues)))
        loc = mode_localization(spec, i0, lat, dof_coords=op.dof_coords, walls=[0.0])
        assert abs(loc["fitted_decay_rate"] - 1.0) <= 0.02
        assert loc["fit_r2"] > 0.99

    def test_rate_scales_with_mass_and_refinement(self):
        # oracle: rerun at doubled resolution, rates agree within tolerance
        rates = []
        for n in (512, 1024):
            lat = Lattice1D(n, 40.0, "dirichlet")
            prof = step_profile_1d(lat, [0.0])
            op = build_jackiw_rebbi_line(lat, 2.0, prof)
            spec = eigen(op, want_vectors=True, k_lowest=3)
            i0 = int(np.argmin(np.abs(spec.eigenvalues)))
            loc = mode_localization(spec, i0, lat, dof_coords=op.dof_coords,
                                    walls=[0.0])
            rates.append(loc["fitted_decay_rate"])
        assert abs(rates[0] - 2.0) <= 0.04
        assert abs(rates[1] - 2.0) <= 0.04
        assert abs(rates[0] - rates[1]) < 0.01

    def test_uniform_mode_fit_unstable(self):
        lat = Lattice1D(256, 40.0, "dirichlet")
        op = build_jackiw_rebbi_line(lat, 1.0, constant_profile(lat, 1.0))
        spec = eigen(op, want_vectors=True)
        i0 = int(np.argmin(np.abs(spec.eigenvalues)))
        with pytest.raises(FitUnstable):
            mode_localization(spec, i0, lat, dof_coords=op.dof_coords, walls=[0.0])


def test_smoothing_invariance_of_eta(torus16):
    g = make_gauge_flux(torus16, 1, ("localized", (6, 10)), holonomy=0.3)
    base = build_torus_dirac(torus16, g, "wilson")
    step = step_profile_torus(torus16)
    for m in (0.55, 0.75, 1.0):
        values = []
        for w in (4.2, 2.1):
            prof, _ = smooth_wall_profile(step, w)
            values.append(eta_of_operator(apply_domain_wall(base, m, prof)).value)
        assert values[0] == values[1]


def test_exporters_roundtrip(tmp_path, jr_line_512):
    _, _, op = jr_line_512
    spec = eigen(op)
    path = export_spectrum_csv(spec, tmp_path / "spec.csv")
    rows = path.read_text().strip().splitlines()
    assert rows[0] == "index,eigenvalue"
    assert len(rows) == spec.n + 1
    recovered = float(rows[1].split(",")[1])
    assert recovered == float(spec.eigenvalues[0])
    ppath = export_profile_csv([0.0, 1.0], [0.5, 0.25], tmp_path / "prof.csv")
    assert ppath.read_text().startswith("coordinate,amplitude")
