"""Link fields, torus Dirac operators, and the domain-wall deformation."""

import numpy as np
import pytest

from dwlab.errors import ChiralSchemeWithFlux, FluxInCollar, GeometryMismatch
from dwlab.operators import (Lattice1D, TorusLattice2D, apply_domain_wall,
                             build_jackiw_rebbi_line, build_torus_dirac,
                             constant_profile, make_gauge_flux,
                             random_chiral_operator, step_profile_1d,
                             step_profile_torus)
from dwlab.spectral import chiral_index, eigen, spectral_gap_check


class TestGaugeFlux:
    def test_uniform_charge_one(self, torus16):
        g = make_gauge_flux(torus16, 1, "uniform")
        angles = g.plaquette_angles()
        assert np.allclose(angles, 2 * np.pi / 256, atol=1e-12)
        assert g.total_charge() == 1

    def test_flat_holonomy_links(self, torus16):
        g = make_gauge_flux(torus16, 0, "uniform", holonomy=0.3)
        assert np.max(np.abs(g.plaquette_angles())) < 1e-12
        assert np.allclose(g.link_y, np.exp(2j * np.pi * 0.3 / 16), atol=1e-14)

    def test_localized_window_supports_flux(self, torus16):
        g = make_gauge_flux(torus16, 2, ("localized", (6, 10)), holonomy=0.3)
        angles = g.plaquette_angles()
        cols = np.abs(angles).sum(axis=1)
        support = np.flatnonzero(cols > 1e-12)
        assert support.min() >= 6 and support.max() <= 9
        assert abs(angles.sum() - 4 * np.pi) < 1e-10
        assert g.total_charge() == 2

    def test_flux_in_collar_rejected(self, torus16):
        with pytest.raises(FluxInCollar):
            make_gauge_flux(torus16, 1, ("localized", (3, 7)))

    def test_charge_exact_over_range(self, torus16):
        for q in range(-3, 4):
            assert make_gauge_flux(torus16, q, "uniform").total_charge() == q


class TestTorusDirac:
    def test_spectral_chiral_symmetric_and_gapped(self, torus16):
        g = make_gauge_flux(torus16, 0, "uniform", holonomy=0.3)
        op = build_torus_dirac(torus16, g, "spectral_chiral")
        assert op.chiral_flag
        w = np.sort(np.linalg.eigvalsh(op.dense()))
        assert np.max(np.abs(w + w[::-1])) < 1e-8 * op.scale()
        lam_a = 2 * np.pi * 0.3 / 16
        assert abs(np.min(np.abs(w)) - lam_a) < 1e-10
        assert chiral_index(op).index == 0

    def test_spectral_chiral_rejects_flux(self, torus16):
        g = make_gauge_flux(torus16, 1, "uniform")
        with pytest.raises(ChiralSchemeWithFlux):
            build_torus_dirac(torus16, g, "spectral_chiral")

    def test_wilson_index_equals_charge(self, torus16):
        for q in (1, -2):
            g = make_gauge_flux(torus16, q, "uniform")
            op = build_torus_dirac(torus16, g, "wilson")
            res = chiral_index(op)
            assert res.index == q
            assert res.path.startswith("eta-pair")

    def test_wilson_index_against_coarse_dense_oracle(self):
        # oracle first: brute-force sign counting at 8x8, no package sign-sum code
        lat8 = TorusLattice2D(8, 8)
        for q in (1, -2):
            g = make_gauge_flux(lat8, q, "uniform")
            op = build_torus_dirac(lat8, g, "wilson")
            hp = apply_domain_wall(op, 1.0, constant_profile(lat8, 1.0)).dense()
            hm = apply_domain_wall(op, 1.0, constant_profile(lat8, -1.0)).dense()
            wp, wm = np.linalg.eigvalsh(hp), np.linalg.eigvalsh(hm)
            brute = (int((wp > 0).sum() - (wp < 0).sum())
                     - int((wm > 0).sum() - (wm < 0).sum())) // 2
            assert brute == q
            assert chiral_index(op).index == brute

    def test_wilson_index_flips_under_conjugation(self, torus16):
        g = make_gauge_flux(torus16, -2, "uniform")
        conj = type(g)(lattice=g.lattice, link_x=g.link_x.conj(),
                       link_y=g.link_y.conj(), holonomy_y=(-g.holonomy_y) % 1.0)
        assert conj.total_charge() == 2
        op = build_torus_dirac(torus16, conj, "wilson")
        assert chiral_index(op).index == 2


class TestDomainWall:
    def test_constant_wall_spectrum_from_base_eigenvalues(self, rng):
        # oracle: simultaneous diagonalization pairs each nonzero eigenvalue λ
        # with ±sqrt(λ²+m²) and sends kernel vectors to ±m by chirality
        d = random_chiral_operator(rng, 6, 4, rank=3)
        m = 0.7
        base = np.linalg.eigvalsh(d.dense())
        nonzero = base[np.abs(base) > 1e-12]
        expected = np.sort(np.concatenate([
            np.sign(nonzero) * np.sqrt(nonzero ** 2 + m ** 2),
            np.full(3, m), np.full(1, -m),
        ]))
        # kernel: 3 positive-chirality vectors -> +m, 1 negative -> −m
        got = np.sort(np.linalg.eigvalsh(
            apply_domain_wall(d, m, constant_profile(d.n, 1.0)).dense()))
        assert np.allclose(np.sort(expected), got, atol=1e-12)

    def test_domain_wall_of_massless_line_is_rotated_wall_operator(self):
        lat = Lattice1D(128, 32.0, "periodic")
        base = build_jackiw_rebbi_line(lat, 1.0, constant_profile(lat, 0.0),
                                       scheme="spectral")
        prof = step_profile_1d(lat, [-8.0, 8.0], rightmost="minus")
        dw = apply_domain_wall(base, 1.0, prof)
        jr = build_jackiw_rebbi_line(lat, 1.0, prof, scheme="spectral")
        # one fixed per-site rotation intertwines the two mass channels
        r = np.array([[1.0, -1.0], [1.0, 1.0]]) / np.sqrt(2.0)
        u = np.kron(np.eye(128), r)
        rotated = u @ dw.dense() @ u.T
        assert np.max(np.abs(rotated - jr.dense())) < 1e-10

    def test_gap_window_with_flux_and_wall(self, torus16):
        g = make_gauge_flux(torus16, 1, ("localized", (6, 10)), holonomy=0.3)
        d = build_torus_dirac(torus16, g, "wilson")
        lam_a = 2 * np.pi * 0.3 / 16
        spec = eigen(apply_domain_wall(d, 1.0, step_profile_torus(torus16)))
        assert spectral_gap_check(spec, -lam_a / 2, lam_a / 2).gap_holds

    def test_geometry_mismatch(self, torus16, rng):
        d = random_chiral_operator(rng, 4, 4)
        with pytest.raises(GeometryMismatch):
            apply_domain_wall(d, 1.0, step_profile_torus(torus16))
