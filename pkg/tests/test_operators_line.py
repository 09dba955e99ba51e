"""Line operators: Clifford algebra, wall spectra, the boundary ring operator."""

import numpy as np
import pytest

from dwlab.errors import (DegenerateLattice, OddWallCountOnCircle,
                          ZeroModeOnBoundary)
from dwlab.operators import (CLIFFORD, Lattice1D, build_circle_operator_A,
                             build_jackiw_rebbi_line, circle_eigenvalues,
                             constant_profile, step_profile_1d)


def test_clifford_generators_exact():
    c, eps, gamma = CLIFFORD.c, CLIFFORD.eps, CLIFFORD.gamma
    eye = np.eye(2)
    assert np.array_equal(c @ c, -eye)
    assert np.array_equal(eps @ eps, eye)
    assert np.array_equal(gamma @ gamma, eye)
    assert np.array_equal(gamma, c @ eps)
    for a, b in ((c, eps), (c, gamma), (eps, gamma)):
        assert np.array_equal(a @ b + b @ a, np.zeros((2, 2)))


def test_clifford_rejects_broken_triple():
    from dwlab.operators import CliffordTriple
    with pytest.raises(ValueError):
        CliffordTriple(gamma=np.array([[0, 1], [1, 0]], dtype=complex))


class TestJackiwRebbiLine:
    def test_single_wall_unique_zero_mode(self, jr_line_512):
        lat, prof, op = jr_line_512
        w, v = np.linalg.eigh(op.dense())
        inside = w[np.abs(w) < 0.9]
        assert inside.size == 1
        i0 = int(np.argmin(np.abs(w)))
        assert abs(w[i0]) < 1e-6
        chi = float(np.real(v[:, i0].conj() @ (op.grading * v[:, i0])))
        assert abs(chi + 1.0) < 1e-6

    def test_constant_profile_gapped(self):
        lat = Lattice1D(512, 40.0, "dirichlet")
        op = build_jackiw_rebbi_line(lat, 1.0, constant_profile(lat, 1.0))
        w = np.linalg.eigvalsh(op.dense())
        a = lat.spacing
        assert np.min(np.abs(w)) >= 1.0 * (1.0 - 2.0 * a * a)
        # same statement on a circle, where the band bottom is exact
        latp = Lattice1D(256, 40.0, "periodic")
        opp = build_jackiw_rebbi_line(latp, 1.0, constant_profile(latp, 1.0))
        wp = np.linalg.eigvalsh(opp.dense())
        assert np.min(np.abs(wp)) >= 1.0 - 1e-10

    def test_wall_antiwall_circle_against_coarse_oracle(self):
        # oracle first: dense decomposition of the same construction at n=128
        def modes(n):
            lat = Lattice1D(n, 40.0, "periodic")
            prof = step_profile_1d(lat, [-10.0, 10.0], rightmost="minus")
            op = build_jackiw_rebbi_line(lat, 1.0, prof)
            w, v = np.linalg.eigh(op.dense())
            idx = np.argsort(np.abs(w))[:2]
            cluster = v[:, idx]
            gram = (cluster.conj().T * op.grading) @ cluster
            return w[idx], np.sort(np.linalg.eigvalsh(gram)), w
        oracle_vals, oracle_chis, w_oracle = modes(128)
        assert np.all(np.abs(oracle_vals) < 1e-6)
        assert np.allclose(oracle_chis, [-1.0, 1.0], atol=1e-8)
        vals, chis, w_full = modes(512)
        assert np.all(np.abs(vals) < 1e-6)
        assert np.allclose(chis, [-1.0, 1.0], atol=1e-8)
        assert np.sum(np.abs(w_full) < 0.9) == np.sum(np.abs(w_oracle) < 0.9) == 2

    def test_chiral_spectrum_symmetric(self, jr_line_512):
        _, _, op = jr_line_512
        w = np.sort(np.linalg.eigvalsh(op.dense()))
        assert np.max(np.abs(w + w[::-1])) < 1e-8 * op.scale()

    def test_odd_wall_count_on_circle_rejected(self):
        lat = Lattice1D(64, 16.0, "periodic")
        with pytest.raises(OddWallCountOnCircle):
            step_profile_1d(lat, [0.0])

    def test_tiny_lattice_rejected(self):
        lat = Lattice1D(6, 4.0, "dirichlet")
        with pytest.raises(DegenerateLattice):
            build_jackiw_rebbi_line(lat, 1.0, step_profile_1d(lat, [0.0]))

    def test_wilson_scheme_is_graded_not_odd(self):
        lat = Lattice1D(64, 16.0, "dirichlet")
        op = build_jackiw_rebbi_line(lat, 1.0, step_profile_1d(lat, [0.0]),
                                     scheme="wilson")
        assert op.grading is not None and not op.chiral_flag
        anti = op.anticommutator_with_grading()
        assert abs(anti).max() > 1.0  # the doubler-removal term is even

    def test_spectral_scheme_periodic_only(self):
        lat = Lattice1D(64, 16.0, "dirichlet")
        with pytest.raises(DegenerateLattice):
            build_jackiw_rebbi_line(lat, 1.0, step_profile_1d(lat, [0.0]),
                                    scheme="spectral")


class TestCircleOperator:
    def test_exact_fourier_spectrum(self):
        op = build_circle_operator_A(64, 0.3, 2 * np.pi)
        w = np.linalg.eigvalsh(op.dense())
        expect = circle_eigenvalues(64, 2 * np.pi, 0.3)
        assert np.max(np.abs(np.sort(w) - expect)) < 1e-12
        ks = np.sort(np.rint(expect - 0.3).astype(int))
        assert ks[0] == -32 and ks[-1] == 31
        assert abs(np.min(np.abs(w)) - 0.3) < 1e-12

    def test_half_holonomy_symmetric_zero_eta(self):
        op = build_circle_operator_A(64, 0.5, 2 * np.pi)
        w = np.sort(np.linalg.eigvalsh(op.dense()))
        assert np.max(np.abs(w + w[::-1])) < 1e-12
        assert int(np.sum(w > 0) - np.sum(w < 0)) == 0

    def test_truncated_sign_sum_follows_window_parity(self):
        # even window [-K, K): balanced counts; odd window [-K, K]: one extra
        for n, expected in ((64, 0), (65, 1)):
            w = circle_eigenvalues(n, 2 * np.pi, 0.25)
            assert int(np.sum(w > 0) - np.sum(w < 0)) == expected

    def test_integer_holonomy_rejected(self):
        with pytest.raises(ZeroModeOnBoundary):
            build_circle_operator_A(64, 1.0, 2 * np.pi)
