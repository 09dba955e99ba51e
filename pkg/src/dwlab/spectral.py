"""Eigendecomposition facade and spectral functionals.

All integer-valued quantities here are plain finite-matrix statements: the
spectral asymmetry is the sign sum of the eigenvalues, the index is the trace
of the grading over the numerical kernel, and the identity tying the two
together through constant-mass deformations holds exactly at any matrix size.
No analytic continuation is involved; continuum limits are probed by
truncation scans, never asserted.
"""

from __future__ import annotations

import csv
import json
import warnings
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import (DegenerateLattice, FitUnstable, NonIntegerTrace,
                     SolverFailure, ZeroModePresent)
from .operators.graded import GradedOperator
from .operators.lattices import Lattice1D, TorusLattice2D
from .operators.profiles import constant_profile
from .operators.torus import apply_domain_wall

DENSE_LIMIT = 6500
RESIDUAL_RTOL = 1e-8
TRACE_TOL = 0.01


@dataclass
class SpectralData:
    """Sorted eigenvalues with zero-threshold bookkeeping.

    ambiguous_band lists eigenvalues in the decade [ε₀, 10ε₀], where the
    zero/nonzero dichotomy is numerically suspect.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None
    zero_threshold: float
    operator_scale: float
    is_partial: bool = False

    def __post_init__(self):
        ev = np.asarray(self.eigenvalues, dtype=float)
        if np.any(np.diff(ev) < 0):
            raise DegenerateLattice("eigenvalues must be sorted ascending")
        self.eigenvalues = ev

    @property
    def n(self) -> int:
        return self.eigenvalues.size

    @property
    def ambiguous_band(self) -> np.ndarray:
        a = np.abs(self.eigenvalues)
        eps = self.zero_threshold
        return self.eigenvalues[(a >= eps) & (a <= 10.0 * eps)]

    def count_zero(self) -> int:
        return int(np.sum(np.abs(self.eigenvalues) <= self.zero_threshold))


def default_zero_threshold(scale: float) -> float:
    return 1e-8 * max(1.0, scale)


def _operator_scale(matrix: sp.spmatrix) -> float:
    """Cheap upper bound on the spectral norm (max absolute row sum)."""
    m = abs(matrix)
    return float(m.sum(axis=1).max()) if m.nnz else 0.0


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    idx = np.argmax(np.abs(vectors), axis=0)
    phases = vectors[idx, np.arange(vectors.shape[1])]
    phases = np.where(np.abs(phases) == 0, 1.0, phases / np.abs(phases))
    return vectors / phases


def eigen(H: GradedOperator, want_vectors: bool = False,
          k_lowest: int | None = None,
          zero_threshold: float | None = None) -> SpectralData:
    """Full or partial (smallest |λ|) Hermitian eigendecomposition.

    Partial decompositions use shift-invert at zero. Every returned pair is
    certified against the residual bound ‖Hv − λv‖ ≤ 1e−8·‖H‖.
    """
    scale = _operator_scale(H.matrix)
    eps0 = default_zero_threshold(scale) if zero_threshold is None else zero_threshold

    if k_lowest is None:
        if H.n > DENSE_LIMIT:
            raise SolverFailure(
                f"dense decomposition of dimension {H.n} refused; pass k_lowest")
        dense = H.matrix.toarray()
        if want_vectors:
            vals, vecs = np.linalg.eigh(dense)
            vecs = _fix_phases(vecs)
        else:
            vals, vecs = np.linalg.eigvalsh(dense), None
        partial = False
    else:
        k = int(k_lowest)
        if k >= H.n - 1:
            return eigen(H, want_vectors=want_vectors, zero_threshold=zero_threshold)
        vals = vecs = None
        errors = []
        # exact kernels make the zero shift singular, so nudge first
        for sigma in (1e-6 * max(scale, 1.0), 1e-4 * max(scale, 1.0), 0.0):
            try:
                vals, vecs = spla.eigsh(H.matrix.tocsc(), k=k, sigma=sigma,
                                        which="LM", mode="normal")
                break
            except Exception as exc:  # ARPACK / factorization trouble
                errors.append(f"sigma={sigma:g}: {exc}")
        if vals is None:
            raise SolverFailure("shift-invert eigensolve failed: " + "; ".join(errors))
        order = np.argsort(vals)
        vals = vals[order]
        vecs = vecs[:, order]
        # ARPACK does not orthogonalize within degenerate clusters
        vecs = _orthonormalize_clusters(vals, vecs, max(scale, 1.0))
        vecs = _fix_phases(vecs)
        partial = True

    if vecs is not None:
        resid = _residuals(H.matrix, vals, vecs)
        bad = resid > RESIDUAL_RTOL * max(scale, 1.0)
        if np.any(bad):
            raise SolverFailure("eigenpair residuals exceed certification bound",
                                residuals=resid[bad].tolist())
    data = SpectralData(eigenvalues=vals,
                        eigenvectors=vecs if want_vectors else None,
                        zero_threshold=eps0, operator_scale=scale,
                        is_partial=partial)
    return data


def _residuals(matrix, vals, vecs) -> np.ndarray:
    r = matrix @ vecs - vecs * vals[None, :]
    return np.sqrt(np.sum(np.abs(r) ** 2, axis=0))


def _orthonormalize_clusters(vals: np.ndarray, vecs: np.ndarray,
                             scale: float) -> np.ndarray:
    """QR within runs of (numerically) equal eigenvalues; spans are preserved."""
    tol = 1e-9 * scale
    out = vecs.copy()
    start = 0
    for stop in range(1, vals.size + 1):
        if stop == vals.size or vals[stop] - vals[stop - 1] > tol:
            if stop - start > 1:
                q, _ = np.linalg.qr(out[:, start:stop])
                out[:, start:stop] = q
            start = stop
    return out


# -- eta ---------------------------------------------------------------------

@dataclass
class EtaResult:
    """Sign sum of a gapped finite spectrum."""

    value: int
    n_positive: int
    n_negative: int
    n_zero: int
    threshold_used: float

    def __post_init__(self):
        if self.value != self.n_positive - self.n_negative:
            raise DegenerateLattice("eta bookkeeping inconsistent")


def eta_sign_sum(spec: SpectralData, allow_zero: bool = False) -> EtaResult:
    """Σ sign(λ) over eigenvalues with |λ| above the zero threshold."""
    eps0 = spec.zero_threshold
    ev = spec.eigenvalues
    n_pos = int(np.sum(ev > eps0))
    n_neg = int(np.sum(ev < -eps0))
    n_zero = spec.n - n_pos - n_neg
    if n_zero > 0 and not allow_zero:
        raise ZeroModePresent(
            f"{n_zero} eigenvalues within ±{eps0:.2e}; the sign sum assumes a gapped spectrum")
    band = spec.ambiguous_band
    if band.size:
        warnings.warn(
            f"{band.size} eigenvalues in the ambiguous decade [{eps0:.1e}, {10*eps0:.1e}]",
            stacklevel=2)
    value = n_pos - n_neg
    # parity cross-check: the sign sum has the parity of the nonzero count
    if (value - (spec.n - n_zero)) % 2 != 0:
        raise DegenerateLattice("eta parity check failed")
    return EtaResult(value=value, n_positive=n_pos, n_negative=n_neg,
                     n_zero=n_zero, threshold_used=eps0)


def eta_of_operator(H: GradedOperator, allow_zero: bool = False,
                    zero_threshold: float | None = None) -> EtaResult:
    return eta_sign_sum(eigen(H, zero_threshold=zero_threshold), allow_zero=allow_zero)


# -- index -------------------------------------------------------------------

@dataclass
class IndexResult:
    """Chirality content of the numerical kernel (or its identity surrogate)."""

    index: int
    dim_ker_plus: int
    dim_ker_minus: int
    chirality_trace: float
    residual: float
    path: str = "kernel"

    def __post_init__(self):
        if self.index != self.dim_ker_plus - self.dim_ker_minus:
            raise DegenerateLattice("index bookkeeping inconsistent")
        if self.residual > TRACE_TOL:
            raise NonIntegerTrace(
                f"chirality trace {self.chirality_trace} is {self.residual:.3e} from an integer")


def chiral_index(D: GradedOperator, zero_threshold: float | None = None,
                 probe_mass: float = 1.0, k_lowest: int | None = None) -> IndexResult:
    """tr(Γ) over the numerical kernel of an odd operator.

    For graded operators that are not odd (e.g. the doubler-free torus
    scheme), the kernel is not chirality-split; the index is then computed as
    the half-difference of the sign sums of the two constant-mass
    deformations D ± m·Γ, and the path field records it.
    """
    if D.grading is None:
        raise DegenerateLattice("index needs a graded operator")
    if D.chiral_flag:
        spec = eigen(D, want_vectors=True, k_lowest=k_lowest,
                     zero_threshold=zero_threshold)
        eps0 = spec.zero_threshold
        mask = np.abs(spec.eigenvalues) <= eps0
        kernel = spec.eigenvectors[:, mask]
        if kernel.shape[1] == 0:
            return IndexResult(0, 0, 0, 0.0, 0.0, path="kernel")
        gram = (kernel.conj().T * D.grading) @ kernel
        trace = float(np.real(np.trace(gram)))
        chis = np.linalg.eigvalsh(gram)
        plus = int(np.sum(chis > 0.5))
        minus = int(np.sum(chis < -0.5))
        if plus + minus != kernel.shape[1]:
            raise NonIntegerTrace(
                "kernel does not split cleanly under the grading; "
                f"restricted grading eigenvalues {chis}")
        idx = int(round(trace))
        return IndexResult(index=idx, dim_ker_plus=plus, dim_ker_minus=minus,
                           chirality_trace=trace, residual=abs(trace - idx),
                           path="kernel")

    if probe_mass <= 0:
        raise DegenerateLattice("probe mass must be positive")
    plus = apply_domain_wall(D, probe_mass, constant_profile(D.n, 1.0))
    minus = apply_domain_wall(D, probe_mass, constant_profile(D.n, -1.0))
    eta_p = eta_of_operator(plus)
    eta_m = eta_of_operator(minus)
    if (eta_p.value - eta_m.value) % 2 != 0:
        raise NonIntegerTrace("sign-sum difference is odd; deformation masses too small")
    idx = (eta_p.value - eta_m.value) // 2
    return IndexResult(index=idx, dim_ker_plus=max(idx, 0),
                       dim_ker_minus=max(-idx, 0), chirality_trace=float(idx),
                       residual=0.0, path=f"eta-pair(m={probe_mass})")


# -- gap reports -------------------------------------------------------------

@dataclass
class GapReport:
    interval: tuple
    eigenvalues_inside: list
    gap_holds: bool
    nearest_outside: float

    def to_dict(self):
        return asdict(self)


def spectral_gap_check(spec: SpectralData, lo: float, hi: float,
                       whitelist_zero: bool = False) -> GapReport:
    """Report whether the open interval (lo, hi) is free of eigenvalues.

    With whitelist_zero, eigenvalues below the zero threshold are allowed to
    sit inside without spoiling the gap.
    """
    if lo >= hi:
        raise DegenerateLattice("need lo < hi")
    ev = spec.eigenvalues
    inside = ev[(ev > lo) & (ev < hi)]
    if whitelist_zero:
        offending = inside[np.abs(inside) > spec.zero_threshold]
    else:
        offending = inside
    outside = ev[(ev <= lo) | (ev >= hi)]
    nearest = float(outside[np.argmin(np.minimum(np.abs(outside - lo),
                                                 np.abs(outside - hi)))]) \
        if outside.size else float("nan")
    return GapReport(interval=(lo, hi), eigenvalues_inside=offending.tolist(),
                     gap_holds=offending.size == 0, nearest_outside=nearest)


# -- the finite-matrix index identity ----------------------------------------

def as_eta_identity_check(D: GradedOperator, m: float) -> dict:
    """lhs = tr(Γ|ker D); rhs = (η(D+mΓ) − η(D−mΓ))/2; they agree exactly.

    D must be exactly odd. ZeroModePresent propagates if m is too small
    against the zero threshold of the deformed spectra.
    """
    if not D.chiral_flag:
        raise DegenerateLattice("the identity check needs an exactly odd operator")
    if m <= 0:
        raise DegenerateLattice("mass must be positive")
    lhs = chiral_index(D)
    plus = apply_domain_wall(D, m, constant_profile(D.n, 1.0))
    minus = apply_domain_wall(D, m, constant_profile(D.n, -1.0))
    eta_p = eta_of_operator(plus)
    eta_m = eta_of_operator(minus)
    rhs = (eta_p.value - eta_m.value) / 2.0
    return {
        "lhs": lhs.index,
        "rhs": rhs,
        "equal": float(lhs.index) == rhs,
        "eta_plus": eta_p.value,
        "eta_minus": eta_m.value,
        "m": m,
    }


# -- mode profiles ------------------------------------------------------------

def mode_localization(spec: SpectralData, which: int, lat,
                      dof_coords: np.ndarray | None = None,
                      walls=None, fit_window=(0.1, 0.6),
                      r2_floor: float = 0.9) -> dict:
    """Per-site amplitude of one eigenvector and its exponential decay fit.

    The squared amplitude is summed over internal components at each
    coordinate; log-amplitude is fitted against distance from the wall over
    the mid-range of the decay window. The fitted rate refers to the amplitude
    (not its square). Raises FitUnstable below the r² floor.
    """
    if spec.eigenvectors is None:
        raise DegenerateLattice("localization needs eigenvectors")
    v = spec.eigenvectors[:, which]
    amp2 = np.abs(v) ** 2

    if isinstance(lat, Lattice1D):
        coords = dof_coords
        if coords is None:
            coords = np.repeat(lat.site_coords, v.size // lat.n_sites)
        # merge offset sublattices into site-width bins
        a = lat.spacing
        x0 = float(lat.site_coords[0])
        bins = np.rint((np.asarray(coords) - x0) / a).astype(int)
        xs_all = x0 + a * np.arange(bins.min(), bins.max() + 1)
        amp_all = np.zeros(xs_all.size)
        np.add.at(amp_all, bins - bins.min(), amp2)
        keep = amp_all > 0
        xs, amp = xs_all[keep], amp_all[keep]
    elif isinstance(lat, TorusLattice2D):
        per_site = amp2.reshape(lat.n_sites, -1).sum(axis=1)
        cols = per_site.reshape(lat.n_x, lat.n_y).sum(axis=1)
        xs = np.arange(lat.n_x) * lat.spacing_x
        amp = cols
    else:
        raise DegenerateLattice(f"unsupported lattice {type(lat)!r}")

    if walls is None or len(walls) == 0:
        peak = xs[int(np.argmax(amp))]
        walls = [peak]
    if isinstance(lat, Lattice1D):
        dist = np.min(np.abs(np.stack([lat.wrap_distance(xs, w) for w in walls])), axis=0)
    else:
        l_x = lat.extent_x
        dist = np.min(np.abs(np.stack(
            [(xs - w + l_x / 2.0) % l_x - l_x / 2.0 for w in walls])), axis=0)

    window = dist.max()
    lo, hi = fit_window[0] * window, fit_window[1] * window
    mask = (dist >= lo) & (dist <= hi) & (amp > 0)
    if mask.sum() < 4:
        raise FitUnstable("too few points in the fit window")
    x_fit = dist[mask]
    y_fit = np.log(amp[mask])
    design = np.vstack([x_fit, np.ones(x_fit.size)]).T
    sol, *_ = np.linalg.lstsq(design, y_fit, rcond=None)
    pred = design @ sol
    ss_res = float(np.sum((y_fit - pred) ** 2))
    ss_tot = float(np.sum((y_fit - y_fit.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 0.0
    rate = -sol[0] / 2.0  # amplitude² slope → amplitude rate
    if r2 < r2_floor:
        raise FitUnstable(f"decay fit r² = {r2:.3f} below {r2_floor}")
    return {
        "coordinates": xs,
        "amplitude": amp,
        "fitted_decay_rate": float(rate),
        "fit_r2": float(r2),
        "fit_window": (float(lo), float(hi)),
        "walls": [float(w) for w in walls],
    }


# -- exporters ----------------------------------------------------------------

def export_spectrum_csv(spec: SpectralData, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "eigenvalue"])
        for i, ev in enumerate(spec.eigenvalues):
            writer.writerow([i, repr(float(ev))])
    return path


def export_profile_csv(coordinates, amplitude, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["coordinate", "amplitude"])
        for x, a in zip(coordinates, amplitude):
            writer.writerow([repr(float(x)), repr(float(a))])
    return path


def report_to_json(report, path) -> Path:
    path = Path(path)
    payload = report.to_dict() if hasattr(report, "to_dict") else asdict(report)
    path.write_text(json.dumps(payload, indent=2))
    return path
