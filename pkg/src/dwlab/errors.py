"""Exception types raised by operator builders and spectral checks.

Every failure mode that a caller can sensibly react to gets its own class;
they all derive from DWLabError so batch drivers can catch the family.
"""


class DWLabError(Exception):
    """Base class for all dwlab errors."""


class DegenerateLattice(DWLabError):
    """Lattice too coarse (or otherwise unusable) for the requested operator."""


class OddWallCountOnCircle(DWLabError):
    """A periodic wall profile must change sign an even number of times."""


class ZeroModeOnBoundary(DWLabError):
    """The boundary circle operator has a (near-)zero eigenvalue."""


class FluxInCollar(DWLabError):
    """Localized flux placement overlaps a collar band."""


class ChiralSchemeWithFlux(DWLabError):
    """The exactly-chiral discretization only supports flux-free bundles."""


class GeometryMismatch(DWLabError):
    """Profile or operator sampled on a different lattice than expected."""


class ProfileNotAsymptoticallyConstant(DWLabError):
    """A cylinder profile must be constant near both truncation ends."""


class WidthBelowResolution(DWLabError):
    """Smoothing width must exceed twice the lattice spacing."""


class SolverFailure(DWLabError):
    """Eigensolver did not converge; carries a residual report."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals


class ZeroModePresent(DWLabError):
    """A sign-sum was requested on a spectrum with numerical zero modes."""


class NonIntegerTrace(DWLabError):
    """Chirality trace over the numerical kernel failed to round cleanly."""


class IntegerHolonomy(DWLabError):
    """Holonomy parameter sits on an integer, where the circle operator is gapless."""


class BoundaryNotProductForm(DWLabError):
    """Collar entries of a half-lattice operator deviate from the product template."""


class OverlapTooThin(DWLabError):
    """Region overlap too thin to carry the mollified cutoffs."""


class NonLocalStencil(DWLabError):
    """Commutator support escaping the overlap dilation; cutoff not subordinate."""


class PreconditionViolated(DWLabError):
    """A bound was requested for modes that fail its hypothesis."""

    def __init__(self, message, offending=None):
        super().__init__(message)
        self.offending = offending or []


class GapNotSatisfied(DWLabError):
    """Spectral-gap hypothesis of the excision comparison fails."""


class MassTooSmall(DWLabError):
    """Mass below the computed excision bound; no comparison claim is made."""

    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound


class NoPlateau(DWLabError):
    """No run of three consecutive scan points agreed on an integer."""


class FitUnstable(DWLabError):
    """Exponential decay fit did not reach the required goodness."""


class ConfigInvalid(DWLabError):
    """Experiment configuration failed validation; carries field diagnostics."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or []
