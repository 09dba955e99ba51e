"""dwlab: a desk-scale numerical laboratory for domain-wall Dirac operators.

The package discretizes chiral Dirac operators, their domain-wall mass
deformations, and spectral boundary-value problems as finite Hermitian
matrices, and verifies the integer identities tying the chirality-trace index
to eta-invariant differences, together with Witten-style localization and
excision inequalities, at sizes that run on a laptop.
"""

__version__ = "0.1.0"
