"""Exception hierarchy for the keycap package."""


class KeycapError(Exception):
    """Base class for all keycap errors."""


class UnsupportedScheme(KeycapError):
    """Input scheme support exceeds the channel's amplitude limit."""


class DegenerateTruncation(KeycapError):
    """Truncated-Gaussian normalizer underflows; input is numerically a point mass."""


class QuadratureFailure(KeycapError):
    """Adaptive quadrature did not reach the requested tolerance."""


class NoConvergence(KeycapError):
    """Mass-point escalation exhausted without satisfying the KKT certificate."""


class InvalidBeta(KeycapError):
    """Free parameter of the closed-form lower bound must be positive."""
