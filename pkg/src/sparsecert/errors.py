"""Exception types shared across the library."""


class SparseCertError(Exception):
    """Base class for library-specific failures."""


class CapExceededError(SparseCertError):
    """An enumeration guardrail (edge, subset, or ordering cap) was hit."""


class HypothesisError(SparseCertError):
    """A structural hypothesis required by a certificate or check does not hold."""


class ThresholdError(SparseCertError):
    """A residual bound is not below the certified threshold, so no guarantee applies."""


class GenerationError(SparseCertError):
    """Randomized instance generation kept failing its post-generation checks."""
