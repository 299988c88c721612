"""Exception types shared across the toolkit."""


class DimensionMismatchError(ValueError):
    """Operands live on Hilbert spaces of incompatible dimension."""


class NonHermitianError(ValueError):
    """A matrix required to be Hermitian is not, beyond tolerance."""


class NotPositiveSemidefiniteError(ValueError):
    """A matrix required to be PSD has an eigenvalue below tolerance."""


class UnsupportedDimensionError(ValueError):
    """No built-in SIC fiducial exists for the requested dimension."""


class NonQuantumProbabilityError(ValueError):
    """A reference-measurement probability vector admits no valid state."""


class InconsistentPairError(ValueError):
    """A (state probabilities, conditional) pair yields negative predictions."""


class OutcomeCountMismatchError(ValueError):
    """Paired measurements do not have the same number of outcomes."""


class TuningRequiredError(ValueError):
    """Incorporation was attempted without a valid tuning certificate."""


class SchemaError(ValueError):
    """A JSON file does not conform to its expected schema.

    Carries the offending path and the first violated requirement.
    """

    def __init__(self, path, message):
        self.path = str(path)
        super().__init__(f"{self.path}: {message}")
