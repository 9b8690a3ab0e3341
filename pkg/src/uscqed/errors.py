"""Exception and warning types shared across the package."""


class SimulationError(Exception):
    """Base class for numerical / physical failures (CLI exit code 3)."""


class NonHermitianError(SimulationError):
    """Matrix handed to the Hermitian eigensolver is not Hermitian."""


class SingularSystemError(SimulationError):
    """Linear system is singular (distinct from an ill-conditioning warning)."""


class IllConditionedWarning(UserWarning):
    """Linear solve succeeded but the system is badly conditioned."""


class LabelAmbiguityError(SimulationError):
    """Two candidate eigenvectors overlap an old label equally well."""


class NoCrossingError(SimulationError):
    """Requested level crossing does not occur in the scanned range."""


class DegenerateSteadyStateError(SimulationError):
    """Liouvillian kernel is not one-dimensional; steady state not unique."""


class StepSizeUnderflowError(SimulationError):
    """Adaptive integrator cannot meet the tolerance with a finite step."""


class UndefinedCorrelationError(SimulationError):
    """Correlation normalization vanished (dark state / zero amplitude)."""


class ConfigError(Exception):
    """Invalid scenario configuration (CLI exit code 2)."""
