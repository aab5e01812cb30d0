"""Exception types shared across the package.

The CLI maps these onto process exit codes: configuration problems exit
with 1, divergence with 3, and every other runtime failure with 2.
"""

from __future__ import annotations


class IonrcError(Exception):
    """Base class for all package errors."""


class ConfigError(IonrcError):
    """A configuration file or parameter set failed validation.

    ``path`` holds a dotted JSON path to the offending entry when known.
    """

    def __init__(self, message: str, path: str | None = None):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class ConstructionError(IonrcError):
    """A model component could not be built from the given parameters."""


class PhysicsDomainError(IonrcError):
    """An input left the domain where the channel physics is evaluated."""


class IntegrationError(IonrcError):
    """Time integration produced an unphysical result (stepsize too large)."""


class IngestionError(IonrcError):
    """An external data file could not be ingested."""


class NumericalError(IonrcError):
    """A numerical routine failed to produce a trustworthy result."""


class DivergenceError(IonrcError):
    """A simulated trajectory left the finite range.

    Carries the step index at which divergence was detected.
    """

    def __init__(self, message: str, step: int | None = None):
        self.step = step
        super().__init__(message if step is None else f"{message} (step {step})")
