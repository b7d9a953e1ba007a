from typing import Optional, Sequence


class DomainException(Exception):
    """Root of every error raised by the experiment engine."""

    exit_code: int = 1

    def __init__(self, message: str = "Domain rule violated."):
        super().__init__(message)


class CertificateFailure(DomainException):
    """A deterministic certificate did not hold on a checked iterate."""

    exit_code = 1

    def __init__(self, names: Sequence[str]):
        self.names = tuple(names)
        super().__init__(f"Hard certificate(s) failed: {', '.join(self.names)}.")


# Configuration family

class ConfigurationError(DomainException):
    exit_code = 2


class InvalidConfig(ConfigurationError):

    def __init__(self, message: str = "Invalid configuration."):
        super().__init__(message)


class MissingFile(ConfigurationError):

    def __init__(self, path: str):
        self.path = str(path)
        super().__init__(f"File not found: {self.path}")


class UnknownKey(ConfigurationError):

    def __init__(self, key: str):
        self.key = key
        super().__init__(f"Unknown configuration key: {key!r}")


class InvalidValue(ConfigurationError):

    def __init__(self, key: str, constraint: str):
        self.key = key
        self.constraint = constraint
        super().__init__(f"Invalid value for {key!r}: {constraint}")


# Numerical family

class NumericalError(DomainException):
    exit_code = 3


class NotTwiceDifferentiable(NumericalError):

    def __init__(self, neuron: int, datum: Optional[int] = None, margin: Optional[float] = None):
        self.neuron = neuron
        self.datum = datum
        self.margin = margin
        where = f"neuron {neuron}" if datum is None else f"neuron {neuron} at datum {datum}"
        super().__init__(f"Network is not twice differentiable ({where}, |pre-activation|={margin}).")


class NoConvergence(NumericalError):

    def __init__(self, rayleigh_quotient: float, residual: float, iterations: int):
        self.rayleigh_quotient = rayleigh_quotient
        self.residual = residual
        self.iterations = iterations
        super().__init__(
            f"Power iteration did not converge after {iterations} iterations "
            f"(rayleigh={rayleigh_quotient!r}, residual={residual!r})."
        )


class Diverged(NumericalError):

    def __init__(self, step: int, records: Sequence = ()):
        self.step = step
        self.records = tuple(records)
        super().__init__(f"Gradient descent diverged at step {step}.")

    @property
    def last_record(self):
        return self.records[-1] if self.records else None


# Data family

class DataError(DomainException):
    exit_code = 4


class MissingGroundTruth(DataError):

    def __init__(self, message: str = "Dataset has no ground truth function."):
        super().__init__(message)


class MissingSigma(DataError):

    def __init__(self, message: str = "Dataset has no noise level sigma."):
        super().__init__(message)


class EmptyInterval(DataError):

    def __init__(self, lo: float, hi: float):
        self.lo = lo
        self.hi = hi
        super().__init__(f"No data point inside [{lo!r}, {hi!r}].")


class NoInterval(DataError):

    def __init__(self, c: float):
        self.c = c
        super().__init__(f"No grid interval with g >= {c!r}.")


class NotEquispaced(DataError):

    def __init__(self, deviation: float):
        self.deviation = deviation
        super().__init__(f"Design is not equispaced (relative spacing deviation {deviation!r}).")


class NotInterpolating(DataError):

    def __init__(self, residual_rms: float, tolerance: float):
        self.residual_rms = residual_rms
        self.tolerance = tolerance
        super().__init__(f"Fit does not interpolate: residual RMS {residual_rms!r} > {tolerance!r}.")


class InsufficientData(DataError):

    def __init__(self, available: int, required: int, what: str = "data points"):
        self.available = available
        self.required = required
        super().__init__(f"Need at least {required} {what}, got {available}.")
