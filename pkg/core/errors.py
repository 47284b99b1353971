# core/errors.py
"""
Exception hierarchy for horizonlab.

Library code raises these; the CLI maps them onto exit codes
(usage and configuration problems exit 2, failed stages exit 1).
"""


class HorizonLabError(Exception):
    """Base class for all horizonlab errors."""


class DomainError(HorizonLabError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class UsageError(HorizonLabError, ValueError):
    """An unknown tag, name or option, or an unsupported request."""


class NumericalError(HorizonLabError, ArithmeticError):
    """A numerical procedure failed to converge."""


class StabilityError(NumericalError):
    """
    An evolution produced NaN or Inf values.

    Attributes:
        step: Time step index at which the blow-up was detected
        time: Value of t* at that step
    """

    def __init__(self, step: int, time: float):
        self.step = step
        self.time = time
        super().__init__(f"Non-finite values at step {step} (t*={time:.6g})")


class ConfigError(HorizonLabError):
    """
    A run configuration could not be parsed or validated.

    Attributes:
        errors: Every problem found, as dicts with loc, msg and line keys
    """

    def __init__(self, errors: list[dict]):
        self.errors = errors
        lines = []
        for err in errors:
            loc = err.get("loc", ())
            where = (loc if isinstance(loc, str) else ".".join(str(p) for p in loc)) or "<root>"
            line = err.get("line")
            suffix = f" (line {line})" if line is not None else ""
            lines.append(f"{where}: {err['msg']}{suffix}")
        super().__init__("Invalid run configuration:\n  " + "\n  ".join(lines))


class StageError(HorizonLabError):
    """
    A pipeline stage failed.

    Attributes:
        stage: Name of the failing stage
    """

    def __init__(self, stage: str, message: str):
        self.stage = stage
        super().__init__(f"Stage '{stage}' failed: {message}")
