"""
Error Types

All errors derive from ValueError so services keep the plain
``raise ValueError`` contract; the CLI maps each family to an exit code.
"""

from typing import Optional


class GeodetectError(ValueError):
    """Base class for every error raised by geodetect."""


class ParameterError(GeodetectError):
    """Invalid parameter value. The message names the parameter."""


class GuardError(ParameterError):
    """Input exceeds the size guard of a brute-force routine."""


class InfeasibleWindowError(ParameterError):
    """The admissible weight-cutoff window is empty."""

    def __init__(self, lower: float, upper: float):
        self.lower = lower
        self.upper = upper
        super().__init__(
            f"t_n window is empty: lower bound {lower:.6g} >= upper bound {upper:.6g}"
        )


class DataFormatError(GeodetectError):
    """Malformed input file; the message carries path and line number."""

    def __init__(self, path, line_number: Optional[int], message: str):
        self.path = str(path)
        self.line_number = line_number
        location = f"{path}:{line_number}" if line_number is not None else f"{path}"
        super().__init__(f"{location}: {message}")
