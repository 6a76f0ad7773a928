"""Exception hierarchy with stable machine-readable error codes.

Every error that can surface through the CLI or the HTTP API carries a
``code`` string; clients match on the code, not on the message text.
"""

from __future__ import annotations


class HyperforgeError(Exception):
    """Base class for all engine/oracle/io errors."""

    code = "Error"

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)
        self.message = message or self.code

    def as_dict(self) -> dict:
        return {"error": self.code, "message": self.message}


class UnknownModeError(HyperforgeError):
    code = "UnknownMode"


class StateTerminatedError(HyperforgeError):
    code = "StateTerminated"


class UnsupportedDegreeError(HyperforgeError):
    code = "UnsupportedDegree"


class FourierUnsupportedError(HyperforgeError):
    code = "FourierUnsupported"


class UnsupportedCommutationError(HyperforgeError):
    code = "UnsupportedCommutation"


class ShapeMismatchError(HyperforgeError):
    code = "ShapeMismatch"


class DegeneratePivotError(HyperforgeError):
    code = "DegeneratePivot"


class CutoffTooSmallError(HyperforgeError):
    code = "CutoffTooSmall"


class DimensionOverflowError(HyperforgeError):
    code = "DimensionOverflow"


class MalformedFileError(HyperforgeError):
    code = "MalformedFile"


class UnknownOpError(HyperforgeError):
    code = "UnknownOp"


class CircuitReplayError(HyperforgeError):
    """Wraps the first failing op of a circuit replay with its step index."""

    code = "CircuitReplay"

    def __init__(self, step: int, cause: HyperforgeError):
        super().__init__(f"step {step}: [{cause.code}] {cause.message}")
        self.step = step
        self.cause = cause

    def as_dict(self) -> dict:
        d = self.cause.as_dict()
        d["step"] = self.step
        return d
