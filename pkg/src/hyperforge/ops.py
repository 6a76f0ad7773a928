"""Gaussian operation descriptors and their text/JSON forms.

Op kinds (single real parameter each):

======  =====================================  ==================
kind    unitary                                parameter meaning
======  =====================================  ==================
Z       exp(i s q_a)                           momentum displacement
X       exp(-i s p_a)                          position displacement
Dq      exp(i (s/2) q_a^2)                     position shear
Dp      exp(i (s/2) p_a^2)                     momentum shear
S       exp(-i (s/2) (p_a q_a + q_a p_a))      squeeze
R       exp(i (s/2) (q_a^2 + p_a^2))           rotation
CZ      exp(i t q_{v1} ... q_{vm})             generalized controlled-Z
MeasQ   projection onto <m| in position        outcome m
MeasP   projection onto <m| in momentum        outcome m
======  =====================================  ==================
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .errors import MalformedFileError, UnknownOpError
from .phasepoly import check_mode_label

SINGLE_MODE_KINDS = ("Z", "X", "Dq", "Dp", "S", "R", "MeasQ", "MeasP")
ALL_KINDS = SINGLE_MODE_KINDS + ("CZ",)
MEASUREMENT_KINDS = ("MeasQ", "MeasP")


@dataclass(frozen=True)
class GaussianOp:
    kind: str
    modes: tuple[str, ...]
    param: float

    def __post_init__(self):
        if self.kind not in ALL_KINDS:
            raise UnknownOpError(f"unknown op kind {self.kind!r}")
        if not math.isfinite(self.param):
            raise ValueError("op parameter must be finite")
        for m in self.modes:
            check_mode_label(m)
        if self.kind == "CZ":
            if len(self.modes) < 1:
                raise ValueError("CZ needs at least one mode")
            if len(set(self.modes)) != len(self.modes):
                raise ValueError("CZ modes must be distinct")
            object.__setattr__(self, "modes", tuple(sorted(self.modes)))
        elif len(self.modes) != 1:
            raise ValueError(f"{self.kind} acts on exactly one mode")

    @property
    def mode(self) -> str:
        return self.modes[0]

    @property
    def is_measurement(self) -> bool:
        return self.kind in MEASUREMENT_KINDS

    def inverse(self) -> "GaussianOp":
        if self.is_measurement:
            raise ValueError("measurements have no inverse")
        return GaussianOp(self.kind, self.modes, -self.param)

    def __str__(self) -> str:
        args = ",".join(self.modes)
        return f"{self.kind}({args},{self.param:g})"

    # -- JSON form (circuit files, HTTP API) ----------------------------------

    def to_json(self) -> dict:
        if self.kind == "CZ":
            return {"op": "CZ", "modes": list(self.modes), "param": self.param}
        return {"op": self.kind, "mode": self.mode, "param": self.param}

    @classmethod
    def from_json(cls, data: dict) -> "GaussianOp":
        try:
            kind = data["op"]
        except (TypeError, KeyError):
            raise MalformedFileError("op entry missing 'op' field")
        if not isinstance(kind, str) or kind not in ALL_KINDS:
            raise UnknownOpError(f"unknown op name {kind!r}")
        try:
            if kind == "CZ":
                modes = tuple(data["modes"])
            else:
                modes = (data["mode"],)
            param = float(data["param"])
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedFileError(f"malformed op entry: {exc}")
        return cls(kind, modes, param)


# constructors ----------------------------------------------------------------

def zdisp(mode: str, s: float) -> GaussianOp:
    return GaussianOp("Z", (mode,), s)


def xdisp(mode: str, s: float) -> GaussianOp:
    return GaussianOp("X", (mode,), s)


def shear_q(mode: str, s: float) -> GaussianOp:
    return GaussianOp("Dq", (mode,), s)


def shear_p(mode: str, s: float) -> GaussianOp:
    return GaussianOp("Dp", (mode,), s)


def squeeze(mode: str, s: float) -> GaussianOp:
    return GaussianOp("S", (mode,), s)


def rotate(mode: str, s: float) -> GaussianOp:
    return GaussianOp("R", (mode,), s)


def cphase(modes, t: float) -> GaussianOp:
    return GaussianOp("CZ", tuple(modes), t)


def measure_q_op(mode: str, m: float) -> GaussianOp:
    return GaussianOp("MeasQ", (mode,), m)


def measure_p_op(mode: str, m: float) -> GaussianOp:
    return GaussianOp("MeasP", (mode,), m)


# text form used by the CLI, e.g. "Dp(A,1)" or "CZ(A,D,-2)" ------------------

_OP_RE = re.compile(r"^\s*([A-Za-z]+)\s*\(\s*(.*?)\s*\)\s*$")


def parse_op(text: str) -> GaussianOp:
    match = _OP_RE.match(text)
    if not match:
        raise MalformedFileError(f"cannot parse op {text!r}")
    kind, body = match.group(1), match.group(2)
    if kind not in ALL_KINDS:
        raise UnknownOpError(f"unknown op name {kind!r}")
    parts = [p.strip() for p in body.split(",") if p.strip()]
    if len(parts) < 2:
        raise MalformedFileError(f"op {text!r} needs mode(s) and a parameter")
    try:
        param = float(parts[-1])
    except ValueError:
        raise MalformedFileError(f"bad parameter in op {text!r}")
    return GaussianOp(kind, tuple(parts[:-1]), param)
