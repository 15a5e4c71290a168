"""Quantum fault models and the faulty circuits they induce.

Fault identifiers (CLI and reports)::

    smgf:<g>                     single missing gate
    mmgf:<g1>,<g2>[,...]         multiple missing gates
    rgf:<g>x<t>                  gate g occurs t times in a row (t counts the original)
    pgf:<g>=<gate statement>     gate g replaced by a defective variant
    cross:+<g>@<line>            control point appears on gate g
    cross:-<g>@<line>            control point disappears from gate g
    stuck:<line>=<0|1|+|->       input line stuck at a fixed qubit state
    stuck:<line>=(<re_a>,<im_a>,<re_b>,<im_b>)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Union

import numpy as np

from .circuit import MAX_WIDTH, Circuit, CircuitError, Gate, parse_gate, total_matrix
from .linalg import ComplexMatrix, StateVector, identity, tensor

_S2 = 1 / math.sqrt(2)

NAMED_STATES: dict[str, tuple[complex, complex]] = {
    "0": (1 + 0j, 0j),
    "1": (0j, 1 + 0j),
    "+": (_S2 + 0j, _S2 + 0j),
    "-": (_S2 + 0j, -_S2 + 0j),
}
DEFAULT_STUCK_STATES = tuple(NAMED_STATES.values())


class FaultError(ValueError):
    """Malformed fault identifier or a fault that does not fit its circuit."""


def _check_gate_index(g: int, c: Circuit) -> None:
    if not 0 <= g < len(c.gates):
        raise FaultError(f"gate index {g} out of range for {len(c.gates)} gate(s)")


@dataclass(frozen=True)
class SMGF:
    gate: int

    @property
    def ident(self) -> str:
        return f"smgf:{self.gate}"

    def validate(self, c: Circuit) -> None:
        _check_gate_index(self.gate, c)


@dataclass(frozen=True)
class MMGF:
    gates: tuple[int, ...]

    def __post_init__(self):
        gates = tuple(sorted(set(int(g) for g in self.gates)))
        if len(gates) < 2:
            raise FaultError("mmgf needs at least two distinct gates; use smgf for one")
        object.__setattr__(self, "gates", gates)

    @property
    def ident(self) -> str:
        return "mmgf:" + ",".join(map(str, self.gates))

    def validate(self, c: Circuit) -> None:
        for g in self.gates:
            _check_gate_index(g, c)


@dataclass(frozen=True)
class RGF:
    gate: int
    times: int

    def __post_init__(self):
        if self.times < 2:
            raise FaultError(f"rgf multiplicity must be >= 2, got {self.times}")

    @property
    def ident(self) -> str:
        return f"rgf:{self.gate}x{self.times}"

    def validate(self, c: Circuit) -> None:
        _check_gate_index(self.gate, c)


@dataclass(frozen=True)
class PGF:
    gate: int
    replacement: Gate

    @property
    def ident(self) -> str:
        return f"pgf:{self.gate}={self.replacement.statement()}"

    def validate(self, c: Circuit) -> None:
        _check_gate_index(self.gate, c)
        try:
            self.replacement.check_width(c.width)
        except CircuitError as exc:
            raise FaultError(f"pgf replacement: {exc}") from None


@dataclass(frozen=True)
class CrossPoint:
    gate: int
    line: int
    mode: str  # "add" | "remove"

    def __post_init__(self):
        if self.mode not in ("add", "remove"):
            raise FaultError(f"cross-point mode must be 'add' or 'remove', got {self.mode!r}")

    @property
    def ident(self) -> str:
        sign = "+" if self.mode == "add" else "-"
        return f"cross:{sign}{self.gate}@{self.line}"

    def validate(self, c: Circuit) -> None:
        _check_gate_index(self.gate, c)
        g = c.gates[self.gate]
        if self.mode == "remove" and self.line not in g.controls:
            raise FaultError(f"line {self.line} is not a control of gate {self.gate}")
        if self.mode == "add":
            if not 0 <= self.line < c.width:
                raise FaultError(f"line {self.line} out of range for {c.width} qubit(s)")
            if self.line in g.lines:
                raise FaultError(f"line {self.line} already used by gate {self.gate}")


@dataclass(frozen=True)
class StuckAt:
    line: int
    alpha: complex
    beta: complex

    def __post_init__(self):
        a, b = complex(self.alpha), complex(self.beta)
        if not (math.isfinite(abs(a)) and math.isfinite(abs(b))):
            raise FaultError("stuck-at amplitudes must be finite")
        if abs(abs(a) ** 2 + abs(b) ** 2 - 1.0) > 1e-9:
            raise FaultError("stuck-at state must satisfy |alpha|^2 + |beta|^2 = 1")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @property
    def state(self) -> StateVector:
        return np.array([self.alpha, self.beta], dtype=np.complex128)

    @property
    def ident(self) -> str:
        for name, pair in NAMED_STATES.items():
            if (self.alpha, self.beta) == pair:
                return f"stuck:{self.line}={name}"
        nums = (self.alpha.real, self.alpha.imag, self.beta.real, self.beta.imag)
        return f"stuck:{self.line}=(" + ",".join(format(v, ".17g") for v in nums) + ")"

    def validate(self, c: Circuit) -> None:
        if not 0 <= self.line < c.width:
            raise FaultError(f"line {self.line} out of range for {c.width} qubit(s)")


FaultSpec = Union[SMGF, MMGF, RGF, PGF, CrossPoint, StuckAt]


def _int(tok: str, ident: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise FaultError(f"malformed fault identifier {ident!r}") from None


def parse_stuck_state(text: str, ident: str | None = None) -> tuple[complex, complex]:
    text = text.strip()
    if text in NAMED_STATES:
        return NAMED_STATES[text]
    if text.startswith("(") and text.endswith(")"):
        try:
            ra, ia, rb, ib = (float(v) for v in text[1:-1].split(","))
        except ValueError:
            pass
        else:
            return complex(ra, ia), complex(rb, ib)
    raise FaultError(f"malformed stuck-at state {text!r} in {ident or text!r}")


def parse_fault(ident: str) -> FaultSpec:
    """Parse a fault identifier string."""
    kind, sep, body = ident.strip().partition(":")
    if not sep:
        raise FaultError(f"malformed fault identifier {ident!r}")
    kind = kind.lower()
    if kind == "smgf":
        return SMGF(_int(body, ident))
    if kind == "mmgf":
        return MMGF(tuple(_int(t, ident) for t in body.split(",")))
    if kind == "rgf":
        g, x, t = body.partition("x")
        if not x:
            raise FaultError(f"malformed fault identifier {ident!r}")
        return RGF(_int(g, ident), _int(t, ident))
    if kind == "pgf":
        g, eq, stmt = body.partition("=")
        if not eq:
            raise FaultError(f"malformed fault identifier {ident!r}")
        try:
            replacement = parse_gate(stmt, MAX_WIDTH)
        except CircuitError as exc:
            raise FaultError(f"pgf replacement in {ident!r}: {exc}") from None
        return PGF(_int(g, ident), replacement)
    if kind == "cross":
        if not body or body[0] not in "+-":
            raise FaultError(f"malformed fault identifier {ident!r}")
        g, at, line = body[1:].partition("@")
        if not at:
            raise FaultError(f"malformed fault identifier {ident!r}")
        return CrossPoint(_int(g, ident), _int(line, ident), "add" if body[0] == "+" else "remove")
    if kind == "stuck":
        line, eq, state = body.partition("=")
        if not eq:
            raise FaultError(f"malformed fault identifier {ident!r}")
        alpha, beta = parse_stuck_state(state, ident)
        return StuckAt(_int(line, ident), alpha, beta)
    raise FaultError(f"unknown fault class {kind!r} in {ident!r}")


@dataclass(frozen=True)
class FaultyCircuit:
    circuit: Circuit
    stuck: StuckAt | None = None


def validate_fault(c: Circuit, f: FaultSpec) -> None:
    if not isinstance(f, (SMGF, MMGF, RGF, PGF, CrossPoint, StuckAt)):
        raise FaultError(f"not a fault spec: {f!r}")
    f.validate(c)


def apply_fault(c: Circuit, f: FaultSpec) -> FaultyCircuit:
    validate_fault(c, f)
    gates = list(c.gates)
    match f:
        case SMGF(gate=g):
            del gates[g]
        case MMGF(gates=gs):
            gates = [gt for k, gt in enumerate(gates) if k not in gs]
        case RGF(gate=g, times=t):
            gates[g : g + 1] = [gates[g]] * t
        case PGF(gate=g, replacement=r):
            gates[g] = r
        case CrossPoint(gate=g, line=line, mode="remove"):
            gates[g] = gates[g].with_controls(q for q in gates[g].controls if q != line)
        case CrossPoint(gate=g, line=line, mode="add"):
            gates[g] = gates[g].with_controls(gates[g].controls + (line,))
        case StuckAt():
            return FaultyCircuit(c, f)
    return FaultyCircuit(c.replace_gates(gates))


def stuck_input_transform(width: int, f: StuckAt) -> ComplexMatrix:
    """Matrix whose column i is the input product state for basis input i."""
    force = np.array([[f.alpha, f.alpha], [f.beta, f.beta]], dtype=np.complex128)
    t = np.ones((1, 1), dtype=np.complex128)
    for q in range(width):
        t = tensor(t, force if q == f.line else identity(2))
    return t


def faulty_outputs(fc: FaultyCircuit) -> ComplexMatrix:
    """Matrix whose column i is the faulty output for basis input i."""
    u = total_matrix(fc.circuit)
    if fc.stuck is not None:
        u = u @ stuck_input_transform(fc.circuit.width, fc.stuck)
    return u


def faulty_output(fc: FaultyCircuit, i: int) -> StateVector:
    dim = fc.circuit.dim
    if not 0 <= i < dim:
        raise IndexError(f"basis index {i} out of range for dimension {dim}")
    out = faulty_outputs(fc)[:, i].copy()
    norm = np.linalg.norm(out)
    if abs(norm - 1.0) > 1e-9:
        out = out / norm
    return out


@dataclass(frozen=True)
class FaultEnumConfig:
    smgf: bool = True
    mmgf_max_cardinality: int = 2
    rgf_multiplicities: tuple[int, ...] = (2, 3)
    stuck_states: tuple[tuple[complex, complex], ...] = DEFAULT_STUCK_STATES
    extra_stuck_states: tuple[tuple[complex, complex], ...] = ()
    include_crosspoint: bool = False
    pgf_replacements: tuple[tuple[int, Gate], ...] = field(default=())


def enumerate_faults(c: Circuit, cfg: FaultEnumConfig | None = None) -> list[FaultSpec]:
    """All configured faults for ``c`` in a fixed, documented order.

    SMGF by gate, MMGF by subset size then indices, RGF by (gate, t), PGF in
    configured order, cross-point by (gate, line), stuck-at by (line, state).
    """
    cfg = cfg or FaultEnumConfig()
    m = len(c.gates)
    out: list[FaultSpec] = []
    if cfg.smgf:
        out += [SMGF(g) for g in range(m)]
    for size in range(2, min(cfg.mmgf_max_cardinality, m) + 1):
        out += [MMGF(s) for s in combinations(range(m), size)]
    mults = sorted(set(cfg.rgf_multiplicities))
    out += [RGF(g, t) for g in range(m) for t in mults]
    for g, replacement in cfg.pgf_replacements:
        out.append(PGF(g, replacement))
    if cfg.include_crosspoint:
        for g, gt in enumerate(c.gates):
            for line in range(c.width):
                if line in gt.controls:
                    out.append(CrossPoint(g, line, "remove"))
                elif line not in gt.targets:
                    out.append(CrossPoint(g, line, "add"))
    states = cfg.stuck_states + cfg.extra_stuck_states
    out += [StuckAt(line, a, b) for line in range(c.width) for a, b in states]

    seen = set()
    unique = []
    for f in out:
        if f not in seen:
            validate_fault(c, f)
            seen.add(f)
            unique.append(f)
    return unique
