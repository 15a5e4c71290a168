"""Gate library, circuit container, text format, and full-width unitaries.

Line 0 is the most significant bit of a basis index, so a gate on line
``q`` of an ``n``-line circuit is the tensor factor at position ``q``
counting from the left.

Circuit text format, one statement per line (``#`` starts a comment)::

    qubits 3
    h 0
    cx 0 1
    ccx 0 1 2
    u1 2 0.6 0 0.8 0 0.8 0 -0.6 0
    x 2 @ 0,1          # extra control lines
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Iterable, TextIO

import numpy as np

from .linalg import ComplexMatrix, identity, is_unitary, matmul

MAX_WIDTH = 12

_S2 = 1 / math.sqrt(2)
_CORE = {
    "i": np.eye(2, dtype=np.complex128),
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
    "h": np.array([[_S2, _S2], [_S2, -_S2]], dtype=np.complex128),
    "s": np.array([[1, 0], [0, 1j]], dtype=np.complex128),
    "t": np.array([[1, 0], [0, np.exp(1j * math.pi / 4)]], dtype=np.complex128),
    "swap": np.array(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=np.complex128
    ),
}

# statement keyword -> (base operation, built-in control count, target count)
STATEMENTS: dict[str, tuple[str, int, int]] = {
    "i": ("i", 0, 1),
    "x": ("x", 0, 1),
    "y": ("y", 0, 1),
    "z": ("z", 0, 1),
    "h": ("h", 0, 1),
    "s": ("s", 0, 1),
    "t": ("t", 0, 1),
    "u1": ("u1", 0, 1),
    "cx": ("x", 1, 1),
    "cz": ("z", 1, 1),
    "ccx": ("x", 2, 1),
    "swap": ("swap", 0, 2),
    "cswap": ("swap", 1, 2),
}

# base operation -> statement names indexed by how many controls they absorb
_CONTROLLED_NAMES = {
    "x": ("x", "cx", "ccx"),
    "z": ("z", "cz"),
    "swap": ("swap", "cswap"),
}

SELF_INVERSE_OPS = frozenset({"i", "x", "y", "z", "h", "swap"})


class CircuitError(ValueError):
    """Invalid circuit, gate, or circuit-file content."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno is not None else message)


@dataclass(frozen=True)
class Gate:
    """A core operation on ``targets``, applied only when every control line is 1.

    ``op`` is the uncontrolled base operation (``x`` for CX and CCX, ``swap``
    for CSWAP); built-in and extra controls live together in ``controls``.
    ``matrix`` holds the four row-major entries of a ``u1`` gate.
    """

    op: str
    targets: tuple[int, ...]
    controls: tuple[int, ...] = ()
    matrix: tuple[complex, ...] | None = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        object.__setattr__(self, "controls", tuple(sorted(int(c) for c in self.controls)))
        if self.op not in _CORE and self.op != "u1":
            raise CircuitError(f"unknown gate operation {self.op!r}")
        arity = 2 if self.op == "swap" else 1
        if len(self.targets) != arity:
            raise CircuitError(f"{self.op} takes {arity} target line(s), got {len(self.targets)}")
        lines = self.targets + self.controls
        if any(q < 0 for q in lines):
            raise CircuitError("negative line index")
        if len(set(lines)) != len(lines):
            raise CircuitError(f"line used twice in one gate: {sorted(lines)}")
        if self.op == "u1":
            if self.matrix is None or len(self.matrix) != 4:
                raise CircuitError("u1 needs a 2x2 matrix (4 complex entries)")
            m = tuple(complex(v) for v in self.matrix)
            object.__setattr__(self, "matrix", m)
            if not is_unitary(np.array(m).reshape(2, 2), 1e-9):
                raise CircuitError("u1 matrix is not unitary")
        elif self.matrix is not None:
            raise CircuitError(f"{self.op} does not take a matrix")

    @property
    def lines(self) -> tuple[int, ...]:
        return self.controls + self.targets

    @property
    def kind(self) -> str:
        """Gate-library name, e.g. ``CX`` for an ``x`` with one control."""
        names = _CONTROLLED_NAMES.get(self.op)
        if names is None:
            return self.op.upper()
        return names[min(len(self.controls), len(names) - 1)].upper()

    @property
    def is_self_inverse(self) -> bool:
        if self.op == "u1":
            m = self.core_matrix()
            return bool(np.allclose(m @ m, np.eye(2), atol=1e-9))
        return self.op in SELF_INVERSE_OPS

    def core_matrix(self) -> ComplexMatrix:
        if self.op == "u1":
            return np.array(self.matrix, dtype=np.complex128).reshape(2, 2)
        return _CORE[self.op]

    def check_width(self, width: int) -> None:
        bad = [q for q in self.lines if q >= width]
        if bad:
            raise CircuitError(f"line index {bad[0]} out of range for {width} qubit(s)")

    def with_controls(self, controls: Iterable[int]) -> Gate:
        return Gate(self.op, self.targets, tuple(controls), self.matrix)

    def statement(self) -> str:
        """Render in circuit-file syntax."""
        names = _CONTROLLED_NAMES.get(self.op)
        absorbed = 0 if names is None else min(len(self.controls), len(names) - 1)
        name = self.op if names is None else names[absorbed]
        parts = [name, *map(str, self.controls[:absorbed]), *map(str, self.targets)]
        if self.matrix is not None:
            for v in self.matrix:
                parts += [format(v.real, ".17g"), format(v.imag, ".17g")]
        extra = self.controls[absorbed:]
        if extra:
            parts += ["@", ",".join(map(str, extra))]
        return " ".join(parts)

    def __str__(self) -> str:
        return self.statement()


def gate(name: str, *lines: int, controls: Iterable[int] = (), matrix=None) -> Gate:
    """Build a gate from a statement keyword, e.g. ``gate("cx", 0, 1)``."""
    try:
        op, n_ctrl, n_tgt = STATEMENTS[name.lower()]
    except KeyError:
        raise CircuitError(f"unknown gate {name!r}") from None
    if len(lines) != n_ctrl + n_tgt:
        raise CircuitError(f"{name} takes {n_ctrl + n_tgt} line argument(s), got {len(lines)}")
    if matrix is not None:
        matrix = tuple(np.asarray(matrix, dtype=np.complex128).reshape(-1))
    extra = tuple(controls)
    all_controls = tuple(lines[:n_ctrl]) + extra
    if len(set(all_controls)) != len(all_controls):
        raise CircuitError(f"line used twice in one gate: {sorted(all_controls)}")
    return Gate(op, tuple(lines[n_ctrl:]), all_controls, matrix)


@dataclass(frozen=True)
class Circuit:
    width: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if not 1 <= self.width <= MAX_WIDTH:
            raise CircuitError(f"width must be in [1, {MAX_WIDTH}], got {self.width}")
        for g in self.gates:
            g.check_width(self.width)

    @property
    def dim(self) -> int:
        return 1 << self.width

    def __len__(self) -> int:
        return len(self.gates)

    def replace_gates(self, gates: Iterable[Gate]) -> Circuit:
        return Circuit(self.width, tuple(gates))

    def to_text(self) -> str:
        return "\n".join([f"qubits {self.width}", *(g.statement() for g in self.gates)]) + "\n"


def _parse_int(tok: str, lineno: int | None) -> int:
    try:
        return int(tok)
    except ValueError:
        raise CircuitError(f"expected a line index, got {tok!r}", lineno) from None


def parse_gate(statement: str, width: int, lineno: int | None = None) -> Gate:
    """Parse a single gate statement and check it against ``width``."""
    text, _, extra_text = statement.partition("@")
    tokens = text.split()
    if not tokens:
        raise CircuitError("empty gate statement", lineno)
    name = tokens[0].lower()
    if name not in STATEMENTS:
        raise CircuitError(f"unknown gate {tokens[0]!r}", lineno)
    _, n_ctrl, n_tgt = STATEMENTS[name]
    n_lines = n_ctrl + n_tgt
    args = tokens[1:]
    matrix = None
    if name == "u1":
        if len(args) != 9:
            raise CircuitError("u1 expects a line and 8 real numbers", lineno)
        try:
            vals = [float(v) for v in args[1:]]
        except ValueError:
            raise CircuitError("malformed u1 matrix entry", lineno) from None
        if not all(math.isfinite(v) for v in vals):
            raise CircuitError("malformed u1 matrix entry", lineno)
        matrix = [complex(vals[k], vals[k + 1]) for k in range(0, 8, 2)]
        args = args[:1]
    elif len(args) != n_lines:
        raise CircuitError(f"{name} takes {n_lines} line argument(s), got {len(args)}", lineno)
    lines = [_parse_int(a, lineno) for a in args]
    extra = []
    if extra_text.strip():
        extra = [_parse_int(t.strip(), lineno) for t in extra_text.split(",") if t.strip()]
    elif "@" in statement:
        raise CircuitError("'@' must be followed by control lines", lineno)
    try:
        g = gate(name, *lines, controls=extra, matrix=matrix)
        g.check_width(width)
    except CircuitError as exc:
        if exc.lineno is None and lineno is not None:
            raise CircuitError(str(exc), lineno) from None
        raise
    return g


def parse_circuit(source: str | TextIO) -> Circuit:
    """Parse circuit text (a string or a readable text stream)."""
    if isinstance(source, str):
        source = io.StringIO(source)
    width = None
    gates: list[Gate] = []
    for lineno, raw in enumerate(source, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if width is None:
            tokens = line.split()
            if tokens[0].lower() != "qubits" or len(tokens) != 2:
                raise CircuitError("first statement must be 'qubits <n>'", lineno)
            n = _parse_int(tokens[1], lineno)
            if not 1 <= n <= MAX_WIDTH:
                raise CircuitError(f"qubit count must be in [1, {MAX_WIDTH}], got {n}", lineno)
            width = n
            continue
        if line.split()[0].lower() == "qubits":
            raise CircuitError("duplicate 'qubits' statement", lineno)
        gates.append(parse_gate(line, width, lineno))
    if width is None:
        raise CircuitError("missing 'qubits <n>' statement")
    return Circuit(width, tuple(gates))


def load_circuit(path) -> Circuit:
    with open(path, encoding="utf-8") as fh:
        return parse_circuit(fh)


def embed_gate(g: Gate, width: int) -> ComplexMatrix:
    """Full ``2^width`` unitary of ``g``.

    Basis states whose control bits are all 1 get the core unitary on the
    target bits; every other basis state passes through unchanged.
    """
    g.check_width(width)
    dim = 1 << width
    core = g.core_matrix()
    k = len(g.targets)
    shifts = [width - 1 - q for q in g.targets]
    idx = np.arange(dim)
    cmask = 0
    for c in g.controls:
        cmask |= 1 << (width - 1 - c)
    tmask = 0
    for s in shifts:
        tmask |= 1 << s

    u = np.zeros((dim, dim), dtype=np.complex128)
    active = (idx & cmask) == cmask
    passive = idx[~active]
    u[passive, passive] = 1.0

    cols = idx[active]
    local = np.zeros_like(cols)
    for pos, s in enumerate(shifts):
        local |= ((cols >> s) & 1) << (k - 1 - pos)
    rest = cols & ~tmask
    for out in range(1 << k):
        spread = 0
        for pos, s in enumerate(shifts):
            if (out >> (k - 1 - pos)) & 1:
                spread |= 1 << s
        u[rest | spread, cols] = core[out, local]
    return u


def total_matrix(c: Circuit) -> ComplexMatrix:
    """``embed(g_m) ... embed(g_1)``; identity for an empty circuit."""
    u = identity(c.dim)
    for g in c.gates:
        u = matmul(embed_gate(g, c.width), u)
    return u
