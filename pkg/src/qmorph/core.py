"""Gate-level intermediate representation: register layout, gates, circuits."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union

# Register table order. Widths are given as (per-n, per-q, constant) multipliers.
_REGISTER_SPEC = (
    ("pos_y", 1, 0, 0),
    ("pos_x", 1, 0, 0),
    ("c_main", 0, 1, 0),
    ("d_up", 0, 1, 0),
    ("d_down", 0, 1, 0),
    ("d_left", 0, 1, 0),
    ("d_right", 0, 1, 0),
    ("c_copy", 0, 1, 0),
    ("thr", 0, 1, 0),
    ("anc_cmp", 0, 0, 3),
    ("y_cmp", 0, 0, 1),
    ("anc_sub", 0, 0, 2),
)

GRAY_REGISTERS = ("c_main", "d_up", "d_down", "d_left", "d_right", "c_copy", "thr")
NEIGHBOR_REGISTERS = ("d_up", "d_down", "d_left", "d_right")


class LayoutMismatch(ValueError):
    pass


class InvalidCircuit(ValueError):
    def __init__(self, issues):
        self.issues = list(issues)
        super().__init__("; ".join(str(i) for i in self.issues))


@dataclass(frozen=True)
class RegisterLayout:
    """Named, contiguous, disjoint qubit ranges for an ``2^n x 2^n`` image with ``q`` gray bits.

    Inside every register, qubit ``k`` of the range carries the coefficient ``2^k``.
    """

    n: int
    q: int
    registers: dict = field(init=False, repr=False, compare=False)
    total_qubits: int = field(init=False)

    def __post_init__(self):
        if self.n < 1 or self.q < 1:
            raise ValueError(f"need n >= 1 and q >= 1, got n={self.n}, q={self.q}")
        table = {}
        start = 0
        for name, per_n, per_q, const in _REGISTER_SPEC:
            width = per_n * self.n + per_q * self.q + const
            table[name] = range(start, start + width)
            start += width
        object.__setattr__(self, "registers", table)
        object.__setattr__(self, "total_qubits", start)

    def __getitem__(self, name: str) -> range:
        try:
            return self.registers[name]
        except KeyError:
            raise KeyError(f"unknown register {name!r}") from None

    def qubit(self, name: str, bit: int) -> int:
        return self[name][bit]

    @property
    def names(self) -> tuple:
        return tuple(self.registers)

    def read(self, state: int, name: str) -> int:
        r = self[name]
        return (state >> r.start) & ((1 << len(r)) - 1)

    def write(self, state: int, name: str, value: int) -> int:
        r = self[name]
        mask = ((1 << len(r)) - 1) << r.start
        if value < 0 or value >> len(r):
            raise ValueError(f"value {value} does not fit register {name!r} of width {len(r)}")
        return (state & ~mask) | (value << r.start)

    def pack(self, **values: int) -> int:
        """Build a basis state from register values; unnamed registers are zero."""
        state = 0
        for name, value in values.items():
            state = self.write(state, name, value)
        return state


@dataclass(frozen=True)
class Not:
    target: int

    @property
    def qubits(self):
        return (self.target,)


@dataclass(frozen=True)
class ControlledNot:
    control: int
    target: int

    @property
    def qubits(self):
        return (self.control, self.target)


@dataclass(frozen=True)
class Toffoli:
    control1: int
    control2: int
    target: int

    @property
    def qubits(self):
        return (self.control1, self.control2, self.target)


@dataclass(frozen=True)
class MultiControlledNot:
    """Flip ``target`` when every ``(qubit, positive)`` control matches its polarity.

    A negative control (``positive=False``) fires on 0.
    """

    controls: tuple
    target: int

    def __post_init__(self):
        object.__setattr__(self, "controls", tuple((int(c), bool(p)) for c, p in self.controls))

    @property
    def qubits(self):
        return tuple(c for c, _ in self.controls) + (self.target,)

    @property
    def negated(self) -> int:
        return sum(1 for _, p in self.controls if not p)


@dataclass(frozen=True)
class ControlledSwap:
    control: int
    a: int
    b: int

    @property
    def qubits(self):
        return (self.control, self.a, self.b)


@dataclass(frozen=True)
class Reset:
    target: int

    @property
    def qubits(self):
        return (self.target,)


Gate = Union[Not, ControlledNot, Toffoli, MultiControlledNot, ControlledSwap, Reset]
GATE_KINDS = (Not, ControlledNot, Toffoli, MultiControlledNot, ControlledSwap, Reset)


@dataclass(frozen=True)
class Issue:
    position: int
    kind: str  # "IndexOutOfRange" | "DuplicateQubit" | "UnknownGate"
    message: str

    def __str__(self):
        return f"gate {self.position}: {self.kind}: {self.message}"


@dataclass(frozen=True)
class Circuit:
    layout: RegisterLayout
    gates: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))

    def __len__(self):
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def __add__(self, other: "Circuit") -> "Circuit":
        return concat(self, other)

    @property
    def width(self) -> int:
        return self.layout.total_qubits


def gate_issues(gate, width: int, position: int = 0) -> list:
    if not isinstance(gate, GATE_KINDS):
        return [Issue(position, "UnknownGate", f"{gate!r} is not a gate")]
    issues = []
    try:
        qubits = gate.qubits
    except Exception as exc:  # malformed gate payloads are reported, never raised
        return [Issue(position, "UnknownGate", f"unreadable qubits: {exc}")]
    for qb in qubits:
        if not isinstance(qb, int) or qb < 0 or qb >= width:
            issues.append(Issue(position, "IndexOutOfRange", f"qubit {qb!r} not in [0, {width})"))
    if len(set(qubits)) != len(qubits):
        issues.append(Issue(position, "DuplicateQubit", f"{gate!r} uses a qubit twice"))
    return issues


def validate(circuit: Circuit) -> list:
    """Return every structural problem in ``circuit``; an empty list means valid."""
    width = circuit.layout.total_qubits
    issues = []
    for pos, gate in enumerate(circuit.gates):
        issues.extend(gate_issues(gate, width, pos))
    return issues


def concat(*circuits: Circuit) -> Circuit:
    if not circuits:
        raise ValueError("concat needs at least one circuit")
    layout = circuits[0].layout
    gates = []
    for c in circuits:
        if c.layout != layout:
            raise LayoutMismatch(f"cannot join circuits on {layout} and {c.layout}")
        gates.extend(c.gates)
    return Circuit(layout, gates)


def empty(layout: RegisterLayout) -> Circuit:
    return Circuit(layout, ())


def circuit_from(layout: RegisterLayout, parts: Iterable) -> Circuit:
    """Flatten a mix of gates and circuits into one circuit."""
    gates = []
    for p in parts:
        if isinstance(p, Circuit):
            if p.layout != layout:
                raise LayoutMismatch(f"cannot join circuits on {layout} and {p.layout}")
            gates.extend(p.gates)
        else:
            gates.append(p)
    return Circuit(layout, gates)
