"""OpenQASM 2.0 export, and a reader for the subset we emit."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .core import (
    Circuit,
    ControlledNot,
    ControlledSwap,
    MultiControlledNot,
    Not,
    Reset,
    Toffoli,
)


class QASMParseError(ValueError):
    def __init__(self, msg: str, line: Optional[int] = None):
        self.line = line
        super().__init__(msg if line is None else f"line {line}: {msg}")


def _work_needed(circuit: Circuit) -> int:
    k = max((len(g.controls) for g in circuit.gates if isinstance(g, MultiControlledNot)), default=0)
    return max(k - 2, 0)


def _mcx_lines(gate: MultiControlledNot, q) -> list:
    controls = gate.controls
    flips = [f"x {q(c)};" for c, positive in controls if not positive]
    qs = [q(c) for c, _ in controls]
    t = q(gate.target)
    k = len(qs)
    if k == 0:
        body = [f"x {t};"]
    elif k == 1:
        body = [f"cx {qs[0]},{t};"]
    elif k == 2:
        body = [f"ccx {qs[0]},{qs[1]},{t};"]
    else:
        up = [f"ccx {qs[0]},{qs[1]},w[0];"]
        for i in range(2, k - 1):
            up.append(f"ccx {qs[i]},w[{i - 2}],w[{i - 1}];")
        body = up + [f"ccx {qs[k - 1]},w[{k - 3}],{t};"] + up[::-1]
    return flips + body + flips


def export_qasm(circuit: Circuit, measured: Optional[Sequence[int]] = None) -> str:
    """Serialize ``circuit``; multi-controlled NOTs become Toffoli ladders on ``w``.

    ``measured`` qubits are read into ``c[0..]`` in the given order.
    """
    layout = circuit.layout

    def q(i):
        return f"q[{i}]"

    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";']
    for name in layout.names:
        r = layout[name]
        lines.append(f"// {name}: q[{r.start}..{r.stop - 1}]")
    lines.append(f"qreg q[{layout.total_qubits}];")
    work = _work_needed(circuit)
    if work:
        lines.append(f"qreg w[{work}];")
    if measured:
        lines.append(f"creg c[{len(measured)}];")
    for g in circuit.gates:
        if isinstance(g, Not):
            lines.append(f"x {q(g.target)};")
        elif isinstance(g, ControlledNot):
            lines.append(f"cx {q(g.control)},{q(g.target)};")
        elif isinstance(g, Toffoli):
            lines.append(f"ccx {q(g.control1)},{q(g.control2)},{q(g.target)};")
        elif isinstance(g, ControlledSwap):
            lines.append(f"cswap {q(g.control)},{q(g.a)},{q(g.b)};")
        elif isinstance(g, Reset):
            lines.append(f"reset {q(g.target)};")
        elif isinstance(g, MultiControlledNot):
            lines.extend(_mcx_lines(g, q))
        else:
            raise TypeError(f"cannot export {g!r}")
    for j, qb in enumerate(measured or ()):
        lines.append(f"measure {q(qb)} -> c[{j}];")
    return "\n".join(lines) + "\n"


@dataclass
class QasmProgram:
    """Flat gate list over all declared quantum registers, in declaration order."""

    width: int
    gates: list
    qregs: dict = field(default_factory=dict)  # name -> (offset, size)
    measured: list = field(default_factory=list)  # (flat qubit, classical index)


_ARG = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\[(\d+)\]$")
_ARITY = {"x": 1, "cx": 2, "ccx": 3, "cswap": 3, "reset": 1}


def read_qasm(text: str) -> QasmProgram:
    """Parse the OpenQASM 2.0 subset produced by :func:`export_qasm`."""
    qregs: dict = {}
    width = 0
    gates = []
    measured = []
    stmts = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("//", 1)[0].strip()
        for stmt in line.split(";"):
            stmt = stmt.strip()
            if stmt:
                stmts.append((lineno, stmt))

    def qubit(arg, lineno):
        m = _ARG.match(arg.strip())
        if not m or m.group(1) not in qregs:
            raise QASMParseError(f"unknown qubit {arg!r}", lineno)
        off, size = qregs[m.group(1)]
        idx = int(m.group(2))
        if idx >= size:
            raise QASMParseError(f"{arg} out of range", lineno)
        return off + idx

    for lineno, stmt in stmts:
        head, _, rest = stmt.partition(" ")
        rest = rest.strip()
        if head == "OPENQASM":
            if rest != "2.0":
                raise QASMParseError(f"unsupported version {rest}", lineno)
        elif head in ("include", "barrier", "creg"):
            continue
        elif head == "qreg":
            m = _ARG.match(rest)
            if not m:
                raise QASMParseError(f"bad qreg {rest!r}", lineno)
            qregs[m.group(1)] = (width, int(m.group(2)))
            width += int(m.group(2))
        elif head == "measure":
            src, _, dst = rest.partition("->")
            m = _ARG.match(dst.strip())
            if not m:
                raise QASMParseError(f"bad measure target {dst!r}", lineno)
            measured.append((qubit(src, lineno), int(m.group(2))))
        elif head in _ARITY:
            args = [qubit(a, lineno) for a in rest.split(",")]
            if len(args) != _ARITY[head]:
                raise QASMParseError(f"{head} takes {_ARITY[head]} operands", lineno)
            if head == "x":
                gates.append(Not(*args))
            elif head == "cx":
                gates.append(ControlledNot(*args))
            elif head == "ccx":
                gates.append(Toffoli(*args))
            elif head == "cswap":
                gates.append(ControlledSwap(*args))
            else:
                gates.append(Reset(*args))
        else:
            raise QASMParseError(f"unsupported statement {head!r}", lineno)
    return QasmProgram(width, gates, qregs, measured)
