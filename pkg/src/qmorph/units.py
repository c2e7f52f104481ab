"""Reversible arithmetic and data-movement units on named registers.

Every builder takes the layout and register names and returns a Circuit.
Work qubits are always returned to 0; where uncomputation would need more
ancillas than the layout provides, a Reset is used on a qubit whose value is
a classical function of the branch.
"""
from __future__ import annotations

from .core import (
    Circuit,
    ControlledNot,
    ControlledSwap,
    MultiControlledNot,
    Not,
    RegisterLayout,
    Reset,
    Toffoli,
)

QCS = "QCS"
QCL = "QCL"


def _check_pair(layout: RegisterLayout, a: str, b: str):
    if a == b:
        raise ValueError("operands must be distinct registers")
    if len(layout[a]) != len(layout[b]):
        raise ValueError(f"registers {a!r} and {b!r} differ in width")


def build_comparator(layout: RegisterLayout, a: str, b: str) -> Circuit:
    """``y_cmp ^= [a < b]``, scanning from the most significant bit down.

    Work bits: ``eq`` (no difference seen yet), ``hit`` (first difference is
    at this bit) and ``diff`` (``a_i xor b_i``).  ``a`` and ``b`` are never
    written.  At the first differing bit ``a < b`` exactly when ``b_i = 1``.
    """
    _check_pair(layout, a, b)
    eq, hit, diff = layout["anc_cmp"]
    y = layout["y_cmp"][0]
    ra, rb = layout[a], layout[b]
    gates = [Not(eq)]
    for i in reversed(range(len(ra))):
        gates += [
            ControlledNot(ra[i], diff),
            ControlledNot(rb[i], diff),
            Toffoli(eq, diff, hit),
            Toffoli(hit, rb[i], y),
            ControlledNot(hit, eq),
            Reset(hit),
            Reset(diff),
        ]
    gates.append(Reset(eq))
    return Circuit(layout, gates)


def build_qcsl(layout: RegisterLayout, a: str, b: str, mode: str) -> Circuit:
    """Sort the pair in place. QCS leaves ``a >= b``; QCL leaves ``a <= b``.

    Comparator flag drives one controlled swap per bit, then is reset.
    """
    if mode == QCS:
        cmp = build_comparator(layout, a, b)  # swap when a < b
    elif mode == QCL:
        cmp = build_comparator(layout, b, a)  # swap when a > b
    else:
        raise ValueError(f"mode must be {QCS!r} or {QCL!r}, got {mode!r}")
    y = layout["y_cmp"][0]
    swaps = [ControlledSwap(y, qa, qb) for qa, qb in zip(layout[a], layout[b])]
    return Circuit(layout, cmp.gates + tuple(swaps) + (Reset(y),))


def build_subtractor(layout: RegisterLayout, a: str, b: str) -> Circuit:
    """``a <- (a - b) mod 2^q`` by a ripple-borrow chain; ``b`` is unchanged.

    ``anc_sub[0]`` carries the borrow into the current bit, ``anc_sub[1]``
    accumulates the outgoing borrow.  The final borrow is discarded.
    """
    _check_pair(layout, a, b)
    borrow, nxt = layout["anc_sub"]
    ra, rb = layout[a], layout[b]
    gates = []
    for ai, bi in zip(ra, rb):
        gates += [
            # borrow_out = (!a & b) | (!(a ^ b) & borrow_in); the two terms are exclusive
            MultiControlledNot(((ai, False), (bi, True)), nxt),
            ControlledNot(bi, ai),
            MultiControlledNot(((ai, False), (borrow, True)), nxt),
            ControlledNot(borrow, ai),
            Reset(borrow),
            ControlledNot(nxt, borrow),
            Reset(nxt),
        ]
    gates.append(Reset(borrow))
    return Circuit(layout, gates)


def build_cyclic_shift(layout: RegisterLayout, axis: str, direction: int) -> Circuit:
    """Position register ``axis`` ('Y' or 'X') moves by ``direction`` (+1/-1) mod 2^n.

    Ripple increment: bit ``i`` flips when all lower bits are 1 (0 for a
    decrement), applied from the top bit down so lower bits are still intact.
    """
    reg = {"Y": "pos_y", "X": "pos_x"}.get(axis.upper() if isinstance(axis, str) else axis)
    if reg is None:
        raise ValueError(f"axis must be 'Y' or 'X', got {axis!r}")
    if direction not in (1, -1):
        raise ValueError(f"direction must be +1 or -1, got {direction!r}")
    bits = layout[reg]
    positive = direction == 1
    gates = []
    for i in reversed(range(len(bits))):
        if i == 0:
            gates.append(Not(bits[0]))
        elif i == 1 and positive:
            gates.append(ControlledNot(bits[0], bits[1]))
        elif i == 2 and positive:
            gates.append(Toffoli(bits[0], bits[1], bits[2]))
        else:
            gates.append(MultiControlledNot([(bits[k], positive) for k in range(i)], bits[i]))
    return Circuit(layout, gates)


def build_shift_by(layout: RegisterLayout, dy: int, dx: int) -> Circuit:
    """Translate all positions by ``(dy, dx)`` with unit cyclic shifts."""
    gates = []
    for axis, d in (("Y", dy), ("X", dx)):
        step = build_cyclic_shift(layout, axis, 1 if d > 0 else -1)
        for _ in range(abs(d)):
            gates.extend(step.gates)
    return Circuit(layout, gates)


def build_copy(layout: RegisterLayout, src: str, dst: str) -> Circuit:
    """Fan out ``src`` into a zeroed ``dst`` with one CNOT per bit."""
    _check_pair(layout, src, dst)
    return Circuit(layout, [ControlledNot(s, d) for s, d in zip(layout[src], layout[dst])])


def build_reset_register(layout: RegisterLayout, reg: str) -> Circuit:
    return Circuit(layout, [Reset(qb) for qb in layout[reg]])
