"""Two execution backends for the reversible gate alphabet, plus measurement.

The basis-ensemble engine tracks a uniform superposition as the set of its
basis strings; it is exact for every gate we emit because each one maps basis
states to basis states.  The dense backend keeps all ``2^m`` amplitudes and is
only used to cross-check the ensemble engine on small layouts.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .core import (
    Circuit,
    ControlledNot,
    ControlledSwap,
    InvalidCircuit,
    MultiControlledNot,
    Not,
    Reset,
    Toffoli,
    gate_issues,
    validate,
)

DENSE_CAP = 24
NORM_TOL = 1e-12


class BranchCollision(RuntimeError):
    pass


class WidthCap(ValueError):
    pass


class ResetCollision(RuntimeError):
    pass


@dataclass(frozen=True)
class BasisEnsemble:
    """Uniform superposition over distinct basis strings.

    Basis strings are Python ints; bit ``i`` is qubit ``i``.  ``states`` is kept
    sorted so two equal ensembles compare equal regardless of build order.
    """

    width: int
    states: tuple

    def __post_init__(self):
        states = tuple(sorted(set(self.states)))
        if len(states) != len(self.states):
            raise ValueError("basis strings in an ensemble must be distinct")
        if states and (states[0] < 0 or states[-1] >> self.width):
            raise ValueError(f"basis string does not fit in {self.width} qubits")
        object.__setattr__(self, "states", states)

    def __len__(self):
        return len(self.states)

    def __iter__(self):
        return iter(self.states)


@dataclass
class DenseState:
    width: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.width > DENSE_CAP:
            raise WidthCap(f"{self.width} qubits exceeds dense cap of {DENSE_CAP}")
        if self.amplitudes.shape != (1 << self.width,):
            raise ValueError("amplitude vector has the wrong length")

    @classmethod
    def from_ensemble(cls, ens: BasisEnsemble, cap: int = DENSE_CAP) -> "DenseState":
        if ens.width > cap:
            raise WidthCap(f"{ens.width} qubits exceeds dense cap of {cap}")
        amps = np.zeros(1 << ens.width, dtype=np.complex128)
        amps[list(ens.states)] = 1.0 / np.sqrt(len(ens))
        return cls(ens.width, amps)

    @classmethod
    def basis(cls, width: int, index: int) -> "DenseState":
        amps = np.zeros(1 << width, dtype=np.complex128)
        amps[index] = 1.0
        return cls(width, amps)

    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))


@dataclass
class Histogram:
    outcomes_qubits: tuple
    counts: dict = field(default_factory=dict)
    shots: int = 0
    exact: Optional[dict] = None


# --- classical semantics -------------------------------------------------


def apply_gate_classical(gate, bits: int) -> int:
    """Image of basis string ``bits`` under ``gate``."""
    if isinstance(gate, Not):
        return bits ^ (1 << gate.target)
    if isinstance(gate, ControlledNot):
        if bits >> gate.control & 1:
            return bits ^ (1 << gate.target)
        return bits
    if isinstance(gate, Toffoli):
        if bits >> gate.control1 & 1 and bits >> gate.control2 & 1:
            return bits ^ (1 << gate.target)
        return bits
    if isinstance(gate, MultiControlledNot):
        for c, positive in gate.controls:
            if (bits >> c & 1) != positive:
                return bits
        return bits ^ (1 << gate.target)
    if isinstance(gate, ControlledSwap):
        if bits >> gate.control & 1 and (bits >> gate.a & 1) != (bits >> gate.b & 1):
            return bits ^ ((1 << gate.a) | (1 << gate.b))
        return bits
    if isinstance(gate, Reset):
        return bits & ~(1 << gate.target)
    raise TypeError(f"not a gate: {gate!r}")


def _compile(gate):
    """Lower a gate to ``(kind, control_mask, control_value, operand_mask)``."""
    if isinstance(gate, Not):
        return ("x", 0, 0, 1 << gate.target)
    if isinstance(gate, ControlledNot):
        m = 1 << gate.control
        return ("x", m, m, 1 << gate.target)
    if isinstance(gate, Toffoli):
        m = (1 << gate.control1) | (1 << gate.control2)
        return ("x", m, m, 1 << gate.target)
    if isinstance(gate, MultiControlledNot):
        m = v = 0
        for c, positive in gate.controls:
            m |= 1 << c
            if positive:
                v |= 1 << c
        return ("x", m, v, 1 << gate.target)
    if isinstance(gate, ControlledSwap):
        return ("swap", 1 << gate.control, 1 << gate.a, 1 << gate.b)
    if isinstance(gate, Reset):
        return ("reset", 0, 0, ~(1 << gate.target))
    raise TypeError(f"not a gate: {gate!r}")


def run_gates(gates: Sequence, states: Iterable[int], width: int) -> list:
    """Push raw basis strings through a bare gate list of the given width.

    No collision checking; used for programs that do not carry a layout.
    """
    gates = list(gates)
    for pos, gate in enumerate(gates):
        issues = gate_issues(gate, width, pos)
        if issues:
            raise InvalidCircuit(issues)
    return _run_plain(gates, list(states))


def run_ensemble(circuit: Circuit, ens: BasisEnsemble) -> BasisEnsemble:
    """Map every basis string of ``ens`` through ``circuit``.

    Raises BranchCollision when a Reset merges two branches, which would
    silently break the uniform-amplitude picture.
    """
    if ens.width != circuit.width:
        raise ValueError(f"ensemble width {ens.width} != circuit width {circuit.width}")
    issues = validate(circuit)
    if issues:
        raise InvalidCircuit(issues)
    states = list(ens.states)
    gates = circuit.gates
    i = 0
    while i < len(gates):
        # split at reset layers so collisions are detected where they happen
        j = i
        while j < len(gates) and not isinstance(gates[j], Reset):
            j += 1
        k = j
        while k < len(gates) and isinstance(gates[k], Reset):
            k += 1
        states = _run_plain(gates[i:k], states)
        if k > j and len(set(states)) != len(states):
            raise BranchCollision(f"reset layer ending at gate {k - 1} merged branches")
        i = k
    return BasisEnsemble(ens.width, tuple(states))


def _run_plain(gates, states):
    for gate in gates:
        kind, cm, cv, op = _compile(gate)
        if kind == "x":
            if cm == 0:
                states = [s ^ op for s in states]
            else:
                states = [s ^ op if s & cm == cv else s for s in states]
        elif kind == "swap":
            ab = cv | op
            states = [
                s ^ ab if s & cm and (not s & cv) != (not s & op) else s for s in states
            ]
        else:
            states = [s & op for s in states]
    return states


# --- dense backend -------------------------------------------------------


def _view(amps: np.ndarray, width: int, fixed: dict):
    """View of the amplitudes whose qubits in ``fixed`` hold the given values.

    Free qubits between fixed ones are merged into single axes so numpy's
    inner loops stay long and contiguous.
    """
    shape, index = [], []
    hi = width
    for qb in sorted(fixed, reverse=True):
        shape += [1 << (hi - qb - 1), 2]
        index += [slice(None), int(fixed[qb])]
        hi = qb
    shape.append(1 << hi)
    index.append(slice(None))
    return amps.reshape(shape)[tuple(index)]


def run_dense(circuit: Circuit, state: DenseState, cap: int = DENSE_CAP) -> DenseState:
    """Apply ``circuit`` to a full amplitude vector.

    Reset is accepted only when the target is classically determined in every
    pair of basis states that differ on it; otherwise ResetCollision.
    """
    if state.width != circuit.width:
        raise ValueError(f"state width {state.width} != circuit width {circuit.width}")
    issues = validate(circuit)
    if issues:
        raise InvalidCircuit(issues)
    return run_dense_gates(circuit.gates, state, cap)


def run_dense_gates(gates: Sequence, state: DenseState, cap: int = DENSE_CAP) -> DenseState:
    m = state.width
    if m > cap:
        raise WidthCap(f"{m} qubits exceeds dense cap of {cap}")
    for pos, gate in enumerate(gates):
        issues = gate_issues(gate, m, pos)
        if issues:
            raise InvalidCircuit(issues)
    amps = state.amplitudes.copy()
    for pos, gate in enumerate(gates):
        if isinstance(gate, Reset):
            s0 = _view(amps, m, {gate.target: 0})
            s1 = _view(amps, m, {gate.target: 1})
            if np.any((np.abs(s0) > NORM_TOL) & (np.abs(s1) > NORM_TOL)):
                raise ResetCollision(f"gate {pos}: qubit {gate.target} is not classically determined")
            s0 += s1
            s1[...] = 0
            continue
        if isinstance(gate, ControlledSwap):
            sa = _view(amps, m, {gate.control: 1, gate.a: 0, gate.b: 1})
            sb = _view(amps, m, {gate.control: 1, gate.a: 1, gate.b: 0})
        else:
            if isinstance(gate, Not):
                controls = {}
            elif isinstance(gate, ControlledNot):
                controls = {gate.control: 1}
            elif isinstance(gate, Toffoli):
                controls = {gate.control1: 1, gate.control2: 1}
            else:
                controls = {c: int(p) for c, p in gate.controls}
            sa = _view(amps, m, {**controls, gate.target: 0})
            sb = _view(amps, m, {**controls, gate.target: 1})
        tmp = sa.copy()
        sa[...] = sb
        sb[...] = tmp
    return DenseState(m, amps)


def compact(gates: Sequence):
    """Renumber the qubits a gate list touches to ``0..k-1``.

    Returns ``(gates, qubits)`` with ``qubits[i]`` the original index of
    compact qubit ``i``; lets the dense backend check units whose full layout
    is over the cap.
    """
    used = sorted({qb for g in gates for qb in g.qubits})
    index = {qb: i for i, qb in enumerate(used)}
    out = []
    for g in gates:
        if isinstance(g, Not):
            out.append(Not(index[g.target]))
        elif isinstance(g, ControlledNot):
            out.append(ControlledNot(index[g.control], index[g.target]))
        elif isinstance(g, Toffoli):
            out.append(Toffoli(index[g.control1], index[g.control2], index[g.target]))
        elif isinstance(g, MultiControlledNot):
            out.append(MultiControlledNot([(index[c], p) for c, p in g.controls], index[g.target]))
        elif isinstance(g, ControlledSwap):
            out.append(ControlledSwap(index[g.control], index[g.a], index[g.b]))
        else:
            out.append(Reset(index[g.target]))
    return out, used


# --- measurement ---------------------------------------------------------


def _label(bits: int, measured: Sequence[int]) -> str:
    return "".join("1" if bits >> qb & 1 else "0" for qb in measured)


def exact_distribution(state, measured: Sequence[int]) -> dict:
    """Outcome probabilities for ``measured`` qubits, labels read in list order.

    Accepts either backend's state.
    """
    measured = tuple(measured)
    if isinstance(state, BasisEnsemble):
        for qb in measured:
            if not 0 <= qb < state.width:
                raise ValueError(f"measured qubit {qb} outside width {state.width}")
        counts: dict = {}
        for s in state.states:
            lab = _label(s, measured)
            counts[lab] = counts.get(lab, 0) + 1
        total = len(state)
        return {k: counts[k] / total for k in sorted(counts)}
    probs = np.abs(state.amplitudes) ** 2
    nz = np.nonzero(probs > 0)[0]
    dist: dict = {}
    for idx in nz:
        lab = _label(int(idx), measured)
        dist[lab] = dist.get(lab, 0.0) + float(probs[idx])
    return {k: dist[k] for k in sorted(dist)}


def sample(dist: dict, shots: int, seed: int) -> dict:
    """Multinomial draw of ``shots`` outcomes; identical seed gives identical counts."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    labels = sorted(dist)
    p = np.array([dist[k] for k in labels], dtype=float)
    p = p / p.sum()
    rng = np.random.default_rng(seed)
    draws = rng.multinomial(shots, p)
    return {lab: int(c) for lab, c in zip(labels, draws) if c}


def histogram(state, measured: Sequence[int], shots: Optional[int] = None, seed: int = 0) -> Histogram:
    exact = exact_distribution(state, measured)
    h = Histogram(tuple(measured), exact=exact)
    if shots is not None:
        h.counts = sample(exact, shots, seed)
        h.shots = shots
    return h


def ensemble_from_strings(width: int, states: Iterable[int]) -> BasisEnsemble:
    return BasisEnsemble(width, tuple(states))
