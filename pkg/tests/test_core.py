import pytest
from hypothesis import given, strategies as st

from qmorph.core import (
    Circuit,
    ControlledNot,
    ControlledSwap,
    LayoutMismatch,
    MultiControlledNot,
    Not,
    RegisterLayout,
    Reset,
    Toffoli,
    concat,
    empty,
    validate,
)


@pytest.mark.parametrize("n,q", [(1, 1), (1, 2), (2, 3), (3, 4), (3, 8)])
def test_layout_tiles_qubit_range(n, q):
    lay = RegisterLayout(n, q)
    assert lay.total_qubits == 2 * n + 7 * q + 6
    covered = sorted(i for name in lay.names for i in lay[name])
    assert covered == list(range(lay.total_qubits))
    assert len(lay["anc_cmp"]) == 3 and len(lay["y_cmp"]) == 1 and len(lay["anc_sub"]) == 2


def test_layout_rejects_degenerate_sizes():
    with pytest.raises(ValueError):
        RegisterLayout(0, 3)
    with pytest.raises(ValueError):
        RegisterLayout(2, 0)


def test_register_bit_k_is_weight_2_to_k(layout3):
    s = layout3.pack(c_main=0b101)
    r = layout3["c_main"]
    assert s == (1 << r[0]) | (1 << r[2])
    assert layout3.read(s, "c_main") == 5


def test_empty_circuit_validates(layout3):
    assert validate(empty(layout3)) == []


def test_duplicate_qubit_reported(layout3):
    issues = validate(Circuit(layout3, [Not(1), ControlledNot(0, 0)]))
    assert [(i.position, i.kind) for i in issues] == [(1, "DuplicateQubit")]


def test_out_of_range_reported(layout3):
    issues = validate(Circuit(layout3, [Not(layout3.total_qubits)]))
    assert [(i.position, i.kind) for i in issues] == [(0, "IndexOutOfRange")]


def test_validation_never_raises_on_junk(layout3):
    junk = [Not(-1), "cx", Toffoli(0, 1, 1), MultiControlledNot([(2, False), (2, True)], 3), None]
    kinds = [i.kind for i in validate(Circuit(layout3, junk))]
    assert kinds == ["IndexOutOfRange", "UnknownGate", "DuplicateQubit", "DuplicateQubit", "UnknownGate"]


def _gates(width):
    q = st.integers(0, width - 1)
    return st.one_of(
        q.map(Not),
        st.tuples(q, q).map(lambda t: ControlledNot(*t)),
        st.tuples(q, q, q).map(lambda t: Toffoli(*t)),
        st.tuples(q, q, q).map(lambda t: ControlledSwap(*t)),
        q.map(Reset),
    )


LAY = RegisterLayout(1, 1)


@given(st.lists(_gates(LAY.total_qubits)), st.lists(_gates(LAY.total_qubits)))
def test_concat_lengths_add(a, b):
    ca, cb = Circuit(LAY, a), Circuit(LAY, b)
    assert len(concat(ca, cb)) == len(a) + len(b)


@given(st.lists(_gates(LAY.total_qubits)), st.lists(_gates(LAY.total_qubits)), st.lists(_gates(LAY.total_qubits)))
def test_concat_associative(a, b, c):
    ca, cb, cc = (Circuit(LAY, g) for g in (a, b, c))
    assert concat(concat(ca, cb), cc).gates == concat(ca, concat(cb, cc)).gates


def test_concat_identity(layout3):
    c = Circuit(layout3, [Not(0), ControlledNot(0, 1)])
    assert concat(empty(layout3), c) == c
    assert concat(c, empty(layout3)) == c


def test_concat_layout_mismatch():
    with pytest.raises(LayoutMismatch):
        concat(empty(RegisterLayout(1, 2)), empty(RegisterLayout(2, 2)))
