import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qmorph.core import (
    Circuit,
    ControlledNot,
    ControlledSwap,
    MultiControlledNot,
    Not,
    RegisterLayout,
    Reset,
    Toffoli,
)
from qmorph.neqr import GrayImage, encode_image
from qmorph.sim import (
    BasisEnsemble,
    BranchCollision,
    DenseState,
    ResetCollision,
    WidthCap,
    apply_gate_classical,
    compact,
    run_dense_gates,
    exact_distribution,
    run_dense,
    run_ensemble,
    sample,
)
from qmorph.units import build_comparator, build_subtractor

FIG1 = GrayImage(np.array([[0, 100], [200, 255]]), 8)


def test_toffoli_both_controls_set():
    assert apply_gate_classical(Toffoli(0, 1, 2), 0b011) == 0b111


def test_reset_forces_zero():
    assert apply_gate_classical(Reset(0), 1) == 0


def test_cswap_control_clear_is_identity():
    # qubits: a=0, b=1, control=2; input 011 read as q2 q1 q0
    assert apply_gate_classical(ControlledSwap(2, 0, 1), 0b011) == 0b011
    assert apply_gate_classical(ControlledSwap(2, 0, 1), 0b101) == 0b110


def test_negative_controls():
    g = MultiControlledNot([(0, False), (1, True)], 2)
    assert apply_gate_classical(g, 0b010) == 0b110
    assert apply_gate_classical(g, 0b011) == 0b011


def test_empty_circuit_leaves_ensemble(layout3):
    ens = BasisEnsemble(layout3.total_qubits, (0, 5, 9))
    assert run_ensemble(Circuit(layout3, []), ens) == ens


SMALL = RegisterLayout(1, 1)
W = SMALL.total_qubits


def _perm_gate():
    q = st.integers(0, W - 1)
    return st.one_of(
        q.map(Not),
        st.tuples(q, q).filter(lambda t: len(set(t)) == 2).map(lambda t: ControlledNot(*t)),
        st.tuples(q, q, q).filter(lambda t: len(set(t)) == 3).map(lambda t: Toffoli(*t)),
        st.tuples(q, q, q).filter(lambda t: len(set(t)) == 3).map(lambda t: ControlledSwap(*t)),
        st.tuples(q, q, q, q, st.booleans()).filter(lambda t: len(set(t[:4])) == 4).map(
            lambda t: MultiControlledNot([(t[0], True), (t[1], t[4]), (t[2], True)], t[3])
        ),
    )


@settings(max_examples=60, deadline=None)
@given(st.lists(_perm_gate(), max_size=30), st.sets(st.integers(0, (1 << W) - 1), min_size=1, max_size=40))
def test_permutation_circuits_preserve_cardinality_and_invert(gates, states):
    circ = Circuit(SMALL, gates)
    ens = BasisEnsemble(W, tuple(states))
    out = run_ensemble(circ, ens)
    assert len(out) == len(ens)
    # every gate in the alphabet is its own inverse
    back = run_ensemble(Circuit(SMALL, gates[::-1]), out)
    assert back == ens


def test_branch_collision_on_merging_reset():
    ens = BasisEnsemble(W, (0b0, 0b1))
    with pytest.raises(BranchCollision):
        run_ensemble(Circuit(SMALL, [Reset(0)]), ens)


def test_dense_not_flips_basis():
    st0 = DenseState.basis(W, 0)
    out = run_dense(Circuit(SMALL, [Not(0)]), st0)
    assert out.amplitudes[1] == pytest.approx(1.0)
    assert abs(out.norm() - 1) < 1e-12


def test_dense_reset_collision():
    amps = np.zeros(1 << W, dtype=complex)
    amps[0] = amps[1] = 1 / np.sqrt(2)
    with pytest.raises(ResetCollision):
        run_dense(Circuit(SMALL, [Reset(0)]), DenseState(W, amps))


def test_dense_width_cap():
    with pytest.raises(WidthCap):
        DenseState.from_ensemble(BasisEnsemble(30, (0,)))


def test_dense_reset_moves_determined_amplitude():
    amps = np.zeros(1 << W, dtype=complex)
    amps[0b01] = amps[0b10] = 1 / np.sqrt(2)
    out = run_dense(Circuit(SMALL, [Reset(0)]), DenseState(W, amps))
    assert out.amplitudes[0b00] == pytest.approx(1 / np.sqrt(2))
    assert abs(out.norm() - 1) < 1e-12


def exhaustive_agreement(circuit, free):
    """Both backends on every basis input over the ``free`` qubits.

    The dense side runs on the compacted circuit so q = 3 units fit the cap.
    """
    width = circuit.width
    small, used = compact(circuit.gates)
    where = {qb: i for i, qb in enumerate(used)}
    for bits in itertools.product((0, 1), repeat=len(free)):
        s = sum(b << qb for b, qb in zip(bits, free))
        (out,) = run_ensemble(circuit, BasisEnsemble(width, (s,))).states
        dense = run_dense_gates(small, DenseState.basis(len(used), sum(b << where[qb] for b, qb in zip(bits, free))))
        nz = np.flatnonzero(np.abs(dense.amplitudes) > 1e-12)
        assert len(nz) == 1 and abs(dense.amplitudes[nz[0]] - 1) < 1e-12
        expected = sum((out >> qb & 1) << i for i, qb in enumerate(used))
        assert nz[0] == expected
        # qubits outside the compacted set are untouched
        assert out & ~sum(1 << qb for qb in used) == s & ~sum(1 << qb for qb in used)


@pytest.mark.parametrize("q", [1, 2, 3])
def test_dense_matches_ensemble_on_comparator(q):
    lay = RegisterLayout(1, q)
    circ = build_comparator(lay, "c_main", "d_up")
    exhaustive_agreement(circ, list(lay["c_main"]) + list(lay["d_up"]))


@pytest.mark.parametrize("q", [1, 2, 3])
def test_dense_matches_ensemble_on_subtractor(q):
    lay = RegisterLayout(1, q)
    circ = build_subtractor(lay, "c_main", "c_copy")
    exhaustive_agreement(circ, list(lay["c_main"]) + list(lay["c_copy"]))


def test_position_marginal_is_uniform(layout3, rng):
    img = GrayImage(rng.integers(0, 8, (4, 4)), 3)
    _, ens = encode_image(img, layout3)
    dist = exact_distribution(ens, list(layout3["pos_y"]) + list(layout3["pos_x"]))
    assert len(dist) == 16
    assert all(abs(p - 1 / 16) < 1e-12 for p in dist.values())


def test_fig1_msb_marginal():
    lay, ens = encode_image(FIG1)
    dist = exact_distribution(ens, [lay["c_main"][7]])
    assert dist == {"0": 0.5, "1": 0.5}


def test_all_qubits_measured_gives_each_state(layout3, rng):
    img = GrayImage(rng.integers(0, 8, (4, 4)), 3)
    _, ens = encode_image(img, layout3)
    dist = exact_distribution(ens, range(layout3.total_qubits))
    assert len(dist) == len(ens)
    assert abs(sum(dist.values()) - 1) < 1e-12


def test_sample_uniform_16_within_5_sigma():
    dist = {format(i, "04b"): 1 / 16 for i in range(16)}
    counts = sample(dist, 8192, seed=7)
    assert sum(counts.values()) == 8192
    assert len(counts) == 16
    assert all(385 <= c <= 639 for c in counts.values())


def test_sample_is_seeded():
    dist = {"00": 0.25, "01": 0.5, "11": 0.25}
    assert sample(dist, 1000, 3) == sample(dist, 1000, 3)


def test_single_shot():
    counts = sample({"0": 0.5, "1": 0.5}, 1, 0)
    assert list(counts.values()) == [1]


def test_sample_rejects_zero_shots():
    with pytest.raises(ValueError):
        sample({"0": 1.0}, 0, 0)
