"""Morphology circuits and the full segmentation pipeline."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .core import (
    NEIGHBOR_REGISTERS,
    Circuit,
    ControlledNot,
    Not,
    RegisterLayout,
    Reset,
    circuit_from,
    concat,
)
from .neqr import (
    NEIGHBOR_OFFSETS,
    CROSS,
    BinaryImage,
    GrayImage,
    OffsetWalk,
    image_set_parts,
    decode_bit,
    encode_image,
    prep_circuit,
)
from .sim import DenseState, exact_distribution, run_dense, run_ensemble
from .units import (
    QCL,
    QCS,
    build_comparator,
    build_copy,
    build_qcsl,
    build_reset_register,
    build_subtractor,
)

CHAIN = ("c_main",) + NEIGHBOR_REGISTERS


class HatMode(enum.Enum):
    BOTTOM_HAT = "bottomhat"
    TOP_HAT = "tophat"

    @classmethod
    def parse(cls, value) -> "HatMode":
        if isinstance(value, cls):
            return value
        key = str(value).lower().replace("-", "").replace("_", "")
        for m in cls:
            if m.value == key:
                return m
        raise ValueError(f"unknown hat mode {value!r}")


@dataclass(frozen=True)
class Threshold:
    value: int
    q: int

    def __post_init__(self):
        if not 0 <= self.value <= (1 << self.q) - 1:
            raise ValueError(f"threshold {self.value} outside [0, {(1 << self.q) - 1}]")


def result_register(mode: HatMode) -> str:
    """Register that ends up holding the hat transform."""
    return "c_main" if HatMode.parse(mode) is HatMode.BOTTOM_HAT else "c_copy"


def _extremum(layout: RegisterLayout, sorter: str) -> Circuit:
    # pairwise sorts push the extremum down the chain into d_right
    parts = [build_qcsl(layout, a, b, sorter) for a, b in zip(CHAIN, CHAIN[1:])]
    parts += [build_reset_register(layout, r) for r in CHAIN[:-1]]
    parts.append(build_copy(layout, "d_right", "c_main"))
    parts.append(build_reset_register(layout, "d_right"))
    return circuit_from(layout, parts)


def build_dilation(layout: RegisterLayout) -> Circuit:
    """``c_main <- max`` over the centre and the four captured neighbors."""
    return _extremum(layout, QCL)


def build_erosion(layout: RegisterLayout) -> Circuit:
    """``c_main <- min`` over the centre and the four captured neighbors."""
    return _extremum(layout, QCS)


def morphed_image_set_parts(layout: RegisterLayout, img, inner: str,
                            prefix: str = "image_set_2/") -> list:
    """Labelled stages of :func:`build_morphed_image_set`; ``img=None`` drops oracle calls."""
    if inner == "dilate":
        sorter = QCL
    elif inner == "erode":
        sorter = QCS
    else:
        raise ValueError(f"inner must be 'dilate' or 'erode', got {inner!r}")
    prep = {}
    if img is not None:
        prep = {reg: prep_circuit(img, layout, reg) for reg in NEIGHBOR_REGISTERS + ("thr",)}
    clear_thr = build_reset_register(layout, "thr")
    walk = OffsetWalk(layout, prefix)
    for reg in NEIGHBOR_REGISTERS:
        oy, ox = NEIGHBOR_OFFSETS[reg]
        walk.go(oy, ox)
        if prep:
            walk.emit(prep[reg], "oracle")
        for ey, ex in CROSS[1:]:
            walk.go(oy + ey, ox + ex)
            if prep:
                walk.emit(prep["thr"], "oracle")
            # QCL/QCS(thr, reg) leaves the running extremum in reg
            walk.emit(build_qcsl(layout, "thr", reg, sorter), "qcsl")
            walk.emit(clear_thr, "reset")
    return walk.finish_parts()


def build_morphed_image_set(layout: RegisterLayout, img: GrayImage, inner: str) -> Circuit:
    """Load the cross neighbors of ``dilate(img)`` or ``erode(img)`` into ``d_*``.

    The first-stage result lives only in ``c_main`` of each branch, so its
    value at a neighboring position is rebuilt from the preparation oracle:
    ``d(Y, X) = ext over e in cross of img(Y + o + e)`` with ``thr`` as the
    scratch register.  ``thr`` is cleared again before returning.
    """
    return concat(*(c for _, c in morphed_image_set_parts(layout, img, inner)))


def hat_parts(layout: RegisterLayout, img, mode) -> list:
    """Named stages of a hat transform, in execution order.

    ``img=None`` builds the image-independent skeleton (no oracle calls).
    """
    mode = HatMode.parse(mode)
    first, second = ("dilate", "erode") if mode is HatMode.BOTTOM_HAT else ("erode", "dilate")
    ops = {"dilate": build_dilation, "erode": build_erosion}
    parts = [("copy", build_copy(layout, "c_main", "c_copy"))]
    parts += image_set_parts(layout, img)
    parts.append((first, ops[first](layout)))
    parts += morphed_image_set_parts(layout, img, first)
    parts.append((second, ops[second](layout)))
    if mode is HatMode.BOTTOM_HAT:
        parts.append(("subtract", build_subtractor(layout, "c_main", "c_copy")))
    else:
        parts.append(("subtract", build_subtractor(layout, "c_copy", "c_main")))
    return parts


def build_hat(layout: RegisterLayout, img: GrayImage, mode) -> Circuit:
    """Bottom hat leaves ``closing - img`` in c_main; top hat leaves ``img - opening`` in c_copy."""
    return concat(*(c for _, c in hat_parts(layout, img, mode)))


def build_binarization(layout: RegisterLayout, threshold: int, result_reg: str) -> Circuit:
    """Set bit 0 of ``result_reg`` to ``[value >= threshold]``.

    The threshold is written into ``thr`` with NOT gates; higher bits of the
    result register are left as they are.
    """
    Threshold(threshold, layout.q)
    thr = layout["thr"]
    c0 = layout[result_reg][0]
    y = layout["y_cmp"][0]
    gates = [Not(thr[k]) for k in range(layout.q) if threshold >> k & 1]
    gates += build_comparator(layout, result_reg, "thr").gates
    # c0 <- not y
    gates += [Reset(c0), Not(c0), ControlledNot(y, c0), Reset(y)]
    return Circuit(layout, gates)


def pipeline_parts(layout: RegisterLayout, img, mode, threshold: int) -> list:
    mode = HatMode.parse(mode)
    parts = hat_parts(layout, img, mode)
    parts.append(("binarize", build_binarization(layout, threshold, result_register(mode))))
    return parts


def build_pipeline(layout: RegisterLayout, img: GrayImage, mode, threshold: int) -> Circuit:
    """Full segmentation circuit; expects the NEQR-encoded image as input state."""
    return concat(*(c for _, c in pipeline_parts(layout, img, mode, threshold)))


def measured_qubits(layout: RegisterLayout, mode) -> list:
    """Result bit, then Y most significant first, then X most significant first."""
    return (
        [layout[result_register(mode)][0]]
        + list(reversed(layout["pos_y"]))
        + list(reversed(layout["pos_x"]))
    )


@dataclass
class SegmentationRun:
    layout: RegisterLayout
    circuit: Circuit
    mode: HatMode
    threshold: int
    binary: BinaryImage
    distribution: dict
    measured: list
    backend: str


def segment(img: GrayImage, mode, threshold: int, backend: str = "ensemble") -> SegmentationRun:
    """Encode, run the pipeline on the chosen backend and read the binary image."""
    mode = HatMode.parse(mode)
    layout, ens = encode_image(img)
    circuit = build_pipeline(layout, img, mode, threshold)
    measured = measured_qubits(layout, mode)
    if backend == "ensemble":
        out = run_ensemble(circuit, ens)
        binary = decode_bit(layout, out, result_register(mode), 0)
        dist = exact_distribution(out, measured)
    elif backend == "dense":
        out = run_dense(circuit, DenseState.from_ensemble(ens))
        dist = exact_distribution(out, measured)
        binary = binary_from_distribution(layout, dist)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return SegmentationRun(layout, circuit, mode, threshold, binary, dist, measured, backend)


def binary_from_distribution(layout: RegisterLayout, dist: dict) -> BinaryImage:
    """Rebuild the binary image from ``[bit | Y | X]`` outcome labels."""
    n = layout.n
    side = 1 << n
    out = np.full((side, side), -1, dtype=np.int64)
    for label, p in dist.items():
        if p <= 0:
            continue
        bit = int(label[0])
        y = int(label[1:1 + n], 2)
        x = int(label[1 + n:1 + 2 * n], 2)
        if out[y, x] not in (-1, bit):
            raise ValueError(f"position ({y}, {x}) has both outcomes")
        out[y, x] = bit
    if (out < 0).any():
        raise ValueError("distribution does not cover every position")
    return BinaryImage(out)
