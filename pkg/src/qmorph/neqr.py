"""NEQR encoding/decoding and neighborhood capture.

A ``2^n x 2^n`` image with ``q`` gray bits becomes the uniform superposition
over ``|C_YX>|Y>|X>``; here that is one basis string per pixel.

Neighbor values cannot be moved between branches by any gate in our
alphabet (each gate acts on one basis string at a time), so the image set is
built the way the image itself is prepared: translate the position register,
run the preparation oracle into the neighbor register, translate back.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .core import (
    NEIGHBOR_REGISTERS,
    Circuit,
    MultiControlledNot,
    RegisterLayout,
)
from .sim import BasisEnsemble
from .units import build_shift_by

# register -> (dy, dx) such that register(Y, X) = src(Y + dy, X + dx)
NEIGHBOR_OFFSETS = {
    "d_up": (1, 0),
    "d_down": (-1, 0),
    "d_left": (0, 1),
    "d_right": (0, -1),
}
CROSS = ((0, 0), (1, 0), (-1, 0), (0, 1), (0, -1))


class AmbiguousRegister(ValueError):
    pass


class DirtyAncilla(RuntimeError):
    pass


def _is_pow2(k: int) -> bool:
    return k >= 2 and k & (k - 1) == 0


@dataclass(frozen=True)
class GrayImage:
    pixels: np.ndarray
    q: int

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 2 or px.shape[0] != px.shape[1] or not _is_pow2(px.shape[0]):
            raise ValueError(f"image must be 2^n x 2^n with n >= 1, got shape {px.shape}")
        if self.q < 1:
            raise ValueError("q must be >= 1")
        if not np.issubdtype(px.dtype, np.integer):
            if not np.all(np.equal(np.mod(px, 1), 0)):
                raise ValueError("pixel values must be integers")
        px = px.astype(np.int64)
        if px.min() < 0 or px.max() > (1 << self.q) - 1:
            raise ValueError(f"pixel values must lie in [0, {(1 << self.q) - 1}]")
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)

    @property
    def side(self) -> int:
        return self.pixels.shape[0]

    @property
    def n(self) -> int:
        return self.side.bit_length() - 1

    @property
    def maxval(self) -> int:
        return (1 << self.q) - 1

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return self.q == other.q and np.array_equal(self.pixels, other.pixels)

    def __hash__(self):
        return hash((self.q, self.pixels.tobytes()))

    def __getitem__(self, yx):
        return int(self.pixels[yx])


@dataclass(frozen=True, eq=False)
class BinaryImage(GrayImage):
    q: int = 1

    def __post_init__(self):
        if self.q != 1:
            raise ValueError("binary images have q = 1")
        super().__post_init__()


def random_image(rng: np.random.Generator, n: int, q: int) -> GrayImage:
    side = 1 << n
    return GrayImage(rng.integers(0, 1 << q, size=(side, side)), q)


def layout_for(img: GrayImage) -> RegisterLayout:
    return RegisterLayout(img.n, img.q)


def blank_ensemble(layout: RegisterLayout) -> BasisEnsemble:
    """Every position enumerated, all gray and work registers zero."""
    side = 1 << layout.n
    states = [layout.pack(pos_y=y, pos_x=x) for y in range(side) for x in range(side)]
    return BasisEnsemble(layout.total_qubits, tuple(states))


def encode_image(img: GrayImage, layout: RegisterLayout = None):
    """Return ``(layout, ensemble)`` holding ``img`` in ``c_main``."""
    layout = layout or layout_for(img)
    if (layout.n, layout.q) != (img.n, img.q):
        raise ValueError(f"layout (n={layout.n}, q={layout.q}) does not fit image (n={img.n}, q={img.q})")
    states = [
        layout.pack(pos_y=y, pos_x=x, c_main=img[y, x])
        for y in range(img.side)
        for x in range(img.side)
    ]
    return layout, BasisEnsemble(layout.total_qubits, tuple(states))


def decode_register(layout: RegisterLayout, state: BasisEnsemble, reg: str) -> GrayImage:
    """Read ``reg`` at every position; the value must be a function of position."""
    side = 1 << layout.n
    width = len(layout[reg])
    out = np.full((side, side), -1, dtype=np.int64)
    for s in state.states:
        y, x = layout.read(s, "pos_y"), layout.read(s, "pos_x")
        v = layout.read(s, reg)
        if out[y, x] not in (-1, v):
            raise AmbiguousRegister(f"{reg} takes values {out[y, x]} and {v} at position ({y}, {x})")
        out[y, x] = v
    if (out < 0).any():
        missing = tuple(int(i) for i in np.argwhere(out < 0)[0])
        raise AmbiguousRegister(f"no branch at position {missing}")
    return GrayImage(out, width)


def decode_bit(layout: RegisterLayout, state: BasisEnsemble, reg: str, bit: int = 0) -> BinaryImage:
    qb = layout[reg][bit]
    side = 1 << layout.n
    out = np.full((side, side), -1, dtype=np.int64)
    for s in state.states:
        y, x = layout.read(s, "pos_y"), layout.read(s, "pos_x")
        v = s >> qb & 1
        if out[y, x] not in (-1, v):
            raise AmbiguousRegister(f"{reg}[{bit}] is not a function of position at ({y}, {x})")
        out[y, x] = v
    if (out < 0).any():
        raise AmbiguousRegister("some position has no branch")
    return BinaryImage(out)


def prep_circuit(img: GrayImage, layout: RegisterLayout = None, target: str = "c_main") -> Circuit:
    """Preparation oracle: XOR ``img[Y, X]`` into ``target`` at position ``(Y, X)``.

    One multi-controlled NOT per set bit, controlled on the full position pattern.
    """
    layout = layout or layout_for(img)
    ys, xs = layout["pos_y"], layout["pos_x"]
    tgt = layout[target]
    if len(tgt) != img.q:
        raise ValueError(f"register {target!r} has {len(tgt)} bits, image has q={img.q}")
    gates = []
    for y in range(img.side):
        for x in range(img.side):
            value = img[y, x]
            if not value:
                continue
            controls = [(qb, bool(y >> k & 1)) for k, qb in enumerate(ys)]
            controls += [(qb, bool(x >> k & 1)) for k, qb in enumerate(xs)]
            for k, qb in enumerate(tgt):
                if value >> k & 1:
                    gates.append(MultiControlledNot(controls, qb))
    return Circuit(layout, gates)


class OffsetWalk:
    """Emit position translations lazily while visiting a sequence of offsets.

    Offsets are net translations of the position register; ``finish`` returns
    to the origin so the overall displacement is zero.  Gates are kept in
    labelled runs so cost reports can tell shifts from oracle calls.
    """

    def __init__(self, layout: RegisterLayout, prefix: str = ""):
        self.layout = layout
        self.prefix = prefix
        self.side = 1 << layout.n
        self.offset = (0, 0)
        self.runs: list = []

    def _reduce(self, d: int) -> int:
        d %= self.side
        return d - self.side if d > self.side // 2 else d

    def _add(self, label: str, gates):
        label = self.prefix + label
        if self.runs and self.runs[-1][0] == label:
            self.runs[-1][1].extend(gates)
        else:
            self.runs.append((label, list(gates)))

    def go(self, dy: int, dx: int):
        ddy = self._reduce(dy - self.offset[0])
        ddx = self._reduce(dx - self.offset[1])
        if ddy or ddx:
            self._add("shift", build_shift_by(self.layout, ddy, ddx).gates)
        self.offset = (dy, dx)

    def emit(self, circuit: Circuit, label: str):
        if circuit.gates:
            self._add(label, circuit.gates)

    def finish_parts(self) -> list:
        self.go(0, 0)
        return [(label, Circuit(self.layout, gates)) for label, gates in self.runs]

    def finish(self) -> Circuit:
        self.go(0, 0)
        return Circuit(self.layout, [g for _, gates in self.runs for g in gates])


def build_load_shifted(layout: RegisterLayout, img: GrayImage, target: str, dy: int, dx: int) -> Circuit:
    """``target(Y, X) ^= img(Y + dy, X + dx)`` (indices mod 2^n)."""
    walk = OffsetWalk(layout)
    walk.go(dy, dx)
    walk.emit(prep_circuit(img, layout, target), "oracle")
    return walk.finish()


def image_set_parts(layout: RegisterLayout, img, targets: Sequence[str] = NEIGHBOR_REGISTERS,
                    prefix: str = "image_set/") -> list:
    """Labelled stages of :func:`build_image_set`.

    With ``img=None`` the oracle calls are left out, which gives the
    image-independent skeleton used for cost scaling.
    """
    walk = OffsetWalk(layout, prefix)
    for reg in targets:
        walk.go(*NEIGHBOR_OFFSETS[reg])
        if img is not None:
            walk.emit(prep_circuit(img, layout, reg), "oracle")
    return walk.finish_parts()


def build_image_set(layout: RegisterLayout, img: GrayImage,
                    targets: Sequence[str] = NEIGHBOR_REGISTERS) -> Circuit:
    """Load the four cross neighbors of ``img`` into the ``d_*`` registers.

    Afterwards ``d_up = img(Y+1, X)``, ``d_down = img(Y-1, X)``,
    ``d_left = img(Y, X+1)``, ``d_right = img(Y, X-1)``.
    """
    parts = image_set_parts(layout, img, targets)
    return Circuit(layout, [g for _, c in parts for g in c.gates])


def require_zero(layout: RegisterLayout, state: BasisEnsemble, regs: Iterable[str] = NEIGHBOR_REGISTERS):
    """Raise DirtyAncilla unless every branch has ``regs`` cleared."""
    for reg in regs:
        for s in state.states:
            if layout.read(s, reg):
                raise DirtyAncilla(f"register {reg!r} is not zero")
