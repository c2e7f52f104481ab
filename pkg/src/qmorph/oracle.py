"""Classical flat-cross grayscale morphology on a torus.

Written as plain per-pixel loops on purpose: this is the reference the
circuits are checked against, so it shares no code with them.
"""
from __future__ import annotations

import numpy as np

from .morph import HatMode
from .neqr import BinaryImage, GrayImage

CROSS = ((0, 0), (1, 0), (-1, 0), (0, 1), (0, -1))


def o_dilate(img: GrayImage) -> GrayImage:
    side = img.side
    out = np.zeros((side, side), dtype=np.int64)
    for y in range(side):
        for x in range(side):
            # F(x - s, y - t); the cross is symmetric
            out[y, x] = max(img[(y - s) % side, (x - t) % side] for s, t in CROSS)
    return GrayImage(out, img.q)


def o_erode(img: GrayImage) -> GrayImage:
    side = img.side
    out = np.zeros((side, side), dtype=np.int64)
    for y in range(side):
        for x in range(side):
            out[y, x] = min(img[(y + s) % side, (x + t) % side] for s, t in CROSS)
    return GrayImage(out, img.q)


def o_close(img: GrayImage) -> GrayImage:
    return o_erode(o_dilate(img))


def o_open(img: GrayImage) -> GrayImage:
    return o_dilate(o_erode(img))


def o_hat(img: GrayImage, mode) -> GrayImage:
    mode = HatMode.parse(mode)
    if mode is HatMode.BOTTOM_HAT:
        diff = o_close(img).pixels - img.pixels
    else:
        diff = img.pixels - o_open(img).pixels
    return GrayImage(diff, img.q)


def o_segment(img: GrayImage, mode, t: int) -> BinaryImage:
    hat = o_hat(img, mode)
    return BinaryImage((hat.pixels >= t).astype(np.int64))


def o_shift(img: GrayImage, dy: int, dx: int) -> GrayImage:
    """``out(Y, X) = img(Y + dy, X + dx)`` on the torus."""
    side = img.side
    out = np.zeros((side, side), dtype=np.int64)
    for y in range(side):
        for x in range(side):
            out[y, x] = img[(y + dy) % side, (x + dx) % side]
    return GrayImage(out, img.q)
