"""Minimal Netpbm support: PGM (P2/P5) in, PGM (P2) and PBM (P1) out."""
from __future__ import annotations

import os

import numpy as np

from .neqr import BinaryImage, GrayImage


class PGMError(ValueError):
    pass


class MalformedPGM(PGMError):
    pass


class NonPowerOfTwoSide(PGMError):
    pass


class UnsupportedMaxval(PGMError):
    pass


def _tokens(data: bytes, count: int, pos: int = 0):
    """Read ``count`` whitespace-separated header tokens, skipping comments."""
    out = []
    n = len(data)
    while len(out) < count:
        while pos < n and data[pos:pos + 1].isspace():
            pos += 1
        if pos < n and data[pos:pos + 1] == b"#":
            while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        if pos >= n:
            raise MalformedPGM("unexpected end of header")
        start = pos
        while pos < n and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b"#":
            pos += 1
        out.append(data[start:pos])
    return out, pos


def parse_pgm(data: bytes) -> GrayImage:
    (magic,), pos = _tokens(data, 1)
    if magic not in (b"P2", b"P5"):
        raise MalformedPGM(f"expected P2 or P5 magic, got {magic[:8]!r}")
    try:
        (w, h, mv), pos = _tokens(data, 3, pos)
        width, height, maxval = int(w), int(h), int(mv)
    except ValueError as exc:
        raise MalformedPGM(f"bad header: {exc}") from None
    if width <= 0 or height <= 0:
        raise MalformedPGM("image dimensions must be positive")
    if width != height or width < 2 or width & (width - 1):
        raise NonPowerOfTwoSide(f"need a square 2^n side with n >= 1, got {width}x{height}")
    q = (maxval + 1).bit_length() - 1
    if maxval < 1 or (1 << q) - 1 != maxval or q > 8:
        raise UnsupportedMaxval(f"maxval must be 2^q - 1 with 1 <= q <= 8, got {maxval}")
    count = width * height
    if magic == b"P2":
        try:
            values, _ = _tokens(data, count, pos)
            px = np.array([int(v) for v in values], dtype=np.int64)
        except ValueError as exc:
            raise MalformedPGM(f"bad pixel data: {exc}") from None
    else:
        body = data[pos + 1:pos + 1 + count]
        if len(body) != count:
            raise MalformedPGM(f"expected {count} raster bytes, got {len(body)}")
        px = np.frombuffer(body, dtype=np.uint8).astype(np.int64)
    if px.max() > maxval:
        raise MalformedPGM(f"pixel value {px.max()} exceeds maxval {maxval}")
    return GrayImage(px.reshape(height, width), q)


def read_pgm(path) -> GrayImage:
    with open(path, "rb") as fh:
        return parse_pgm(fh.read())


def format_pgm(img: GrayImage) -> str:
    lines = ["P2", f"{img.side} {img.side}", str(img.maxval)]
    lines += [" ".join(str(int(v)) for v in row) for row in img.pixels]
    return "\n".join(lines) + "\n"


def format_pbm(img: BinaryImage) -> str:
    lines = ["P1", f"{img.side} {img.side}"]
    lines += [" ".join(str(int(v)) for v in row) for row in img.pixels]
    return "\n".join(lines) + "\n"


def _write(path, text: str):
    with open(os.fspath(path), "w", newline="\n") as fh:
        fh.write(text)


def write_pgm(img: GrayImage, path):
    _write(path, format_pgm(img))


def write_pbm(img: BinaryImage, path):
    _write(path, format_pbm(img))
