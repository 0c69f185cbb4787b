"""PGM (netpbm P2/P5) codec and the map between integer levels and E = (-1, 1)."""
from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .gray_algebra import GrayImage

#: Margin between the extreme integer levels and the ends of E.
EPS_MAP = 1e-6


class PGMError(ValueError):
    pass


class MalformedHeader(PGMError):
    pass


class UnsupportedMaxval(PGMError):
    pass


class TruncatedData(PGMError):
    pass


class InvalidPixelValue(PGMError):
    pass


@dataclass(frozen=True)
class PixelImage:
    """Integer image, ``pixels`` shaped ``(height, width)`` with values in ``[0, levels-1]``."""

    pixels: np.ndarray
    levels: int = 256

    def __post_init__(self):
        arr = np.array(self.pixels, dtype=np.int64)
        if arr.ndim != 2 or arr.size == 0:
            raise ValueError(f"expected a non-empty 2D pixel grid, got shape {arr.shape}")
        if self.levels < 2:
            raise ValueError("need at least 2 levels")
        if arr.min() < 0 or arr.max() > self.levels - 1:
            raise ValueError(f"pixel values outside [0, {self.levels - 1}]")
        arr.setflags(write=False)
        object.__setattr__(self, "pixels", arr)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def maxval(self) -> int:
        return self.levels - 1

    def __eq__(self, other):
        if not isinstance(other, PixelImage):
            return NotImplemented
        return self.levels == other.levels and np.array_equal(self.pixels, other.pixels)

    __hash__ = None


_TOKEN = re.compile(rb"#[^\r\n]*|\S+")


def _header(data: bytes):
    """Magic plus three header integers, and the offset just past maxval."""
    tokens = []
    pos = 0
    for match in _TOKEN.finditer(data):
        tok = match.group()
        if tok.startswith(b"#"):
            continue
        tokens.append(tok)
        pos = match.end()
        if len(tokens) == 4:
            break
    if not tokens or tokens[0] not in (b"P2", b"P5"):
        raise MalformedHeader("not a PGM file (magic must be P2 or P5)")
    if len(tokens) < 4:
        raise MalformedHeader("header ends before width, height and maxval")
    try:
        width, height, maxval = (int(t) for t in tokens[1:4])
    except ValueError:
        raise MalformedHeader(f"non-numeric header field in {tokens[1:4]!r}") from None
    if width <= 0 or height <= 0:
        raise MalformedHeader(f"bad dimensions {width}x{height}")
    if maxval < 1:
        raise MalformedHeader(f"bad maxval {maxval}")
    if maxval > 255:
        raise UnsupportedMaxval(f"maxval {maxval} > 255 is not supported")
    return tokens[0], width, height, maxval, pos


def read_pgm(data: bytes) -> PixelImage:
    magic, width, height, maxval, pos = _header(data)
    n = width * height
    if magic == b"P5":
        # exactly one whitespace byte separates maxval from the raster
        if pos >= len(data) or not data[pos:pos + 1].isspace():
            raise TruncatedData("missing raster after header")
        raster = data[pos + 1:pos + 1 + n]
        if len(raster) < n:
            raise TruncatedData(f"expected {n} pixel bytes, found {len(raster)}")
        pixels = np.frombuffer(raster, dtype=np.uint8).astype(np.int64)
    else:
        body = re.sub(rb"#[^\r\n]*", b" ", data[pos:])
        words = body.split()
        if len(words) < n:
            raise TruncatedData(f"expected {n} pixel values, found {len(words)}")
        try:
            pixels = np.array([int(w) for w in words[:n]], dtype=np.int64)
        except ValueError:
            raise InvalidPixelValue("non-numeric pixel value") from None
    if pixels.max() > maxval:
        raise InvalidPixelValue(f"pixel value {pixels.max()} exceeds maxval {maxval}")
    return PixelImage(pixels.reshape(height, width), levels=maxval + 1)


def write_pgm(img: PixelImage, fmt: str = "P5") -> bytes:
    if img.levels > 256:
        raise UnsupportedMaxval("only maxval <= 255 can be written")
    header = f"{fmt}\n{img.width} {img.height}\n{img.maxval}\n".encode("ascii")
    if fmt == "P5":
        return header + img.pixels.astype(np.uint8).tobytes()
    if fmt != "P2":
        raise ValueError(f"unknown PGM format {fmt!r}")
    lines = []
    for row in img.pixels:
        line = ""
        for value in row:
            word = str(int(value))
            # plain netpbm lines stay within 70 characters
            if line and len(line) + 1 + len(word) > 70:
                lines.append(line)
                line = word
            else:
                line = f"{line} {word}" if line else word
        lines.append(line)
    return header + ("\n".join(lines) + "\n").encode("ascii")


def load_pgm(path) -> PixelImage:
    with open(path, "rb") as fh:
        return read_pgm(fh.read())


def save_pgm(path, img: PixelImage, fmt: str = "P5"):
    with open(path, "wb") as fh:
        fh.write(write_pgm(img, fmt))


def round_half_away(x):
    x = np.asarray(x, dtype=np.float64)
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


def to_gray_domain(img: PixelImage) -> GrayImage:
    scale = img.levels - 1
    return GrayImage((1.0 - EPS_MAP) * (2.0 * img.pixels / scale - 1.0))


def gray_to_levels(v, levels: int = 256):
    """Unrounded integer-level coordinate of gray values (for reports)."""
    return (np.asarray(v, dtype=np.float64) / (1.0 - EPS_MAP) + 1.0) * (levels - 1) / 2.0


def from_gray_domain(f: GrayImage, levels: int = 256) -> PixelImage:
    g = round_half_away(gray_to_levels(f.pixels, levels))
    return PixelImage(np.clip(g, 0, levels - 1).astype(np.int64), levels=levels)
