"""Real algebra of gray levels on the open interval (-1, 1).

Every operation is evaluated through the isomorphism ``phi = arctanh`` onto
the ordinary reals: map the operands with ``phi``, do plain arithmetic, map
back with ``tanh``.  The closed-form rational/power formulas are algebraically
identical but overflow for large scalars; they live in ``direct_*`` helpers
used only as test oracles.

All functions accept Python floats or numpy arrays.  Scalars in give floats
out.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

#: Distance kept between any stored gray level and the endpoints -1, 1.
EPS_MARGIN = 1e-9
_LIMIT = 1.0 - EPS_MARGIN

GrayLevel = float


class DomainError(ValueError):
    """Operation undefined for the given gray level."""


class PixelError(ValueError):
    """A pointwise operation failed on one pixel of an image."""

    def __init__(self, row, col, cause):
        super().__init__(f"pixel (row={row}, col={col}): {cause}")
        self.row = row
        self.col = col
        self.cause = cause


def _result(x):
    if np.ndim(x) == 0:
        return float(x)
    return x


def clamp_gray(v):
    """Clamp values into ``[-1 + EPS_MARGIN, 1 - EPS_MARGIN]``.

    NaN or infinite input is rejected rather than clamped.
    """
    arr = np.asarray(v, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise DomainError("gray levels must be finite")
    return _result(np.clip(arr, -_LIMIT, _LIMIT))


def phi(v):
    """The isomorphism onto the reals: ``arctanh(v) = 0.5 * ln((1+v)/(1-v))``."""
    return _result(np.arctanh(clamp_gray(v)))


def phi_inv(x):
    """Inverse isomorphism, ``tanh(x)`` saturated at the domain margin."""
    arr = np.asarray(x, dtype=np.float64)
    if np.any(np.isnan(arr)):
        raise DomainError("cannot map NaN into the gray-level space")
    return _result(np.clip(np.tanh(arr), -_LIMIT, _LIMIT))


def log_add(v, w):
    return phi_inv(phi(v) + phi(w))


def log_sub(v, w):
    return phi_inv(phi(v) - phi(w))


def log_neg(v):
    # the opposite element is the ordinary sign flip
    return _result(-np.asarray(clamp_gray(v)))


def log_scalar_mul(lam, v):
    return phi_inv(np.asarray(lam, dtype=np.float64) * phi(v))


def log_product(v, w):
    return phi_inv(phi(v) * phi(w))


def log_power(v, n: int):
    """``n``-fold logarithmic product of ``v`` with itself."""
    if int(n) != n or n < 1:
        raise ValueError(f"power must be a positive integer, got {n!r}")
    return phi_inv(phi(v) ** int(n))


def product_neutral() -> float:
    """Neutral element of the product, ``(e - 1/e)/(e + 1/e) = tanh(1)``."""
    return math.tanh(1.0)


def product_inverse(v):
    x = np.asarray(phi(v))
    if np.any(x == 0.0):
        raise DomainError("0 has no inverse for the logarithmic product")
    return phi_inv(1.0 / x)


# -- closed forms, kept as independent oracles --------------------------------

def direct_add(v, w):
    v, w = np.asarray(v, dtype=np.float64), np.asarray(w, dtype=np.float64)
    return _result((v + w) / (1.0 + v * w))


def direct_sub(v, w):
    v, w = np.asarray(v, dtype=np.float64), np.asarray(w, dtype=np.float64)
    return _result((v - w) / (1.0 - v * w))


def direct_scalar_mul(lam, v):
    v = np.asarray(v, dtype=np.float64)
    a = (1.0 + v) ** lam
    b = (1.0 - v) ** lam
    return _result((a - b) / (a + b))


def direct_product(v, w):
    v, w = np.asarray(v, dtype=np.float64), np.asarray(w, dtype=np.float64)
    return _result(np.tanh(0.25 * np.log((1 + v) / (1 - v)) * np.log((1 + w) / (1 - w))))


# -- images -------------------------------------------------------------------

@dataclass(frozen=True)
class GrayImage:
    """Gray-level image: a ``(height, width)`` float array with values in E.

    Pixels are clamped to the domain margin on construction.
    """

    pixels: np.ndarray

    def __post_init__(self):
        arr = np.array(self.pixels, dtype=np.float64)
        if arr.ndim != 2 or arr.size == 0:
            raise ValueError(f"expected a non-empty 2D pixel grid, got shape {arr.shape}")
        arr = np.asarray(clamp_gray(arr))
        arr.setflags(write=False)
        object.__setattr__(self, "pixels", arr)

    @classmethod
    def from_rows(cls, width: int, height: int, values) -> "GrayImage":
        """Build from a row-major flat sequence of ``width * height`` values."""
        flat = np.asarray(values, dtype=np.float64).ravel()
        if width <= 0 or height <= 0 or flat.size != width * height:
            raise ValueError(
                f"{flat.size} pixels do not fill a {width}x{height} image")
        return cls(flat.reshape(height, width))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def size(self) -> int:
        return self.pixels.size

    def values(self) -> np.ndarray:
        """Row-major flat view of the pixels."""
        return self.pixels.ravel()


def map_image(f: GrayImage, op: Callable) -> GrayImage:
    """Apply a pointwise gray-level operation to every pixel of ``f``.

    ``op`` is first tried on the whole array.  If that raises, pixels are
    visited one at a time so the failure can be reported with its coordinates.
    """
    try:
        out = np.asarray(op(f.pixels), dtype=np.float64)
        if out.shape == f.pixels.shape:
            return GrayImage(out)
    except Exception:
        pass
    out = np.empty_like(f.pixels)
    for (r, c), v in np.ndenumerate(f.pixels):
        try:
            out[r, c] = op(float(v))
        except Exception as exc:
            raise PixelError(r, c, exc) from exc
    return GrayImage(out)


def image_add(f: GrayImage, g: GrayImage) -> GrayImage:
    _check_same_shape(f, g)
    return GrayImage(log_add(f.pixels, g.pixels))


def image_scalar_mul(lam: float, f: GrayImage) -> GrayImage:
    return GrayImage(log_scalar_mul(lam, f.pixels))


def image_product(f: GrayImage, g: GrayImage) -> GrayImage:
    _check_same_shape(f, g)
    return GrayImage(log_product(f.pixels, g.pixels))


def _check_same_shape(f, g):
    if f.pixels.shape != g.pixels.shape:
        raise ValueError(f"image shapes differ: {f.pixels.shape} vs {g.pixels.shape}")
