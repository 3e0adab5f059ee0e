"""Camera frames, red-channel isolation and binary thresholding.

Images are stored as read-only numpy arrays indexed ``[row, column]``:
``Frame`` holds an ``(height, width, 3)`` uint8 RGB array, ``GrayImage`` an
``(height, width)`` uint8 array and ``BinaryImage`` an ``(height, width)``
bool mask where ``True`` stands for the value 255.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import AlphaOutOfRange, FrameDecodeError

DEFAULT_ALPHA = 128


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


def _as_uint8(values, shape_msg: str, ndim: int) -> np.ndarray:
    arr = np.asarray(values)
    if arr.ndim != ndim:
        raise ValueError(shape_msg)
    if arr.dtype == np.uint8:
        return _frozen(arr)
    if arr.dtype.kind not in "iub":
        raise ValueError(f"pixel values must be integers, got dtype {arr.dtype}")
    if arr.size and (arr.min() < 0 or arr.max() > 255):
        raise ValueError("pixel values must lie in [0, 255]")
    return _frozen(arr.astype(np.uint8))


class _Raster:
    __slots__ = ()

    @property
    def height(self) -> int:
        return self._data().shape[0]

    @property
    def width(self) -> int:
        return self._data().shape[1]

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return np.array_equal(self._data(), other._data())

    __hash__ = None


@dataclass(frozen=True, eq=False)
class Frame(_Raster):
    """An RGB camera capture, ``pixels[i, j] == (R, G, B)``."""

    pixels: np.ndarray

    def __post_init__(self):
        arr = _as_uint8(self.pixels, "frame pixels must have shape (height, width, 3)", 3)
        if arr.shape[2] != 3:
            raise ValueError("frame pixels must have shape (height, width, 3)")
        object.__setattr__(self, "pixels", arr)

    def _data(self):
        return self.pixels

    @classmethod
    def from_sequence(cls, width: int, height: int, pixels) -> Frame:
        """Build a frame from a flat row-major sequence of ``(R, G, B)`` triples."""
        seq = list(pixels)
        if len(seq) != width * height:
            raise ValueError(
                f"expected {width * height} pixels for a {width}x{height} frame, got {len(seq)}"
            )
        arr = np.asarray(seq, dtype=np.int64).reshape(height, width, 3)
        return cls(arr)

    @classmethod
    def blank(cls, width: int, height: int) -> Frame:
        return cls(np.zeros((height, width, 3), dtype=np.uint8))


@dataclass(frozen=True, eq=False)
class GrayImage(_Raster):
    values: np.ndarray

    def __post_init__(self):
        arr = _as_uint8(self.values, "gray values must have shape (height, width)", 2)
        object.__setattr__(self, "values", arr)

    def _data(self):
        return self.values


@dataclass(frozen=True, eq=False)
class BinaryImage(_Raster):
    mask: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.mask)
        if arr.ndim != 2:
            raise ValueError("mask must have shape (height, width)")
        object.__setattr__(self, "mask", _frozen(arr.astype(bool)))

    def _data(self):
        return self.mask

    def to_gray(self) -> GrayImage:
        """The {0, 255}-valued image this mask stands for."""
        return GrayImage(np.where(self.mask, 255, 0).astype(np.uint8))


def red_channel(frame: Frame) -> GrayImage:
    return GrayImage(frame.pixels[:, :, 0])


def _check_alpha(alpha) -> int:
    if isinstance(alpha, bool) or int(alpha) != alpha:
        raise AlphaOutOfRange(f"alpha must be an integer, got {alpha!r}")
    alpha = int(alpha)
    if not 0 < alpha < 255:
        raise AlphaOutOfRange(f"alpha must lie strictly between 0 and 255, got {alpha}")
    return alpha


def threshold(gray: GrayImage, alpha: int) -> BinaryImage:
    """Binarize ``gray``: a pixel is lit (255) when ``value >= alpha``.

    Raises:
        AlphaOutOfRange: unless ``0 < alpha < 255``.
    """
    alpha = _check_alpha(alpha)
    return BinaryImage(gray.values >= alpha)


def red_threshold(frame: Frame, alpha: int) -> BinaryImage:
    """Single-pass equivalent of ``threshold(red_channel(frame), alpha)``."""
    alpha = _check_alpha(alpha)
    return BinaryImage(frame.pixels[:, :, 0] >= alpha)


def load_png(path) -> Frame:
    """Decode an 8-bit RGB or RGBA PNG file into a frame; alpha is dropped."""
    from PIL import Image, UnidentifiedImageError

    path = Path(path)
    try:
        with Image.open(path) as img:
            if img.format != "PNG":
                raise FrameDecodeError(f"{path}: not a PNG file (got {img.format})")
            if img.mode not in ("RGB", "RGBA"):
                raise FrameDecodeError(f"{path}: unsupported PNG mode {img.mode}, need RGB or RGBA")
            arr = np.asarray(img.convert("RGB"))
    except FrameDecodeError:
        raise
    except (OSError, UnidentifiedImageError, SyntaxError, ValueError) as exc:
        raise FrameDecodeError(f"{path}: cannot decode frame ({exc})") from exc
    return Frame(arr)


def save_png(frame: Frame, path) -> None:
    from PIL import Image

    Image.fromarray(np.ascontiguousarray(frame.pixels)).save(Path(path), format="PNG")
