"""Scanner calibration, laser angle, the angle transform and depth projection.

Conventions:

* ``s`` and ``D`` are physical lengths (e.g. mm); ``r`` and ``x0`` are pixel
  quantities; ``pixel_scale`` converts pixels to the physical unit. The
  horizontal component of the laser vector is therefore
  ``k = s - pixel_scale * (r / 2 + x0)``; with ``pixel_scale == 1`` this is
  the plain ``s - r/2 - x0``.
* Angles cross the API in degrees. Trigonometry is evaluated in degrees
  (``scipy.special.cosdg``/``sindg``) so that multiples of 90 give exact
  zeros and ones.
* ``rotate`` maps ``(x, y) -> (x cos t, y sin t)``. This is *not* an
  orthogonal rotation; it is the transform the scanning model prescribes
  and is applied as written.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import cosdg, sindg

from .errors import EmptyScan, InvalidCalibration, ParseError
from .extraction import Curve2D
from .imaging import _frozen

CALIBRATION_KEYS = ("s", "D", "r", "x0", "pixel_scale")


@dataclass(frozen=True)
class Calibration:
    """Static scanner geometry.

    Attributes:
        s: laser-to-camera baseline, physical units, > 0.
        D: camera-to-reference-surface distance, physical units, > 0.
        r: camera Y range in pixels.
        x0: minimum X coordinate in pixels; the simulator also uses it as
            the image column of the laser line on the bare reference surface.
        pixel_scale: physical units per pixel, > 0.
    """

    s: float
    D: float
    r: float
    x0: float
    pixel_scale: float = 1.0

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        for name in CALIBRATION_KEYS:
            value = getattr(self, name)
            if not math.isfinite(value):
                raise InvalidCalibration(f"{name} must be finite, got {value!r}")
        if self.s <= 0:
            raise InvalidCalibration(f"s must be > 0, got {self.s}")
        if self.D <= 0:
            raise InvalidCalibration(f"D must be > 0, got {self.D}")
        if self.pixel_scale <= 0:
            raise InvalidCalibration(f"pixel_scale must be > 0, got {self.pixel_scale}")

    @property
    def k(self) -> float:
        """Horizontal component of the laser vector, physical units."""
        return self.s - self.pixel_scale * (self.r / 2 + self.x0)


@dataclass(frozen=True)
class Angle:
    """Laser angle in degrees, strictly inside (-90, 90)."""

    theta: float

    def __post_init__(self):
        if not -90.0 < self.theta < 90.0:
            raise ValueError(f"angle must lie in (-90, 90) degrees, got {self.theta}")

    @property
    def radians(self) -> float:
        return math.radians(self.theta)


def laser_angle(calib: Calibration) -> Angle:
    """Angle between the laser vector ``(k, D)`` and the camera normal.

    ``theta = 90 - arccos(k / sqrt(k**2 + D**2))``. The complement of the
    arccosine is evaluated as ``atan2(k, D)``, the same quantity without the
    cancellation ``90 - arccos(u)`` suffers for small ``|k|``; the sign of
    ``theta`` therefore always follows the sign of ``k``.

    Raises:
        InvalidCalibration: if ``s``, ``D`` or ``pixel_scale`` is not positive.
    """
    calib.validate()
    return Angle(math.degrees(math.atan2(calib.k, calib.D)))


def _degrees(theta) -> float:
    return float(theta.theta if isinstance(theta, Angle) else theta)


@dataclass(frozen=True, eq=False)
class RotatedCurve:
    """Transformed curve samples, still keyed by their source image row."""

    rows: np.ndarray
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=np.int64).ravel()
        x = np.asarray(self.x, dtype=np.float64).ravel()
        y = np.asarray(self.y, dtype=np.float64).ravel()
        if not rows.shape == x.shape == y.shape:
            raise ValueError("rows, x and y must have the same length")
        object.__setattr__(self, "rows", _frozen(rows))
        object.__setattr__(self, "x", _frozen(x))
        object.__setattr__(self, "y", _frozen(y))

    def __len__(self):
        return len(self.rows)

    def pairs(self) -> np.ndarray:
        return np.column_stack((self.x, self.y))


def rotate(curve: Curve2D, theta) -> RotatedCurve:
    """Map every sample ``(xbar, row)`` to ``(xbar * cos t, row * sin t)``.

    ``theta`` is an ``Angle`` or plain degrees.
    """
    if len(curve) == 0:
        raise EmptyScan("cannot rotate an empty curve")
    deg = _degrees(theta)
    # + 0.0 turns the -0.0 that cosdg(90) returns into 0.0
    c, s = float(cosdg(deg)) + 0.0, float(sindg(deg)) + 0.0
    return RotatedCurve(curve.rows, curve.xbar * c + 0.0, curve.rows * s + 0.0)


def project_t2(rotated: RotatedCurve, D: float, pixel_scale: float = 1.0) -> np.ndarray:
    """Lift a rotated curve to 3D points ``(x0', y, D - dx)``.

    ``x0'`` is the smallest transformed x in the curve and
    ``dx = pixel_scale * (x - x0')`` is each sample's displacement from it,
    converted to physical units. Returns an ``(N, 3)`` float array in row
    order; every ``z`` is at most ``D``.
    """
    if len(rotated) == 0:
        raise EmptyScan("cannot project an empty curve")
    x0p = rotated.x.min()
    out = np.empty((len(rotated), 3))
    out[:, 0] = x0p
    out[:, 1] = rotated.y
    out[:, 2] = D - pixel_scale * (rotated.x - x0p)
    return out


def parse_calibration(text: str) -> dict[str, float]:
    """Read ``key = value`` lines (``#`` starts a comment) into a dict.

    Only the keys present are returned, so callers can merge overrides
    before building a ``Calibration``.
    """
    values: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (part.strip() for part in line.partition("="))
        if not sep:
            raise ParseError("expected 'key = value'", lineno)
        if key not in CALIBRATION_KEYS:
            raise ParseError(f"unknown calibration key {key!r}", lineno)
        try:
            values[key] = float(value)
        except ValueError as exc:
            raise ParseError(f"bad value for {key} ({exc})", lineno) from exc
    return values


def format_calibration(calib: Calibration) -> str:
    return "".join(f"{key} = {getattr(calib, key)!r}\n" for key in CALIBRATION_KEYS)
