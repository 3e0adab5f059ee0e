"""Lit-pixel extraction and row-mean smoothing of the laser profile."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyScan
from .imaging import BinaryImage, Frame, _check_alpha, _frozen


@dataclass(frozen=True, eq=False)
class PointSet2D:
    """Lit pixel coordinates of one thresholded frame.

    ``points`` is an ``(N, 2)`` int64 array of ``(x, y)`` = (column, row)
    pairs. It is normalized on construction to row-major order (ascending
    ``y``, then ascending ``x``); duplicates and out-of-bounds points are
    rejected.
    """

    points: np.ndarray
    width: int
    height: int

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.int64).reshape(-1, 2)
        if len(pts):
            xs, ys = pts[:, 0], pts[:, 1]
            if xs.min() < 0 or ys.min() < 0 or xs.max() >= self.width or ys.max() >= self.height:
                raise ValueError("point outside the source image bounds")
            pts = pts[np.lexsort((xs, ys))]
            if np.any(np.all(pts[1:] == pts[:-1], axis=1)):
                raise ValueError("duplicate points in point set")
        object.__setattr__(self, "points", _frozen(pts))

    def __len__(self):
        return len(self.points)

    def __eq__(self, other):
        if not isinstance(other, PointSet2D):
            return NotImplemented
        return (self.width, self.height) == (other.width, other.height) and np.array_equal(
            self.points, other.points
        )

    __hash__ = None

    def as_set(self) -> set[tuple[int, int]]:
        return {(int(x), int(y)) for x, y in self.points}


@dataclass(frozen=True, eq=False)
class Curve2D:
    """One real-valued mean column per sampled row.

    ``rows`` is strictly ascending; ``xbar[i]`` is the mean lit column of
    row ``rows[i]``. Rows without lit pixels carry no sample.
    """

    rows: np.ndarray
    xbar: np.ndarray
    width: int
    height: int

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=np.int64).ravel()
        xbar = np.asarray(self.xbar, dtype=np.float64).ravel()
        if rows.shape != xbar.shape:
            raise ValueError("rows and xbar must have the same length")
        if len(rows) > 1 and np.any(np.diff(rows) <= 0):
            raise ValueError("curve rows must be strictly ascending")
        object.__setattr__(self, "rows", _frozen(rows))
        object.__setattr__(self, "xbar", _frozen(xbar))

    def __len__(self):
        return len(self.rows)

    def __eq__(self, other):
        if not isinstance(other, Curve2D):
            return NotImplemented
        return (
            (self.width, self.height) == (other.width, other.height)
            and np.array_equal(self.rows, other.rows)
            and np.array_equal(self.xbar, other.xbar)
        )

    __hash__ = None

    @property
    def samples(self) -> dict[int, float]:
        return dict(zip(self.rows.tolist(), self.xbar.tolist()))

    def sample(self, y: int) -> float:
        idx = np.searchsorted(self.rows, y)
        if idx == len(self.rows) or self.rows[idx] != y:
            raise KeyError(y)
        return float(self.xbar[idx])


def extract_pointset(binary: BinaryImage) -> PointSet2D:
    ys, xs = np.nonzero(binary.mask)
    return PointSet2D(np.column_stack((xs, ys)), binary.width, binary.height)


def _row_means(ys: np.ndarray, xs: np.ndarray, height: int):
    # Column indices are integers, so the float64 sums are exact and the
    # result does not depend on summation order.
    counts = np.bincount(ys, minlength=height)
    sums = np.bincount(ys, weights=xs, minlength=height)
    rows = np.flatnonzero(counts)
    return rows, sums[rows] / counts[rows]


def t1_smooth(points: PointSet2D) -> Curve2D:
    """Replace the lit pixels of every row by their mean column.

    Raises:
        EmptyScan: if ``points`` is empty.
    """
    if len(points) == 0:
        raise EmptyScan("no lit pixels to smooth")
    rows, xbar = _row_means(points.points[:, 1], points.points[:, 0], points.height)
    return Curve2D(rows, xbar, points.width, points.height)


def frame_curve(frame: Frame, alpha: int) -> Curve2D:
    """Fused red channel, threshold, extraction and row-mean smoothing.

    Bit-identical to
    ``t1_smooth(extract_pointset(threshold(red_channel(frame), alpha)))``
    but skips the intermediate objects.
    """
    alpha = _check_alpha(alpha)
    mask = frame.pixels[:, :, 0] >= alpha
    # Row sums of integer column indices stay exact in float64, so the
    # product gives the same bits as the per-row accumulation.
    counts = np.count_nonzero(mask, axis=1)
    rows = np.flatnonzero(counts)
    if len(rows) == 0:
        raise EmptyScan("no lit pixels to smooth")
    sums = mask[rows] @ np.arange(frame.width, dtype=np.float64)
    return Curve2D(rows, sums / counts[rows], frame.width, frame.height)
