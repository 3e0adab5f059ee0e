"""Point cloud container, sweep assembly, outlier removal and merging."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.special import cosdg, sindg

from ..errors import EmptyScan, FrameCountMismatch, TooFewPoints, UnitMismatch
from ..imaging import _frozen

DEFAULT_UNITS = "mm"


@dataclass(frozen=True, eq=False)
class PointCloud:
    """Ordered ``(N, 3)`` array of finite points plus a unit label."""

    points: np.ndarray
    units: str = DEFAULT_UNITS

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64).reshape(-1, 3)
        if not np.all(np.isfinite(pts)):
            raise ValueError("point cloud coordinates must be finite")
        object.__setattr__(self, "points", _frozen(pts))

    def __len__(self):
        return len(self.points)

    def __eq__(self, other):
        if not isinstance(other, PointCloud):
            return NotImplemented
        return self.units == other.units and np.array_equal(self.points, other.points)

    __hash__ = None


@dataclass(frozen=True)
class SweepConfig:
    """Laser sweep: ``frame_count`` frames, ``delta_theta`` degrees apart.

    ``frame_step_override`` replaces the derived per-frame lateral advance
    ``D * tan(delta_theta)`` with a fixed physical step.
    """

    delta_theta: float
    frame_count: int
    frame_step_override: Optional[float] = None

    def __post_init__(self):
        if not (math.isfinite(self.delta_theta) and self.delta_theta > 0):
            raise ValueError(f"delta_theta must be > 0, got {self.delta_theta}")
        if int(self.frame_count) != self.frame_count or self.frame_count < 1:
            raise ValueError(f"frame_count must be a positive integer, got {self.frame_count}")
        if self.frame_step_override is not None and not math.isfinite(self.frame_step_override):
            raise ValueError("frame_step_override must be finite")

    def step(self, D: float) -> float:
        if self.frame_step_override is not None:
            return float(self.frame_step_override)
        return D * math.tan(math.radians(self.delta_theta))

    def offsets(self, D: float) -> np.ndarray:
        return np.arange(self.frame_count) * self.step(D)


def _rotation_matrix(rx: float, ry: float, rz: float) -> np.ndarray:
    cx, sx = cosdg(rx), sindg(rx)
    cy, sy = cosdg(ry), sindg(ry)
    cz, sz = cosdg(rz), sindg(rz)
    rot_x = np.array([[1, 0, 0], [0, cx, -sx], [0, sx, cx]])
    rot_y = np.array([[cy, 0, sy], [0, 1, 0], [-sy, 0, cy]])
    rot_z = np.array([[cz, -sz, 0], [sz, cz, 0], [0, 0, 1]])
    return rot_z @ rot_y @ rot_x


@dataclass(frozen=True)
class RigidTransform:
    """Rotation (degrees about X, Y, Z) followed by a translation.

    The rotation matrix is ``Rz @ Ry @ Rx``: a point is turned about X
    first, then Y, then Z.
    """

    rotation: tuple = (0.0, 0.0, 0.0)
    translation: tuple = (0.0, 0.0, 0.0)

    def __post_init__(self):
        rot = tuple(float(v) for v in self.rotation)
        trans = tuple(float(v) for v in self.translation)
        if len(rot) != 3 or len(trans) != 3:
            raise ValueError("rotation and translation need three components each")
        if not all(math.isfinite(v) for v in rot + trans):
            raise ValueError("transform components must be finite")
        object.__setattr__(self, "rotation", rot)
        object.__setattr__(self, "translation", trans)

    @property
    def matrix(self) -> np.ndarray:
        return _rotation_matrix(*self.rotation)

    def is_identity(self) -> bool:
        return self.rotation == (0.0, 0.0, 0.0) and self.translation == (0.0, 0.0, 0.0)

    def apply(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=np.float64).reshape(-1, 3)
        if self.is_identity():
            return pts.copy()
        return pts @ self.matrix.T + np.asarray(self.translation)


def assemble(
    frame_curves: Sequence[np.ndarray],
    sweep: SweepConfig,
    D: float,
    units: str = DEFAULT_UNITS,
) -> PointCloud:
    """Stack per-frame 3D curves into one cloud, frame-major.

    Frame ``k`` is shifted along X by ``k * sweep.step(D)``, so its points
    land at ``x0'(k) + k * step``.

    Raises:
        FrameCountMismatch: if the number of frames differs from
            ``sweep.frame_count``.
        EmptyScan: if any frame has no points.
    """
    if len(frame_curves) != sweep.frame_count:
        raise FrameCountMismatch(
            f"sweep expects {sweep.frame_count} frames, got {len(frame_curves)}"
        )
    step = sweep.step(D)
    parts = []
    for k, pts in enumerate(frame_curves):
        pts = np.asarray(pts, dtype=np.float64).reshape(-1, 3)
        if len(pts) == 0:
            raise EmptyScan(f"frame {k} has no points")
        if k:
            pts = pts.copy()
            pts[:, 0] += k * step
        parts.append(pts)
    return PointCloud(np.concatenate(parts), units)


def knn_mean_distances(points: np.ndarray, k: int, chunk_bytes: int = 1 << 26) -> np.ndarray:
    """Mean Euclidean distance from each point to its ``k`` nearest others.

    Exact brute force, evaluated in row blocks to bound memory.
    """
    pts = np.asarray(points, dtype=np.float64)
    n = len(pts)
    rows_per_chunk = max(1, chunk_bytes // (8 * 3 * max(n, 1)))
    out = np.empty(n)
    for start in range(0, n, rows_per_chunk):
        stop = min(n, start + rows_per_chunk)
        diff = pts[start:stop, None, :] - pts[None, :, :]
        dist = np.sqrt(np.sum(diff * diff, axis=2))
        dist[np.arange(stop - start), np.arange(start, stop)] = np.inf
        nearest = np.partition(dist, k - 1, axis=1)[:, :k]
        out[start:stop] = np.sort(nearest, axis=1).mean(axis=1)
    return out


def outlier_mask(cloud: PointCloud, k_neighbors: int = 8, sigma_mult: float = 2.0) -> np.ndarray:
    """Boolean mask, ``True`` for points ``denoise`` would keep."""
    if k_neighbors < 1:
        raise ValueError("k_neighbors must be positive")
    if not sigma_mult > 0:
        raise ValueError("sigma_mult must be positive")
    if len(cloud) <= k_neighbors:
        raise TooFewPoints(
            f"need more than {k_neighbors} points for {k_neighbors}-NN denoising, got {len(cloud)}"
        )
    d = knn_mean_distances(cloud.points, k_neighbors)
    mu, sigma = d.mean(), d.std()
    return ~(d > mu + sigma_mult * sigma)


def denoise(cloud: PointCloud, k_neighbors: int = 8, sigma_mult: float = 2.0) -> PointCloud:
    """Statistical outlier removal.

    A point is dropped when the mean distance to its ``k_neighbors`` nearest
    neighbours exceeds ``mu + sigma_mult * sigma``, with ``mu`` and ``sigma``
    the mean and population standard deviation of that statistic over the
    whole cloud. Survivors keep their relative order.
    """
    keep = outlier_mask(cloud, k_neighbors, sigma_mult)
    return PointCloud(cloud.points[keep], cloud.units)


def merge(a: PointCloud, b: PointCloud, transform: Optional[RigidTransform] = None) -> PointCloud:
    """Concatenate ``a`` with ``b`` moved by ``transform`` (e.g. a rear scan)."""
    if a.units != b.units:
        raise UnitMismatch(f"cannot merge clouds in {a.units!r} and {b.units!r}")
    moved = b.points if transform is None else transform.apply(b.points)
    return PointCloud(np.concatenate([a.points, moved]), a.units)
