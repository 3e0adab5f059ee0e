"""Per-frame reconstruction and whole-sweep assembly."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .cloud import DEFAULT_UNITS, PointCloud, SweepConfig, assemble
from .errors import EmptyScan
from .extraction import extract_pointset, frame_curve, t1_smooth
from .geometry import Angle, Calibration, laser_angle, project_t2, rotate
from .imaging import DEFAULT_ALPHA, Frame, red_channel, threshold


def reconstruct_frame(
    frame: Frame,
    calib: Calibration,
    alpha: int = DEFAULT_ALPHA,
    theta: Optional[Angle] = None,
) -> np.ndarray:
    """3D curve of one frame, ``(N, 3)`` in row order, before sweep offsets.

    Uses the fused extraction path; ``theta`` defaults to the calibrated
    laser angle.
    """
    if theta is None:
        theta = laser_angle(calib)
    curve = frame_curve(frame, alpha)
    return project_t2(rotate(curve, theta), calib.D, calib.pixel_scale)


def reconstruct_frame_stepwise(
    frame: Frame,
    calib: Calibration,
    alpha: int = DEFAULT_ALPHA,
    theta: Optional[Angle] = None,
) -> np.ndarray:
    """Same as ``reconstruct_frame`` through every intermediate stage."""
    if theta is None:
        theta = laser_angle(calib)
    points = extract_pointset(threshold(red_channel(frame), alpha))
    curve = t1_smooth(points)
    return project_t2(rotate(curve, theta), calib.D, calib.pixel_scale)


@dataclass(frozen=True)
class FrameStats:
    index: int
    label: str
    lit_pixels: int
    rows: int
    x0_prime: float
    z_min: float
    z_max: float

    def describe(self) -> str:
        return (
            f"frame {self.index} ({self.label}): lit={self.lit_pixels} rows={self.rows} "
            f"x0'={self.x0_prime:.6f} z=[{self.z_min:.6f}, {self.z_max:.6f}]"
        )


@dataclass(frozen=True)
class ScanResult:
    cloud: PointCloud
    stats: list
    theta: Angle


def reconstruct(
    frames: Sequence[Frame],
    calib: Calibration,
    sweep: Optional[SweepConfig],
    alpha: int = DEFAULT_ALPHA,
    units: str = DEFAULT_UNITS,
    labels: Optional[Sequence[str]] = None,
    workers: int = 1,
) -> ScanResult:
    """Reconstruct a laser sweep into a point cloud.

    ``frames`` must be in sweep order. Frames are processed independently
    (concurrently if ``workers > 1``) and assembled in input order.
    ``sweep`` may be ``None`` only for a single frame.

    Raises:
        EmptyScan: naming the first frame without lit pixels.
    """
    frames = list(frames)
    if labels is None:
        labels = [f"#{i}" for i in range(len(frames))]
    if sweep is None:
        if len(frames) != 1:
            raise ValueError("a sweep configuration is required for more than one frame")
        sweep = SweepConfig(delta_theta=1.0, frame_count=1)
    theta = laser_angle(calib)

    def one(item):
        i, frame = item
        try:
            pts = reconstruct_frame(frame, calib, alpha, theta)
        except EmptyScan as exc:
            raise EmptyScan(f"frame {i} ({labels[i]}): {exc}") from exc
        lit = int(np.count_nonzero(frame.pixels[:, :, 0] >= alpha))
        stats = FrameStats(
            i, str(labels[i]), lit, len(pts), float(pts[0, 0]), float(pts[:, 2].min()), float(pts[:, 2].max())
        )
        return pts, stats

    if workers > 1 and len(frames) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, enumerate(frames)))
    else:
        results = [one(item) for item in enumerate(frames)]

    cloud = assemble([pts for pts, _ in results], sweep, calib.D, units)
    return ScanResult(cloud, [st for _, st in results], theta)
