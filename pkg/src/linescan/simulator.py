"""Synthetic laser sweeps over height-field scenes, with exact ground truth.

Camera model. Image row ``i`` looks at physical ``y = i * pixel_scale``. On
the bare reference surface (height 0) the laser line is imaged at column
``round(calib.x0)``, the baseline; a surface point of height ``h`` shifts it
by ``round(h / pixel_scale)`` columns. This is the displacement model the
depth projection inverts, so a simulated sweep checks the reconstruction
against its own geometric contract, not against physical optics.

The scene height field covers ``[0, extent_x] x [0, extent_y]`` and sits on
the reference surface: rows looking past ``extent_y`` see height 0. The
reconstruction measures depth relative to the lowest point visible in each
frame, so its output matches ``ground_truth`` whenever some row of every
frame sees the reference surface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.ndimage import gaussian_filter1d
from scipy.special import cosdg, sindg

from .cloud import DEFAULT_UNITS, PointCloud, SweepConfig
from .errors import LaserOutOfScene, ParseError
from .geometry import Calibration, laser_angle
from .imaging import Frame, _frozen

DEFAULT_SIZE = (320, 240)
LASER_RGB = (255, 0, 0)


@dataclass(frozen=True, eq=False)
class Scene:
    """Height field ``heights[row, col]`` sampled every ``cell_size`` units.

    Grid node ``(row, col)`` sits at ``(x, y) = (col * cell_size, row * cell_size)``.
    """

    heights: np.ndarray
    cell_size: float
    background_distance: float

    def __post_init__(self):
        h = np.asarray(self.heights, dtype=np.float64)
        if h.ndim != 2 or h.shape[0] < 2 or h.shape[1] < 2:
            raise ValueError("height grid must be at least 2x2")
        if not (math.isfinite(self.cell_size) and self.cell_size > 0):
            raise ValueError("cell_size must be > 0")
        if not (math.isfinite(self.background_distance) and self.background_distance > 0):
            raise ValueError("background distance must be > 0")
        if not np.all(np.isfinite(h)) or h.min() < 0 or h.max() >= self.background_distance:
            raise ValueError("heights must be finite and lie in [0, D)")
        object.__setattr__(self, "heights", _frozen(h))

    @property
    def D(self) -> float:
        return self.background_distance

    @property
    def extent(self) -> tuple[float, float]:
        ny, nx = self.heights.shape
        return ((nx - 1) * self.cell_size, (ny - 1) * self.cell_size)

    def height_at(self, x: float, y) -> np.ndarray:
        """Bilinear height at ``x`` for each ``y``; 0 outside the grid."""
        ex, ey = self.extent
        y = np.atleast_1d(np.asarray(y, dtype=np.float64))
        if not 0 <= x <= ex:
            return np.zeros_like(y)
        ny, nx = self.heights.shape
        gx = x / self.cell_size
        c0 = min(int(gx), nx - 2)
        tx = gx - c0
        column = self.heights[:, c0] * (1 - tx) + self.heights[:, c0 + 1] * tx
        inside = (y >= 0) & (y <= ey)
        gy = np.where(inside, y, 0.0) / self.cell_size
        r0 = np.minimum(gy.astype(np.int64), ny - 2)
        ty = gy - r0
        out = column[r0] * (1 - ty) + column[r0 + 1] * ty
        return np.where(inside, out, 0.0)


def flat_scene(nx: int, ny: int, cell_size: float, D: float) -> Scene:
    return Scene(np.zeros((ny, nx)), cell_size, D)


def plateau_scene(height: float, nx: int, ny: int, cell_size: float, D: float) -> Scene:
    """Constant ``height`` over the whole grid."""
    return Scene(np.full((ny, nx), float(height)), cell_size, D)


def ramp_scene(slope: float, nx: int, ny: int, cell_size: float, D: float) -> Scene:
    """``f(x, y) = slope * y`` over the grid."""
    y = np.arange(ny) * cell_size
    return Scene(np.repeat((slope * y)[:, None], nx, axis=1), cell_size, D)


def parse_scene(text: str) -> Scene:
    """Read ``"width height cell_size D"`` followed by ``height`` rows of ``width`` reals."""
    lines = [(n, ln.split()) for n, ln in enumerate(text.splitlines(), start=1) if ln.strip()]
    if not lines:
        raise ParseError("empty scene file")
    lineno, head = lines[0]
    if len(head) != 4:
        raise ParseError("header must be 'width height cell_size D'", lineno)
    try:
        nx, ny = int(head[0]), int(head[1])
        cell, D = float(head[2]), float(head[3])
    except ValueError as exc:
        raise ParseError(f"bad header ({exc})", lineno) from exc
    rows = lines[1:]
    if len(rows) != ny:
        raise ParseError(f"expected {ny} height rows, found {len(rows)}")
    grid = np.empty((ny, nx))
    for i, (lineno, fields) in enumerate(rows):
        if len(fields) != nx:
            raise ParseError(f"expected {nx} heights, found {len(fields)}", lineno)
        try:
            grid[i] = [float(f) for f in fields]
        except ValueError as exc:
            raise ParseError(f"bad height ({exc})", lineno) from exc
    try:
        return Scene(grid, cell, D)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def format_scene(scene: Scene) -> str:
    ny, nx = scene.heights.shape
    lines = [f"{nx} {ny} {scene.cell_size!r} {scene.D!r}"]
    lines += [" ".join(repr(float(v)) for v in row) for row in scene.heights]
    return "\n".join(lines) + "\n"


def load_scene(path) -> Scene:
    return parse_scene(Path(path).read_text())


def _check_geometry(scene: Scene, calib: Calibration) -> None:
    if scene.D != calib.D:
        raise ValueError(f"scene distance {scene.D} differs from calibrated D {calib.D}")


def _check_laser(scene: Scene, laser_x: float) -> None:
    ex, _ = scene.extent
    if not (math.isfinite(laser_x) and 0 <= laser_x <= ex):
        raise LaserOutOfScene(f"laser at x={laser_x} is outside the scene [0, {ex}]")


def _baseline(calib: Calibration) -> int:
    return int(round(calib.x0))


def line_columns(scene: Scene, calib: Calibration, laser_x: float, height: int) -> np.ndarray:
    """Image column of the laser line on every row."""
    _check_laser(scene, laser_x)
    f = scene.height_at(laser_x, np.arange(height) * calib.pixel_scale)
    return _baseline(calib) + np.rint(f / calib.pixel_scale).astype(np.int64)


def render_frame(
    scene: Scene,
    calib: Calibration,
    laser_x: float,
    size: tuple[int, int] = DEFAULT_SIZE,
    blur_sigma: float = 0.0,
    noise: float = 0.0,
    seed=None,
) -> Frame:
    """Render the laser line at ``laser_x`` as seen by the camera.

    Without blur or noise the frame is black except for one pure red pixel
    per row. ``blur_sigma`` spreads the line horizontally with a Gaussian
    whose peak stays at full intensity; ``noise`` is the fraction of pixels
    replaced by salt (white) or pepper (black), drawn from ``seed``.

    Raises:
        LaserOutOfScene: if ``laser_x`` lies outside the scene.
    """
    _check_geometry(scene, calib)
    width, height = size
    cols = line_columns(scene, calib, laser_x, height)
    if cols.min() < 0 or cols.max() >= width:
        raise ValueError(
            f"laser line spans columns {cols.min()}..{cols.max()}, outside a frame {width} wide"
        )
    rows = np.arange(height)
    pixels = np.zeros((height, width, 3), dtype=np.uint8)
    if blur_sigma > 0:
        line = np.zeros((height, width))
        line[rows, cols] = 1.0
        impulse = np.zeros(int(8 * blur_sigma) * 2 + 1)
        impulse[len(impulse) // 2] = 1.0
        peak = gaussian_filter1d(impulse, blur_sigma)[len(impulse) // 2]
        red = gaussian_filter1d(line, blur_sigma, axis=1, mode="constant") / peak
        pixels[:, :, 0] = np.clip(np.rint(red * 255), 0, 255).astype(np.uint8)
    else:
        pixels[rows, cols] = LASER_RGB
    if noise > 0:
        rng = np.random.default_rng(seed)
        hit = rng.random((height, width)) < noise
        salt = rng.random((height, width)) < 0.5
        pixels[hit & salt] = 255
        pixels[hit & ~salt] = 0
    return Frame(pixels)


def sweep_positions(scene: Scene, calib: Calibration, sweep: SweepConfig, laser_start: float = 0.0) -> np.ndarray:
    positions = laser_start + sweep.offsets(calib.D)
    for x in positions:
        _check_laser(scene, float(x))
    return positions


def render_sweep(
    scene: Scene,
    calib: Calibration,
    sweep: SweepConfig,
    laser_start: float = 0.0,
    size: tuple[int, int] = DEFAULT_SIZE,
    blur_sigma: float = 0.0,
    noise: float = 0.0,
    seed=None,
) -> list[Frame]:
    """Frames of a sweep starting at ``laser_start``, advancing ``sweep.step(D)`` per frame."""
    _check_geometry(scene, calib)
    positions = sweep_positions(scene, calib, sweep, laser_start)
    frames = []
    for k, x in enumerate(positions):
        frame_seed = None if seed is None else [seed, k]
        frames.append(render_frame(scene, calib, float(x), size, blur_sigma, noise, frame_seed))
    return frames


def ground_truth(
    scene: Scene,
    calib: Calibration,
    sweep: SweepConfig,
    laser_start: float = 0.0,
    size: tuple[int, int] = DEFAULT_SIZE,
    units: str = DEFAULT_UNITS,
) -> PointCloud:
    """Exact points a sweep encodes, in the reconstruction's conventions.

    For frame ``k`` and image row ``i`` with surface height ``f``, the
    unquantized line column ``x0 + f / pixel_scale`` and the row go
    through the same angle transform as the reconstruction, and depth is
    taken from the reference surface:

        (x0 cos t + k * step,  i sin t,  D - f cos t)

    Frame-major, row-ascending, one point per image row.
    """
    _check_geometry(scene, calib)
    _, height = size
    positions = sweep_positions(scene, calib, sweep, laser_start)
    step = sweep.step(calib.D)
    theta = laser_angle(calib).theta
    c, s = float(cosdg(theta)), float(sindg(theta))
    ps = calib.pixel_scale
    rows = np.arange(height)
    base = float(_baseline(calib))
    parts = []
    for k, x in enumerate(positions):
        f = scene.height_at(float(x), rows * ps)
        x_rot = (base + f / ps) * c
        ref = base * c
        pts = np.empty((height, 3))
        pts[:, 0] = ref + k * step if k else ref
        pts[:, 1] = rows * s + 0.0
        pts[:, 2] = calib.D - ps * (x_rot - ref)
        parts.append(pts)
    return PointCloud(np.concatenate(parts), units)
