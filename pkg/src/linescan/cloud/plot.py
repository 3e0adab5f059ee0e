"""Orthographic SVG scatter plots of point clouds."""

from __future__ import annotations

import numpy as np

from .core import PointCloud

PLANES = {"XY": (0, 1), "XZ": (0, 2), "YZ": (1, 2)}
MARGIN = 0.05


def plot_svg(cloud: PointCloud, plane: str = "XY", size: int = 512, radius: float = 1.5) -> str:
    """Scatter the cloud projected on ``plane`` into a ``size`` x ``size`` SVG.

    The projection is scaled uniformly so the data bounds fill the canvas
    minus a 5% margin on every side, centered, with the vertical axis
    pointing up. One ``circle`` element is emitted per point, in cloud order.
    """
    plane = plane.upper()
    if plane not in PLANES:
        raise ValueError(f"plane must be one of {sorted(PLANES)}, got {plane!r}")
    if int(size) != size or size < 1:
        raise ValueError(f"size must be a positive integer, got {size}")
    size = int(size)
    u_axis, v_axis = PLANES[plane]
    uv = cloud.points[:, [u_axis, v_axis]]

    inner = size * (1 - 2 * MARGIN)
    if len(uv):
        lo, hi = uv.min(axis=0), uv.max(axis=0)
        span = float((hi - lo).max())
        scale = inner / span if span > 0 else 1.0
        center = (lo + hi) / 2
        px = size / 2 + (uv[:, 0] - center[0]) * scale
        py = size / 2 - (uv[:, 1] - center[1]) * scale
    else:
        px = py = np.empty(0)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>\n',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{size}" height="{size}" viewBox="0 0 {size} {size}">\n',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>\n',
        f'<g fill="black" data-plane="{plane}" data-units="{_escape(cloud.units)}">\n',
    ]
    out.extend(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="{radius:g}"/>\n' for x, y in zip(px.tolist(), py.tolist()))
    out.append("</g>\n</svg>\n")
    return "".join(out)


def _escape(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace('"', "&quot;")
    )
