"""
Cleaning and merging front and rear scans
=========================================

Real scans carry stray points. Statistical outlier removal drops points
whose mean distance to their nearest neighbours is unusually large. A rear
scan is then brought into the front scan's frame with a user-supplied rigid
transform and appended.
"""

import sys
from pathlib import Path

import numpy as np

from linescan import PointCloud, RigidTransform, denoise, merge, save_cloud

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_output")
out.mkdir(exist_ok=True)
rng = np.random.default_rng(0)

# Front half of a cylinder of radius 20, plus a sprinkle of stray points.
angle, height = np.meshgrid(np.linspace(0, np.pi, 40), np.arange(0.0, 30.0, 1.5))
front = np.column_stack((20 * np.cos(angle.ravel()), height.ravel(), 20 * np.sin(angle.ravel())))
strays = rng.uniform([-60, -30, -60], [60, 60, 60], size=(15, 3))
noisy = PointCloud(np.vstack([front, strays]))

clean = denoise(noisy, k_neighbors=8, sigma_mult=2.0)
print(f"denoise kept {len(clean)} of {len(noisy)} points")

# The rear scan was taken after turning the object half a turn.
rear = PointCloud(front)
whole = merge(clean, rear, RigidTransform(rotation=(0.0, 180.0, 0.0)))
print(f"merged cloud: {len(whole)} points, z range {whole.points[:, 2].min():.1f}..{whole.points[:, 2].max():.1f}")

save_cloud(whole, out / "cylinder.xyz")
save_cloud(whole, out / "cylinder.obj")
