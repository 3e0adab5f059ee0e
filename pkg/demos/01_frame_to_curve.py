"""
From a camera frame to a laser profile
======================================

A frame of a line-laser scan is an RGB image in which the laser shows up as
a bright red stripe. We keep only the red channel, binarize it and collapse
every image row to the mean column of its lit pixels.
"""

import numpy as np

from linescan import Frame, extract_pointset, frame_curve, red_channel, t1_smooth, threshold

# A tiny 6x8 frame: a three-pixel-wide stripe that drifts right, plus a
# dim green background the red channel ignores.
pixels = np.zeros((6, 8, 3), dtype=np.uint8)
pixels[..., 1] = 90
for row, col in enumerate([1, 1, 2, 3, 3, 4]):
    pixels[row, col : col + 3, 0] = [180, 255, 180]
frame = Frame(pixels)

# Red channel, then the threshold: a pixel is lit when red >= alpha.
gray = red_channel(frame)
mask = threshold(gray, alpha=128)
print(mask.mask.astype(int))

# The lit pixels as (column, row) pairs ...
points = extract_pointset(mask)
print(len(points), "lit pixels")

# ... and their per-row mean: one real-valued column per row.
curve = t1_smooth(points)
for row, xbar in curve.samples.items():
    print(f"row {row}: x = {xbar:.2f}")

# The fused path gives the same bits without the intermediate images.
assert frame_curve(frame, 128) == curve
