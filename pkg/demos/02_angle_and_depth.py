"""
Laser angle and depth projection
================================

The calibrated geometry fixes an angle from the laser vector ``(k, D)``.
Each profile sample ``(x, y)`` is mapped to ``(x cos t, y sin t)`` and then
lifted to depth: the leftmost sample sits on the reference distance ``D``,
every other one is ``pixel_scale * dx`` closer to the camera.
"""

from linescan import Calibration, Curve2D, laser_angle, project_t2, rotate

calib = Calibration(s=300.0, D=500.0, r=240.0, x0=40.0, pixel_scale=1.0)
print("k =", calib.k)
theta = laser_angle(calib)
print(f"theta = {theta.theta:.4f} degrees")

# A profile bulging to the right in its middle rows.
curve = Curve2D(rows=[0, 1, 2, 3, 4], xbar=[40.0, 42.5, 47.0, 42.5, 40.0], width=320, height=240)
rotated = rotate(curve, theta)
points = project_t2(rotated, calib.D, calib.pixel_scale)
for x, y, z in points:
    print(f"{x:8.3f} {y:8.3f} {z:8.3f}")

# Special angles are exact: at 90 degrees every x collapses to 0.
print(rotate(curve, 90.0).x)
