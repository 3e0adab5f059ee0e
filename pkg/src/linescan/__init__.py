"""Point clouds from line-laser sweeps.

Each frame of a sweep is reduced to its red channel, thresholded, collapsed
to one mean column per image row, transformed by the calibrated laser angle
and lifted to depth; frames are then stacked along the sweep direction.
A simulator renders synthetic sweeps of height-field scenes together with
the exact cloud they encode.
"""

__version__ = "0.1.0"

from .cloud import (
    PointCloud,
    RigidTransform,
    SweepConfig,
    assemble,
    denoise,
    export_obj,
    export_pcd,
    export_xyz,
    import_obj,
    import_pcd,
    import_xyz,
    load_cloud,
    merge,
    plot_svg,
    save_cloud,
)
from .errors import (
    AlphaOutOfRange,
    EmptyScan,
    FrameCountMismatch,
    FrameDecodeError,
    InvalidCalibration,
    LaserOutOfScene,
    ParseError,
    ScanError,
    TooFewPoints,
    UnitMismatch,
)
from .extraction import Curve2D, PointSet2D, extract_pointset, frame_curve, t1_smooth
from .geometry import Angle, Calibration, RotatedCurve, laser_angle, project_t2, rotate
from .imaging import BinaryImage, Frame, GrayImage, load_png, red_channel, red_threshold, save_png, threshold
from .pipeline import ScanResult, reconstruct, reconstruct_frame, reconstruct_frame_stepwise
from .simulator import Scene, ground_truth, render_frame, render_sweep
