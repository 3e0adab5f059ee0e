from .core import (
    DEFAULT_UNITS,
    PointCloud,
    RigidTransform,
    SweepConfig,
    assemble,
    denoise,
    knn_mean_distances,
    merge,
    outlier_mask,
)
from .formats import (
    FORMATS,
    dumps,
    export_obj,
    export_pcd,
    export_xyz,
    format_from_path,
    import_obj,
    import_pcd,
    import_xyz,
    load_cloud,
    loads,
    parse_pcd_header,
    save_cloud,
)
from .plot import PLANES, plot_svg

__all__ = [
    "DEFAULT_UNITS",
    "FORMATS",
    "PLANES",
    "PointCloud",
    "RigidTransform",
    "SweepConfig",
    "assemble",
    "denoise",
    "dumps",
    "export_obj",
    "export_pcd",
    "export_xyz",
    "format_from_path",
    "import_obj",
    "import_pcd",
    "import_xyz",
    "knn_mean_distances",
    "load_cloud",
    "loads",
    "merge",
    "outlier_mask",
    "parse_pcd_header",
    "plot_svg",
    "save_cloud",
]
