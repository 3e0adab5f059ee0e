"""ASCII point cloud interchange: XYZ, PCD v0.7 and vertex-only OBJ.

All writers emit coordinates with exactly six decimals (``%.6f``, i.e. the
correctly rounded decimal of the stored double) and ``\\n`` line endings,
so output is byte-reproducible.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from ..errors import ParseError
from .core import DEFAULT_UNITS, PointCloud

FORMATS = ("xyz", "pcd", "obj")

PCD_HEADER_KEYS = (
    "VERSION",
    "FIELDS",
    "SIZE",
    "TYPE",
    "COUNT",
    "WIDTH",
    "HEIGHT",
    "VIEWPOINT",
    "POINTS",
    "DATA",
)


def _lines(points: np.ndarray, prefix: str = "") -> str:
    return "".join(f"{prefix}{x:.6f} {y:.6f} {z:.6f}\n" for x, y, z in points.tolist())


def _text(data) -> str:
    if isinstance(data, (bytes, bytearray)):
        try:
            return bytes(data).decode("ascii")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not an ASCII file ({exc})") from exc
    return str(data)


def _parse_triple(fields: list[str], lineno: int) -> tuple[float, float, float]:
    if len(fields) != 3:
        raise ParseError(f"expected 3 coordinates, found {len(fields)}", lineno)
    try:
        values = tuple(float(f) for f in fields)
    except ValueError as exc:
        raise ParseError(f"bad number ({exc})", lineno) from exc
    if not all(math.isfinite(v) for v in values):
        raise ParseError("non-finite coordinate", lineno)
    return values


def export_xyz(cloud: PointCloud) -> bytes:
    return _lines(cloud.points).encode("ascii")


def import_xyz(data, units: str = DEFAULT_UNITS) -> PointCloud:
    """Parse ``x y z`` lines; any run of whitespace separates fields.

    Blank lines are skipped.
    """
    points = []
    for lineno, line in enumerate(_text(data).splitlines(), start=1):
        fields = line.split()
        if fields:
            points.append(_parse_triple(fields, lineno))
    return PointCloud(np.array(points, dtype=np.float64).reshape(-1, 3), units)


def export_pcd(cloud: PointCloud) -> bytes:
    n = len(cloud)
    header = (
        "# .PCD v0.7 - Point Cloud Data file format\n"
        "VERSION 0.7\n"
        "FIELDS x y z\n"
        "SIZE 8 8 8\n"
        "TYPE F F F\n"
        "COUNT 1 1 1\n"
        f"WIDTH {n}\n"
        "HEIGHT 1\n"
        "VIEWPOINT 0 0 0 1 0 0 0\n"
        f"POINTS {n}\n"
        "DATA ascii\n"
    )
    return (header + _lines(cloud.points)).encode("ascii")


def parse_pcd_header(data) -> tuple[dict[str, list[str]], int]:
    """Validate an ASCII PCD v0.7 header.

    Returns the header fields and the number of lines it spans (comments
    included). Only unorganized ``x y z`` float clouds are accepted.
    """
    lines = _text(data).splitlines()
    header: dict[str, list[str]] = {}
    expected = iter(PCD_HEADER_KEYS)
    lineno = 0
    for lineno, line in enumerate(lines, start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        key, *values = line.split()
        want = next(expected, None)
        if key != want:
            raise ParseError(f"expected PCD header key {want}, found {key}", lineno)
        header[key] = values
        if key == "DATA":
            break
    else:
        raise ParseError("truncated PCD header", lineno or None)

    def check(key, value):
        if header[key] != value:
            raise ParseError(f"unsupported {key} {' '.join(header[key])}")

    check("VERSION", ["0.7"])
    check("FIELDS", ["x", "y", "z"])
    check("TYPE", ["F", "F", "F"])
    check("COUNT", ["1", "1", "1"])
    check("HEIGHT", ["1"])
    check("DATA", ["ascii"])
    if header["SIZE"] not in (["4", "4", "4"], ["8", "8", "8"]):
        raise ParseError(f"unsupported SIZE {' '.join(header['SIZE'])}")
    if len(header["VIEWPOINT"]) != 7:
        raise ParseError("VIEWPOINT needs 7 values")
    try:
        width, points = int(header["WIDTH"][0]), int(header["POINTS"][0])
    except (IndexError, ValueError) as exc:
        raise ParseError(f"bad WIDTH/POINTS ({exc})") from exc
    if width != points:
        raise ParseError(f"WIDTH {width} does not match POINTS {points}")
    return header, lineno


def import_pcd(data, units: str = DEFAULT_UNITS) -> PointCloud:
    text = _text(data)
    header, consumed = parse_pcd_header(text)
    expected = int(header["POINTS"][0])
    lines = text.splitlines()
    points = []
    for lineno, line in enumerate(lines[consumed:], start=consumed + 1):
        fields = line.split()
        if fields:
            points.append(_parse_triple(fields, lineno))
    if len(points) != expected:
        raise ParseError(f"header declares {expected} points, found {len(points)}")
    return PointCloud(np.array(points, dtype=np.float64).reshape(-1, 3), units)


def export_obj(cloud: PointCloud) -> bytes:
    return _lines(cloud.points, prefix="v ").encode("ascii")


def import_obj(data, units: str = DEFAULT_UNITS) -> PointCloud:
    """Read the ``v`` records of an OBJ file.

    Comments are skipped; any face or other geometry record is rejected,
    since only vertex clouds are exchanged in this format.
    """
    points = []
    for lineno, line in enumerate(_text(data).splitlines(), start=1):
        fields = line.split()
        if not fields or fields[0].startswith("#"):
            continue
        if fields[0] != "v":
            raise ParseError(f"unsupported OBJ record {fields[0]!r}", lineno)
        points.append(_parse_triple(fields[1:], lineno))
    return PointCloud(np.array(points, dtype=np.float64).reshape(-1, 3), units)


_WRITERS = {"xyz": export_xyz, "pcd": export_pcd, "obj": export_obj}
_READERS = {"xyz": import_xyz, "pcd": import_pcd, "obj": import_obj}


def format_from_path(path) -> str:
    fmt = Path(path).suffix.lower().lstrip(".")
    if fmt not in FORMATS:
        raise ValueError(f"cannot infer point cloud format from {path!s}; use one of {FORMATS}")
    return fmt


def dumps(cloud: PointCloud, fmt: str) -> bytes:
    return _WRITERS[fmt](cloud)


def loads(data, fmt: str, units: str = DEFAULT_UNITS) -> PointCloud:
    return _READERS[fmt](data, units)


def save_cloud(cloud: PointCloud, path, fmt: str | None = None) -> None:
    Path(path).write_bytes(dumps(cloud, fmt or format_from_path(path)))


def load_cloud(path, fmt: str | None = None, units: str = DEFAULT_UNITS) -> PointCloud:
    return loads(Path(path).read_bytes(), fmt or format_from_path(path), units)
