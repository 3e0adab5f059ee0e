"""Command-line front end: ``linescan <command> ...``.

Exit status: 0 success, 1 usage error, 2 I/O error (unreadable, undecodable
or unparsable input, unwritable output), 3 pipeline error (empty scan, bad
calibration, too few points, ...). Diagnostics go to stderr only.

Frame order matters: the k-th frame is placed k sweep steps along X.
Frames given on the command line (or found in a directory) are sorted
lexicographically by file name; pass ``--manifest`` to impose another order.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .cloud import (
    FORMATS,
    PLANES,
    RigidTransform,
    SweepConfig,
    denoise,
    dumps,
    format_from_path,
    load_cloud,
    merge,
    plot_svg,
)
from .errors import FrameDecodeError, ParseError, ScanError
from .geometry import CALIBRATION_KEYS, Calibration, parse_calibration
from .imaging import DEFAULT_ALPHA, load_png, save_png
from .pipeline import reconstruct
from .simulator import DEFAULT_SIZE, ground_truth, load_scene, render_sweep

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_PIPELINE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _alpha(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 < value < 255:
        raise argparse.ArgumentTypeError("alpha must lie strictly between 0 and 255")
    return value


def _size(text: str) -> tuple[int, int]:
    try:
        w, h = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected WIDTHxHEIGHT, got {text!r}") from None
    if w < 1 or h < 1:
        raise argparse.ArgumentTypeError("frame size must be positive")
    return w, h


def _add_calibration(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("calibration (flags override --calib)")
    g.add_argument("--calib", type=Path, help="key = value file with s, D, r, x0, pixel_scale")
    g.add_argument("--s", type=float, help="laser-to-camera baseline (physical units)")
    g.add_argument("--D", dest="D", type=float, help="camera-to-surface distance (physical units)")
    g.add_argument("--r", type=float, help="camera Y range (pixels)")
    g.add_argument("--x0", type=float, help="minimum X coordinate / baseline column (pixels)")
    g.add_argument("--pixel-scale", dest="pixel_scale", type=float, help="physical units per pixel (default 1.0)")


def _add_sweep(p: argparse.ArgumentParser, frames_flag: bool) -> None:
    g = p.add_argument_group("sweep")
    g.add_argument("--delta-theta", type=float, help="laser angle advance per frame, degrees")
    g.add_argument("--frame-step", type=float, help="fixed X advance per frame, overrides D*tan(delta-theta)")
    if frames_flag:
        g.add_argument("--frames", type=int, help="number of frames in the sweep")
        g.add_argument("--laser-start", type=float, default=0.0, help="laser X of the first frame")


def _calibration(args, defaults: dict | None = None) -> Calibration:
    values = dict(defaults or {})
    if args.calib is not None:
        values.update(parse_calibration(_read_text(args.calib)))
    for key in CALIBRATION_KEYS:
        if getattr(args, key) is not None:
            values[key] = getattr(args, key)
    values.setdefault("pixel_scale", 1.0)
    missing = [k for k in CALIBRATION_KEYS if k not in values]
    if missing:
        raise UsageError(f"missing calibration values: {', '.join(missing)}")
    return Calibration(**values)


def _sweep(args, frame_count: int) -> SweepConfig:
    if args.delta_theta is None:
        raise UsageError("--delta-theta is required")
    try:
        return SweepConfig(args.delta_theta, frame_count, args.frame_step)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _read_text(path: Path) -> str:
    try:
        return path.read_text()
    except (OSError, UnicodeDecodeError) as exc:
        raise OSError(f"{path}: {exc}") from exc


def _write(path: Path, data: bytes) -> None:
    try:
        path.write_bytes(data)
    except OSError as exc:
        raise OSError(f"{path}: cannot write ({exc.strerror or exc})") from exc


def _load(path: Path):
    try:
        return load_cloud(path)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    except OSError as exc:
        raise OSError(f"{path}: {exc.strerror or exc}") from exc


def _output_format(args, path: Path) -> str:
    if args.format:
        return args.format
    try:
        return format_from_path(path)
    except ValueError:
        return "xyz"


def _frame_paths(args) -> list[Path]:
    if args.manifest is not None:
        base = args.manifest.parent
        paths = []
        for line in _read_text(args.manifest).splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                p = Path(line)
                paths.append(p if p.is_absolute() else base / p)
        if args.frames_in:
            raise UsageError("give frames either on the command line or via --manifest, not both")
    else:
        paths = []
        for p in args.frames_in:
            if p.is_dir():
                paths.extend(p.glob("*.png"))
            else:
                paths.append(p)
        paths.sort(key=lambda p: (p.name, str(p)))
    if not paths:
        raise UsageError("no frames given")
    return paths


def cmd_scan(args) -> int:
    calib = _calibration(args)
    if args.scene is not None:
        if args.frames_in or args.manifest:
            raise UsageError("--scene replaces frame files; do not give both")
        if not args.frames:
            raise UsageError("--frames is required with --scene")
        scene = load_scene(args.scene)
        sweep = _sweep(args, args.frames)
        frames = render_sweep(scene, calib, sweep, args.laser_start, args.size)
        labels = [f"{args.scene.name}:{k}" for k in range(len(frames))]
    else:
        paths = _frame_paths(args)
        frames = [load_png(p) for p in paths]
        labels = [str(p) for p in paths]
        sweep = _sweep(args, len(frames)) if len(frames) > 1 or args.delta_theta else None
    result = reconstruct(frames, calib, sweep, args.alpha, labels=labels, workers=args.jobs)
    fmt = _output_format(args, args.output)
    _write(args.output, dumps(result.cloud, fmt))
    print(f"theta: {result.theta.theta:.6f} deg")
    for st in result.stats:
        print(st.describe())
    print(f"points: {len(result.cloud)} written to {args.output} ({fmt})")
    return EXIT_OK


def cmd_simulate(args) -> int:
    scene = load_scene(args.scene)
    calib = _calibration(args, defaults={"D": scene.D})
    sweep = _sweep(args, args.frames)
    frames = render_sweep(
        scene, calib, sweep, args.laser_start, args.size, args.blur_sigma, args.noise, args.seed
    )
    truth = ground_truth(scene, calib, sweep, args.laser_start, args.size)
    out = args.out_dir
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"{out}: cannot create directory ({exc.strerror or exc})") from exc
    width = max(4, len(str(len(frames) - 1)))
    for k, frame in enumerate(frames):
        path = out / f"frame_{k:0{width}d}.png"
        try:
            save_png(frame, path)
        except OSError as exc:
            raise OSError(f"{path}: cannot write ({exc})") from exc
    _write(out / "ground_truth.xyz", dumps(truth, "xyz"))
    print(f"wrote {len(frames)} frames and ground_truth.xyz ({len(truth)} points) to {out}")
    return EXIT_OK


def cmd_denoise(args) -> int:
    cloud = _load(args.input)
    kept = denoise(cloud, args.k, args.sigma_mult)
    _write(args.output, dumps(kept, _output_format(args, args.output)))
    print(f"kept {len(kept)} of {len(cloud)} points ({len(cloud) - len(kept)} removed)")
    return EXIT_OK


def cmd_merge(args) -> int:
    a, b = _load(args.a), _load(args.b)
    merged = merge(a, b, RigidTransform(tuple(args.rotate), tuple(args.translate)))
    _write(args.output, dumps(merged, _output_format(args, args.output)))
    print(f"merged {len(a)} + {len(b)} = {len(merged)} points")
    return EXIT_OK


def cmd_convert(args) -> int:
    cloud = _load(args.input)
    fmt = _output_format(args, args.output)
    _write(args.output, dumps(cloud, fmt))
    print(f"converted {len(cloud)} points to {fmt}")
    return EXIT_OK


def cmd_plot(args) -> int:
    cloud = _load(args.input)
    _write(args.output, plot_svg(cloud, args.plane, args.size).encode("utf-8"))
    print(f"plotted {len(cloud)} points ({args.plane}) to {args.output}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="linescan", description="Line-laser sweep reconstruction tools.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("scan", help="reconstruct a point cloud from sweep frames")
    p.add_argument("frames_in", nargs="*", type=Path, metavar="FRAME", help="PNG frames or directories of them")
    p.add_argument("--manifest", type=Path, help="file listing frame paths in sweep order")
    p.add_argument("--scene", type=Path, help="reconstruct a simulated sweep of this scene file instead")
    p.add_argument("--size", type=_size, default=DEFAULT_SIZE, help="simulated frame size WxH (with --scene)")
    p.add_argument("-o", "--output", type=Path, required=True)
    p.add_argument("--format", choices=FORMATS, help="output format (default: from extension, else xyz)")
    p.add_argument("--alpha", type=_alpha, default=DEFAULT_ALPHA, help="red threshold, 1..254 (default 128)")
    p.add_argument("--jobs", type=int, default=1, help="frames processed concurrently")
    _add_calibration(p)
    _add_sweep(p, frames_flag=True)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("simulate", help="render a synthetic sweep and its ground truth")
    p.add_argument("scene", type=Path, help="scene file: 'width height cell_size D' + height rows")
    p.add_argument("--out-dir", type=Path, required=True)
    p.add_argument("--size", type=_size, default=DEFAULT_SIZE, help="frame size WxH (default 320x240)")
    p.add_argument("--blur-sigma", type=float, default=0.0)
    p.add_argument("--noise", type=float, default=0.0, help="salt-and-pepper pixel fraction")
    p.add_argument("--seed", type=int, default=0)
    _add_calibration(p)
    _add_sweep(p, frames_flag=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("denoise", help="statistical outlier removal")
    p.add_argument("input", type=Path)
    p.add_argument("output", type=Path)
    p.add_argument("--k", type=int, default=8, help="neighbours per point (default 8)")
    p.add_argument("--sigma-mult", type=float, default=2.0, help="z-score cut (default 2.0)")
    p.add_argument("--format", choices=FORMATS)
    p.set_defaults(func=cmd_denoise)

    p = sub.add_parser("merge", help="append cloud B, rigidly moved, to cloud A")
    p.add_argument("a", type=Path)
    p.add_argument("b", type=Path)
    p.add_argument("-o", "--output", type=Path, required=True)
    p.add_argument("--rotate", type=float, nargs=3, default=(0.0, 0.0, 0.0), metavar=("RX", "RY", "RZ"),
                   help="degrees about X, Y, Z (matrix Rz@Ry@Rx)")
    p.add_argument("--translate", type=float, nargs=3, default=(0.0, 0.0, 0.0), metavar=("TX", "TY", "TZ"))
    p.add_argument("--format", choices=FORMATS)
    p.set_defaults(func=cmd_merge)

    p = sub.add_parser("convert", help="convert between xyz, pcd and obj")
    p.add_argument("input", type=Path)
    p.add_argument("output", type=Path)
    p.add_argument("--format", choices=FORMATS)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("plot", help="SVG scatter plot of a cloud")
    p.add_argument("input", type=Path)
    p.add_argument("-o", "--output", type=Path, required=True)
    p.add_argument("--plane", choices=sorted(PLANES), default="XY", type=str.upper)
    p.add_argument("--size", type=int, default=512)
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"linescan: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FrameDecodeError, ParseError, OSError) as exc:
        print(f"linescan: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ScanError, ValueError) as exc:
        print(f"linescan: error: {exc}", file=sys.stderr)
        return EXIT_PIPELINE


if __name__ == "__main__":
    sys.exit(main())
