import subprocess
import sys

import numpy as np
import pytest

from linescan import Frame, PointCloud, ground_truth, import_xyz, render_sweep, save_png
from linescan.cli import main
from linescan.cloud import export_xyz, load_cloud
from linescan.simulator import format_scene

from conftest import SCAN_CALIB

CALIB_FLAGS = ["--s", "300", "--D", "500", "--r", "240", "--x0", "40"]


@pytest.fixture
def scene_file(tmp_path, scenes):
    path = tmp_path / "ramp.txt"
    path.write_text(format_scene(scenes["ramp"]))
    return path


@pytest.fixture
def frame_dir(tmp_path, calib, scenes):
    from linescan import SweepConfig

    out = tmp_path / "frames"
    out.mkdir()
    frames = render_sweep(scenes["flat"], calib, SweepConfig(0.5, 10, frame_step_override=5.0))
    for k, f in enumerate(frames):
        save_png(f, out / f"f{k:02d}.png")
    return out


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_scan_flat_frames(tmp_path, frame_dir, capsys):
    out = tmp_path / "flat.xyz"
    code, stdout, err = run(["scan", frame_dir, "-o", out, "--delta-theta", "0.5", "--frame-step", "5", *CALIB_FLAGS], capsys)
    assert code == 0 and err == ""
    assert "points: 2400" in stdout
    assert stdout.count("frame ") == 10
    cloud = load_cloud(out)
    assert len(cloud) == 2400 and np.all(np.abs(cloud.points[:, 2] - 500.0) <= 0.5)


def test_scan_is_deterministic_and_honours_format(tmp_path, frame_dir, capsys):
    outs = []
    for name in ("a.pcd", "b.pcd"):
        code, _, _ = run(["scan", frame_dir, "-o", tmp_path / name, "--delta-theta", "0.5", *CALIB_FLAGS], capsys)
        assert code == 0
        outs.append((tmp_path / name).read_bytes())
    assert outs[0] == outs[1] and outs[0].startswith(b"# .PCD v0.7")
    run(["scan", frame_dir, "-o", tmp_path / "c.out", "--format", "obj", "--delta-theta", "0.5", *CALIB_FLAGS], capsys)
    assert (tmp_path / "c.out").read_bytes().startswith(b"v ")


def test_scan_single_frame(tmp_path, frame_dir, capsys):
    code, stdout, _ = run(["scan", frame_dir / "f03.png", "-o", tmp_path / "one.xyz", *CALIB_FLAGS], capsys)
    assert code == 0 and "points: 240" in stdout


def test_scan_orders_frames_by_name_or_manifest(tmp_path, calib, capsys):
    from linescan import Scene, SweepConfig

    slope_x = np.repeat((0.8 * np.arange(11) * 10.0)[None, :], 21, axis=0)
    scene = Scene(slope_x, 10.0, 500.0)
    frames = render_sweep(scene, calib, SweepConfig(0.5, 2, frame_step_override=50.0))
    save_png(frames[0], tmp_path / "b.png")
    save_png(frames[1], tmp_path / "a.png")
    flags = ["--delta-theta", "1", "--frame-step", "7", *CALIB_FLAGS]
    run(["scan", tmp_path / "b.png", tmp_path / "a.png", "-o", tmp_path / "sorted.xyz", *flags], capsys)
    (tmp_path / "order.txt").write_text("# sweep order\nb.png\na.png\n")
    run(["scan", "--manifest", tmp_path / "order.txt", "-o", tmp_path / "manifest.xyz", *flags], capsys)
    by_name = load_cloud(tmp_path / "sorted.xyz").points
    by_manifest = load_cloud(tmp_path / "manifest.xyz").points
    # the first frame in sweep order is the one at offset 0
    assert not np.array_equal(by_name, by_manifest)
    np.testing.assert_array_equal(by_name[:240, 2], by_manifest[240:, 2])


def test_scan_reports_bad_frame(tmp_path, frame_dir, capsys):
    (frame_dir / "f05.png").write_bytes(b"garbage")
    code, stdout, err = run(["scan", frame_dir, "-o", tmp_path / "x.xyz", "--delta-theta", "1", *CALIB_FLAGS], capsys)
    assert code == 2 and stdout == "" and "f05.png" in err


def test_scan_reports_empty_frame(tmp_path, frame_dir, capsys):
    save_png(Frame.blank(320, 240), frame_dir / "f04.png")
    code, stdout, err = run(["scan", frame_dir, "-o", tmp_path / "x.xyz", "--delta-theta", "1", *CALIB_FLAGS], capsys)
    assert code == 3 and stdout == "" and "f04.png" in err


def test_scan_usage_errors(tmp_path, frame_dir, capsys):
    code, stdout, err = run(["scan", frame_dir, "-o", tmp_path / "x.xyz", "--delta-theta", "1", "--s", "1"], capsys)
    assert code == 1 and "missing calibration" in err and stdout == ""
    code, _, err = run(["scan", frame_dir, "-o", tmp_path / "x.xyz", *CALIB_FLAGS], capsys)
    assert code == 1 and "--delta-theta" in err
    code, _, err = run(["scan", frame_dir, "-o", tmp_path / "x.xyz", "--alpha", "255", *CALIB_FLAGS], capsys)
    assert code == 1 and "alpha" in err
    code, _, _ = run(["bogus"], capsys)
    assert code == 1


def test_scan_calibration_errors(tmp_path, frame_dir, capsys):
    flags = ["--s", "300", "--D", "-5", "--r", "240", "--x0", "40", "--delta-theta", "1"]
    code, stdout, err = run(["scan", frame_dir, "-o", tmp_path / "x.xyz", *flags], capsys)
    assert code == 3 and "D must be > 0" in err and stdout == ""


def test_scan_with_calibration_file(tmp_path, frame_dir, capsys):
    calib = tmp_path / "rig.cfg"
    calib.write_text("# bench rig\ns = 300\nD = 500\nr = 240\nx0 = 40\npixel_scale = 1.0\n")
    args = ["scan", frame_dir, "--delta-theta", "0.5", "--frame-step", "5", "--calib", calib]
    run([*args, "-o", tmp_path / "a.xyz"], capsys)
    run(["scan", frame_dir, "--delta-theta", "0.5", "--frame-step", "5", *CALIB_FLAGS, "-o", tmp_path / "b.xyz"], capsys)
    assert (tmp_path / "a.xyz").read_bytes() == (tmp_path / "b.xyz").read_bytes()
    # a flag overrides the file
    code, _, _ = run([*args, "--D", "400", "-o", tmp_path / "c.xyz"], capsys)
    assert code == 0 and (tmp_path / "c.xyz").read_bytes() != (tmp_path / "a.xyz").read_bytes()
    calib.write_text("s = 300\nfocal = 3\n")
    code, _, err = run([*args, "-o", tmp_path / "d.xyz"], capsys)
    assert code == 2 and "line 2" in err


def test_simulate_then_scan_recovers_ground_truth(tmp_path, scene_file, capsys):
    sim = tmp_path / "sim"
    sweep = ["--delta-theta", "0.5", "--frame-step", "5", "--frames", "20"]
    code, stdout, err = run(["simulate", scene_file, "--out-dir", sim, *sweep, *CALIB_FLAGS], capsys)
    assert code == 0, err
    pngs = sorted(sim.glob("*.png"))
    assert len(pngs) == 20 and (sim / "ground_truth.xyz").exists()
    code, _, _ = run(["scan", sim, "-o", tmp_path / "scan.xyz", "--delta-theta", "0.5", "--frame-step", "5", *CALIB_FLAGS], capsys)
    assert code == 0
    got = load_cloud(tmp_path / "scan.xyz").points
    truth = load_cloud(sim / "ground_truth.xyz").points
    assert np.sqrt(np.mean(np.sum((got - truth) ** 2, axis=1))) <= 0.75


def test_scan_directly_from_scene(tmp_path, scene_file, capsys):
    sweep = ["--delta-theta", "0.5", "--frame-step", "5", "--frames", "20"]
    code, stdout, _ = run(["scan", "--scene", scene_file, "-o", tmp_path / "s.xyz", *sweep, *CALIB_FLAGS], capsys)
    assert code == 0 and "points: 4800" in stdout


def test_simulate_out_of_scene(tmp_path, scene_file, capsys):
    code, stdout, err = run(["simulate", scene_file, "--out-dir", tmp_path / "o", "--delta-theta", "1",
                             "--frame-step", "50", "--frames", "5", *CALIB_FLAGS], capsys)
    assert code == 3 and "outside the scene" in err and stdout == ""


def test_denoise_merge_convert_plot(tmp_path, rng, capsys):
    gx, gy = np.meshgrid(np.arange(20.0), np.arange(10.0))
    plane = np.column_stack((gx.ravel(), gy.ravel(), np.zeros(200)))
    noisy = np.vstack([plane, [[5, 5, 80], [-60, 3, 2]]])
    (tmp_path / "noisy.xyz").write_bytes(export_xyz(PointCloud(noisy)))

    code, stdout, _ = run(["denoise", tmp_path / "noisy.xyz", tmp_path / "clean.xyz", "--k", "8", "--sigma-mult", "2"], capsys)
    assert code == 0 and "removed" in stdout
    assert np.array_equal(load_cloud(tmp_path / "clean.xyz").points, plane)

    code, _, _ = run(["merge", tmp_path / "clean.xyz", tmp_path / "clean.xyz", "-o", tmp_path / "m.xyz",
                      "--rotate", "0", "0", "180", "--translate", "19", "9", "1"], capsys)
    merged = load_cloud(tmp_path / "m.xyz").points
    assert code == 0 and len(merged) == 400
    np.testing.assert_allclose(np.sort(merged[200:, :2], axis=0), np.sort(plane[:, :2], axis=0), atol=1e-6)
    assert np.all(merged[200:, 2] == 1.0)

    code, _, _ = run(["convert", tmp_path / "m.xyz", tmp_path / "m.pcd"], capsys)
    code2, _, _ = run(["convert", tmp_path / "m.pcd", tmp_path / "m2.xyz"], capsys)
    assert code == code2 == 0
    assert (tmp_path / "m2.xyz").read_bytes() == (tmp_path / "m.xyz").read_bytes()

    code, _, _ = run(["plot", tmp_path / "m.pcd", "--plane", "xz", "--size", "300", "-o", tmp_path / "m.svg"], capsys)
    svg = (tmp_path / "m.svg").read_text()
    assert code == 0 and svg.count("<circle") == 400 and 'data-plane="XZ"' in svg


def test_cloud_command_errors(tmp_path, capsys):
    code, stdout, err = run(["convert", tmp_path / "missing.xyz", tmp_path / "o.pcd"], capsys)
    assert code == 2 and "missing.xyz" in err and stdout == ""
    (tmp_path / "bad.xyz").write_text("1 2 3\n4 5\n")
    code, _, err = run(["plot", tmp_path / "bad.xyz", "-o", tmp_path / "p.svg"], capsys)
    assert code == 2 and "line 2" in err
    (tmp_path / "few.xyz").write_text("1 2 3\n")
    code, _, err = run(["denoise", tmp_path / "few.xyz", tmp_path / "o.xyz"], capsys)
    assert code == 3


def test_console_entry_point(tmp_path, scene_file):
    out = tmp_path / "s.xyz"
    cmd = [sys.executable, "-m", "linescan.cli", "scan", "--scene", str(scene_file), "-o", str(out),
           "--delta-theta", "0.5", "--frame-step", "5", "--frames", "3", *CALIB_FLAGS]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    assert proc.returncode == 0 and "points: 720" in proc.stdout and proc.stderr == ""
    proc = subprocess.run([sys.executable, "-m", "linescan.cli", "scan", "-o", str(out)], capture_output=True, text=True)
    assert proc.returncode == 1 and proc.stdout == "" and proc.stderr
