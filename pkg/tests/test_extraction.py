import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from linescan import (
    BinaryImage,
    EmptyScan,
    Frame,
    PointSet2D,
    extract_pointset,
    frame_curve,
    red_channel,
    t1_smooth,
    threshold,
)

import oracles

masks = arrays(np.bool_, st.tuples(st.integers(1, 16), st.integers(1, 16)))


def test_extract_examples():
    assert extract_pointset(BinaryImage([[True, False], [False, True]])).as_set() == {(0, 0), (1, 1)}
    assert len(extract_pointset(BinaryImage(np.zeros((2, 2), bool)))) == 0
    assert len(extract_pointset(BinaryImage(np.ones((2, 2), bool)))) == 4


def ps(points, width=20, height=10):
    return PointSet2D(points, width, height)


def test_t1_examples():
    assert t1_smooth(ps([(10, 5), (12, 5), (14, 5)])).samples == {5: 12.0}
    assert t1_smooth(ps([(7, 0)])).samples == {0: 7.0}


def test_t1_derived_example_against_accumulator():
    points = [(0, 1), (3, 1), (0, 2)]
    expected = oracles.row_accumulator(points)
    assert expected == {1: 1.5, 2: 0.0}
    curve = t1_smooth(ps(points))
    assert curve.samples == expected
    assert curve.sample(1) == 1.5 and curve.sample(2) == 0.0
    with pytest.raises(KeyError):
        curve.sample(0)


def test_t1_empty_raises():
    with pytest.raises(EmptyScan):
        t1_smooth(ps([]))
    with pytest.raises(EmptyScan):
        frame_curve(Frame.blank(4, 4), 128)


def test_pointset_validation():
    with pytest.raises(ValueError):
        ps([(1, 1), (1, 1)])
    with pytest.raises(ValueError):
        ps([(20, 0)])
    with pytest.raises(ValueError):
        ps([(0, -1)])


@given(masks, st.randoms(use_true_random=False))
def test_t1_permutation_invariant(mask, random):
    points = extract_pointset(BinaryImage(mask)).points.tolist()
    if not points:
        return
    shuffled = points[:]
    random.shuffle(shuffled)
    h, w = mask.shape
    assert t1_smooth(PointSet2D(shuffled, w, h)) == t1_smooth(PointSet2D(points, w, h))


@given(masks, st.integers(0, 15))
def test_t1_row_locality(mask, row):
    h, w = mask.shape
    row %= h
    pruned = mask.copy()
    pruned[row] = False
    if not mask.any() or not pruned.any():
        return
    full = t1_smooth(extract_pointset(BinaryImage(mask))).samples
    cut = t1_smooth(extract_pointset(BinaryImage(pruned))).samples
    full.pop(row, None)
    assert cut == full


@given(masks)
def test_t1_mean_bounds(mask):
    if not mask.any():
        return
    curve = t1_smooth(extract_pointset(BinaryImage(mask)))
    for y, xbar in curve.samples.items():
        lit = np.flatnonzero(mask[y])
        assert lit.min() <= xbar <= lit.max()
    assert set(curve.samples) == set(np.flatnonzero(mask.any(axis=1)).tolist())


@settings(max_examples=150)
@given(arrays(np.uint8, st.tuples(st.integers(1, 64), st.integers(1, 64), st.just(3))), st.integers(1, 254))
def test_fused_and_stepwise_match_double_loop(pixels, alpha):
    expected = oracles.naive_red_threshold_curve(pixels, alpha)
    frame = Frame(pixels)
    if not expected:
        with pytest.raises(EmptyScan):
            frame_curve(frame, alpha)
        return
    stepwise = t1_smooth(extract_pointset(threshold(red_channel(frame), alpha)))
    fused = frame_curve(frame, alpha)
    assert stepwise.samples == expected
    assert fused == stepwise
