import numpy as np
import pytest
from scipy.stats import qmc

from ppsonet import kernels
from ppsonet.errors import InvalidBoundsError, UnsupportedDimensionError
from ppsonet.lowdisc import (SobolStream, box_discrepancy, direction_numbers, max_dimension,
                             scale_to_bounds, sobol_points)


def van_der_corput_gray(count):
    """Base-2 radical inverse of the Gray code of 0..count-1, by string reversal."""
    out = []
    for n in range(count):
        g = n ^ (n >> 1)
        bits = format(g, "b")[::-1]
        out.append(sum(int(b) / 2 ** (i + 1) for i, b in enumerate(bits)))
    return np.array(out)


def test_first_dimension_is_van_der_corput():
    pts = sobol_points(1, 64)[:, 0]
    assert np.array_equal(pts, van_der_corput_gray(64))
    assert list(pts[:8]) == [0.0, 0.5, 0.75, 0.25, 0.375, 0.875, 0.625, 0.125]


def test_single_point_is_first_element():
    pt = sobol_points(1, 1)
    assert pt.shape == (1, 1)
    assert 0.0 <= pt[0, 0] < 1.0
    assert pt[0, 0] == van_der_corput_gray(1)[0]


@pytest.mark.parametrize("dim", [2, 7, 40, 300])
def test_matches_scipy_unscrambled(dim):
    ours = sobol_points(dim, 128)
    ref = qmc.Sobol(dim, scramble=False, bits=32).random(128)
    np.testing.assert_array_equal(ours, ref)


def test_high_dimension_matches_scipy():
    dim = max_dimension()
    ours = sobol_points(dim, 8)
    ref = qmc.Sobol(dim, scramble=False, bits=32).random(8)
    np.testing.assert_array_equal(ours, ref)


@pytest.mark.parametrize("m", range(1, 7))
def test_stratification(m):
    pts = sobol_points(10, 2 ** m)
    for d in range(10):
        bins = np.floor(pts[:, d] * 2 ** m).astype(int)
        assert sorted(bins) == list(range(2 ** m)), (m, d)


def test_eight_points_one_per_octant_interval():
    pts = sobol_points(2, 8)
    for d in range(2):
        assert sorted(np.floor(pts[:, d] * 8).astype(int)) == list(range(8))


def test_discrepancy_beats_pseudo_random():
    sobol = box_discrepancy(sobol_points(2, 256))
    random = [box_discrepancy(np.random.default_rng(s).random((256, 2))) for s in range(20)]
    assert sobol < np.mean(random)


def test_box_discrepancy_brute_force():
    rng = np.random.default_rng(11)
    pts = rng.random((50, 2))
    worst = 0.0
    for i in range(1, 17):
        for j in range(1, 17):
            a, b = i / 16, j / 16
            inside = np.sum((pts[:, 0] < a) & (pts[:, 1] < b))
            worst = max(worst, abs(inside / 50 - a * b))
    assert box_discrepancy(pts) == pytest.approx(worst, abs=1e-12)


def test_deterministic_under_seed():
    a = sobol_points(43, 50, seed=7)
    b = sobol_points(43, 50, seed=7)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, sobol_points(43, 50, seed=8))


def test_shift_is_addition_mod_one():
    base = sobol_points(5, 32)
    shifted = sobol_points(5, 32, seed=3)
    offset = (shifted[0] - base[0]) % 1.0
    np.testing.assert_allclose((base + offset) % 1.0, shifted, atol=1e-9)
    assert np.all((shifted >= 0) & (shifted < 1))


def test_shift_keeps_stratification():
    pts = sobol_points(4, 64, seed=9)
    for d in range(4):
        assert sorted(np.floor(pts[:, d] * 64).astype(int)) == list(range(64))


def test_stream_continues_sequence():
    stream = SobolStream(3)
    head = stream.take(10)
    tail = stream.take(6)
    np.testing.assert_array_equal(np.vstack([head, tail]), sobol_points(3, 16))
    np.testing.assert_array_equal(sobol_points(3, 6, skip=10), tail)


def test_dimension_limits():
    with pytest.raises(UnsupportedDimensionError):
        direction_numbers(max_dimension() + 1)
    with pytest.raises(UnsupportedDimensionError):
        sobol_points(0, 4)


@pytest.mark.parametrize("point,lb,ub,expected", [(0.0, -10, 10, -10.0), (0.5, -10, 10, 0.0),
                                                   (0.25, 2, 6, 3.0)])
def test_scale_examples(point, lb, ub, expected):
    assert scale_to_bounds([[point]], lb, ub)[0, 0] == expected


def test_scale_per_dimension_bounds():
    out = scale_to_bounds([[0.5, 0.5]], [0, -4], [2, 4])
    np.testing.assert_array_equal(out, [[1.0, 0.0]])


def test_scale_rejects_inverted_bounds():
    with pytest.raises(InvalidBoundsError):
        scale_to_bounds([[0.5]], 1.0, 1.0)


@pytest.mark.parametrize("dim,start,count", [(1, 0, 64), (9, 1, 50), (200, 37, 33)])
def test_kernel_flavours_agree(dim, start, count):
    d = direction_numbers(dim)
    np.testing.assert_array_equal(kernels.sobol_ints_numpy(d, start, count),
                                  kernels.sobol_ints_numba(d, start, count))
