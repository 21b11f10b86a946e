"""Sobol low-discrepancy points for particle initialisation.

Direction numbers come from the Joe & Kuo ``new-joe-kuo-6.21201`` table
bundled in ``data/``. Points are produced in Gray-code order as 32-bit
integers and divided by 2**32, so every coordinate lies in [0, 1).

A non-zero ``seed`` applies a random shift: a seeded offset per dimension is
added modulo 1 (done exactly, in the integer domain). ``seed=0`` returns the
plain sequence, starting with the all-zeros point at index 0.
"""
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

import numpy as np

from . import kernels
from .errors import InvalidBoundsError, UnsupportedDimensionError

TABLE_NAME = "new-joe-kuo-6.21201.txt"
_SCALE = 2.0 ** -kernels.SOBOL_BITS


@lru_cache(maxsize=1)
def _table():
    """Parse the bundled table into a list of (s, a, m) for dimensions 2..."""
    rows = []
    text = resources.files("ppsonet").joinpath("data").joinpath(TABLE_NAME).read_text()
    for line in text.splitlines()[1:]:
        parts = line.split()
        if not parts:
            continue
        s, a = int(parts[1]), int(parts[2])
        rows.append((s, a, tuple(int(m) for m in parts[3:3 + s])))
    return rows


def max_dimension():
    return len(_table()) + 1


def _direction_row(s, a, m):
    bits = kernels.SOBOL_BITS
    v = [0] * bits
    for i in range(min(s, bits)):
        v[i] = m[i] << (bits - 1 - i)
    for i in range(s, bits):
        val = v[i - s] ^ (v[i - s] >> s)
        for k in range(1, s):
            if (a >> (s - 1 - k)) & 1:
                val ^= v[i - k]
        v[i] = val
    return v


@lru_cache(maxsize=8)
def direction_numbers(dim):
    """(dim, 32) uint32 array of direction integers for the first ``dim`` coordinates."""
    if dim < 1:
        raise UnsupportedDimensionError(f"dimension must be >= 1, got {dim}")
    if dim > max_dimension():
        raise UnsupportedDimensionError(
            f"dimension {dim} exceeds the bundled table ({max_dimension()} dimensions)")
    bits = kernels.SOBOL_BITS
    out = np.empty((dim, bits), dtype=np.uint32)
    out[0] = [1 << (bits - 1 - i) for i in range(bits)]
    table = _table()
    for d in range(1, dim):
        out[d] = _direction_row(*table[d - 1])
    out.setflags(write=False)
    return out


def _shift_ints(dim, seed):
    if seed == 0:
        return None
    rng = np.random.default_rng(seed)
    return rng.integers(0, 2 ** kernels.SOBOL_BITS, size=dim, dtype=np.uint64).astype(np.uint32)


@dataclass
class SobolStream:
    """Sequential Sobol generator; successive :meth:`take` calls continue the sequence."""

    dimension: int
    seed: int = 0
    next_index: int = 0
    shift: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        self._directions = direction_numbers(self.dimension)
        if self.shift is None:
            self.shift = _shift_ints(self.dimension, self.seed)

    def take_ints(self, count):
        if count < 1:
            raise ValueError(f"count must be >= 1, got {count}")
        if self.next_index + count > 2 ** kernels.SOBOL_BITS:
            raise ValueError("Sobol index space exhausted")
        ints = kernels.sobol_ints(self._directions, self.next_index, count)
        self.next_index += count
        if self.shift is not None:
            # uint32 addition wraps, i.e. addition modulo 1 after scaling
            ints = ints + self.shift[None, :]
        return ints

    def take(self, count):
        return self.take_ints(count) * _SCALE


def sobol_points(dim, count, seed=0, skip=0):
    """Return a ``count`` x ``dim`` matrix of Sobol points in [0, 1).

    ``skip`` drops that many leading indices (particle initialisation uses
    ``skip=1`` to avoid the all-zeros point).
    """
    stream = SobolStream(dim, seed=seed, next_index=skip)
    return stream.take(count)


def scale_to_bounds(points, lb, ub):
    """Map unit-cube points onto the box [lb, ub) coordinate-wise."""
    points = np.asarray(points, dtype=float)
    dim = points.shape[-1]
    lb = np.broadcast_to(np.asarray(lb, dtype=float), (dim,))
    ub = np.broadcast_to(np.asarray(ub, dtype=float), (dim,))
    if np.any(lb >= ub):
        bad = int(np.argmax(lb >= ub))
        raise InvalidBoundsError(f"lower bound {lb[bad]} >= upper bound {ub[bad]} at dimension {bad}")
    return lb + points * (ub - lb)


def box_discrepancy(points, grid=16):
    """Star-discrepancy proxy over anchored boxes on a ``grid``-per-axis lattice.

    Maximum over boxes ``[0, k/grid)`` (one ``k`` per axis, ``k = 1..grid``) of
    ``|fraction of points inside - box volume|``. Only defined for dim <= 3,
    where the lattice stays small.
    """
    points = np.asarray(points, dtype=float)
    n, dim = points.shape
    if dim > 3:
        raise ValueError("box_discrepancy supports at most 3 dimensions")
    # cell index of each point, then cumulative counts give anchored-box counts
    cells = np.minimum((points * grid).astype(np.int64), grid - 1)
    hist = np.zeros((grid,) * dim)
    np.add.at(hist, tuple(cells.T), 1.0)
    for axis in range(dim):
        hist = np.cumsum(hist, axis=axis)
    edges = np.arange(1, grid + 1) / grid
    volume = np.ones((grid,) * dim)
    for axis in range(dim):
        shape = [1] * dim
        shape[axis] = grid
        volume = volume * edges.reshape(shape)
    return float(np.max(np.abs(hist / n - volume)))
