"""Dense 2-D intensity maps and the handful of statistics the fusion needs.

A :class:`GridMap` wraps a read-only ``float64`` array of shape
``(height, width)``.  Index ``[y, x]`` addresses the pixel whose centre sits
at image coordinate ``(x, y)``, with ``y`` growing downwards.
"""

from __future__ import annotations

import math

import numpy as np

from attpush.errors import DimensionMismatch, ZeroVariance


class GridMap:
    """Immutable non-negative 2-D map."""

    __slots__ = ("_values",)

    def __init__(self, values):
        arr = np.array(values, dtype=np.float64, copy=True)
        if arr.ndim != 2:
            raise ValueError(f"GridMap needs a 2-D array, got shape {arr.shape}")
        if arr.size == 0:
            raise ValueError("GridMap needs at least one pixel")
        if not np.all(np.isfinite(arr)):
            raise ValueError("GridMap values must be finite")
        if np.any(arr < 0):
            raise ValueError("GridMap values must be non-negative")
        arr.flags.writeable = False
        self._values = arr

    @classmethod
    def zeros(cls, width: int, height: int) -> "GridMap":
        return cls(np.zeros((height, width)))

    @classmethod
    def full(cls, width: int, height: int, value: float) -> "GridMap":
        return cls(np.full((height, width), float(value)))

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def width(self) -> int:
        return self._values.shape[1]

    @property
    def height(self) -> int:
        return self._values.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self._values.shape

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._values
        return self._values.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, GridMap):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self._values, other._values)

    def __hash__(self):
        return hash((self.shape, self._values.tobytes()))

    def __repr__(self):
        return f"GridMap({self.width}x{self.height}, min={self._values.min():.4g}, max={self._values.max():.4g})"


def _as_array(m) -> np.ndarray:
    if isinstance(m, GridMap):
        return m.values
    return np.asarray(m, dtype=np.float64)


def minmax_normalize(m: GridMap) -> GridMap:
    """Affinely rescale to ``[0, 1]``; a constant map becomes all zeros."""
    v = _as_array(m)
    lo = v.min()
    span = v.max() - lo
    if span == 0:
        return GridMap(np.zeros_like(v))
    return GridMap((v - lo) / span)


def _central_moments(m):
    v = _as_array(m).ravel()
    if v.size < 2:
        raise ZeroVariance("need at least two pixels")
    if v.max() == v.min():
        raise ZeroVariance("map is constant")
    centered = v - v.mean()
    return centered, np.mean(centered**2)


def standardize(m) -> np.ndarray:
    """Zero-mean, unit-variance (population) copy of the map as a signed array."""
    centered, var = _central_moments(m)
    return (centered / np.sqrt(var)).reshape(_as_array(m).shape)


def skewness(m) -> float:
    """Third standardized central moment, population convention.

    Moments are accumulated with ``math.fsum`` so the result is exactly
    rounded and independent of summation order.
    """
    v = _as_array(m).ravel()
    if v.size < 2:
        raise ZeroVariance("need at least two pixels")
    if v.max() == v.min():
        raise ZeroVariance("map is constant")
    n = v.size
    centered = v - math.fsum(v) / n
    sq = centered * centered
    m2 = math.fsum(sq) / n
    m3 = math.fsum(sq * centered) / n
    return m3 / m2**1.5


def combine(a: GridMap, b: GridMap, mode: str = "add", wa: float = 1.0, wb: float = 1.0) -> GridMap:
    va, vb = _as_array(a), _as_array(b)
    if va.shape != vb.shape:
        raise DimensionMismatch(f"{va.shape} vs {vb.shape}")
    if mode == "add":
        return GridMap(wa * va + wb * vb)
    if mode == "mul":
        return GridMap((wa * va) * (wb * vb))
    raise ValueError(f"unknown combine mode {mode!r}")
