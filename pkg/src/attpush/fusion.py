"""Push-pull fusion of a saliency map with weighted push maps."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from attpush.errors import DimensionMismatch, EmptyInput, ZeroVariance
from attpush.gridmap import GridMap, minmax_normalize, skewness


@dataclass(frozen=True)
class WeightedPush:
    r: float
    map: GridMap

    def __post_init__(self):
        if not 0.0 <= self.r <= 1.0:
            raise ValueError(f"confidence r={self.r} outside [0, 1]")


def gamma_weight(s) -> float:
    """Absolute skewness of the saliency map; a flat map gets weight 0."""
    try:
        return abs(skewness(s))
    except ZeroVariance:
        return 0.0


def push_sum(pushes: Sequence[WeightedPush], shape) -> np.ndarray:
    """Per-pixel sum of ``r_i * M_i``.

    Terms are sorted per pixel before accumulation so the result does not
    depend on the order of ``pushes``.
    """
    if not pushes:
        return np.zeros(shape)
    for p in pushes:
        if p.map.shape != tuple(shape):
            raise DimensionMismatch(f"push map {p.map.shape} vs saliency {tuple(shape)}")
    terms = np.sort(np.stack([p.r * p.map.values for p in pushes]), axis=0)
    total = terms[0].copy()
    for term in terms[1:]:
        total += term
    return total


def control_value(s: GridMap, pushes: Sequence[WeightedPush]) -> np.ndarray:
    """Unnormalized control output ``g*S + P + g*(S . P)`` with ``P = sum r_i M_i``."""
    if s is None:
        raise EmptyInput("no saliency map")
    sal = minmax_normalize(s).values
    return _fuse(sal, push_sum(pushes, sal.shape))


def _fuse(sal, total):
    gamma = gamma_weight(sal)
    return gamma * sal + total + gamma * (sal * total)


def augment(s: GridMap, pushes: Sequence[WeightedPush] = ()) -> GridMap:
    """Augmented saliency map in ``[0, 1]``.

    When the pushes contribute nothing at all (no cues, or every ``r_i`` or
    map is zero) the normalized base map is returned as-is; otherwise a
    flat base map (``gamma = 0``) would be wiped out.
    """
    if s is None:
        raise EmptyInput("no saliency map")
    base = minmax_normalize(s)
    total = push_sum(pushes, base.shape)
    if not np.any(total):
        return base
    return minmax_normalize(_fuse(base.values, total))
