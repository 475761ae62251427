"""Fixation-based evaluation: AUC, NSS, CC and fixation density maps."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from attpush.errors import DimensionMismatch, NoFixations, ZeroVariance
from attpush.gridmap import GridMap, minmax_normalize, standardize

DEFAULT_PX_PER_DEGREE = 30.0


@dataclass(frozen=True)
class FixationRecord:
    x: float
    y: float
    t: int = 0
    subject: str = ""


def _values(m) -> np.ndarray:
    return m.values if isinstance(m, GridMap) else np.asarray(m, dtype=np.float64)


def fixation_pixels(fixations: Iterable[FixationRecord], width: int, height: int) -> np.ndarray:
    """Nearest-pixel ``(row, col)`` indices of each fixation, duplicates kept."""
    pts = [(f.y, f.x) for f in fixations]
    if not pts:
        raise NoFixations("no fixations")
    arr = np.floor(np.asarray(pts, dtype=np.float64) + 0.5).astype(np.int64)
    rows = np.clip(arr[:, 0], 0, height - 1)
    cols = np.clip(arr[:, 1], 0, width - 1)
    return np.stack([rows, cols], axis=1)


def fixation_density(
    fixations: Sequence[FixationRecord], width: int, height: int, blur_sigma: float
) -> GridMap:
    """Sum of isotropic Gaussians at the fixations, min-max normalized."""
    if not fixations:
        raise NoFixations("no fixations")
    if blur_sigma <= 0:
        raise ValueError("blur_sigma must be positive")
    xs = np.arange(width, dtype=np.float64)
    ys = np.arange(height, dtype=np.float64)
    acc = np.zeros((height, width))
    # canonical order keeps the floating-point sum independent of input order
    for fx, fy in sorted((float(f.x), float(f.y)) for f in fixations):
        gx = np.exp(-((xs - fx) ** 2) / (2.0 * blur_sigma**2))
        gy = np.exp(-((ys - fy) ** 2) / (2.0 * blur_sigma**2))
        acc += np.outer(gy, gx)
    return minmax_normalize(acc)


def roc_area(positives: np.ndarray, negatives: np.ndarray) -> float:
    """Trapezoidal ROC area over every distinct threshold; ties earn half credit."""
    pos = np.asarray(positives, dtype=np.float64)
    neg = np.asarray(negatives, dtype=np.float64)
    if pos.size == 0 or neg.size == 0:
        raise ValueError("need at least one positive and one negative")
    thresholds = np.unique(np.concatenate([pos, neg]))[::-1]
    pos_sorted = np.sort(pos)
    neg_sorted = np.sort(neg)
    # counts of scores >= each threshold, descending thresholds
    tp = pos.size - np.searchsorted(pos_sorted, thresholds, side="left")
    fp = neg.size - np.searchsorted(neg_sorted, thresholds, side="left")
    tp = np.concatenate([[0], tp]).astype(np.int64)
    fp = np.concatenate([[0], fp]).astype(np.int64)
    # twice the integer trapezoid area keeps the sum exact
    area2 = int(np.sum(np.diff(fp) * (tp[1:] + tp[:-1])))
    return area2 / (2.0 * pos.size * neg.size)


def auc(
    m,
    fixations: Sequence[FixationRecord],
    n_negatives: int | None = None,
    seed: int | np.random.SeedSequence = 0,
) -> float:
    """ROC area separating fixated pixels from pixels drawn off-fixation.

    ``n_negatives=None`` uses every non-fixated pixel; otherwise that many are
    drawn uniformly without replacement using ``seed``.
    """
    vals = _values(m)
    height, width = vals.shape
    idx = fixation_pixels(fixations, width, height)
    positives = vals[idx[:, 0], idx[:, 1]]
    fixated = np.zeros(vals.shape, dtype=bool)
    fixated[idx[:, 0], idx[:, 1]] = True
    pool = np.flatnonzero(~fixated.ravel())
    if pool.size == 0:
        raise ValueError("every pixel is fixated; no negatives available")
    if n_negatives is not None and n_negatives < pool.size:
        if n_negatives < 1:
            raise ValueError("n_negatives must be >= 1")
        rng = np.random.default_rng(seed)
        pool = np.sort(rng.choice(pool, size=n_negatives, replace=False))
    negatives = vals.ravel()[pool]
    return roc_area(positives, negatives)


def nss(m, fixations: Sequence[FixationRecord]) -> float:
    """Mean of the standardized map at fixation pixels."""
    vals = _values(m)
    height, width = vals.shape
    idx = fixation_pixels(fixations, width, height)
    z = standardize(vals)
    return float(np.mean(z[idx[:, 0], idx[:, 1]]))


def cc(a, b) -> float:
    """Pearson correlation of two maps over all pixels."""
    va, vb = _values(a), _values(b)
    if va.shape != vb.shape:
        raise DimensionMismatch(f"{va.shape} vs {vb.shape}")
    da = va.ravel() - va.mean()
    db = vb.ravel() - vb.mean()
    if va.max() == va.min() or vb.max() == vb.min():
        raise ZeroVariance("correlation needs two non-constant maps")
    r = float(np.dot(da, db) / math.sqrt(float(np.dot(da, da)) * float(np.dot(db, db))))
    return min(1.0, max(-1.0, r))


@dataclass
class EvalRow:
    stimulus: str
    variant: str
    auc: float | None
    nss: float | None
    cc: float | None
    n_fixations: int
    n_frames: int = 1
    skipped_frames: int = 0
    failed_frames: int = 0
    error: str = ""

    def as_dict(self) -> dict:
        return {
            "stimulus": self.stimulus,
            "variant": self.variant,
            "auc": self.auc,
            "nss": self.nss,
            "cc": self.cc,
            "n_fixations": self.n_fixations,
            "n_frames": self.n_frames,
            "skipped_frames": self.skipped_frames,
            "failed_frames": self.failed_frames,
            "error": self.error,
        }


@dataclass
class EvalReport:
    rows: list[EvalRow] = field(default_factory=list)

    def variants(self) -> list[str]:
        seen = []
        for row in self.rows:
            if row.variant not in seen:
                seen.append(row.variant)
        return seen

    def summary(self) -> dict[str, dict]:
        """Mean score per variant over the rows that produced a value."""
        out = {}
        for variant in self.variants():
            rows = [r for r in self.rows if r.variant == variant]
            entry = {"n_stimuli": len(rows)}
            for metric in ("auc", "nss", "cc"):
                vals = [getattr(r, metric) for r in rows if getattr(r, metric) is not None]
                entry[metric] = math.fsum(vals) / len(vals) if vals else None
            out[variant] = entry
        return out
