"""Heatmap overlays of a map on its grayscale frame."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from matplotlib import colormaps
from PIL import Image

from attpush.errors import DimensionMismatch
from attpush.gridmap import GridMap


def overlay(base_image, m: GridMap, cmap: str = "jet") -> np.ndarray:
    """RGB ``uint8`` blend where each pixel's map value is both colour and opacity.

    A zero map leaves the grayscale frame untouched; a map of ones paints the
    colormap's top colour everywhere.
    """
    gray = base_image.values if isinstance(base_image, GridMap) else np.asarray(base_image, dtype=np.float64)
    vals = m.values if isinstance(m, GridMap) else np.asarray(m, dtype=np.float64)
    if gray.shape != vals.shape:
        raise DimensionMismatch(f"frame {gray.shape} vs map {vals.shape}")
    alpha = np.clip(vals, 0.0, 1.0)[..., None]
    color = colormaps[cmap](np.clip(vals, 0.0, 1.0))[..., :3]
    rgb = np.repeat(np.clip(gray, 0.0, 1.0)[..., None], 3, axis=2)
    out = (1.0 - alpha) * rgb + alpha * color
    return np.rint(out * 255).astype(np.uint8)


def render_overlay(base_image, m: GridMap, out_path, cmap: str = "jet") -> Path:
    out_path = Path(out_path)
    rgb = overlay(base_image, m, cmap)
    try:
        out_path.parent.mkdir(parents=True, exist_ok=True)
        Image.fromarray(rgb, mode="RGB").save(out_path)
    except (OSError, ValueError) as exc:
        raise OSError(f"cannot write overlay {out_path}: {exc}") from exc
    return out_path
