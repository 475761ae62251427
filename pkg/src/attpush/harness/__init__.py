"""Dataset ingestion, batch runs, reports, rendering and the command line."""

from attpush.harness.config import ALL_CUES, CUE_NAMES, RunConfig
from attpush.harness.io import (
    Stimulus,
    load_annotations,
    load_fixations,
    load_manifest,
    load_map,
    make_stimulus,
    save_map,
)
from attpush.harness.render import overlay, render_overlay
from attpush.harness.runner import ablate, evaluate, iter_frames, run_stimulus, write_report

__all__ = [
    "ALL_CUES",
    "CUE_NAMES",
    "RunConfig",
    "Stimulus",
    "ablate",
    "evaluate",
    "iter_frames",
    "load_annotations",
    "load_fixations",
    "load_manifest",
    "load_map",
    "make_stimulus",
    "overlay",
    "render_overlay",
    "run_stimulus",
    "save_map",
    "write_report",
]
