"""Batch orchestration: per-frame augmentation and scoring of a dataset."""

from __future__ import annotations

import csv
import io
import json
import logging
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

import attpush
from attpush.fusion import WeightedPush, augment
from attpush.gridmap import GridMap, minmax_normalize
from attpush.harness.config import CUE_NAMES, RunConfig
from attpush.harness.io import Stimulus, load_annotations, load_fixations, load_map
from attpush.metrics import EvalReport, EvalRow, auc, cc, fixation_density, nss
from attpush.pushmap import CueGeometry, CueKind, PushCue, Static, assemble_push_map
from attpush.timeline import (
    ActorTrack,
    CueEvent,
    bounce_events,
    pose_change_events,
    scene_change_events,
)

log = logging.getLogger(__name__)

VARIANTS = ("base", "augmented")


def center_bias_cue(width: int, height: int, sigma: float = 1.0) -> PushCue:
    geom = CueGeometry((width - 1) / 2.0, (height - 1) / 2.0, sigma=sigma)
    return PushCue(CueKind.CENTER_BIAS, geom, Static(1.0))


def timeline_events(stim: Stimulus, tracks: Sequence[ActorTrack], cfg: RunConfig) -> list[CueEvent]:
    """Dynamic events of a stimulus under ``cfg``, sorted by onset."""
    events = []
    common = dict(b0=cfg.b0, beta=cfg.beta)
    for track in tracks:
        if cfg.enabled(CueKind.DYNAMIC_POSE_CHANGE):
            events += pose_change_events(track, cfg.angle_threshold_deg, cfg.refractory, **common)
        if cfg.enabled(CueKind.BOUNCE):
            events += bounce_events(track, stim.width, stim.height, sigma=cfg.symmetric_sigma, **common)
    if cfg.enabled(CueKind.SCENE_CHANGE) and stim.kind == "video" and stim.frames is not None:
        frames = [load_map(p) for p in stim.frame_paths()]
        events += scene_change_events(
            frames, cfg.edge_threshold, cfg.dilate_radius, cfg.ecr_threshold,
            sigma=cfg.symmetric_sigma, **common,
        )
    return sorted(events, key=lambda e: (e.t0, e.cue.kind.value))


def active_cues(
    t: int,
    static_cues: Sequence[PushCue],
    tracks: Sequence[ActorTrack],
    events: Sequence[CueEvent],
    width: int,
    height: int,
    cfg: RunConfig,
) -> list[PushCue]:
    """Every enabled cue present at frame ``t``."""
    out = []
    for cue in static_cues:
        if not cfg.enabled(cue.kind):
            continue
        if cue.kind.dynamic:
            t0 = cue.presence.t0
            if t < t0 or cue.presence.at(t) < cfg.presence_floor:
                continue
        out.append(cue)
    for track in tracks:
        sample = track.at(t)
        if sample is not None and sample.visible and cfg.enabled(sample.kind):
            out.append(PushCue(sample.kind, sample.geometry, Static(1.0)))
    if cfg.enabled(CueKind.CENTER_BIAS):
        out.append(center_bias_cue(width, height, cfg.symmetric_sigma))
    for ev in events:
        if ev.t0 <= t and cfg.enabled(ev.cue.kind) and ev.cue.presence.at(t) >= cfg.presence_floor:
            out.append(ev.cue)
    return out


def weighted_pushes(cues: Sequence[PushCue], t: int, width: int, height: int, cfg: RunConfig) -> list[WeightedPush]:
    return [
        WeightedPush(
            c.geometry.r,
            assemble_push_map(c, t, width, height, cfg.frontal_threshold_deg, cfg.perp_coeff),
        )
        for c in cues
    ]


@dataclass
class FrameMaps:
    t: int
    base: GridMap
    augmented: GridMap
    fixations: list
    n_cues: int


def iter_augmented(stim: Stimulus, cfg: RunConfig) -> Iterator[tuple[int, Path, GridMap, GridMap, int]]:
    """``(t, map path, normalized base, augmented, cue count)`` for every frame."""
    static_cues, tracks = ([], [])
    if stim.annotations is not None:
        static_cues, tracks = load_annotations(stim.annotations, stim.width, stim.height)
    events = timeline_events(stim, tracks, cfg)
    for t, path in enumerate(stim.saliency_paths()):
        raw = load_map(path)
        if raw.shape != (stim.height, stim.width):
            raise attpush.DimensionMismatch(f"{path}: {raw.shape} vs {(stim.height, stim.width)}")
        cues = active_cues(t, static_cues, tracks, events, stim.width, stim.height, cfg)
        pushes = weighted_pushes(cues, t, stim.width, stim.height, cfg)
        yield t, path, minmax_normalize(raw), augment(raw, pushes), len(cues)


def iter_frames(stim: Stimulus, cfg: RunConfig) -> Iterator[FrameMaps]:
    """Base and augmented map of every frame, with that frame's fixations."""
    if stim.fixations is None:
        raise attpush.ParseError(f"stimulus {stim.id!r} has no fixation file")
    fixations = load_fixations(stim.fixations, stim.id)
    for t, _, base, augmented, n_cues in iter_augmented(stim, cfg):
        frame_fix = fixations if stim.kind == "still" else [f for f in fixations if f.t == t]
        yield FrameMaps(t, base, augmented, frame_fix, n_cues)


def frame_seed(cfg: RunConfig, stimulus_id: str, t: int) -> np.random.SeedSequence:
    """Per-(stimulus, frame) sampler seed; shared by every variant of a run."""
    return np.random.SeedSequence([cfg.seed, zlib.crc32(stimulus_id.encode()), t])


def score_map(m: GridMap, fixations, cfg: RunConfig, seed) -> tuple[float, float, float]:
    density = fixation_density(fixations, m.width, m.height, cfg.fixation_sigma)
    return (
        auc(m, fixations, cfg.negatives_for(len(fixations)), seed),
        nss(m, fixations),
        cc(m, density),
    )


class _Accumulator:
    def __init__(self):
        self.scores = []
        self.n_fixations = 0
        self.failed = 0
        self.error = ""

    def add(self, fn):
        try:
            self.scores.append(fn())
        except (attpush.AttPushError, ValueError) as exc:
            self.failed += 1
            if not self.error:
                self.error = f"{type(exc).__name__}: {exc}"

    def row(self, stim_id, variant, n_frames, skipped) -> EvalRow:
        if self.scores:
            arr = np.asarray(self.scores, dtype=np.float64)
            means = [float(np.mean(arr[:, k])) for k in range(3)]
        else:
            means = [None, None, None]
        return EvalRow(stim_id, variant, *means, n_fixations=self.n_fixations, n_frames=n_frames,
                       skipped_frames=skipped, failed_frames=self.failed, error=self.error)


def run_stimulus(stim: Stimulus, cfg: RunConfig, variant_names: tuple[str, str] = VARIANTS) -> list[EvalRow]:
    """Scores of the base and augmented maps; videos average over frames that have fixations."""
    base_acc, aug_acc = _Accumulator(), _Accumulator()
    n_frames = skipped = 0
    try:
        for fm in iter_frames(stim, cfg):
            n_frames += 1
            if not fm.fixations:
                skipped += 1
                continue
            seed = frame_seed(cfg, stim.id, fm.t)
            for acc, m in ((base_acc, fm.base), (aug_acc, fm.augmented)):
                acc.n_fixations += len(fm.fixations)
                acc.add(lambda m=m: score_map(m, fm.fixations, cfg, seed))
    except (attpush.AttPushError, ValueError, OSError) as exc:
        log.warning("stimulus %s failed: %s", stim.id, exc)
        msg = f"{type(exc).__name__}: {exc}"
        for acc in (base_acc, aug_acc):
            acc.error = acc.error or msg
    return [
        base_acc.row(stim.id, variant_names[0], n_frames, skipped),
        aug_acc.row(stim.id, variant_names[1], n_frames, skipped),
    ]


def _run_job(job):
    stim, cfg, names = job
    return run_stimulus(stim, cfg, names)


def _map_jobs(jobs_list, jobs: int):
    if jobs <= 1 or len(jobs_list) <= 1:
        return [_run_job(j) for j in jobs_list]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_job, jobs_list))


def evaluate(stimuli: Sequence[Stimulus], cfg: RunConfig, jobs: int = 1) -> EvalReport:
    results = _map_jobs([(s, cfg, VARIANTS) for s in stimuli], jobs)
    report = EvalReport()
    for rows in results:
        report.rows.extend(rows)
    return report


def ablation_configs(cfg: RunConfig, cue_names: Sequence[str]) -> dict[str, RunConfig]:
    """``none``, one config per single cue, and ``all`` (the union of ``cue_names``)."""
    configs = {"none": cfg.replace(cues=())}
    for name in cue_names:
        configs[name] = cfg.replace(cues=(name,))
    configs["all"] = cfg.replace(cues=tuple(cue_names))
    return configs


def ablate(stimuli: Sequence[Stimulus], cfg: RunConfig, cue_names: Sequence[str], jobs: int = 1) -> EvalReport:
    """One augmented variant per single cue plus ``all``, with ``none`` as the base map.

    Every variant of a stimulus shares the same frame seeds, so score
    differences come from the cues alone.
    """
    configs = ablation_configs(cfg, cue_names)
    jobs_list = []
    for s in stimuli:
        for name, sub in configs.items():
            if name != "none":
                jobs_list.append((s, sub, ("none", name)))
    results = _map_jobs(jobs_list, jobs)
    report = EvalReport()
    per_stim = len(configs) - 1
    for i, s in enumerate(stimuli):
        block = results[i * per_stim:(i + 1) * per_stim]
        report.rows.append(block[0][0])
        report.rows.extend(rows[1] for rows in block)
    return report


# --------------------------------------------------------------- reports

def report_header(cfg: RunConfig, command: str) -> dict:
    return {"tool": "attpush", "version": attpush.__version__, "command": command, "config": cfg.to_dict()}


def report_to_json(report: EvalReport, cfg: RunConfig, command: str = "evaluate") -> str:
    doc = dict(report_header(cfg, command))
    doc["rows"] = [r.as_dict() for r in report.rows]
    doc["summary"] = report.summary()
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def report_to_csv(report: EvalReport, cfg: RunConfig, command: str = "evaluate") -> str:
    buf = io.StringIO()
    header = report_header(cfg, command)
    buf.write(f"# {header['tool']} {header['version']} {command}\n")
    buf.write(f"# config: {json.dumps(header['config'], sort_keys=True)}\n")
    w = csv.writer(buf, lineterminator="\n")
    cols = list(EvalRow.__dataclass_fields__)
    w.writerow(cols)
    for r in report.rows:
        d = r.as_dict()
        w.writerow([_cell(d[c]) for c in cols])
    for variant, entry in report.summary().items():
        w.writerow(["__mean__", variant, _cell(entry["auc"]), _cell(entry["nss"]), _cell(entry["cc"]),
                    "", "", "", "", f"n_stimuli={entry['n_stimuli']}"])
    return buf.getvalue()


def write_report(report: EvalReport, path, cfg: RunConfig, command: str = "evaluate") -> Path:
    """Write CSV, or JSON when ``path`` ends in ``.json``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = report_to_json(report, cfg, command) if path.suffix == ".json" else report_to_csv(report, cfg, command)
    path.write_text(text)
    return path


__all__ = [
    "CUE_NAMES",
    "FrameMaps",
    "ablate",
    "ablation_configs",
    "active_cues",
    "evaluate",
    "iter_augmented",
    "iter_frames",
    "run_stimulus",
    "timeline_events",
    "write_report",
]
