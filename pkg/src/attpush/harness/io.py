"""Readers and writers for maps, annotation files, fixation files and manifests.

Annotation files are JSON::

    {
      "schema_version": 1,
      "cues": [
        {"kind": "HeadPose", "x": 100, "y": 50, "roll": 0, "pitch": 0, "yaw": 40,
         "r": 0.9, "sigma": 30, "b": 1}
      ],
      "tracks": [
        {"actor": "a1", "samples": [
          {"t": 0, "visible": true, "kind": "HeadPose", "x": 10, "y": 12, "yaw": -30, "sigma": 8},
          {"t": 1, "visible": false}
        ]}
      ]
    }

A cue carries either ``b`` (static presence) or ``t0`` with optional ``b0``
and ``beta`` (dynamic presence).  Symmetric kinds may omit ``x``/``y``; they
default to the map centre.

Fixation files are CSV with columns ``stimulus,subject,t,x,y`` (header
optional, ``#`` comments allowed).
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Literal, Optional

import numpy as np
from PIL import Image
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from attpush.errors import ParseError, SchemaVersionMismatch
from attpush.gridmap import GridMap
from attpush.metrics import FixationRecord
from attpush.pushmap import DEFAULT_B0, DEFAULT_BETA, CueGeometry, CueKind, Dynamic, PushCue, Static
from attpush.timeline import ActorTrack, TrackSample

ANNOTATION_VERSION = 1
MANIFEST_VERSION = 1
MAP_SUFFIXES = (".png", ".tif", ".tiff", ".bmp", ".npy")


# ---------------------------------------------------------------- maps

def load_map(path) -> GridMap:
    """Read a single-channel map, linearly scaled to ``[0, 1]`` by its bit depth.

    ``.npy`` arrays are taken as-is.  Colour images are converted to luminance.
    """
    path = Path(path)
    if path.suffix == ".npy":
        return GridMap(np.load(path))
    try:
        with Image.open(path) as img:
            if img.mode in ("I;16", "I;16B", "I;16L", "I"):
                arr = np.asarray(img, dtype=np.float64)
                full = 65535.0
            elif img.mode == "F":
                return GridMap(np.clip(np.asarray(img, dtype=np.float64), 0, None))
            else:
                if img.mode != "L":
                    img = img.convert("L")
                arr = np.asarray(img, dtype=np.float64)
                full = 255.0
    except OSError as exc:
        raise ParseError(f"cannot read map: {exc}", path) from exc
    return GridMap(np.clip(arr / full, 0.0, 1.0))


def save_map(m: GridMap, path, bits: int = 16) -> Path:
    """Write a map; values are clipped to ``[0, 1]`` for raster formats."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if path.suffix == ".npy":
        np.save(path, m.values)
        return path
    v = np.clip(m.values, 0.0, 1.0)
    if bits == 16:
        Image.fromarray(np.rint(v * 65535).astype(np.uint16)).save(path)
    else:
        Image.fromarray(np.rint(v * 255).astype(np.uint8), mode="L").save(path)
    return path


def list_frames(directory) -> list[Path]:
    """Numbered frame files of a video directory in frame order."""
    directory = Path(directory)
    if not directory.is_dir():
        raise ParseError("not a frame directory", directory)
    files = [p for p in directory.iterdir() if p.suffix.lower() in MAP_SUFFIXES]

    def key(p):
        digits = "".join(ch for ch in p.stem if ch.isdigit())
        return (int(digits) if digits else -1, p.name)

    return sorted(files, key=key)


# ---------------------------------------------------------- annotations

class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class _CueEntry(_Strict):
    kind: CueKind
    x: Optional[float] = None
    y: Optional[float] = None
    roll: float = 0.0
    pitch: float = 0.0
    yaw: float = 0.0
    r: float = Field(1.0, ge=0.0, le=1.0)
    sigma: float = Field(1.0, gt=0.0)
    b: Optional[float] = Field(None, ge=0.0, le=1.0)
    t0: Optional[int] = None
    b0: Optional[float] = Field(None, ge=0.0, le=1.0)
    beta: Optional[float] = Field(None, ge=0.0)

    @model_validator(mode="after")
    def _presence(self):
        dynamic = self.t0 is not None
        if dynamic and self.b is not None:
            raise ValueError("give either b (static) or t0 (dynamic), not both")
        if not dynamic and (self.b0 is not None or self.beta is not None):
            raise ValueError("b0/beta need t0")
        if self.kind.dynamic and not dynamic:
            raise ValueError(f"{self.kind.value} cues need t0")
        if dynamic and not self.kind.dynamic:
            raise ValueError(f"{self.kind.value} cues are static; drop t0")
        if not self.kind.symmetric and (self.x is None or self.y is None):
            raise ValueError(f"{self.kind.value} cues need x and y")
        return self


class _SampleEntry(_Strict):
    t: int = Field(ge=0)
    visible: bool = True
    kind: Literal["HeadPose", "BodyPose"] = "HeadPose"
    x: Optional[float] = None
    y: Optional[float] = None
    roll: float = 0.0
    pitch: float = 0.0
    yaw: float = 0.0
    r: float = Field(1.0, ge=0.0, le=1.0)
    sigma: float = Field(1.0, gt=0.0)

    @model_validator(mode="after")
    def _geometry(self):
        if self.visible and (self.x is None or self.y is None):
            raise ValueError("visible samples need x and y")
        if not self.visible and (self.x is not None or self.y is not None):
            raise ValueError("hidden samples carry no geometry")
        return self


class _TrackEntry(_Strict):
    actor: str
    samples: list[_SampleEntry] = []


class _AnnotationFile(_Strict):
    schema_version: int
    cues: list[_CueEntry] = []
    tracks: list[_TrackEntry] = []


def _loc(err) -> str:
    out = ""
    for part in err["loc"]:
        out += f"[{part}]" if isinstance(part, int) else (f".{part}" if out else str(part))
    return out


def _read_json(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read: {exc}", path) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, path, f"line {exc.lineno}, column {exc.colno}") from exc


def _validate(model, data, path, version_key, expected):
    if isinstance(data, dict) and version_key in data and data[version_key] != expected:
        raise SchemaVersionMismatch(
            f"{version_key} {data[version_key]!r} not supported (expected {expected})", path, version_key
        )
    try:
        return model.model_validate(data)
    except ValidationError as exc:
        err = exc.errors()[0]
        raise ParseError(err["msg"], path, _loc(err) or None) from exc


def _geometry(entry, width, height, where, path):
    x = entry.x if entry.x is not None else (width - 1) / 2.0
    y = entry.y if entry.y is not None else (height - 1) / 2.0
    try:
        geom = CueGeometry(x, y, (entry.roll, entry.pitch, entry.yaw), entry.r, entry.sigma)
        geom.check_bounds(width, height)
    except ValueError as exc:
        raise ParseError(str(exc), path, where) from exc
    return geom


def load_annotations(path, width: int, height: int) -> tuple[list[PushCue], list[ActorTrack]]:
    """Cues and actor tracks of one stimulus, in pixel coordinates of a ``width x height`` map."""
    path = Path(path)
    doc = _validate(_AnnotationFile, _read_json(path), path, "schema_version", ANNOTATION_VERSION)
    cues = []
    for i, entry in enumerate(doc.cues):
        geom = _geometry(entry, width, height, f"cues[{i}]", path)
        if entry.t0 is not None:
            presence = Dynamic(
                entry.t0,
                entry.b0 if entry.b0 is not None else DEFAULT_B0,
                entry.beta if entry.beta is not None else DEFAULT_BETA,
            )
        else:
            presence = Static(entry.b if entry.b is not None else 1.0)
        cues.append(PushCue(entry.kind, geom, presence))
    tracks = []
    for i, tr in enumerate(doc.tracks):
        samples = []
        for j, s in enumerate(tr.samples):
            geom = _geometry(s, width, height, f"tracks[{i}].samples[{j}]", path) if s.visible else None
            samples.append(TrackSample(s.t, s.visible, geom, CueKind(s.kind)))
        try:
            tracks.append(ActorTrack(tr.actor, tuple(samples)))
        except ValueError as exc:
            raise ParseError(str(exc), path, f"tracks[{i}]") from exc
    return cues, tracks


# ------------------------------------------------------------ fixations

FIXATION_COLUMNS = ("stimulus", "subject", "t", "x", "y")


def load_fixations(path, stimulus: str | None = None) -> list[FixationRecord]:
    """Fixation records from a CSV file, optionally only those of one stimulus."""
    path = Path(path)
    out = []
    with path.open(newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
                continue
            cells = [c.strip() for c in row]
            if tuple(cells) == FIXATION_COLUMNS:
                continue
            if len(cells) != 5:
                raise ParseError(f"expected 5 columns, got {len(cells)}", path, f"line {lineno}")
            sid, subject, t, x, y = cells
            try:
                rec = FixationRecord(float(x), float(y), int(t), subject)
            except ValueError as exc:
                raise ParseError(str(exc), path, f"line {lineno}") from exc
            if stimulus is None or sid == stimulus:
                out.append(rec)
    return out


def save_fixations(records, path, stimulus: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(FIXATION_COLUMNS)
        for f in records:
            w.writerow([stimulus, f.subject, f.t, repr(float(f.x)), repr(float(f.y))])
    return path


# ------------------------------------------------------------- manifest

class _StimulusEntry(_Strict):
    id: str
    kind: Literal["still", "video"] = "still"
    saliency: str
    frames: Optional[str] = None
    annotations: Optional[str] = None
    fixations: str


class _ManifestFile(_Strict):
    schema_version: int
    stimuli: list[_StimulusEntry]


@dataclass(frozen=True)
class Stimulus:
    """One still or video of a dataset; a video's maps and frames are directories."""

    id: str
    kind: str
    width: int
    height: int
    n_frames: int
    saliency: Path
    fixations: Path | None = None
    annotations: Path | None = None
    frames: Path | None = None

    def saliency_paths(self) -> list[Path]:
        return [self.saliency] if self.kind == "still" else list_frames(self.saliency)

    def frame_paths(self) -> list[Path]:
        if self.frames is None:
            return []
        return [self.frames] if self.kind == "still" else list_frames(self.frames)


def make_stimulus(id, kind, saliency, fixations=None, annotations=None, frames=None) -> Stimulus:
    saliency = Path(saliency)
    maps = [saliency] if kind == "still" else list_frames(saliency)
    if not maps:
        raise ParseError("no saliency maps found", saliency)
    first = load_map(maps[0])
    return Stimulus(
        id=id, kind=kind, width=first.width, height=first.height, n_frames=len(maps),
        saliency=saliency, fixations=Path(fixations) if fixations else None,
        annotations=Path(annotations) if annotations else None,
        frames=Path(frames) if frames else None,
    )


def load_manifest(path) -> list[Stimulus]:
    """Stimuli of a dataset manifest; relative paths resolve against the manifest's folder."""
    path = Path(path)
    doc = _validate(_ManifestFile, _read_json(path), path, "schema_version", MANIFEST_VERSION)
    root = path.parent

    def res(p):
        return None if p is None else (root / p)

    ids = [s.id for s in doc.stimuli]
    if len(set(ids)) != len(ids):
        raise ParseError("duplicate stimulus ids", path, "stimuli")
    return [
        make_stimulus(s.id, s.kind, res(s.saliency), res(s.fixations), res(s.annotations), res(s.frames))
        for s in doc.stimuli
    ]


def write_manifest(stimuli: list[dict], path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps({"schema_version": MANIFEST_VERSION, "stimuli": stimuli}, indent=2) + "\n")
    return path
