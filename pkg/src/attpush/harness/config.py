"""Run configuration: every tunable of a batch run, loadable from TOML."""

from __future__ import annotations

import dataclasses
import math
import sys
from dataclasses import dataclass
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from attpush import pushmap, timeline
from attpush.errors import ParseError, SchemaVersionMismatch
from attpush.metrics import DEFAULT_PX_PER_DEGREE
from attpush.pushmap import CueKind

CONFIG_VERSION = 1

# CLI / config names for each cue kind, in reporting order
CUE_NAMES = {
    "head": CueKind.HEAD_POSE,
    "body": CueKind.BODY_POSE,
    "center": CueKind.CENTER_BIAS,
    "dynpose": CueKind.DYNAMIC_POSE_CHANGE,
    "bounce": CueKind.BOUNCE,
    "scenecut": CueKind.SCENE_CHANGE,
}
ALL_CUES = tuple(CUE_NAMES)


def parse_cue_list(text) -> tuple[str, ...]:
    names = [n.strip() for n in (text.split(",") if isinstance(text, str) else text) if n.strip()]
    unknown = [n for n in names if n not in CUE_NAMES]
    if unknown:
        raise ValueError(f"unknown cue name(s) {unknown}; choose from {', '.join(ALL_CUES)}")
    # keep canonical order, drop duplicates
    return tuple(n for n in ALL_CUES if n in names)


@dataclass(frozen=True)
class RunConfig:
    frontal_threshold_deg: float = pushmap.DEFAULT_FRONTAL_THRESHOLD_DEG
    perp_coeff: float = pushmap.DEFAULT_PERP_COEFF
    beta: float = pushmap.DEFAULT_BETA
    b0: float = pushmap.DEFAULT_B0
    # dynamic cues weaker than this are dropped; bounds each habituation window
    presence_floor: float = 0.01
    # scale of injected centre/bounce/cut cues
    symmetric_sigma: float = 1.0
    px_per_degree: float = DEFAULT_PX_PER_DEGREE
    # std of fixation blur in pixels; None means one degree of visual angle
    blur_sigma: float | None = None
    # "balanced" (one negative per fixation), "all", or a fixed count
    auc_negatives: str | int = "balanced"
    seed: int = 0
    angle_threshold_deg: float = timeline.DEFAULT_ANGLE_THRESHOLD_DEG
    refractory: int = timeline.DEFAULT_REFRACTORY
    edge_threshold: float = timeline.DEFAULT_EDGE_THRESHOLD
    dilate_radius: int = timeline.DEFAULT_DILATE_RADIUS
    ecr_threshold: float = timeline.DEFAULT_ECR_THRESHOLD
    cues: tuple[str, ...] = ALL_CUES

    def __post_init__(self):
        object.__setattr__(self, "cues", parse_cue_list(self.cues))
        checks = [
            (0 <= self.frontal_threshold_deg <= 90, "frontal_threshold_deg must be in [0, 90]"),
            (self.perp_coeff > 0, "perp_coeff must be > 0"),
            (self.beta >= 0, "beta must be >= 0"),
            (0 <= self.b0 <= 1, "b0 must be in [0, 1]"),
            (0 <= self.presence_floor < 1, "presence_floor must be in [0, 1)"),
            (self.symmetric_sigma > 0, "symmetric_sigma must be > 0"),
            (self.px_per_degree > 0, "px_per_degree must be > 0"),
            (self.blur_sigma is None or self.blur_sigma > 0, "blur_sigma must be > 0"),
            (0 <= self.angle_threshold_deg <= 180, "angle_threshold_deg must be in [0, 180]"),
            (self.refractory >= 0, "refractory must be >= 0"),
            (self.edge_threshold >= 0, "edge_threshold must be >= 0"),
            (self.dilate_radius >= 0, "dilate_radius must be >= 0"),
            (0 <= self.ecr_threshold <= 1, "ecr_threshold must be in [0, 1]"),
        ]
        for ok, msg in checks:
            if not ok:
                raise ValueError(msg)
        neg = self.auc_negatives
        if isinstance(neg, bool) or not (neg in ("balanced", "all") or (isinstance(neg, int) and neg >= 1)):
            raise ValueError("auc_negatives must be 'balanced', 'all' or a positive integer")

    @property
    def fixation_sigma(self) -> float:
        return self.blur_sigma if self.blur_sigma is not None else self.px_per_degree

    def enabled(self, kind: CueKind) -> bool:
        return any(CUE_NAMES[n] is kind for n in self.cues)

    def negatives_for(self, n_fixations: int) -> int | None:
        if self.auc_negatives == "balanced":
            return n_fixations
        if self.auc_negatives == "all":
            return None
        return int(self.auc_negatives)

    def habituation_window(self) -> float:
        """Frames after onset for which a dynamic cue stays above the presence floor."""
        if self.b0 == 0:
            return -1.0
        if self.beta == 0 or self.presence_floor == 0:
            return math.inf
        return math.log(self.b0 / self.presence_floor) / self.beta

    def replace(self, **changes) -> "RunConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        d = {"version": CONFIG_VERSION}
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            d[f.name] = list(v) if isinstance(v, tuple) else v
        return d

    @classmethod
    def from_dict(cls, data: dict, source=None) -> "RunConfig":
        data = dict(data)
        version = data.pop("version", None)
        if version != CONFIG_VERSION:
            raise SchemaVersionMismatch(
                f"config version {version!r} not supported (expected {CONFIG_VERSION})", source, "version"
            )
        known = {f.name for f in dataclasses.fields(cls)}
        for key in data:
            if key not in known:
                raise ParseError(f"unknown config key {key!r}", source, key)
        if "cues" in data and isinstance(data["cues"], list):
            data["cues"] = tuple(data["cues"])
        try:
            return cls(**data)
        except (TypeError, ValueError) as exc:
            raise ParseError(str(exc), source) from exc

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        path = Path(path)
        try:
            data = tomllib.loads(path.read_text())
        except tomllib.TOMLDecodeError as exc:
            raise ParseError(str(exc), path) from exc
        return cls.from_dict(data, path)


def dump_toml(cfg: RunConfig) -> str:
    """Serialize a config in the same format :meth:`RunConfig.from_file` reads."""
    lines = []
    for key, value in cfg.to_dict().items():
        if value is None:
            continue
        if isinstance(value, str):
            lines.append(f'{key} = "{value}"')
        elif isinstance(value, list):
            lines.append(f"{key} = [{', '.join(repr(v).replace(chr(39), chr(34)) for v in value)}]")
        else:
            lines.append(f"{key} = {value!r}")
    return "\n".join(lines) + "\n"
