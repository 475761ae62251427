"""Dynamic cue events: head/body turns, attention bounces and hard cuts."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import ndimage

from attpush.errors import DimensionMismatch
from attpush.gridmap import GridMap
from attpush.pushmap import (
    DEFAULT_B0,
    DEFAULT_BETA,
    CueGeometry,
    CueKind,
    Dynamic,
    PushCue,
)

DEFAULT_ANGLE_THRESHOLD_DEG = 20.0
DEFAULT_REFRACTORY = 10
DEFAULT_EDGE_THRESHOLD = 0.1
DEFAULT_DILATE_RADIUS = 2
DEFAULT_ECR_THRESHOLD = 0.5


@dataclass(frozen=True)
class TrackSample:
    t: int
    visible: bool
    geometry: CueGeometry | None = None
    kind: CueKind = CueKind.HEAD_POSE

    def __post_init__(self):
        kind = CueKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind not in (CueKind.HEAD_POSE, CueKind.BODY_POSE):
            raise ValueError(f"track samples are HeadPose or BodyPose, not {kind.value}")
        if self.visible != (self.geometry is not None):
            raise ValueError("geometry must be present exactly when the sample is visible")


@dataclass(frozen=True)
class ActorTrack:
    actor: str
    samples: tuple[TrackSample, ...] = field(default_factory=tuple)

    def __post_init__(self):
        samples = tuple(self.samples)
        object.__setattr__(self, "samples", samples)
        frames = [s.t for s in samples]
        if any(b <= a for a, b in zip(frames, frames[1:])):
            raise ValueError(f"track {self.actor!r}: frame indices must be strictly increasing")

    def at(self, t: int) -> TrackSample | None:
        for s in self.samples:
            if s.t == t:
                return s
            if s.t > t:
                break
        return None


@dataclass(frozen=True)
class CueEvent:
    t0: int
    cue: PushCue

    def __post_init__(self):
        if not self.cue.kind.dynamic:
            raise ValueError(f"{self.cue.kind.value} is not a dynamic cue kind")


def gaze_vector(theta) -> np.ndarray:
    """Unit 3-D gaze direction for ``(roll, pitch, yaw)`` degrees; (0, 0, 1) faces the camera."""
    _, pitch, yaw = (math.radians(a) for a in theta)
    return np.array([
        math.sin(yaw) * math.cos(pitch),
        math.sin(pitch),
        math.cos(yaw) * math.cos(pitch),
    ])


def gaze_angle_deg(theta_a, theta_b) -> float:
    dot = float(np.dot(gaze_vector(theta_a), gaze_vector(theta_b)))
    return math.degrees(math.acos(max(-1.0, min(1.0, dot))))


def pose_change_events(
    track: ActorTrack,
    angle_threshold_deg: float = DEFAULT_ANGLE_THRESHOLD_DEG,
    refractory: int = DEFAULT_REFRACTORY,
    b0: float = DEFAULT_B0,
    beta: float = DEFAULT_BETA,
) -> list[CueEvent]:
    """A DynamicPoseChange event wherever the pose turns sharply between adjacent frames."""
    events = []
    last_event = None
    prev = None
    for sample in track.samples:
        if (
            sample.visible
            and prev is not None
            and prev.visible
            and sample.t - prev.t == 1
            and gaze_angle_deg(prev.geometry.theta, sample.geometry.theta) > angle_threshold_deg
            and (last_event is None or sample.t - last_event >= refractory)
        ):
            cue = PushCue(CueKind.DYNAMIC_POSE_CHANGE, sample.geometry, Dynamic(sample.t, b0, beta))
            events.append(CueEvent(sample.t, cue))
            last_event = sample.t
        prev = sample
    return events


def center_cue(kind: CueKind, t0: int, width: int, height: int,
               b0: float = DEFAULT_B0, beta: float = DEFAULT_BETA, sigma: float = 1.0) -> PushCue:
    geom = CueGeometry((width - 1) / 2.0, (height - 1) / 2.0, sigma=sigma)
    return PushCue(kind, geom, Dynamic(t0, b0, beta))


def bounce_events(
    track: ActorTrack,
    width: int,
    height: int,
    b0: float = DEFAULT_B0,
    beta: float = DEFAULT_BETA,
    sigma: float = 1.0,
) -> list[CueEvent]:
    """A centred Bounce event at every visible-to-hidden transition of the track."""
    events = []
    for prev, cur in zip(track.samples, track.samples[1:]):
        if prev.visible and not cur.visible:
            events.append(CueEvent(cur.t, center_cue(CueKind.BOUNCE, cur.t, width, height, b0, beta, sigma)))
    return events


def edge_mask(frame, edge_threshold: float = DEFAULT_EDGE_THRESHOLD) -> np.ndarray:
    """Pixels whose central-difference gradient magnitude exceeds the threshold."""
    v = frame.values if isinstance(frame, GridMap) else np.asarray(frame, dtype=np.float64)
    if min(v.shape) < 2:
        return np.zeros(v.shape, dtype=bool)
    gy, gx = np.gradient(v)
    return np.hypot(gx, gy) > edge_threshold


def dilate(mask: np.ndarray, radius: int) -> np.ndarray:
    """Dilate with a ``(2r+1)`` square, i.e. Chebyshev distance ``<= r``."""
    if radius <= 0:
        return mask.copy()
    return ndimage.binary_dilation(mask, structure=np.ones((2 * radius + 1, 2 * radius + 1), dtype=bool))


def edge_change_ratio(
    frame_a, frame_b,
    edge_threshold: float = DEFAULT_EDGE_THRESHOLD,
    dilate_radius: int = DEFAULT_DILATE_RADIUS,
) -> float:
    sa = frame_a.shape if isinstance(frame_a, GridMap) else np.shape(frame_a)
    sb = frame_b.shape if isinstance(frame_b, GridMap) else np.shape(frame_b)
    if tuple(sa) != tuple(sb):
        raise DimensionMismatch(f"{sa} vs {sb}")
    ea = edge_mask(frame_a, edge_threshold)
    eb = edge_mask(frame_b, edge_threshold)

    def outgoing(e_from, e_to):
        n = int(e_from.sum())
        if n == 0:
            return 0.0
        return int((e_from & ~dilate(e_to, dilate_radius)).sum()) / n

    return max(outgoing(ea, eb), outgoing(eb, ea))


def scene_change(
    frame_a, frame_b,
    edge_threshold: float = DEFAULT_EDGE_THRESHOLD,
    dilate_radius: int = DEFAULT_DILATE_RADIUS,
    ecr_threshold: float = DEFAULT_ECR_THRESHOLD,
) -> tuple[bool, float]:
    ecr = edge_change_ratio(frame_a, frame_b, edge_threshold, dilate_radius)
    return ecr > ecr_threshold, ecr


def scene_change_events(
    frames: Sequence,
    edge_threshold: float = DEFAULT_EDGE_THRESHOLD,
    dilate_radius: int = DEFAULT_DILATE_RADIUS,
    ecr_threshold: float = DEFAULT_ECR_THRESHOLD,
    b0: float = DEFAULT_B0,
    beta: float = DEFAULT_BETA,
    sigma: float = 1.0,
) -> list[CueEvent]:
    """A centred SceneChange event at each frame that cuts hard from its predecessor."""
    events = []
    for t in range(1, len(frames)):
        cut, _ = scene_change(frames[t - 1], frames[t], edge_threshold, dilate_radius, ecr_threshold)
        if cut:
            h, w = np.shape(frames[t])
            events.append(CueEvent(t, center_cue(CueKind.SCENE_CHANGE, t, w, h, b0, beta, sigma)))
    return events
