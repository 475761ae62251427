"""Attentional Push maps for individual cues.

Directional cues (a head or body turned away from the camera) push attention
along a ray; symmetric cues (frontal faces, centre bias, attention bounce,
scene cuts) place a centred Gaussian.  The frontal gate picks one or the
other, and a presence factor scales the result.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from attpush.errors import DegenerateDirection, TimeBeforeOnset
from attpush.gridmap import GridMap

DEFAULT_FRONTAL_THRESHOLD_DEG = 15.0
DEFAULT_PERP_COEFF = 0.5
DEFAULT_BETA = 0.1
DEFAULT_B0 = 1.0

_DIRECTION_EPS = 1e-9
# forward half-plane test tolerates rounding in the projection
_FORWARD_EPS = 1e-9


class CueKind(str, enum.Enum):
    HEAD_POSE = "HeadPose"
    BODY_POSE = "BodyPose"
    CENTER_BIAS = "CenterBias"
    DYNAMIC_POSE_CHANGE = "DynamicPoseChange"
    BOUNCE = "Bounce"
    SCENE_CHANGE = "SceneChange"

    @property
    def symmetric(self) -> bool:
        return self in _SYMMETRIC_KINDS

    @property
    def dynamic(self) -> bool:
        return self in _DYNAMIC_KINDS


_SYMMETRIC_KINDS = frozenset({CueKind.CENTER_BIAS, CueKind.BOUNCE, CueKind.SCENE_CHANGE})
_DYNAMIC_KINDS = frozenset({CueKind.DYNAMIC_POSE_CHANGE, CueKind.BOUNCE, CueKind.SCENE_CHANGE})

FRONTAL = (0.0, 0.0, 0.0)


@dataclass(frozen=True)
class CueGeometry:
    """Location, rotation ``(roll, pitch, yaw)`` in degrees, confidence and scale."""

    x: float
    y: float
    theta: tuple[float, float, float] = FRONTAL
    r: float = 1.0
    sigma: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "theta", tuple(float(a) for a in self.theta))
        if len(self.theta) != 3:
            raise ValueError("theta must be (roll, pitch, yaw)")
        if not 0.0 <= self.r <= 1.0:
            raise ValueError(f"confidence r={self.r} outside [0, 1]")
        if not self.sigma > 0:
            raise ValueError(f"sigma={self.sigma} must be positive")
        for a in self.theta:
            if not -180.0 < a <= 180.0:
                raise ValueError(f"angle {a} outside (-180, 180]")

    @property
    def roll(self) -> float:
        return self.theta[0]

    @property
    def pitch(self) -> float:
        return self.theta[1]

    @property
    def yaw(self) -> float:
        return self.theta[2]

    def check_bounds(self, width: int, height: int) -> None:
        if not (0 <= self.x < width and 0 <= self.y < height):
            raise ValueError(f"cue at ({self.x}, {self.y}) outside {width}x{height} map")


@dataclass(frozen=True)
class Static:
    b: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.b <= 1.0:
            raise ValueError(f"presence b={self.b} outside [0, 1]")

    def at(self, t: int) -> float:
        return self.b


@dataclass(frozen=True)
class Dynamic:
    t0: int
    b0: float = DEFAULT_B0
    beta: float = DEFAULT_BETA

    def __post_init__(self):
        if not 0.0 <= self.b0 <= 1.0:
            raise ValueError(f"presence b0={self.b0} outside [0, 1]")
        if self.beta < 0:
            raise ValueError(f"decay beta={self.beta} must be >= 0")

    def at(self, t: int) -> float:
        return habituation(self.b0, self.beta, t, self.t0)


Presence = Union[Static, Dynamic]


@dataclass(frozen=True)
class PushCue:
    kind: CueKind
    geometry: CueGeometry
    presence: Presence = field(default_factory=Static)

    def __post_init__(self):
        kind = CueKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind.symmetric and self.geometry.theta != FRONTAL:
            g = self.geometry
            object.__setattr__(self, "geometry", CueGeometry(g.x, g.y, FRONTAL, g.r, g.sigma))
        if kind is CueKind.CENTER_BIAS and not isinstance(self.presence, Static):
            raise ValueError("CenterBias cues are static")
        if kind.dynamic and not isinstance(self.presence, Dynamic):
            raise ValueError(f"{kind.value} cues need a Dynamic presence")


def habituation(b0: float, beta: float, t: int, t0: int) -> float:
    """Presence of a dynamic cue ``t - t0`` frames after onset: ``b0 * exp(-beta (t - t0))``."""
    if t < t0:
        raise TimeBeforeOnset(f"frame {t} precedes onset {t0}")
    return b0 * math.exp(-beta * (t - t0))


def project_direction(theta) -> float:
    """Image-plane angle (radians, y down) of a pose given as ``(roll, pitch, yaw)`` degrees.

    Roll spins about the gaze axis and does not move its projection, so it is
    ignored.  Positive yaw points image-right, positive pitch image-down.
    """
    _, pitch, yaw = (math.radians(a) for a in theta)
    dy = math.sin(pitch)
    dx = math.sin(yaw) * math.cos(pitch)
    if abs(dx) < _DIRECTION_EPS and abs(dy) < _DIRECTION_EPS:
        raise DegenerateDirection(f"pose {tuple(theta)} faces the camera")
    return math.atan2(dy, dx)


def _pixel_grid(width, height):
    ys, xs = np.mgrid[0:height, 0:width]
    return xs.astype(np.float64), ys.astype(np.float64)


def directional_map_phi(x: float, y: float, phi: float, spread: float, width: int, height: int) -> GridMap:
    """Ray from ``(x, y)`` at image angle ``phi`` with a Gaussian cross-section of std ``spread``."""
    xs, ys = _pixel_grid(width, height)
    dx, dy = xs - x, ys - y
    c, s = math.cos(phi), math.sin(phi)
    along = dx * c + dy * s
    perp = -dx * s + dy * c
    vals = np.exp(-(perp**2) / (2.0 * spread**2))
    vals[along < -_FORWARD_EPS] = 0.0
    return GridMap(vals)


def directional_map(g: CueGeometry, width: int, height: int, perp_coeff: float = DEFAULT_PERP_COEFF) -> GridMap:
    phi = project_direction(g.theta)
    return directional_map_phi(g.x, g.y, phi, perp_coeff * g.sigma, width, height)


def normalized_coords(width: int, height: int):
    """Pixel coordinates rescaled so the centre is 0 and each half-extent is 1."""
    xs, ys = _pixel_grid(width, height)
    nx = (xs - (width - 1) / 2.0) / (width / 2.0)
    ny = (ys - (height - 1) / 2.0) / (height / 2.0)
    return nx, ny


def unit_gaussian(nx, ny):
    return np.exp(-(np.square(nx) + np.square(ny)) / 2.0)


def symmetric_map(width: int, height: int) -> GridMap:
    if width < 1 or height < 1:
        raise ValueError("map needs at least one pixel")
    return GridMap(unit_gaussian(*normalized_coords(width, height)))


def is_frontal(cue: PushCue, threshold_deg: float = DEFAULT_FRONTAL_THRESHOLD_DEG) -> bool:
    if cue.kind.symmetric:
        return True
    g = cue.geometry
    return abs(g.pitch) <= threshold_deg and abs(g.yaw) <= threshold_deg


def assemble_push_map(
    cue: PushCue,
    t: int,
    width: int,
    height: int,
    frontal_threshold_deg: float = DEFAULT_FRONTAL_THRESHOLD_DEG,
    perp_coeff: float = DEFAULT_PERP_COEFF,
) -> GridMap:
    """Push map of one cue at frame ``t``.

    A near-frontal (or symmetric) cue contributes ``b(t) * sigma * G``; any
    other pose contributes ``b(t) * N``.  The unused term is skipped rather
    than multiplied by zero so the gated output equals its branch exactly.
    """
    b = cue.presence.at(t)
    if is_frontal(cue, frontal_threshold_deg):
        branch = cue.geometry.sigma * symmetric_map(width, height).values
    else:
        branch = directional_map(cue.geometry, width, height, perp_coeff).values
    return GridMap(b * branch)
