"""Synthetic stimuli with known answers, written as ordinary datasets.

Each builder writes saliency maps, annotations, fixations (and raw frames
for cut videos) under a directory and returns the manifest entry, so the
regular harness can load them.  ``build_suite`` writes the five-stimulus
ablation suite: static pose, centre bias, dynamic pose change, bounce and
scene cut, each with fixations that only its own cue explains.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from attpush.gridmap import GridMap
from attpush.harness.io import save_fixations, save_map, write_manifest
from attpush.metrics import FixationRecord

SIZE = 64


def gaussian_blob(cx: float, cy: float, sigma: float, width: int = SIZE, height: int = SIZE) -> GridMap:
    ys, xs = np.mgrid[0:height, 0:width]
    return GridMap(np.exp(-((xs - cx) ** 2 + (ys - cy) ** 2) / (2.0 * sigma**2)))


def fixation_cluster(rng, cx, cy, sigma, n, t=0, width=SIZE, height=SIZE, subject_prefix="s"):
    pts = rng.normal([cx, cy], sigma, size=(n, 2))
    pts[:, 0] = np.clip(pts[:, 0], 0, width - 1)
    pts[:, 1] = np.clip(pts[:, 1], 0, height - 1)
    return [FixationRecord(float(x), float(y), t, f"{subject_prefix}{i}") for i, (x, y) in enumerate(pts)]


def scene_image(seed: int, shift: int = 0, width: int = SIZE, height: int = SIZE, n_rects: int = 6) -> GridMap:
    """Grayscale scene of random rectangles, panned right by ``shift`` pixels."""
    rng = np.random.default_rng(seed)
    img = np.full((height, width), 0.1)
    for _ in range(n_rects):
        w, h = rng.integers(6, 16, size=2)
        x0 = rng.integers(0, width - w)
        y0 = rng.integers(0, height - h)
        img[y0:y0 + h, x0:x0 + w] = rng.uniform(0.4, 1.0)
    img = np.roll(img, shift, axis=1)
    return GridMap(img)


def cut_sequence(n_frames: int = 20, cut: int = 10, seeds=(1, 2), width: int = SIZE, height: int = SIZE):
    """Frames panning slowly through one scene, then hard-cutting to another at ``cut``."""
    return [
        scene_image(seeds[0] if t < cut else seeds[1], shift=t % 3, width=width, height=height)
        for t in range(n_frames)
    ]


def _annotations(path: Path, cues=(), tracks=()):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps({"schema_version": 1, "cues": list(cues), "tracks": list(tracks)}, indent=2) + "\n")
    return path


def _save_video(maps, directory: Path):
    directory.mkdir(parents=True, exist_ok=True)
    for t, m in enumerate(maps):
        save_map(m, directory / f"{t:04d}.png")


def directional_still(root, seed: int = 0, stim_id: str = "directional") -> dict:
    """Actor head at (16, 32) looking right at a fixation cluster around (48, 32)."""
    root = Path(root)
    rng = np.random.default_rng(seed)
    save_map(gaussian_blob(16, 32, 4.0), root / "maps" / f"{stim_id}.png")
    _annotations(root / "ann" / f"{stim_id}.json", cues=[
        {"kind": "HeadPose", "x": 16, "y": 32, "roll": 0, "pitch": 0, "yaw": 90, "r": 1.0, "sigma": 8.0, "b": 1.0},
    ])
    save_fixations(fixation_cluster(rng, 48, 32, 3.0, 40), root / "fix" / f"{stim_id}.csv", stim_id)
    return {
        "id": stim_id, "kind": "still", "saliency": f"maps/{stim_id}.png",
        "annotations": f"ann/{stim_id}.json", "fixations": f"fix/{stim_id}.csv",
    }


def pose_still(root, seed: int = 1, stim_id: str = "pose") -> dict:
    """Head and body both turned left; fixations on the far left, base saliency on the actor."""
    root = Path(root)
    rng = np.random.default_rng(seed)
    save_map(gaussian_blob(50, 20, 4.0), root / "maps" / f"{stim_id}.png")
    _annotations(root / "ann" / f"{stim_id}.json", cues=[
        {"kind": "HeadPose", "x": 50, "y": 20, "yaw": -90, "r": 0.9, "sigma": 6.0, "b": 1.0},
        {"kind": "BodyPose", "x": 50, "y": 26, "yaw": -80, "r": 0.6, "sigma": 8.0, "b": 1.0},
    ])
    save_fixations(fixation_cluster(rng, 12, 21, 3.0, 40), root / "fix" / f"{stim_id}.csv", stim_id)
    return {
        "id": stim_id, "kind": "still", "saliency": f"maps/{stim_id}.png",
        "annotations": f"ann/{stim_id}.json", "fixations": f"fix/{stim_id}.csv",
    }


def center_still(root, seed: int = 2, stim_id: str = "center") -> dict:
    """No actors; base saliency in a corner, viewers fixate the centre."""
    root = Path(root)
    rng = np.random.default_rng(seed)
    save_map(gaussian_blob(8, 56, 4.0), root / "maps" / f"{stim_id}.png")
    _annotations(root / "ann" / f"{stim_id}.json")
    save_fixations(fixation_cluster(rng, 31.5, 31.5, 5.0, 40), root / "fix" / f"{stim_id}.csv", stim_id)
    return {
        "id": stim_id, "kind": "still", "saliency": f"maps/{stim_id}.png",
        "annotations": f"ann/{stim_id}.json", "fixations": f"fix/{stim_id}.csv",
    }


def _video_entry(stim_id, frames=False):
    entry = {
        "id": stim_id, "kind": "video", "saliency": f"maps/{stim_id}",
        "annotations": f"ann/{stim_id}.json", "fixations": f"fix/{stim_id}.csv",
    }
    if frames:
        entry["frames"] = f"frames/{stim_id}"
    return entry


def dynpose_video(root, seed: int = 3, n_frames: int = 20, turn: int = 8, stim_id: str = "dynpose") -> dict:
    """An actor at the top centre snaps its head downward at ``turn``.

    Before the turn the actor faces the camera (a frontal cue, which only adds
    a central blob); afterwards viewers follow the new gaze down the image.
    The static track pose only points down from ``turn`` on as well, so both
    pose cues help, the dynamic one through its extra transient weight.
    """
    root = Path(root)
    rng = np.random.default_rng(seed)
    _save_video([gaussian_blob(12, 10, 4.0)] * n_frames, root / "maps" / stim_id)
    samples = []
    for t in range(n_frames):
        pitch = 0.0 if t < turn else 90.0
        samples.append({"t": t, "visible": True, "kind": "HeadPose", "x": 48, "y": 6,
                        "pitch": pitch, "r": 0.9, "sigma": 6.0})
    _annotations(root / "ann" / f"{stim_id}.json", tracks=[{"actor": "a1", "samples": samples}])
    fix = []
    for t in range(turn, min(turn + 10, n_frames)):
        fix += fixation_cluster(rng, 48, 52, 3.0, 8, t=t)
    save_fixations(fix, root / "fix" / f"{stim_id}.csv", stim_id)
    return _video_entry(stim_id)


def bounce_video(root, seed: int = 4, n_frames: int = 20, exit_frame: int = 6, stim_id: str = "bounce") -> dict:
    """A face in the corner leaves the frame at ``exit_frame``; attention re-centres."""
    root = Path(root)
    rng = np.random.default_rng(seed)
    _save_video([gaussian_blob(56, 58, 3.0)] * n_frames, root / "maps" / stim_id)
    samples = []
    for t in range(n_frames):
        if t < exit_frame:
            samples.append({"t": t, "visible": True, "kind": "HeadPose", "x": 56, "y": 58, "r": 0.8, "sigma": 1.0})
        else:
            samples.append({"t": t, "visible": False})
    _annotations(root / "ann" / f"{stim_id}.json", tracks=[{"actor": "a1", "samples": samples}])
    fix = []
    for t in range(exit_frame, min(exit_frame + 8, n_frames)):
        fix += fixation_cluster(rng, 31.5, 31.5, 3.0, 8, t=t)
    save_fixations(fix, root / "fix" / f"{stim_id}.csv", stim_id)
    return _video_entry(stim_id)


def scenecut_video(root, seed: int = 5, n_frames: int = 20, cut: int = 10, stim_id: str = "scenecut") -> dict:
    """Hard cut at ``cut``; viewers re-centre right after it."""
    root = Path(root)
    rng = np.random.default_rng(seed)
    _save_video([gaussian_blob(10, 10, 4.0)] * n_frames, root / "maps" / stim_id)
    _save_video(cut_sequence(n_frames, cut), root / "frames" / stim_id)
    _annotations(root / "ann" / f"{stim_id}.json")
    fix = []
    for t in range(cut, min(cut + 6, n_frames)):
        fix += fixation_cluster(rng, 31.5, 31.5, 3.0, 8, t=t)
    save_fixations(fix, root / "fix" / f"{stim_id}.csv", stim_id)
    return _video_entry(stim_id, frames=True)


SUITE_BUILDERS = (pose_still, center_still, dynpose_video, bounce_video, scenecut_video)


def build_suite(root) -> Path:
    """Write the five-stimulus ablation suite and return its manifest path."""
    root = Path(root)
    entries = [build(root) for build in SUITE_BUILDERS]
    return write_manifest(entries, root / "manifest.json")


def build_directional(root, seed: int = 0) -> Path:
    root = Path(root)
    return write_manifest([directional_still(root, seed)], root / "manifest.json")


def main(argv=None) -> int:
    import argparse

    p = argparse.ArgumentParser(prog="python -m attpush.synthetic", description=__doc__.splitlines()[0])
    p.add_argument("out", help="directory to write the dataset into")
    p.add_argument("--which", choices=("suite", "directional"), default="suite")
    args = p.parse_args(argv)
    manifest = build_suite(args.out) if args.which == "suite" else build_directional(args.out)
    print(manifest)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
