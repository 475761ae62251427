"""Command line: ``attpush augment|evaluate|ablate|render``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from attpush import __version__
from attpush.errors import AttPushError
from attpush.harness.config import ALL_CUES, RunConfig, parse_cue_list
from attpush.harness.io import load_manifest, load_map, make_stimulus, save_map
from attpush.harness.render import render_overlay
from attpush.harness.runner import ablate, evaluate, iter_augmented, write_report

log = logging.getLogger("attpush")


def _config(args) -> RunConfig:
    cfg = RunConfig.from_file(args.config) if args.config else RunConfig()
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.px_per_degree is not None:
        overrides["px_per_degree"] = args.px_per_degree
    return cfg.replace(**overrides) if overrides else cfg


def cmd_augment(args) -> int:
    cfg = _config(args)
    src = Path(args.stimulus)
    kind = "video" if src.is_dir() else "still"
    stim = make_stimulus(src.stem, kind, src, annotations=args.annotations, frames=args.frames)
    out = Path(args.out)
    for t, path, _, augmented, n_cues in iter_augmented(stim, cfg):
        target = out if kind == "still" else out / f"{path.stem}.png"
        save_map(augmented, target)
        log.info("frame %d: %d cue(s) -> %s", t, n_cues, target)
    return 0


def cmd_evaluate(args) -> int:
    cfg = _config(args)
    report = evaluate(load_manifest(args.manifest), cfg, jobs=args.jobs)
    write_report(report, args.report, cfg, "evaluate")
    for variant, entry in report.summary().items():
        print(f"{variant:>10}  AUC {_fmt(entry['auc'])}  NSS {_fmt(entry['nss'])}  CC {_fmt(entry['cc'])}")
    return 0


def cmd_ablate(args) -> int:
    cfg = _config(args)
    cues = parse_cue_list(args.cues)
    report = ablate(load_manifest(args.manifest), cfg, cues, jobs=args.jobs)
    if args.report:
        write_report(report, args.report, cfg, "ablate")
    for variant, entry in report.summary().items():
        print(f"{variant:>10}  AUC {_fmt(entry['auc'])}  NSS {_fmt(entry['nss'])}  CC {_fmt(entry['cc'])}")
    return 0


def cmd_render(args) -> int:
    render_overlay(load_map(args.frame), load_map(args.map), args.out, cmap=args.cmap)
    return 0


def _fmt(v):
    return "  n/a" if v is None else f"{v:.3f}"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML run configuration")
    common.add_argument("--seed", type=int, help="override the AUC sampling seed")
    common.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    common.add_argument("--px-per-degree", type=float, help="pixels per degree of visual angle")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="attpush", description="Attentional Push saliency augmentation.")
    p.add_argument("--version", action="version", version=f"attpush {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("augment", parents=[common], help="augment one saliency map or a directory of frame maps")
    a.add_argument("stimulus", help="saliency map image, or a directory of numbered per-frame maps")
    a.add_argument("--annotations", help="annotation JSON for the stimulus")
    a.add_argument("--frames", help="raw frame image directory (enables scene-cut detection)")
    a.add_argument("--out", required=True, help="output map (still) or directory (video)")
    a.set_defaults(func=cmd_augment)

    e = sub.add_parser("evaluate", parents=[common], help="score base and augmented maps over a dataset")
    e.add_argument("manifest", help="dataset manifest JSON")
    e.add_argument("--report", required=True, help="report path (.csv or .json)")
    e.set_defaults(func=cmd_evaluate)

    b = sub.add_parser("ablate", parents=[common], help="score single-cue augmentations")
    b.add_argument("manifest")
    b.add_argument("--cues", default=",".join(ALL_CUES), help=f"comma list from {','.join(ALL_CUES)}")
    b.add_argument("--report", help="report path (.csv or .json)")
    b.set_defaults(func=cmd_ablate)

    r = sub.add_parser("render", help="overlay a map on its frame")
    r.add_argument("frame")
    r.add_argument("map")
    r.add_argument("--out", required=True)
    r.add_argument("--cmap", default="jet")
    r.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (AttPushError, ValueError, OSError) as exc:
        print(f"attpush: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
