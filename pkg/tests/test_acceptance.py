"""Exit criteria.  Each test is one criterion; the terminal summary prints PASS/FAIL per line."""

import math
import time

import numpy as np
import pytest

from oracles import (
    abs_skew_scalar,
    control_scalar,
    density_scalar,
    flat,
    mann_whitney_auc,
    minmax_scalar,
    nss_scalar,
    pearson_scalar,
)

from attpush import GridMap, ZeroVariance, minmax_normalize, standardize, synthetic
from attpush.cli import main
from attpush.fusion import WeightedPush, augment
from attpush.harness.config import ALL_CUES, RunConfig
from attpush.harness.io import load_manifest
from attpush.harness.runner import ablate, evaluate
from attpush.metrics import FixationRecord, auc, cc, fixation_density, nss
from attpush.pushmap import CueGeometry, CueKind, Dynamic, PushCue, Static, assemble_push_map, habituation
from attpush.timeline import edge_change_ratio, scene_change_events

pytestmark = pytest.mark.acceptance


def test_c1_metric_oracle_equivalence():
    rng = np.random.default_rng(2024)
    start = time.perf_counter()
    for case in range(200):
        h, w = (int(v) for v in rng.integers(2, 17, size=2))
        vals = rng.random((h, w))
        if case % 2:
            vals = np.floor(vals * 6) / 6  # heavy ties
        n = int(rng.integers(1, min(20, h * w - 1) + 1))
        cells = rng.choice(h * w, size=n, replace=False)
        pts = [(int(c % w), int(c // w)) for c in cells]
        fix = [FixationRecord(x, y) for x, y in pts]
        m = GridMap(vals)
        if np.ptp(vals) == 0:
            continue
        pos = [vals[y, x] for x, y in pts]
        neg = [vals[y, x] for y in range(h) for x in range(w) if (x, y) not in set(pts)]
        assert abs(auc(m, fix, n_negatives=None) - mann_whitney_auc(pos, neg)) <= 1e-12
        assert abs(nss(m, fix) - nss_scalar(vals.tolist(), pts)) <= 1e-9
        dens = fixation_density(fix, w, h, 1.5)
        np.testing.assert_allclose(flat(dens.values), density_scalar(pts, w, h, 1.5), atol=1e-12)
        if np.ptp(dens.values) > 0:
            assert abs(cc(m, dens) - pearson_scalar(flat(vals), flat(dens.values))) <= 1e-9
    assert time.perf_counter() - start < 10.0


def test_c2_fusion_oracle_exact():
    rng = np.random.default_rng(7)
    for _ in range(100):
        h, w = (int(v) for v in rng.integers(1, 9, size=2))
        if h * w < 2:
            w = 2
        s = minmax_normalize(GridMap(rng.random((h, w)) ** rng.uniform(0.3, 4)))
        pushes = [
            (float(rng.uniform(0.01, 1)), rng.random((h, w)) * float(rng.uniform(0.1, 3)))
            for _ in range(int(rng.integers(1, 6)))
        ]
        sal = flat(s.values)
        expected = minmax_scalar(control_scalar(sal, [(r, flat(m)) for r, m in pushes], abs_skew_scalar(sal)))
        out = augment(s, [WeightedPush(r, GridMap(m)) for r, m in pushes])
        assert flat(out.values) == expected


def _gauss_pixel(x, y, w, h):
    nx = (x - (w - 1) / 2) / (w / 2)
    ny = (y - (h - 1) / 2) / (h / 2)
    return math.exp(-(nx * nx + ny * ny) / 2)


def _ray_pixel(x, y, cx, cy, phi, spread):
    ux, uy = math.cos(phi), math.sin(phi)
    along = (x - cx) * ux + (y - cy) * uy
    if along < 0:
        return 0.0
    d = abs((x - cx) * uy - (y - cy) * ux)
    return math.exp(-d * d / (2 * spread * spread))


def test_c3_frontal_gate():
    b, sigma = 0.7, 2.0
    frontal = PushCue(CueKind.HEAD_POSE, CueGeometry(2, 1, (0, 0, 0), sigma=sigma), Static(b))
    turned = PushCue(CueKind.HEAD_POSE, CueGeometry(1, 2, (0, 0, 90), sigma=sigma), Static(b))
    mf = assemble_push_map(frontal, 0, 5, 5, perp_coeff=0.5).values
    mt = assemble_push_map(turned, 0, 5, 5, perp_coeff=0.5).values
    for y in range(5):
        for x in range(5):
            assert abs(mf[y, x] - b * sigma * _gauss_pixel(x, y, 5, 5)) <= 1e-12
            assert abs(mt[y, x] - b * _ray_pixel(x, y, 1, 2, 0.0, 0.5 * sigma)) <= 1e-12


def test_c4_habituation():
    for beta in (0.0, 0.1, math.log(2)):
        for dt in range(0, 101):
            for b0 in (1.0, 0.6):
                assert abs(habituation(b0, beta, 50 + dt, 50) - b0 * math.exp(-beta * dt)) <= 1e-12
                cue = PushCue(CueKind.BOUNCE, CueGeometry(1, 1), Dynamic(50, b0, beta))
                assert abs(cue.presence.at(50 + dt) - b0 * math.exp(-beta * dt)) <= 1e-12
    assert abs(habituation(1.0, math.log(2), 1, 0) - 0.5) <= 1e-12


def test_c5_degenerate_behaviour():
    flat_map = GridMap.full(8, 6, 0.42)
    fix = [FixationRecord(1, 1), FixationRecord(4, 3), FixationRecord(7, 5)]
    assert auc(flat_map, fix, n_negatives=None) == 0.5
    assert auc(flat_map, fix, n_negatives=3, seed=1) == 0.5
    with pytest.raises(ZeroVariance):
        standardize(flat_map)
    with pytest.raises(ZeroVariance):
        nss(flat_map, fix)
    rng = np.random.default_rng(3)
    for _ in range(20):
        s = GridMap(rng.random((6, 7)) * 5)
        pushes = [WeightedPush(0.0, GridMap(rng.random((6, 7)))) for _ in range(3)]
        out = augment(s, pushes)
        assert out.values.tobytes() == minmax_normalize(s).values.tobytes()


def test_c6_directional_fixture(directional_manifest):
    start = time.perf_counter()
    stim = load_manifest(directional_manifest)[0]
    assert (stim.width, stim.height) == (64, 64)
    for cfg in (RunConfig(cues=("head",)), RunConfig()):
        rep = evaluate([stim], cfg)
        base, aug = rep.rows
        assert base.n_fixations == 40
        assert aug.auc > base.auc
        assert aug.cc > base.cc
        assert aug.nss - base.nss >= 0.5, (cfg.cues, base.nss, aug.nss)
    assert time.perf_counter() - start < 5.0


def test_c7_ablation_all_dominates(suite_manifest):
    stims = load_manifest(suite_manifest)
    assert len(stims) == 5
    summary = ablate(stims, RunConfig(), ALL_CUES).summary()
    all_nss = summary["all"]["nss"]
    for name in ALL_CUES:
        assert all_nss >= summary[name]["nss"], (name, summary[name]["nss"], all_nss)
    assert all_nss > summary["none"]["nss"]


def test_c8_determinism_across_jobs(suite_manifest, tmp_path):
    one, eight = tmp_path / "j1.csv", tmp_path / "j8.csv"
    assert main(["evaluate", str(suite_manifest), "--jobs", "1", "--seed", "11", "--report", str(one)]) == 0
    assert main(["evaluate", str(suite_manifest), "--jobs", "8", "--seed", "11", "--report", str(eight)]) == 0
    assert one.read_bytes() == eight.read_bytes()
    j1, j8 = tmp_path / "j1.json", tmp_path / "j8.json"
    assert main(["evaluate", str(suite_manifest), "--jobs", "1", "--report", str(j1)]) == 0
    assert main(["evaluate", str(suite_manifest), "--jobs", "8", "--report", str(j8)]) == 0
    assert j1.read_bytes() == j8.read_bytes()


def test_c9_scene_change_detector():
    frames = synthetic.cut_sequence(20, cut=10)
    events = scene_change_events(frames)
    assert [e.t0 for e in events] == [10]
    assert events[0].cue.kind is CueKind.SCENE_CHANGE
    for t in range(1, 20):
        a, b = frames[t - 1], frames[t]
        assert abs(edge_change_ratio(a, b) - edge_change_ratio(b, a)) <= 1e-12
