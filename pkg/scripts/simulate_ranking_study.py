"""Simulate a listening-study ranking session against the in-process store.

Builds one 14-stimulus session per affect axis, simulates raters whose
perceived intensities are the ground truth plus Gaussian noise, submits their
rankings through the SessionStore, and prints per-axis agreement statistics.

Usage:
    python3 scripts/simulate_ranking_study.py [--raters 12] [--noise 0.5] [--seed 7]
"""

import argparse
import json
import tempfile
from pathlib import Path

import numpy as np

from emoquant.service import SessionStore, load_sessions_config

N_STIMULI = 14


def build_config(path, seed):
    sessions = []
    for axis_idx, axis in enumerate(("arousal", "dominance", "valence")):
        stimuli = []
        for i in range(N_STIMULI):
            adv = [4.0, 4.0, 4.0]
            adv[axis_idx] = 1.0 + 6.0 * i / (N_STIMULI - 1)
            stimuli.append({
                "stimulus_id": f"{axis[:1]}{i:02}",
                "media": f"audio/{axis}/{i:02}.wav",
                "adv": adv,
            })
        sessions.append({
            "session_id": axis,
            "axis": axis,
            "shuffle_seed": seed + axis_idx,
            "stimuli": stimuli,
            "ground_truth_ranks": list(range(1, N_STIMULI + 1)),
        })
    path.write_text(json.dumps({"sessions": sessions}), encoding="utf-8")


def noisy_ranking(rng, noise):
    perceived = np.arange(N_STIMULI) + rng.normal(0.0, noise, size=N_STIMULI)
    order = np.argsort(perceived)
    ranks = np.empty(N_STIMULI, dtype=int)
    ranks[order] = np.arange(1, N_STIMULI + 1)
    return [int(r) for r in ranks]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--raters", type=int, default=12)
    ap.add_argument("--noise", type=float, default=0.5,
                    help="std of perceptual noise in rank units")
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    with tempfile.TemporaryDirectory() as tmp:
        cfg_path = Path(tmp) / "sessions.json"
        build_config(cfg_path, args.seed)
        store = SessionStore(load_sessions_config(cfg_path), Path(tmp) / "journal.jsonl")

        print(f"raters {args.raters}  noise {args.noise}  seed {args.seed}")
        print(f"{'axis':<10} {'mean_src':>9} {'kendalls_w':>11} {'min_src':>8}")
        for axis in ("arousal", "dominance", "valence"):
            for r in range(args.raters):
                store.submit(axis, f"rater{r:02}", noisy_ranking(rng, args.noise))
            res = store.sessions[axis].results()
            print(f"{axis:<10} {res['mean_src']:>9.4f} {res['kendalls_w']:>11.4f} "
                  f"{min(res['per_rater_src'].values()):>8.4f}")


if __name__ == "__main__":
    main()
