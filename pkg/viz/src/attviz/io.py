"""Read-only access to trajectory bundle files.

A bundle is JSONL with one record per (seed, time): {"seed": int,
"t": float, "q": [3] or "R": [9 row-major], "omega": [3], "speed":
float}. Records are kept in file order per seed and never mutated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np


@dataclass
class Bundle:
    model: str          # "s2" | "so3"
    seeds: list         # sorted seed ids
    times: dict         # seed -> (n,) float array
    configs: dict       # seed -> (n, 3) q rows or (n, 3, 3) R matrices
    speeds: dict        # seed -> (n,) float array

    def max_time(self):
        return max(float(t[-1]) for t in self.times.values())

    def max_speed(self, cutoff=None):
        best = 0.0
        for seed in self.seeds:
            mask = (self.times[seed] <= cutoff + 1e-9
                    if cutoff is not None else slice(None))
            sel = self.speeds[seed][mask]
            if sel.size:
                best = max(best, float(sel.max()))
        return best


def load_bundle(path) -> Bundle:
    """Load a JSONL bundle; the model is inferred from the q/R field."""
    times, configs, speeds = {}, {}, {}
    model = None
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}:{lineno}: not valid JSON ({exc})")
            if "q" in rec:
                rec_model, cfg = "s2", np.asarray(rec["q"], dtype=float)
            elif "R" in rec:
                rec_model = "so3"
                cfg = np.asarray(rec["R"], dtype=float).reshape(3, 3)
            else:
                raise ValueError(f"{path}:{lineno}: record has neither "
                                 f"'q' nor 'R'")
            if model is None:
                model = rec_model
            elif model != rec_model:
                raise ValueError(f"{path}:{lineno}: mixed s2/so3 records")
            seed = int(rec["seed"])
            times.setdefault(seed, []).append(float(rec["t"]))
            configs.setdefault(seed, []).append(cfg)
            speeds.setdefault(seed, []).append(float(rec["speed"]))
    if model is None:
        raise ValueError(f"{path}: empty bundle")
    seeds = sorted(times)
    return Bundle(
        model=model,
        seeds=seeds,
        times={s: np.array(times[s]) for s in seeds},
        configs={s: np.array(configs[s]) for s in seeds},
        speeds={s: np.array(speeds[s]) for s in seeds},
    )
