"""Monte Carlo harness: full trials, sweeps and interval estimates.

A trial runs T expand -> decode -> collapse cycles of one code, carrying
the decoder's pseudodistance map and the collapse residuals between cycles,
then decodes the final layer noiselessly and reports whether a logical X
was applied.  Trials are reproducible from (master seed, trial index) alone
and independent of worker count or execution order.
"""

from __future__ import annotations

import csv
import json
import math
import os
import sys
import time
from dataclasses import dataclass
from multiprocessing import Pool

import numpy as np

from . import channel, correction, decoder, lattice


@dataclass(frozen=True)
class TrialConfig:
    code: str
    distance: int
    p: float
    timesteps: int = 0          # 0 means the default ceil(L / 2)
    c: int = 2
    r: int = 2
    seed: int = 0
    trials: int = 1

    def __post_init__(self):
        if self.code not in ("A", "B", "C"):
            raise ValueError(f"unknown code {self.code!r}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")
        if self.trials < 0 or self.timesteps < 0:
            raise ValueError("trials and timesteps must be non-negative")

    @property
    def T(self) -> int:
        return self.timesteps if self.timesteps else (self.distance + 1) // 2


@dataclass
class TrialStats:
    failures: int
    trials: int

    def __post_init__(self):
        if not 0 <= self.failures <= self.trials:
            raise ValueError("need 0 <= failures <= trials")


@dataclass
class CIEstimate:
    center: float
    halfwidth: float

    def clamped(self) -> tuple[float, float]:
        return (max(0.0, self.center - self.halfwidth),
                min(1.0, self.center + self.halfwidth))


def agresti_coull(failures: int, trials: int) -> CIEstimate:
    """Adjusted binomial interval: (f+2)/(n+4) +- 2 sqrt(pt(1-pt)/(n+4))."""
    n_t = trials + 4
    p_t = (failures + 2) / n_t
    return CIEstimate(p_t, 2.0 * math.sqrt(p_t * (1.0 - p_t) / n_t))


def run_trial(config: TrialConfig, trial_index: int,
              noise=None, debug_sink=None) -> bool:
    """One full trial; True means a logical failure.

    `noise(t, slice_geom, rng, carried)` may replace the sampled errors of
    each timestep (deterministic fixtures); `debug_sink` receives one JSON
    record per timestep.
    """
    params = channel.NoiseParams(config.p)
    dparams = decoder.DecoderParams(config.c, config.r)
    rng = channel.trial_rng(config.seed, trial_index)
    m = decoder.PseudoDistanceMap()
    carried = None
    rec = None
    for t in range(config.T):
        sl = lattice.build_slice(config.code, config.distance, t)
        sl_next = lattice.build_slice(config.code, config.distance, t + 1)
        if carried is None:
            carried = np.zeros(sl.n, dtype=np.uint8)
        if noise is None:
            err = channel.sample_errors(sl, params, rng, carried)
        else:
            err = noise(t, sl, rng, carried)
        syn = channel.compute_syndrome(sl, err)
        endpoints = channel.extract_endpoints(syn, sl)
        m_before = dict(m.entries)
        repaired, m = decoder.delayed_match(endpoints, m, dparams,
                                            sl, sl_next, syn)
        if not decoder.loop_check(repaired, sl):
            raise correction.CorrectionError(
                "delayed matching left a broken syndrome")
        corr = correction.push_to_top(repaired, sl)
        rec = correction.collapse(sl, err, corr)
        carried = correction.carry_to_next(rec, sl_next)
        if debug_sink is not None:
            debug_sink.write(json.dumps({
                "trial": trial_index, "timestep": t,
                "endpoints": [list(e) for e in endpoints],
                "matching": [[list(a), list(b)] for a, b in decoder.mwpm(endpoints, sl)],
                "map_before": [[list(map(list, k)), v] for k, v in sorted(m_before.items())],
                "map_after": [[list(map(list, k)), v] for k, v in sorted(m.items())],
            }) + "\n")
    layer = lattice.build_layer(config.code, config.distance, config.T)
    residual = np.zeros(layer.n, dtype=np.uint8)
    for coord, bit in zip(rec.surviving, rec.residual):
        if bit:
            residual[layer.qindex[coord]] = 1
    return correction.layer_failure(layer, residual)


def _count_failures(args) -> int:
    config, lo, hi = args
    fails = 0
    for i in range(lo, hi):
        if run_trial(config, i):
            fails += 1
    return fails


def run_cell(config: TrialConfig, workers: int = 1,
             progress=None) -> tuple[TrialStats, CIEstimate]:
    """Estimate the logical failure rate of one (code, L, p) cell."""
    n = config.trials
    if n < 1:
        raise ValueError("need at least one trial")
    if workers <= 1:
        fails = 0
        for i in range(n):
            if run_trial(config, i):
                fails += 1
            if progress and (i + 1) % progress == 0:
                print(f"    {i + 1}/{n} trials, {fails} failures",
                      file=sys.stderr, flush=True)
    else:
        chunk = max(1, n // (workers * 4))
        jobs = [(config, lo, min(lo + chunk, n)) for lo in range(0, n, chunk)]
        with Pool(workers) as pool:
            fails = sum(pool.imap_unordered(_count_failures, jobs))
    stats = TrialStats(fails, n)
    return stats, agresti_coull(fails, n)


CSV_COLUMNS = ["code", "L", "p", "timesteps", "c", "r", "trials", "failures",
               "p_fail", "ci_halfwidth", "seed", "wallclock_s"]


def _row_key(row: dict) -> tuple:
    return (row["code"], int(row["L"]), float(row["p"]))


def read_sweep(path: str) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        unknown = set(reader.fieldnames or []) - set(CSV_COLUMNS)
        if unknown:
            raise ValueError(f"unknown columns in {path}: {sorted(unknown)}")
        return list(reader)


def run_sweep(codes, distances, ps, trials, seed, out, c=2, r=2,
              timesteps=0, workers: int = 1) -> list[dict]:
    """One CSV row per (code, L, p) cell; existing complete rows are kept."""
    done = {}
    if os.path.exists(out):
        for row in read_sweep(out):
            done[_row_key(row)] = row
    rows = []
    mode = "a" if done else "w"
    with open(out, mode, newline="") as fh:
        writer = csv.writer(fh)
        if not done:
            writer.writerow(CSV_COLUMNS)
        for code in codes:
            for distance in distances:
                for p in ps:
                    key = (code, int(distance), float(p))
                    if key in done:
                        rows.append(done[key])
                        continue
                    config = TrialConfig(code, distance, p, timesteps=timesteps,
                                         c=c, r=r, seed=seed, trials=trials)
                    print(f"cell code={code} L={distance} p={p} "
                          f"({trials} trials)", file=sys.stderr, flush=True)
                    t0 = time.time()
                    stats, ci = run_cell(config, workers=workers)
                    row = {
                        "code": code, "L": distance, "p": p,
                        "timesteps": config.T, "c": c, "r": r,
                        "trials": stats.trials, "failures": stats.failures,
                        "p_fail": f"{ci.center:.10g}",
                        "ci_halfwidth": f"{ci.halfwidth:.10g}",
                        "seed": seed,
                        "wallclock_s": f"{time.time() - t0:.3f}",
                    }
                    writer.writerow([row[k] for k in CSV_COLUMNS])
                    fh.flush()
                    rows.append(row)
    return rows
