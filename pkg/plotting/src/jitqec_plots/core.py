"""Parse sweep CSVs, draw failure-rate curves, estimate curve crossings."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

CSV_COLUMNS = ["code", "L", "p", "timesteps", "c", "r", "trials", "failures",
               "p_fail", "ci_halfwidth", "seed", "wallclock_s"]


class SchemaError(Exception):
    pass


@dataclass
class Curve:
    distance: int
    p: np.ndarray
    p_fail: np.ndarray
    halfwidth: np.ndarray


class SweepTable:
    """Rows of a sweep CSV grouped by (code, L)."""

    def __init__(self, rows: list[dict]):
        self.rows = rows
        self.groups: dict = {}
        for row in rows:
            key = (row["code"], int(row["L"]))
            self.groups.setdefault(key, []).append(row)

    @classmethod
    def read(cls, path: str) -> "SweepTable":
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            fields = reader.fieldnames or []
            unknown = set(fields) - set(CSV_COLUMNS)
            if unknown:
                raise SchemaError(f"unknown columns: {sorted(unknown)}")
            missing = {"code", "L", "p", "p_fail", "ci_halfwidth"} - set(fields)
            if missing:
                raise SchemaError(f"missing columns: {sorted(missing)}")
            return cls(list(reader))

    def codes(self) -> list[str]:
        return sorted({code for code, _ in self.groups})

    def curves(self, code: str) -> list[Curve]:
        out = []
        for (c, distance), rows in sorted(self.groups.items()):
            if c != code:
                continue
            rows = sorted(rows, key=lambda r: float(r["p"]))
            out.append(Curve(
                distance,
                np.array([float(r["p"]) for r in rows]),
                np.array([float(r["p_fail"]) for r in rows]),
                np.array([float(r["ci_halfwidth"]) for r in rows]),
            ))
        return out


def _pair_crossings(a: Curve, b: Curve) -> list[float]:
    """Intersections of the piecewise-linear interpolants of two curves."""
    ps = sorted(set(a.p) & set(b.p))
    if len(ps) < 2:
        return []
    fa = np.interp(ps, a.p, a.p_fail)
    fb = np.interp(ps, b.p, b.p_fail)
    diff = fa - fb
    out = []
    for i in range(len(ps) - 1):
        d0, d1 = diff[i], diff[i + 1]
        if d0 == 0.0 and d1 == 0.0:
            continue
        if d0 == 0.0:
            out.append(ps[i])
        elif d0 * d1 < 0:
            t = d0 / (d0 - d1)
            out.append(ps[i] + t * (ps[i + 1] - ps[i]))
    if diff[-1] == 0.0:
        out.append(ps[-1])
    return out


def crossing_estimate(table: SweepTable, code: str):
    """Median and spread of pairwise curve intersections for one code.

    Returns (median, lo, hi) or None when no adjacent-distance curves
    intersect inside the swept range.
    """
    curves = table.curves(code)
    if len(curves) < 2:
        raise ValueError(f"need at least two distances for code {code}")
    points = []
    for i in range(len(curves) - 1):
        points.extend(_pair_crossings(curves[i], curves[i + 1]))
    if not points:
        return None
    return float(np.median(points)), min(points), max(points)


def plot_threshold(csv_path: str, code: str, out_path: str) -> None:
    """Draw p_fail(p) with error bars for every distance; print the crossing."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    table = SweepTable.read(csv_path)
    curves = table.curves(code)
    if len(curves) < 2:
        raise ValueError(f"need at least two distances for code {code}")
    if any(len(c.p) < 3 for c in curves):
        raise ValueError("need at least three noise rates per curve")

    fig, ax = plt.subplots(figsize=(5.0, 3.8))
    for c in curves:
        lo = np.maximum(0.0, c.p_fail - c.halfwidth)
        hi = np.minimum(1.0, c.p_fail + c.halfwidth)
        ax.errorbar(c.p, c.p_fail, yerr=[c.p_fail - lo, hi - c.p_fail],
                    marker="o", capsize=2, label=f"L = {c.distance}")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("physical error rate p")
    ax.set_ylabel("logical failure rate")
    ax.set_title(f"code {code}")
    ax.legend()

    est = crossing_estimate(table, code)
    if est is not None:
        mid, lo, hi = est
        ax.axvline(mid, color="grey", linestyle="--", linewidth=0.8)
        print(f"code {code}: crossing estimate {mid:.3g} "
              f"(range {lo:.3g} .. {hi:.3g})")
    else:
        print(f"code {code}: curves do not cross inside the swept range")
    fig.tight_layout()
    fig.savefig(out_path, metadata=_stable_metadata(out_path))
    plt.close(fig)


def _stable_metadata(out_path: str):
    """Strip timestamps so identical data gives identical image bytes."""
    if out_path.endswith(".png"):
        return {"Software": None}
    if out_path.endswith(".svg"):
        return {"Date": None}
    return None
