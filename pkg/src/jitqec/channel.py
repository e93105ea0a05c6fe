"""Phenomenological noise for one timestep of the expand/decode/collapse cycle.

Fresh X errors hit the newly prepared qubits (middle and top planes) with
probability p, and each newly measured Z check is flipped with the same
probability.  Bottom-plane qubits only carry residual errors left over from
the previous collapse; bottom-layer checks are not remeasured and always
read as unflagged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import SliceGeometry


@dataclass
class NoiseParams:
    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"noise rate must be in [0, 1], got {self.p}")


@dataclass
class ErrorState:
    x_new: np.ndarray        # fresh X errors on non-bottom qubits
    meas_flips: np.ndarray   # one entry per z face; zero on bottom faces
    x_carried: np.ndarray    # residual X errors on the bottom layer

    @property
    def x_total(self) -> np.ndarray:
        return self.x_new ^ self.x_carried


@dataclass
class SyndromeState:
    flags: np.ndarray        # one entry per z face; zero on bottom faces


def trial_rng(master_seed: int, trial_index: int) -> np.random.Generator:
    """Counter-based per-trial stream; independent of execution order."""
    key = np.array([master_seed % (1 << 64), trial_index % (1 << 64)],
                   dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _bottom_mask(sl: SliceGeometry) -> np.ndarray:
    if "bottom_mask" not in sl._cache:
        sl._cache["bottom_mask"] = np.array(
            [f.is_bottom for f in sl.z_faces], dtype=bool)
    return sl._cache["bottom_mask"]


def sample_errors(sl: SliceGeometry, params: NoiseParams,
                  rng: np.random.Generator,
                  carried: np.ndarray | None = None) -> ErrorState:
    """Draw one timestep of noise; `carried` is the residual from collapse."""
    n = sl.n
    fresh = np.zeros(n, dtype=np.uint8)
    new_qubits = sl.qubit_layer > 0
    if params.p > 0:
        draw = rng.random(n) < params.p
        fresh[new_qubits & draw] = 1
    flips = np.zeros(len(sl.z_faces), dtype=np.uint8)
    if params.p > 0:
        draw = rng.random(len(sl.z_faces)) < params.p
        flips[draw] = 1
        flips[_bottom_mask(sl)] = 0
    if carried is None:
        carried = np.zeros(n, dtype=np.uint8)
    else:
        carried = carried.astype(np.uint8)
        if np.any(carried & new_qubits):
            raise ValueError("carried errors must live on the bottom layer")
    return ErrorState(fresh, flips, carried)


def compute_syndrome(sl: SliceGeometry, err: ErrorState) -> SyndromeState:
    """Flag each measured face by error parity xor measurement flip."""
    flags = ((sl.hz @ err.x_total) % 2).astype(np.uint8)
    flags ^= err.meas_flips
    flags[_bottom_mask(sl)] = 0
    return SyndromeState(flags)


def extract_endpoints(syn: SyndromeState, sl: SliceGeometry) -> list:
    """Dual cells where an odd number of flagged faces meet, sorted."""
    deg = np.zeros(len(sl.dual.nodes), dtype=np.int64)
    flagged = syn.flags[sl.new_faces].astype(bool)
    np.add.at(deg, sl.face_nodes[flagged, 0], 1)
    np.add.at(deg, sl.face_nodes[flagged, 1], 1)
    out = []
    for i, node in enumerate(sl.dual.nodes):
        if sl.dual.real[i] and deg[i] % 2 == 1:
            out.append(node)
    return sorted(out)
