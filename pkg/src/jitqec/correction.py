"""Turning repaired loop syndromes into corrections, and collapsing slices.

push_to_top solves for an X pattern on the newly prepared qubits whose
syndrome reproduces the repaired loops; together with the physical errors
this transports every loop onto the top plane.  The solve sweeps upward,
one plane at a time, and inside each plane decomposes into independent
components of a few qubits each, solved at minimum weight with fixed tie
breaking - deterministic, local, and never off by a logical membrane.

collapse measures out everything below the top plane; only the residual X
errors on the surviving plane matter and they become the carried-in errors
of the next timestep.

z_footprint implements the collapse-time Z transfer on the minimal 2x2x2
code: measured-out qubits reading -1 mark the top-face qubits that need Z.
"""

from __future__ import annotations

from dataclasses import dataclass

import networkx as nx
import numpy as np

from . import gf2
from .channel import ErrorState, SyndromeState
from .lattice import LayerGeometry, SliceGeometry


@dataclass
class CorrectionOp:
    qubits: np.ndarray   # indicator over slice qubits
    pauli: str


@dataclass
class CollapseRecord:
    surviving: list      # coordinates of top-plane qubits
    residual: np.ndarray # indicator over surviving qubits (next bottom layer)


class CorrectionError(Exception):
    pass


class _PlaneComponent:
    """One independent block of the per-plane linear system."""

    def __init__(self, cols, rows, a, lower):
        self.cols = cols              # qubit indices at the current plane
        self.rows = rows              # indices into new_faces
        self.solver = gf2.Solver(a)
        self.kernel = gf2.nullspace(a)
        if len(self.kernel) > 8:
            raise CorrectionError("push component kernel unexpectedly large")
        self.lower = lower            # per row: qubit indices on lower planes


def _push_systems(sl: SliceGeometry):
    """Plane-by-plane systems for sweeping loops toward the top.

    For each of the middle and top planes, the faces reaching no higher than
    that plane form small independent components over its qubits (the faces
    below contribute the already-solved planes).  Solving each component at
    minimum weight keeps corrections local and never wraps a logical.
    """
    if "push" in sl._cache:
        return sl._cache["push"]
    face_rows = {1: [], 2: []}
    for pos, fi in enumerate(sl.new_faces):
        layers = [sl.qubit_layer[q] for q in sl.z_faces[fi].support]
        face_rows[max(layers)].append(pos)
    systems = []
    for level in (1, 2):
        rows = face_rows[level]
        cols = sorted(np.nonzero(sl.qubit_layer == level)[0])
        col_pos = {q: i for i, q in enumerate(cols)}
        # union-find over columns sharing a row
        parent = list(range(len(cols)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        row_cols = []
        row_lower = []
        for pos in rows:
            fi = sl.new_faces[pos]
            here = [col_pos[q] for q in sl.z_faces[fi].support
                    if sl.qubit_layer[q] == level]
            lower = [q for q in sl.z_faces[fi].support
                     if 0 < sl.qubit_layer[q] < level]
            row_cols.append(here)
            row_lower.append(lower)
            for other in here[1:]:
                ra, rb = find(here[0]), find(other)
                if ra != rb:
                    parent[ra] = rb
        groups = {}
        for i in range(len(cols)):
            groups.setdefault(find(i), []).append(i)
        comp_of = {}
        for gi, (root, members) in enumerate(sorted(groups.items())):
            comp_of[root] = gi
        comps = [[] for _ in groups]
        comp_rows = [[] for _ in groups]
        for i in range(len(cols)):
            comps[comp_of[find(i)]].append(i)
        isolated_rows = []
        for k, here in enumerate(row_cols):
            if here:
                comp_rows[comp_of[find(here[0])]].append(k)
            else:
                isolated_rows.append(k)
        built = []
        for members, rws in zip(comps, comp_rows):
            a = np.zeros((len(rws), len(members)), dtype=np.uint8)
            loc = {c: i for i, c in enumerate(members)}
            lower = []
            for ri, k in enumerate(rws):
                for c in row_cols[k]:
                    a[ri, loc[c]] ^= 1
                lower.append(row_lower[k])
            built.append(_PlaneComponent([cols[c] for c in members],
                                         [rows[k] for k in rws], a, lower))
        # rows with no column at this level are pure consistency constraints
        checks = [(rows[k], row_lower[k]) for k in isolated_rows]
        systems.append((level, built, checks))
    sl._cache["push"] = systems
    return systems


def _min_weight_solution(comp: _PlaneComponent, b: np.ndarray) -> np.ndarray:
    x = comp.solver.solve(b)
    if len(comp.kernel) == 0:
        return x
    best = (int(x.sum()), tuple(x))
    bestx = x
    for bits in range(1, 1 << len(comp.kernel)):
        cand = x.copy()
        for j in range(len(comp.kernel)):
            if bits >> j & 1:
                cand ^= comp.kernel[j]
        key = (int(cand.sum()), tuple(cand))
        if key < best:
            best, bestx = key, cand
    return bestx


def push_to_top(repaired: SyndromeState, sl: SliceGeometry) -> CorrectionOp:
    """X correction on non-bottom qubits reproducing the repaired syndrome.

    Sweeps plane by plane toward the top, locally minimising the correction
    weight; raises CorrectionError if the syndrome is not a valid loop
    configuration.
    """
    flags = repaired.flags
    out = np.zeros(sl.n, dtype=np.uint8)
    if not flags.any():
        return CorrectionOp(out, "X")
    for level, comps, checks in _push_systems(sl):
        for comp in comps:
            b = np.empty(len(comp.rows), dtype=np.uint8)
            for i, pos in enumerate(comp.rows):
                fi = sl.new_faces[pos]
                par = flags[fi]
                for q in comp.lower[i]:
                    par ^= out[q]
                b[i] = par
            try:
                x = _min_weight_solution(comp, b)
            except ValueError as exc:
                raise CorrectionError(
                    "repaired syndrome is not a valid loop configuration") from exc
            for q, v in zip(comp.cols, x):
                out[q] = v
        for pos, lower in checks:
            fi = sl.new_faces[pos]
            par = flags[fi]
            for q in lower:
                par ^= out[q]
            if par:
                raise CorrectionError(
                    "repaired syndrome is not a valid loop configuration")
    return CorrectionOp(out, "X")


def collapse(sl: SliceGeometry, err: ErrorState,
             correction: CorrectionOp) -> CollapseRecord:
    """Measure out all non-top qubits; keep the top-plane residual."""
    if correction.pauli != "X":
        raise ValueError("collapse expects an X correction")
    total = err.x_total ^ correction.qubits
    top = sl.qubit_layer == 2
    surviving = [sl.qubits[i] for i in np.nonzero(top)[0]]
    residual = total[top].astype(np.uint8)
    return CollapseRecord(surviving, residual)


def carry_to_next(rec: CollapseRecord, sl_next: SliceGeometry) -> np.ndarray:
    """Express collapse residuals as bottom-layer errors of the next slice."""
    carried = np.zeros(sl_next.n, dtype=np.uint8)
    for coord, bit in zip(rec.surviving, rec.residual):
        if bit:
            carried[sl_next.qindex[coord]] = 1
    return carried


# ---------------------------------------------------------------------------
# minimal 2x2x2 collapse model
#
# Qubits 1-4 form the surviving top face, 5-8 the measured-out bottom face,
# with qubit i vertically above qubit i + 4.  The four side faces carry the
# Z checks {1,2,5,6}, {3,4,7,8}, {1,3,5,7}, {2,4,6,8}.
# ---------------------------------------------------------------------------

# ---------------------------------------------------------------------------
# end-of-run failure decision on the final 2D layer
# ---------------------------------------------------------------------------

def _layer_graph(layer: LayerGeometry):
    """Z checks as nodes, qubits as edges; one virtual X-boundary node."""
    if "graph" in layer._cache:
        return layer._cache["graph"]
    n_stab = len(layer.z_faces)
    virt = n_stab
    adj = [[] for _ in range(n_stab + 1)]
    rows, cols = np.nonzero(layer.hz)
    per_qubit = [[] for _ in range(layer.n)]
    for r, c in zip(rows, cols):
        per_qubit[c].append(int(r))
    for q, ss in enumerate(per_qubit):
        if len(ss) == 2:
            adj[ss[0]].append((ss[1], q))
            adj[ss[1]].append((ss[0], q))
        elif len(ss) == 1:
            adj[ss[0]].append((virt, q))
            adj[virt].append((ss[0], q))
    layer._cache["graph"] = (adj, virt)
    return layer._cache["graph"]


def _layer_paths_from(layer: LayerGeometry, src: int):
    key = ("bfs", src)
    if key in layer._cache:
        return layer._cache[key]
    adj, virt = _layer_graph(layer)
    dist = [-1] * len(adj)
    via = [None] * len(adj)
    dist[src] = 0
    queue = [src]
    while queue:
        nxt = []
        for u in queue:
            for (v, q) in adj[u]:
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    via[v] = (u, q)
                    nxt.append(v)
        queue = nxt
    layer._cache[key] = (dist, via)
    return layer._cache[key]


def _layer_path_qubits(layer: LayerGeometry, src: int, dst: int) -> list[int]:
    dist, via = _layer_paths_from(layer, src)
    out = []
    node = dst
    while node != src:
        node, q = via[node]
        out.append(q)
    return out


def decode_layer(layer: LayerGeometry, residual: np.ndarray) -> np.ndarray:
    """Noiseless matching of the residual's syndrome on the final layer."""
    flags = np.nonzero((layer.hz @ residual) % 2)[0]
    m = len(flags)
    corr = np.zeros(layer.n, dtype=np.uint8)
    if m == 0:
        return corr
    adj, virt = _layer_graph(layer)
    g = nx.Graph()
    for i, s in enumerate(flags):
        dist, _ = _layer_paths_from(layer, int(s))
        g.add_edge(("e", i), ("v", i), weight=dist[virt])
        for j in range(i + 1, m):
            g.add_edge(("e", i), ("e", j), weight=dist[int(flags[j])])
        for j in range(m):
            if j != i:
                g.add_edge(("v", i), ("v", j), weight=0)
    for (a, b) in nx.min_weight_matching(g):
        if a[0] == "e" and b[0] == "e":
            path = _layer_path_qubits(layer, int(flags[a[1]]), int(flags[b[1]]))
        elif a[0] == "e":
            path = _layer_path_qubits(layer, int(flags[a[1]]), virt)
        elif b[0] == "e":
            path = _layer_path_qubits(layer, int(flags[b[1]]), virt)
        else:
            continue
        for q in path:
            corr[q] ^= 1
    return corr


def layer_failure(layer: LayerGeometry, residual: np.ndarray) -> bool:
    """True when the residual is a logical X on the final layer.

    The residual's exact syndrome is decoded with noiseless matching; the
    run fails when what is left anticommutes with the layer's logical Z.
    """
    corr = decode_layer(layer, residual)
    left = residual.astype(np.uint8) ^ corr
    if np.any((layer.hz @ left) % 2):
        raise CorrectionError("layer decode left a broken syndrome")
    return bool((left @ layer.logical_z) % 2)


CUBE_SIDE_Z = ((1, 2, 5, 6), (3, 4, 7, 8), (1, 3, 5, 7), (2, 4, 6, 8))


def z_footprint(bottom_outcomes: dict) -> CorrectionOp:
    """Z correction on the top face from X-basis outcomes of qubits 5-8.

    `bottom_outcomes` maps qubit index (5..8) to +1 or -1.  The side Z
    checks leave identical footprints on both faces, so each -1 outcome
    marks the qubit directly above it.
    """
    if sorted(bottom_outcomes) != [5, 6, 7, 8]:
        raise ValueError("need outcomes for qubits 5, 6, 7 and 8")
    if any(v not in (+1, -1) for v in bottom_outcomes.values()):
        raise ValueError("outcomes must be +1 or -1")
    out = np.zeros(4, dtype=np.uint8)   # indicator over top qubits 1-4
    for q, v in sorted(bottom_outcomes.items()):
        if v == -1:
            out[q - 5] = 1
    return CorrectionOp(out, "Z")


def cube_outcome_parity(bottom_outcomes: dict) -> int:
    """Product of the four bottom-face outcomes (+1 in a code state)."""
    prod = 1
    for v in bottom_outcomes.values():
        prod *= v
    return prod
