"""The delayed matching decoder.

Endpoints of broken syndrome strings are paired by exact minimum-weight
perfect matching over dual-path lengths, with the side X walls available as
a sink.  A persistent map M assigns each recurring pair a pseudodistance,
initially the true dual distance, reduced by r every time the pair is seen
and deferred.  Pairs at pseudodistance at most c are joined to each other
(flipping the measurement record along a minimal dual path); all other
endpoints are joined to the top boundary and their translated pair is
carried into the next timestep's map.

Deferral is what keeps measurement errors from seeding corrections that
grow without bound: a syndrome string that was really caused by faulty
measurements keeps reappearing at the same translated location, and once
its pseudodistance drops below the threshold it is closed off locally
instead of being chased to the top again.  Pairs involving a side wall are
always deferred at least once, since committing a wall join writes real
errors into the code and so also has to be earned by recurrence.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from .channel import SyndromeState
from .lattice import (BOUNDARY_SX1, BOUNDARY_SX2, SliceGeometry,
                      canonical_pair, dual_distance, path_between,
                      path_to_top, translate_pair)


@dataclass
class DecoderParams:
    c: int = 2
    r: int = 2

    def __post_init__(self):
        if self.c < 0 or self.r < 1:
            raise ValueError(f"require c >= 0 and r >= 1, got c={self.c} r={self.r}")


@dataclass
class PseudoDistanceMap:
    entries: dict = field(default_factory=dict)

    def __contains__(self, pair):
        return pair in self.entries

    def __getitem__(self, pair):
        return self.entries[pair]

    def __setitem__(self, pair, value):
        self.entries[pair] = value

    def __len__(self):
        return len(self.entries)

    def items(self):
        return self.entries.items()

    def copy(self) -> "PseudoDistanceMap":
        return PseudoDistanceMap(dict(self.entries))


# Effective distance to a wall no syndrome string can reach.  In codes B
# and C every face joins two interior cells, so strings never terminate on
# the side walls; a huge finite weight keeps the matching feasible when the
# endpoint count is odd (a string ran to the top) without ever making a
# wall the cheaper choice.
UNREACHABLE = 10 ** 6


def _safe_distance(a, b, sl: SliceGeometry) -> int:
    try:
        return dual_distance(a, b, sl)
    except Exception:
        return UNREACHABLE


def _boundary_distance(e, sl: SliceGeometry):
    """Nearest side wall and its (possibly sentinel) distance."""
    d1 = _safe_distance(e, BOUNDARY_SX1, sl)
    d2 = _safe_distance(e, BOUNDARY_SX2, sl)
    return (d1, BOUNDARY_SX1) if d1 <= d2 else (d2, BOUNDARY_SX2)


def mwpm(endpoints: list, sl: SliceGeometry) -> list:
    """Exact minimum-weight perfect matching of endpoints.

    Each endpoint may match another endpoint or its nearest side X wall,
    never the top or bottom.  Returns canonical pair keys.
    """
    m = len(endpoints)
    if m == 0:
        return []
    g = nx.Graph()
    bnd = {}
    for i, e in enumerate(endpoints):
        bnd[i] = _boundary_distance(e, sl)
        g.add_edge(("e", i), ("v", i), weight=bnd[i][0])
    for i, j in itertools.combinations(range(m), 2):
        g.add_edge(("e", i), ("e", j),
                   weight=dual_distance(endpoints[i], endpoints[j], sl))
        g.add_edge(("v", i), ("v", j), weight=0)
    matching = nx.min_weight_matching(g)
    pairs = []
    for (a, b) in matching:
        if a[0] == "e" and b[0] == "e":
            pairs.append(canonical_pair(endpoints[a[1]], endpoints[b[1]]))
        elif a[0] == "e":
            pairs.append(canonical_pair(endpoints[a[1]], bnd[a[1]][1]))
        elif b[0] == "e":
            pairs.append(canonical_pair(endpoints[b[1]], bnd[b[1]][1]))
    return sorted(pairs)


def pair_distance(pair, sl: SliceGeometry) -> int:
    return _safe_distance(pair[0], pair[1], sl)


def _flip_path(flags: np.ndarray, faces) -> None:
    for f in faces:
        flags[f] ^= 1


def delayed_match(endpoints: list, m: PseudoDistanceMap, params: DecoderParams,
                  sl_t: SliceGeometry, sl_next: SliceGeometry,
                  syndrome: SyndromeState):
    """One round of delayed matching.

    Returns (repaired SyndromeState, map for the next timestep).
    """
    current = mwpm(endpoints, sl_t)
    current_set = set(current)

    # update step 1: forget pairs that did not recur
    work = {pair: v for pair, v in m.items() if pair in current_set}
    # update step 2: admit new pairs at their true distance.  A pair with a
    # wall element starts above the join threshold no matter how close the
    # wall is: committing a wall join manufactures real errors, so it has to
    # earn the join by recurring, exactly like a suspected measurement error
    for pair in current:
        if pair not in work:
            d = pair_distance(pair, sl_t)
            if any(el[0] != "cell" for el in pair):
                d = max(d, params.c + 1)
            work[pair] = d

    flags = syndrome.flags.copy()
    m_next = PseudoDistanceMap()
    for pair in sorted(work):
        value = work[pair]
        if value <= params.c:
            _flip_path(flags, path_between(pair[0], pair[1], sl_t))
        else:
            for el in pair:
                if el[0] == "cell":
                    _flip_path(flags, path_to_top(el, sl_t))
            m_next[translate_pair(pair, sl_t, sl_next)] = value - params.r
    return SyndromeState(flags), m_next


def loop_check(syndrome: SyndromeState, sl: SliceGeometry) -> bool:
    """True when every real dual vertex touches an even number of flags."""
    deg = np.zeros(len(sl.dual.nodes), dtype=np.int64)
    flagged = syndrome.flags[sl.new_faces].astype(bool)
    np.add.at(deg, sl.face_nodes[flagged, 0], 1)
    np.add.at(deg, sl.face_nodes[flagged, 1], 1)
    real = np.array(sl.dual.real)
    return not np.any(deg[real] % 2)
