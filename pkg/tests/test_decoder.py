import itertools

import numpy as np
import pytest

from jitqec import channel, decoder, frame, lattice


@pytest.fixture(scope="module")
def slice_a():
    return lattice.build_slice("A", 3, 2)


@pytest.fixture(scope="module")
def slice_a_next():
    return lattice.build_slice("A", 3, 3)


def zero_errors(sl):
    return channel.ErrorState(np.zeros(sl.n, np.uint8),
                              np.zeros(len(sl.z_faces), np.uint8),
                              np.zeros(sl.n, np.uint8))


def test_decoder_params():
    decoder.DecoderParams(0, 1)
    with pytest.raises(ValueError):
        decoder.DecoderParams(-1, 2)
    with pytest.raises(ValueError):
        decoder.DecoderParams(2, 0)


def test_mwpm_empty(slice_a):
    assert decoder.mwpm([], slice_a) == []


def test_mwpm_adjacent_pair(slice_a):
    fi = next(i for i in slice_a.new_faces
              if all(n[0] == "cell" for n in slice_a.z_faces[i].cells)
              and slice_a.z_faces[i].label == "Bulk")
    u, v = slice_a.z_faces[fi].cells
    pairs = decoder.mwpm([u, v], slice_a)
    assert pairs == [lattice.canonical_pair(u, v)]


def brute_force_weight(endpoints, sl):
    """Exhaustive minimum over all pairings with optional wall matches."""
    m = len(endpoints)
    idx = list(range(m))

    def best(rest):
        if not rest:
            return 0
        first, tail = rest[0], rest[1:]
        options = []
        wall = decoder._boundary_distance(endpoints[first], sl)[0]
        options.append(wall + best(tail))
        for j, other in enumerate(tail):
            d = lattice.dual_distance(endpoints[first], endpoints[other], sl)
            options.append(d + best(tail[:j] + tail[j + 1:]))
        return min(options)

    return best(idx)


def matching_weight(pairs, sl):
    total = 0
    for a, b in pairs:
        total += decoder.pair_distance((a, b), sl)
    return total


@pytest.mark.parametrize("trial", range(40))
def test_mwpm_matches_brute_force(slice_a, trial):
    rng = np.random.default_rng(trial)
    cells = [n for n in slice_a.dual.nodes if slice_a.dual.is_real(n)]
    k = int(rng.integers(2, 9)) & ~1  # even count, 2..8
    chosen = [cells[i] for i in rng.choice(len(cells), size=k, replace=False)]
    pairs = decoder.mwpm(chosen, slice_a)
    assert matching_weight(pairs, slice_a) == brute_force_weight(chosen, slice_a)


def test_mwpm_covers_all_endpoints(slice_a):
    rng = np.random.default_rng(123)
    cells = [n for n in slice_a.dual.nodes if slice_a.dual.is_real(n)]
    chosen = [cells[i] for i in rng.choice(len(cells), size=5, replace=False)]
    pairs = decoder.mwpm(chosen, slice_a)
    seen = [el for p in pairs for el in p if el[0] == "cell"]
    assert sorted(seen) == sorted(chosen)


def test_no_top_or_bottom_in_pairs(slice_a):
    rng = np.random.default_rng(5)
    cells = [n for n in slice_a.dual.nodes if slice_a.dual.is_real(n)]
    chosen = [cells[i] for i in rng.choice(len(cells), size=6, replace=False)]
    pairs = decoder.mwpm(chosen, slice_a)
    for p in pairs:
        for el in p:
            assert el == lattice.BOUNDARY_SX1 or el == lattice.BOUNDARY_SX2 \
                or el[0] == "cell"


def find_string_of_flips(sl, length):
    """Faces forming a dual path of the given length between real cells."""
    dual = sl.dual
    for start in range(len(dual.nodes)):
        if not dual.real[start]:
            continue
        stack = [(start, [], {start})]
        while stack:
            node, faces, seen = stack.pop()
            if len(faces) == length:
                a, b = dual.nodes[start], dual.nodes[node]
                if dual.real[node] and \
                        lattice.dual_distance(a, b, sl) == length:
                    return a, b, faces
                continue
            for (nb, f) in dual.adj[node]:
                if dual.real[nb] and nb not in seen:
                    stack.append((nb, faces + [f], seen | {nb}))
    raise AssertionError("no such string")


def test_deferral_then_join(slice_a, slice_a_next):
    """Two endpoints at distance 3 are parked at the top, then joined when
    the same pair recurs with its pseudodistance below threshold."""
    a, b, faces = find_string_of_flips(slice_a, 3)
    err = zero_errors(slice_a)
    for f in faces:
        err.meas_flips[f] = 1
    syn = channel.compute_syndrome(slice_a, err)
    endpoints = channel.extract_endpoints(syn, slice_a)
    assert sorted(endpoints) == sorted([a, b])

    params = decoder.DecoderParams(2, 2)
    m0 = decoder.PseudoDistanceMap()
    repaired, m1 = decoder.delayed_match(endpoints, m0, params,
                                         slice_a, slice_a_next, syn)
    # first occurrence: parked at the top, remembered at distance 3 - 2
    key = lattice.translate_pair(lattice.canonical_pair(a, b),
                                 slice_a, slice_a_next)
    assert dict(m1.entries) == {key: 1}
    assert decoder.loop_check(repaired, slice_a)

    # the same defect one slice later: now joined to each other
    a2 = ("cell",) + tuple(np.array(a[1:]) + frame.DISPLACEMENT["A"])
    b2 = ("cell",) + tuple(np.array(b[1:]) + frame.DISPLACEMENT["A"])
    err2 = zero_errors(slice_a_next)
    for f in lattice.path_between(a2, b2, slice_a_next):
        err2.meas_flips[f] = 1
    syn2 = channel.compute_syndrome(slice_a_next, err2)
    endpoints2 = channel.extract_endpoints(syn2, slice_a_next)
    assert sorted(endpoints2) == sorted([a2, b2])
    sl_after = lattice.build_slice("A", 3, 4)
    repaired2, m2 = decoder.delayed_match(endpoints2, m1, params,
                                          slice_a_next, sl_after, syn2)
    assert len(m2) == 0            # joined to each other, nothing deferred
    assert not repaired2.flags.any()  # the join cancels the string exactly
    assert decoder.loop_check(repaired2, slice_a_next)


def test_close_pair_joined_immediately(slice_a, slice_a_next):
    fi = next(i for i in slice_a.new_faces
              if all(n[0] == "cell" for n in slice_a.z_faces[i].cells))
    err = zero_errors(slice_a)
    err.meas_flips[fi] = 1
    syn = channel.compute_syndrome(slice_a, err)
    endpoints = channel.extract_endpoints(syn, slice_a)
    repaired, m1 = decoder.delayed_match(
        endpoints, decoder.PseudoDistanceMap(), decoder.DecoderParams(),
        slice_a, slice_a_next, syn)
    assert not repaired.flags.any()
    assert len(m1) == 0


def test_empty_input_is_identity(slice_a, slice_a_next):
    syn = channel.compute_syndrome(slice_a, zero_errors(slice_a))
    repaired, m1 = decoder.delayed_match(
        [], decoder.PseudoDistanceMap(), decoder.DecoderParams(),
        slice_a, slice_a_next, syn)
    assert not repaired.flags.any()
    assert len(m1) == 0


def test_loop_check_single_flag_false(slice_a):
    syn = channel.compute_syndrome(slice_a, zero_errors(slice_a))
    fi = next(i for i in slice_a.new_faces
              if all(n[0] == "cell" for n in slice_a.z_faces[i].cells))
    syn.flags[fi] = 1
    assert not decoder.loop_check(syn, slice_a)


@pytest.mark.parametrize("code", ["A", "B", "C"])
def test_loop_check_after_decode(code):
    sl = lattice.build_slice(code, 3, 2)
    sl_next = lattice.build_slice(code, 3, 3)
    params = channel.NoiseParams(0.05)
    dparams = decoder.DecoderParams()
    for trial in range(200):
        err = channel.sample_errors(sl, params, channel.trial_rng(7, trial))
        syn = channel.compute_syndrome(sl, err)
        endpoints = channel.extract_endpoints(syn, sl)
        repaired, _ = decoder.delayed_match(
            endpoints, decoder.PseudoDistanceMap(), dparams, sl, sl_next, syn)
        assert decoder.loop_check(repaired, sl)


def test_pseudodistance_monotone_convergence(slice_a, slice_a_next):
    # a recurring pair at distance D is joined after ceil((D - c)/r) + 1 visits
    a, b, faces = find_string_of_flips(slice_a, 3)
    params = decoder.DecoderParams(2, 2)
    m = decoder.PseudoDistanceMap()
    slices = [lattice.build_slice("A", 3, t) for t in range(2, 8)]
    pair = lattice.canonical_pair(a, b)
    visits = 0
    cur_a, cur_b = a, b
    for t in range(4):
        sl, sl_next = slices[t], slices[t + 1]
        err = zero_errors(sl)
        for f in lattice.path_between(cur_a, cur_b, sl):
            err.meas_flips[f] = 1
        syn = channel.compute_syndrome(sl, err)
        endpoints = channel.extract_endpoints(syn, sl)
        repaired, m = decoder.delayed_match(endpoints, m, params,
                                            sl, sl_next, syn)
        visits += 1
        if len(m) == 0:
            break
        cur_a = ("cell",) + tuple(np.array(cur_a[1:]) + frame.DISPLACEMENT["A"])
        cur_b = ("cell",) + tuple(np.array(cur_b[1:]) + frame.DISPLACEMENT["A"])
    assert visits == 2  # ceil((3 - 2) / 2) + 1


@pytest.mark.parametrize("code", ["A", "B", "C"])
def test_random_single_faults_distance5(code):
    # exhaustive coverage lives at distance 3; spot-check the larger slice
    from jitqec import harness
    cfg = harness.TrialConfig(code, 5, 0.0, seed=0, trials=1)
    sl0 = lattice.build_slice(code, 5, 0)
    rng = np.random.default_rng(2025)
    new_qubits = np.nonzero(sl0.qubit_layer > 0)[0]
    new_faces = [i for i, f in enumerate(sl0.z_faces) if not f.is_bottom]
    for _ in range(60):
        kind = rng.choice(["x", "m"])
        t_inj = int(rng.integers(cfg.T))
        idx = int(rng.choice(new_qubits if kind == "x" else new_faces))

        def noise(t, sl_t, rng_, carried, kind=kind, idx=idx, t_inj=t_inj):
            err = channel.ErrorState(
                np.zeros(sl_t.n, np.uint8),
                np.zeros(len(sl_t.z_faces), np.uint8),
                carried.astype(np.uint8))
            if t == t_inj:
                if kind == "x":
                    err.x_new[idx] = 1
                else:
                    err.meas_flips[idx] = 1
            return err

        assert not harness.run_trial(cfg, 0, noise=noise), (kind, t_inj, idx)


def test_translate_pair_rejects_foreign_slice():
    sa = lattice.build_slice("A", 3, 0)
    sb = lattice.build_slice("B", 3, 1)
    cells = [n for n in sa.dual.nodes if sa.dual.is_real(n)]
    pair = lattice.canonical_pair(cells[0], cells[1])
    with pytest.raises(lattice.GeometryError):
        lattice.translate_pair(pair, sa, sb)
