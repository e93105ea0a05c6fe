import numpy as np
import pytest

from jitqec import channel, frame, lattice


@pytest.fixture(scope="module")
def slice_a():
    return lattice.build_slice("A", 3, 0)


def test_noise_params_range():
    channel.NoiseParams(0.0)
    channel.NoiseParams(1.0)
    with pytest.raises(ValueError):
        channel.NoiseParams(1.5)
    with pytest.raises(ValueError):
        channel.NoiseParams(-0.1)


def test_p_zero_gives_nothing(slice_a):
    rng = channel.trial_rng(1, 0)
    err = channel.sample_errors(slice_a, channel.NoiseParams(0.0), rng)
    assert not err.x_new.any() and not err.meas_flips.any()


def test_p_one_flips_everything_new(slice_a):
    rng = channel.trial_rng(1, 0)
    err = channel.sample_errors(slice_a, channel.NoiseParams(1.0), rng)
    new = slice_a.qubit_layer > 0
    assert np.array_equal(err.x_new.astype(bool), new)
    bottom = np.array([f.is_bottom for f in slice_a.z_faces])
    assert np.array_equal(err.meas_flips.astype(bool), ~bottom)


def test_bottom_faces_never_flip():
    sl = lattice.build_slice("C", 3, 0)  # the code with bottom faces
    rng = channel.trial_rng(5, 0)
    err = channel.sample_errors(sl, channel.NoiseParams(1.0), rng)
    for i, f in enumerate(sl.z_faces):
        if f.is_bottom:
            assert err.meas_flips[i] == 0


def test_empirical_rate(slice_a):
    p = 0.01
    n_samples = 10 ** 5
    rng = channel.trial_rng(11, 0)
    params = channel.NoiseParams(p)
    new = int(np.sum(slice_a.qubit_layer > 0))
    count = 0
    for _ in range(n_samples // 100):
        for _ in range(100):
            err = channel.sample_errors(slice_a, params, rng)
            count += int(err.x_new.sum())
    total = n_samples * new
    sigma = (total * p * (1 - p)) ** 0.5
    assert abs(count - total * p) < 3 * sigma


def test_determinism():
    sl = lattice.build_slice("B", 3, 0)
    p = channel.NoiseParams(0.1)
    e1 = channel.sample_errors(sl, p, channel.trial_rng(42, 7))
    e2 = channel.sample_errors(sl, p, channel.trial_rng(42, 7))
    assert np.array_equal(e1.x_new, e2.x_new)
    assert np.array_equal(e1.meas_flips, e2.meas_flips)
    e3 = channel.sample_errors(sl, p, channel.trial_rng(42, 8))
    assert not np.array_equal(e1.x_new, e3.x_new)


def test_carried_must_stay_on_bottom(slice_a):
    carried = np.zeros(slice_a.n, dtype=np.uint8)
    carried[np.nonzero(slice_a.qubit_layer == 2)[0][0]] = 1
    with pytest.raises(ValueError):
        channel.sample_errors(slice_a, channel.NoiseParams(0.0),
                              channel.trial_rng(0, 0), carried)


def zero_errors(sl):
    return channel.ErrorState(np.zeros(sl.n, np.uint8),
                              np.zeros(len(sl.z_faces), np.uint8),
                              np.zeros(sl.n, np.uint8))


def test_single_bulk_x_error_flags_four_faces(slice_a):
    # a middle-plane qubit of code A sits on four squares
    mid = [i for i in range(slice_a.n)
           if slice_a.qubit_layer[i] == 1 and
           int(slice_a.hz[:, i].sum()) == 4]
    assert mid
    err = zero_errors(slice_a)
    err.x_new[mid[0]] = 1
    syn = channel.compute_syndrome(slice_a, err)
    assert int(syn.flags.sum()) == 4


def test_single_measurement_flip_flags_itself(slice_a):
    err = zero_errors(slice_a)
    fi = slice_a.new_faces[0]
    err.meas_flips[fi] = 1
    syn = channel.compute_syndrome(slice_a, err)
    assert syn.flags[fi] == 1 and int(syn.flags.sum()) == 1


def test_stabiliser_error_has_no_syndrome(slice_a):
    err = zero_errors(slice_a)
    cell = next(c for c in slice_a.x_cells if len(c.support) == 6)
    for q in cell.support:
        err.x_new[q] = 1
    # support includes a bottom qubit for boundary cells; move it to carried
    for q in cell.support:
        if slice_a.qubit_layer[q] == 0:
            err.x_new[q] = 0
            err.x_carried[q] = 1
    syn = channel.compute_syndrome(slice_a, err)
    assert not syn.flags.any()


def test_syndrome_linearity(slice_a):
    rng = np.random.default_rng(0)
    params = channel.NoiseParams(0.2)
    e1 = channel.sample_errors(slice_a, params, channel.trial_rng(1, 1))
    e2 = channel.sample_errors(slice_a, params, channel.trial_rng(1, 2))
    s1 = channel.compute_syndrome(slice_a, e1).flags
    s2 = channel.compute_syndrome(slice_a, e2).flags
    both = channel.ErrorState(e1.x_new ^ e2.x_new,
                              e1.meas_flips ^ e2.meas_flips,
                              np.zeros(slice_a.n, np.uint8))
    assert np.array_equal(channel.compute_syndrome(slice_a, both).flags,
                          s1 ^ s2)


def test_endpoints_of_closed_loop_empty(slice_a):
    err = zero_errors(slice_a)
    mid = np.nonzero(slice_a.qubit_layer == 1)[0][0]
    err.x_new[mid] = 1
    syn = channel.compute_syndrome(slice_a, err)
    assert channel.extract_endpoints(syn, slice_a) == []


def test_single_flip_endpoints_are_face_cells(slice_a):
    fi = next(i for i in slice_a.new_faces
              if all(n[0] == "cell" for n in slice_a.z_faces[i].cells))
    err = zero_errors(slice_a)
    err.meas_flips[fi] = 1
    syn = channel.compute_syndrome(slice_a, err)
    endpoints = channel.extract_endpoints(syn, slice_a)
    assert sorted(endpoints) == sorted(slice_a.z_faces[fi].cells)


def test_endpoint_parity():
    # counting virtual terminations, string ends pair up
    sl = lattice.build_slice("B", 3, 0)
    params = channel.NoiseParams(0.05)
    for trial in range(50):
        err = channel.sample_errors(sl, params, channel.trial_rng(99, trial))
        syn = channel.compute_syndrome(sl, err)
        endpoints = channel.extract_endpoints(syn, sl)
        deg = np.zeros(len(sl.dual.nodes), dtype=np.int64)
        flagged = syn.flags[sl.new_faces].astype(bool)
        np.add.at(deg, sl.face_nodes[flagged, 0], 1)
        np.add.at(deg, sl.face_nodes[flagged, 1], 1)
        virt = sum(int(deg[sl.dual.index[v]])
                   for v in (lattice.TOP, lattice.BOUNDARY_SX1,
                             lattice.BOUNDARY_SX2))
        assert (len(endpoints) + virt) % 2 == 0


from hypothesis import given, settings
from hypothesis import strategies as st


@given(st.integers(0, 2 ** 32 - 1), st.floats(0.0, 0.3))
@settings(max_examples=30, deadline=None)
def test_endpoint_count_parity_matches_virtual_degree(seed, p):
    sl = lattice.build_slice("A", 3, 0)
    err = channel.sample_errors(sl, channel.NoiseParams(p),
                                channel.trial_rng(seed, 0))
    syn = channel.compute_syndrome(sl, err)
    endpoints = channel.extract_endpoints(syn, sl)
    deg = np.zeros(len(sl.dual.nodes), dtype=np.int64)
    flagged = syn.flags[sl.new_faces].astype(bool)
    np.add.at(deg, sl.face_nodes[flagged, 0], 1)
    np.add.at(deg, sl.face_nodes[flagged, 1], 1)
    virt = sum(int(deg[sl.dual.index[v]])
               for v in (lattice.TOP, lattice.BOUNDARY_SX1,
                         lattice.BOUNDARY_SX2))
    assert (len(endpoints) + virt) % 2 == 0
