"""The delayed matching decoder, step by step.

A string of three faulty measurements fakes a broken syndrome string whose
endpoints sit three dual steps apart.  Joining them immediately would mean
trusting a pattern that is probably a measurement artefact, so the decoder
parks both endpoints at the top boundary and files the pair away at a
reduced pseudodistance.  When the same (translated) pair shows up again a
timestep later, the stored value is below the join threshold and the pair
is closed off locally; nothing reaches the logical level.

Run:  python3 demos/decoder_walkthrough.py
"""

import numpy as np

from jitqec import channel, correction, decoder, frame, lattice

CODE, L = "A", 3
params = decoder.DecoderParams(c=2, r=2)


def fresh_errors(sl):
    return channel.ErrorState(np.zeros(sl.n, np.uint8),
                              np.zeros(len(sl.z_faces), np.uint8),
                              np.zeros(sl.n, np.uint8))


def string_of_flips(sl, length):
    dual = sl.dual
    for start in range(len(dual.nodes)):
        if not dual.real[start]:
            continue
        stack = [(start, [], {start})]
        while stack:
            node, faces, seen = stack.pop()
            if len(faces) == length:
                if dual.real[node] and lattice.dual_distance(
                        dual.nodes[start], dual.nodes[node], sl) == length:
                    return faces
                continue
            for (nb, f) in dual.adj[node]:
                if dual.real[nb] and nb not in seen:
                    stack.append((nb, faces + [f], seen | {nb}))
    raise RuntimeError("no string found")


sl0 = lattice.build_slice(CODE, L, 0)
sl1 = lattice.build_slice(CODE, L, 1)
sl2 = lattice.build_slice(CODE, L, 2)

print("timestep 0: three measurement flips along a dual string")
err = fresh_errors(sl0)
for f in string_of_flips(sl0, 3):
    err.meas_flips[f] = 1
syn = channel.compute_syndrome(sl0, err)
endpoints = channel.extract_endpoints(syn, sl0)
print("  endpoints:", endpoints)
print("  their dual distance:",
      lattice.dual_distance(endpoints[0], endpoints[1], sl0))

m = decoder.PseudoDistanceMap()
repaired, m = decoder.delayed_match(endpoints, m, params, sl0, sl1, syn)
print("  matching joined the pair to the top; map for the next step:")
for pair, value in m.items():
    print(f"    {pair} -> pseudodistance {value}")

corr = correction.push_to_top(repaired, sl0)
rec = correction.collapse(sl0, err, corr)
carried = correction.carry_to_next(rec, sl1)
print("  residual carried to the next bottom layer:",
      [sl1.qubits[i] for i in np.nonzero(carried)[0]])

print("\ntimestep 1: the deferred defect reappears")
err1 = fresh_errors(sl1)
err1.x_carried = carried
syn1 = channel.compute_syndrome(sl1, err1)
endpoints1 = channel.extract_endpoints(syn1, sl1)
print("  endpoints:", endpoints1)
pair1 = decoder.mwpm(endpoints1, sl1)[0]
if pair1 in m:
    print(f"  recognised from the map at pseudodistance {m[pair1]}")
else:
    print(f"  fresh pair at dual distance {decoder.pair_distance(pair1, sl1)}")
repaired1, m = decoder.delayed_match(endpoints1, m, params, sl1, sl2, syn1)
print("  below the join threshold: joined to each other")
print("  map afterwards:", dict(m.entries))
corr1 = correction.push_to_top(repaired1, sl1)
rec1 = correction.collapse(sl1, err1, corr1)
residual = [c for c, b in zip(rec1.surviving, rec1.residual) if b]
print("  residual on the final layer:", residual)

layer = lattice.build_layer(CODE, L, 2)
vec = np.zeros(layer.n, np.uint8)
for c, b in zip(rec1.surviving, rec1.residual):
    if b:
        vec[layer.qindex[c]] = 1
print("  logical failure:", correction.layer_failure(layer, vec))
