"""Collapsing the minimal 2x2x2 code onto its top face.

Measuring the four bottom qubits in the X basis projects the side Z checks
to random signs; their footprints on the two faces are identical, so the
top-face correction can be read straight off the -1 outcomes below.

Run:  python3 demos/collapse_footprint.py
"""

import itertools

import numpy as np

from jitqec import correction

print("bottom outcomes (qubits 5-8)   parity   Z correction on top (1-4)")
print("-" * 66)
for signs in itertools.product((1, -1), repeat=4):
    outcomes = dict(zip((5, 6, 7, 8), signs))
    parity = correction.cube_outcome_parity(outcomes)
    if parity != 1:
        # odd parity signals a Z error on the measured face, not a
        # stabiliser footprint; the code state never produces it
        print(f"{signs}   odd    (not a code state)")
        continue
    corr = correction.z_footprint(outcomes)
    where = [int(q) + 1 for q in np.nonzero(corr.qubits)[0]]
    print(f"{signs}   even   Z on {where if where else 'nothing'}")

print()
print("Note the two marked cases:")
print("  (-1,-1,+1,+1): the footprint of the side check on qubits 1,2,5,6")
print("  (+1,-1,+1,-1): Z on 2 and 4, a logical Z carried to the top face")
