"""A small Monte Carlo scan of logical failure rates.

Sweeps two distances of code A over a few noise rates (fewer trials than
the full experiment, so expect noisy numbers), writes the CSV, and if the
plotting package is installed renders the curves.

Run:  python3 demos/small_threshold_scan.py
"""

import os

from jitqec import harness

OUT = os.path.join(os.path.dirname(__file__), "small_scan.csv")

if os.path.exists(OUT):
    os.remove(OUT)

rows = harness.run_sweep(
    codes=["A"], distances=[3, 5], ps=[0.001, 0.003, 0.006, 0.01],
    trials=1500, seed=7, out=OUT, workers=2)

print(f"\n{'L':>3} {'p':>8} {'failures':>9} {'p_fail':>10} {'+-':>10}")
for r in rows:
    print(f"{r['L']:>3} {float(r['p']):8.4f} {r['failures']:>9} "
          f"{float(r['p_fail']):10.5f} {float(r['ci_halfwidth']):10.5f}")

try:
    from jitqec_plots import plot_threshold
except ImportError:
    print("\ninstall the plotting package (plotting/) to draw the curves")
else:
    img = os.path.join(os.path.dirname(__file__), "small_scan.png")
    plot_threshold(OUT, "A", img)
    print(f"\ncurves written to {img}")
