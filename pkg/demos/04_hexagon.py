"""Contextual advantage in the hexagon theory."""

import numpy as np

from qguess.polygon import TABLE1_COLS, TABLE1_ROWS, advantage_scan, gpt_brute_force_argmax, hexagon_scenario, table1

p = 0.5
print(f"probability table at p={p}")
print("      " + "  ".join(f"{c:>11}" for c in TABLE1_COLS))
for name, row in zip(TABLE1_ROWS, table1(p)):
    print(f"{name:>5} " + "  ".join(f"{v + 0.0:11.6f}" for v in np.round(row, 12)))

label, value = gpt_brute_force_argmax(hexagon_scenario(p), 0.5)
print(f"best extremal measurement: effect {label}, success {value:.6f}")

for row in advantage_scan(np.linspace(0, 1, 5), [0.5]):
    print(f"p={row.p:.2f} success={row.success:.4f} NC={row.nc_bound:.4f} advantage={abs(row.advantage) if abs(row.advantage) < 1e-15 else row.advantage:.4f}")
