"""Guessing which of two qubit states was sent.

The quantum optimum is compared against the ceiling any noncontextual model
respects and against a blind grid search over measurements.
"""

import numpy as np

from qguess.discrimination import DiscriminationInstance, brute_force_optimal, helstrom_bound, helstrom_measurement, nc_bound, success_probability
from qguess.linalg import projector

psi = np.array([1.0, 0.0])
phi = np.array([np.cos(0.4), np.sin(0.4)])
inst = DiscriminationInstance(projector(psi), projector(phi), p1=0.5)

print(f"overlap tr(rho1 rho2)     {np.abs(psi @ phi) ** 2:.6f}")
print(f"quantum optimum           {helstrom_bound(inst):.6f}")
print(f"grid search (2000 steps)  {brute_force_optimal(inst):.6f}")
print(f"noncontextual ceiling     {nc_bound(inst):.6f}")

# the optimal measurement attains the bound
povm = helstrom_measurement(inst)
print(f"success of optimal POVM   {success_probability(inst, povm):.6f}")
