"""Finite-shot certification.

The entangled instance is certified at a strict significance level, while a
product state with the same reduced state on Bob's side never is.
"""

import dataclasses

import numpy as np

from qguess.game import BipartiteState, solve_optimal_instance
from qguess.linalg import KET0, projector
from qguess.protocol import SimConfig, certificate, simulate_game

inst = solve_optimal_instance(0.8)
res = simulate_game(inst, SimConfig(shots=100_000, seed=42, alpha=1e-6))
cert = certificate(res, 1e-6)
print(f"entangled: estimate {res.payoff_estimate:.5f} +/- {res.std_error:.5f}, "
      f"gap {cert.gap:.4f} vs required {cert.required_gap:.4f} -> {cert.verdict.value}")

product = dataclasses.replace(inst, state=BipartiteState.from_density(np.kron(projector(KET0), inst.rho_b)))
res = simulate_game(product, SimConfig(shots=100_000, seed=42, alpha=1e-6))
print(f"product:   estimate {res.payoff_estimate:.5f} -> {res.verdict.value}")
