"""The optimal entangled instance of the guessing game.

Bob holds half of an entangled pair. Alice's two measurements steer him into
ensembles that contain the two states to be discriminated; no-signalling ties
both ensembles to the same reduced state.
"""

import numpy as np

from qguess.game import certify, ns_residual, solve_optimal_instance, steered_assemblage

for b in (0.2, 0.5, 0.8):
    inst = solve_optimal_instance(b)
    asm = steered_assemblage(inst.state, inst.alice_povms)
    cert = certify(inst.achieved_payoff(), inst.nc_bound)
    print(
        f"b={b}: theta={inst.theta:.6f} q={inst.q1:.6f} "
        f"payoff={cert.payoff:.6f} bound={cert.bound:.6f} margin={cert.margin:.6f} "
        f"NS residual={ns_residual(asm):.1e} -> {cert.verdict.value}"
    )

inst = solve_optimal_instance(0.8)
print("reduced state on Bob's side:")
print(np.round(inst.rho_b, 6))
print("spectrum:", np.round(np.linalg.eigvalsh(inst.rho_b)[::-1], 6))
