"""Nonlocality certification from minimal-error state discrimination.

Submodules
----------
linalg          small complex linear algebra for qubits and qubit pairs
discrimination  Helstrom, noncontextual and classical guessing bounds
game            the two-ensemble guessing game and its optimal instances
protocol        finite-shot simulation with Hoeffding certificates
polygon         polygon GPT models and their contextual advantage
cli             command-line front end (``python -m qguess``)
"""

__version__ = "0.1.0"

from .discrimination import (  # noqa: E402
    ClassicalGuessInstance,
    DiscriminationInstance,
    brute_force_optimal,
    classical_guess_prob,
    helstrom_bound,
    helstrom_measurement,
    nc_bound,
    success_probability,
)
from .game import (  # noqa: E402
    Assemblage,
    BipartiteState,
    Ensemble,
    GameInstance,
    Verdict,
    certify,
    entanglement_profile,
    game_nc_bound,
    ghjw_povm,
    ns_residual,
    optimal_payoff,
    payoff,
    solve_optimal_instance,
    steered_assemblage,
)
from .polygon import (  # noqa: E402
    advantage_scan,
    gpt_brute_force,
    gpt_prob,
    gpt_success,
    hexagon_nc_bound,
    hexagon_scenario,
    polygon_theory,
    table1,
)
from .protocol import SimConfig, SimResult, certificate, simulate_game  # noqa: E402
