"""
VRJP dynamics: simulation, quenched processes and jump-chain laws
"""

from .law import (
    JumpChainLaw,
    count_vrjp_sequences,
    enumerate_sequences,
    quenched_mixture_law,
    second_jump_oracle,
    total_variation,
    vrjp_jump_chain_law,
)
from .simulate import quenched_transition_matrix, simulate_quenched, simulate_vrjp, simulate_vrjp_batch
from .trajectory import Trajectory

__all__ = [
    "JumpChainLaw",
    "Trajectory",
    "count_vrjp_sequences",
    "enumerate_sequences",
    "quenched_mixture_law",
    "quenched_transition_matrix",
    "second_jump_oracle",
    "simulate_quenched",
    "simulate_vrjp",
    "simulate_vrjp_batch",
    "total_variation",
    "vrjp_jump_chain_law",
]
