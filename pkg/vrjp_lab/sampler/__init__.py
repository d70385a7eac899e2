"""
Field sampler: Metropolis chains for the mixing field and moment estimators
"""

from .estimate import MomentEstimate, estimate_exp_moment, ks_distance
from .metropolis import ChainResult, FieldChain, run_chain, sample_chain
from .samples import SampleSet, sample_field

__all__ = [
    "ChainResult",
    "FieldChain",
    "MomentEstimate",
    "SampleSet",
    "estimate_exp_moment",
    "ks_distance",
    "run_chain",
    "sample_chain",
    "sample_field",
]
