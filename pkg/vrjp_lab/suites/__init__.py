"""
Verification suites.

Every check is registered when this package is imported; `verify <suite>`
runs the checks of one suite in registration order.
"""

from vrjp_lab.framework import CheckRegistry

from .convexity import ArborescenceVariance, ConvexityScan, HolderCombination
from .deformation import (
    BoxResistance,
    HarmonicClosedForms,
    HypothesisRefusal,
    Lemma1Bound,
    NashWilliamsAsymptotics,
    PlanConstants,
    ResistanceMonotonicity,
)
from .density import MatrixTreeOracle, Normalization, ShiftCovariance, TreePolynomialClosedForms
from .mixture import FirstJump, JumpChainBookkeeping, MixtureIdentity, SecondJump
from .moments import (
    DeterminantDrift,
    ExpMomentIdentity,
    JensenBound,
    SamplerMoment,
    SamplerReproducibility,
    TwoVertexMarginal,
    VanishingStep,
)
from .taylor import GammaTildeOptimum, TaylorGrid
from .tilt import RnRatioConsistency, TiltedMoment, TiltedWeightsBound

_CHECKS = [
    MatrixTreeOracle,
    TreePolynomialClosedForms,
    Normalization,
    ShiftCovariance,
    ExpMomentIdentity,
    SamplerMoment,
    JensenBound,
    TwoVertexMarginal,
    SamplerReproducibility,
    DeterminantDrift,
    VanishingStep,
    RnRatioConsistency,
    TiltedMoment,
    TiltedWeightsBound,
    ConvexityScan,
    ArborescenceVariance,
    HolderCombination,
    TaylorGrid,
    GammaTildeOptimum,
    HarmonicClosedForms,
    BoxResistance,
    ResistanceMonotonicity,
    NashWilliamsAsymptotics,
    PlanConstants,
    Lemma1Bound,
    HypothesisRefusal,
    FirstJump,
    SecondJump,
    MixtureIdentity,
    JumpChainBookkeeping,
]

for _check in _CHECKS:
    CheckRegistry.register(_check.__name__, _check)

__all__ = [check.__name__ for check in _CHECKS]
