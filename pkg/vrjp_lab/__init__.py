"""VRJP Lab.

Numerical laboratory for the vertex-reinforced jump process: its mixing
field on finite graphs and wired Z² boxes, a Metropolis sampler for that
field, VRJP and quenched jump-chain simulators, and the harmonic
deformation bounds on E[e^{s u_y}], with Ray-parallel verification suites.
"""

__version__ = "0.1.0"

from vrjp_lab.framework import (
    Check,
    CheckContext,
    CheckRegistry,
    LabConfig,
)

__all__ = [
    "__version__",
    "Check",
    "CheckContext",
    "CheckRegistry",
    "LabConfig",
]
