"""
Lab Framework: configuration, checks, registries, errors and reports

The executor and Ray worker live in `framework.executor` / `framework.worker`
and are imported where jobs are dispatched.
"""

# Base classes
from .base import DataWriter

# Check classes
from .check import Check, CheckContext
from .config import (
    CheckConfig,
    DeformationConfig,
    ExecutorConfig,
    GraphConfig,
    LabConfig,
    SamplerConfig,
    SuiteConfig,
    VrjpConfig,
)
from .errors import (
    ConfigError,
    FieldOverflowError,
    HypothesisViolation,
    NonFiniteDensityError,
    PinningError,
    QuadratureDimensionError,
    SamplerDriftError,
    StructuralError,
    UnknownVertexError,
)

# Registry
from .registry import CheckRegistry, resolve_suites
from .seeding import stream

__all__ = [
    # Config
    "CheckConfig",
    "DeformationConfig",
    "ExecutorConfig",
    "GraphConfig",
    "LabConfig",
    "SamplerConfig",
    "SuiteConfig",
    "VrjpConfig",
    # Checks
    "Check",
    "CheckContext",
    "CheckRegistry",
    "resolve_suites",
    # Errors
    "ConfigError",
    "FieldOverflowError",
    "HypothesisViolation",
    "NonFiniteDensityError",
    "PinningError",
    "QuadratureDimensionError",
    "SamplerDriftError",
    "StructuralError",
    "UnknownVertexError",
    # Base
    "DataWriter",
    "stream",
]
