"""
Reports: verdict and decay models, the run collector and the report writer
"""

from .collector import ReportCollector, library_versions
from .models import (
    EXIT_CODES,
    FAIL,
    INCONCLUSIVE,
    PASS,
    DecayRow,
    ExperimentReport,
    RunMetadata,
    SlopeFit,
    Verdict,
)

__all__ = [
    "EXIT_CODES",
    "FAIL",
    "INCONCLUSIVE",
    "PASS",
    "DecayRow",
    "ExperimentReport",
    "ReportCollector",
    "RunMetadata",
    "SlopeFit",
    "Verdict",
    "library_versions",
]
