"""
Report writer

Output structure:
    out_dir/
    ├── <command>_report.json    full ExperimentReport (re-runnable via --config)
    ├── <command>_verdicts.csv   one row per verdict
    ├── <command>_decay.csv      decay table, when present
    └── <command>_timing.json    wall-clock seconds (kept out of the report)
"""

from pathlib import Path

from vrjp_lab.writers.records import DECAY_COLUMNS, VERDICT_COLUMNS
from vrjp_lab.writers.table_writer import CsvTableWriter, JsonWriter

from .collector import ReportCollector
from .models import ExperimentReport


class ReportWriter:
    """Writes an ExperimentReport and its tables under one directory."""

    def __init__(self, out_dir: str | Path):
        self.out_dir = str(out_dir).rstrip("/")

    def write(self, report: ExperimentReport, collector: ReportCollector | None = None) -> dict[str, str]:
        """Write all files for the report.

        Returns:
            Mapping of output kind to path
        """
        prefix = f"{self.out_dir}/{report.metadata.command}"
        paths = {"report": f"{prefix}_report.json"}
        JsonWriter(paths["report"]).write(report.to_dict())

        if report.verdicts:
            paths["verdicts"] = f"{prefix}_verdicts.csv"
            rows = [{k: v.to_dict()[k] for k in VERDICT_COLUMNS} for v in report.verdicts]
            CsvTableWriter(paths["verdicts"], VERDICT_COLUMNS).write(rows)

        if report.decay_rows:
            paths["decay"] = f"{prefix}_decay.csv"
            CsvTableWriter(paths["decay"], DECAY_COLUMNS).write([row.to_csv_row() for row in report.decay_rows])

        if collector is not None:
            paths["timing"] = f"{prefix}_timing.json"
            JsonWriter(paths["timing"]).write(collector.timings())
        return paths
