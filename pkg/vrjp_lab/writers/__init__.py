"""
Writers: CSV tables, JSON documents and Parquet sample streams
"""

from .records import (
    DECAY_COLUMNS,
    ESTIMATE_COLUMNS,
    RESISTANCE_COLUMNS,
    VERDICT_COLUMNS,
    estimate_row,
    write_estimates,
    write_jump_chain_law,
    write_trajectory,
)
from .sample_writer import SampleWriter, read_samples
from .table_writer import CsvTableWriter, JsonWriter, read_csv_rows, to_jsonable

__all__ = [
    "DECAY_COLUMNS",
    "ESTIMATE_COLUMNS",
    "RESISTANCE_COLUMNS",
    "VERDICT_COLUMNS",
    "CsvTableWriter",
    "JsonWriter",
    "SampleWriter",
    "estimate_row",
    "read_csv_rows",
    "read_samples",
    "to_jsonable",
    "write_estimates",
    "write_jump_chain_law",
    "write_trajectory",
]
