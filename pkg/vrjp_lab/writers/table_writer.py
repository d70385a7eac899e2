"""
Table and JSON writers

CSV through pyarrow.csv and JSON through json.dumps(sort_keys=True), both
opened with fsspec so local paths and object-store URLs work alike. Output
depends only on the data, never on time or process.
"""

import json
import math
from typing import Any

import fsspec
import numpy as np
import pyarrow as pa
import pyarrow.csv as pacsv

from vrjp_lab.framework.base import DataWriter


def to_jsonable(value: Any) -> Any:
    """Recursively convert numpy scalars/arrays and tuples; non-finite floats become None."""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating | float):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, np.bool_):
        return bool(value)
    return value


class CsvTableWriter(DataWriter):
    """Writes a list of row dicts as one CSV file with a fixed column order."""

    def __init__(self, output_path: str, columns: list[str], schema: pa.Schema | None = None):
        """Initialize CSV writer.

        Args:
            output_path: Target file (local path or fsspec URL)
            columns: Column order; rows may not carry other keys
            schema: Optional explicit Arrow schema
        """
        self.output_path = output_path
        self.columns = columns
        self.schema = schema
        self.fs, self.path = fsspec.core.url_to_fs(output_path)
        parent = self.path.rsplit("/", 1)[0] if "/" in self.path else ""
        if parent:
            self.fs.makedirs(parent, exist_ok=True)

    def _table(self, rows: list[dict[str, Any]]) -> pa.Table:
        for row in rows:
            extra = set(row) - set(self.columns)
            if extra:
                raise ValueError(f"row has columns not in the table: {sorted(extra)}")
        data = {
            column: [to_jsonable(row.get(column)) for row in rows]
            for column in self.columns
        }
        if self.schema is not None:
            return pa.Table.from_pydict(data, schema=self.schema)
        return pa.Table.from_pydict(data)

    def write(self, data: list[dict[str, Any]]):
        """Write all rows (overwrites the file).

        Args:
            data: Row dicts keyed by column name
        """
        table = self._table(data)
        with self.fs.open(self.path, "wb") as f:
            pacsv.write_csv(table, f, write_options=pacsv.WriteOptions(quoting_style="needed"))


class JsonWriter(DataWriter):
    """Writes one JSON document with sorted keys."""

    def __init__(self, output_path: str, indent: int = 2):
        self.output_path = output_path
        self.indent = indent
        self.fs, self.path = fsspec.core.url_to_fs(output_path)
        parent = self.path.rsplit("/", 1)[0] if "/" in self.path else ""
        if parent:
            self.fs.makedirs(parent, exist_ok=True)

    def write(self, data: dict[str, Any]):
        text = json.dumps(to_jsonable(data), sort_keys=True, indent=self.indent, allow_nan=False)
        with self.fs.open(self.path, "w") as f:
            f.write(text + "\n")


def read_csv_rows(path: str) -> list[dict[str, Any]]:
    """Read a CSV written by CsvTableWriter back into row dicts."""
    fs, fs_path = fsspec.core.url_to_fs(path)
    with fs.open(fs_path, "rb") as f:
        return pacsv.read_csv(f).to_pylist()
