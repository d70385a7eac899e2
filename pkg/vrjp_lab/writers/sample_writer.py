"""
Sample Stream Writer

Retained field samples go to Parquet, one float64 column per vertex in
dense-index order plus `chain` and `index`; a JSON sidecar records the graph
digest, vertex labels, sampler config and seed.
"""

import json
from typing import Any

import fsspec
import numpy as np
import pyarrow as pa
import pyarrow.parquet as pq

from vrjp_lab.framework.base import DataWriter
from vrjp_lab.sampler.samples import SampleSet

from .table_writer import JsonWriter, to_jsonable


def vertex_column(label) -> str:
    if isinstance(label, tuple):
        return f"u_{label[0]}_{label[1]}"
    return f"u_{label}"


class SampleWriter(DataWriter):
    """Writes a SampleSet as `<name>.parquet` plus `<name>.json`."""

    def __init__(self, output_dir: str, name: str = "samples"):
        self.output_dir = output_dir.rstrip("/")
        self.name = name
        self.fs, self.root_path = fsspec.core.url_to_fs(self.output_dir)
        self.fs.makedirs(self.root_path, exist_ok=True)

    @property
    def parquet_path(self) -> str:
        return f"{self.output_dir}/{self.name}.parquet"

    @property
    def sidecar_path(self) -> str:
        return f"{self.output_dir}/{self.name}.json"

    def write(self, data: SampleSet, seed: int | None = None):
        """Write samples and sidecar.

        Args:
            data: Merged chain output
            seed: Master seed recorded in the sidecar
        """
        n_chains, per_chain, _ = data.values.shape
        columns: dict[str, Any] = {
            "chain": pa.array(np.repeat(np.arange(n_chains, dtype=np.int32), per_chain)),
            "index": pa.array(np.tile(np.arange(per_chain, dtype=np.int64), n_chains)),
        }
        flat = data.flat
        for i, label in enumerate(data.graph.labels):
            columns[vertex_column(label)] = pa.array(flat[:, i])
        table = pa.table(columns)
        with self.fs.open(f"{self.root_path}/{self.name}.parquet", "wb") as f:
            pq.write_table(table, f)

        JsonWriter(self.sidecar_path).write(
            {
                "graph_digest": data.graph.digest(),
                "graph": data.graph.describe(),
                "labels": [list(label) if isinstance(label, tuple) else label for label in data.graph.labels],
                "config": to_jsonable(data.config),
                "seed": seed,
                "diagnostics": data.diagnostics(),
            }
        )


def read_samples(output_dir: str, name: str = "samples") -> tuple[np.ndarray, dict[str, Any]]:
    """Read samples back as (chains, samples per chain, vertices) and the sidecar dict."""
    fs, root = fsspec.core.url_to_fs(output_dir.rstrip("/"))
    with fs.open(f"{root}/{name}.json", "r") as f:
        sidecar = json.load(f)
    with fs.open(f"{root}/{name}.parquet", "rb") as f:
        table = pq.read_table(f)
    chains = table.column("chain").to_numpy()
    n_chains = int(chains.max()) + 1 if len(chains) else 0
    labels = [tuple(label) if isinstance(label, list) else label for label in sidecar["labels"]]
    values = np.stack([table.column(vertex_column(label)).to_numpy() for label in labels], axis=-1)
    return values.reshape(n_chains, -1, len(labels)), sidecar
