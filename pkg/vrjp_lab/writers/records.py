"""
Record writers for trajectories, jump-chain laws and estimate tables
"""

from vrjp_lab.dynamics.law import JumpChainLaw
from vrjp_lab.dynamics.trajectory import Trajectory
from vrjp_lab.graph.core import Graph
from vrjp_lab.sampler.estimate import MomentEstimate

from .table_writer import CsvTableWriter, JsonWriter

ESTIMATE_COLUMNS = ["N", "y_x", "y_y", "s", "estimate", "stderr", "ess", "chains"]
DECAY_COLUMNS = ["N", "y_x", "y_y", "s", "Wbar", "R", "eta_instance", "eta_asymptotic", "bound", "estimate", "stderr", "pass"]
RESISTANCE_COLUMNS = ["N", "y_x", "y_y", "R", "nash_williams", "max_current", "energy_times_R"]
VERDICT_COLUMNS = ["suite", "check", "instance", "observed", "bound", "tolerance", "status", "reference"]


def write_trajectory(trajectory: Trajectory, graph: Graph, path: str):
    """`time,vertex` CSV, initial vertex at time 0 first."""
    CsvTableWriter(path, ["time", "vertex"]).write(trajectory.to_rows(graph))


def write_jump_chain_law(law: JumpChainLaw, path: str):
    """JSON map sequence -> [probability, stderr]."""
    JsonWriter(path).write(law.to_json_dict())


def estimate_row(estimate: MomentEstimate, n: int | None) -> dict:
    y = estimate.y if isinstance(estimate.y, tuple) else (estimate.y, None)
    return {
        "N": n,
        "y_x": y[0],
        "y_y": y[1],
        "s": estimate.s,
        "estimate": estimate.estimate,
        "stderr": estimate.stderr,
        "ess": estimate.ess,
        "chains": estimate.n_chains,
    }


def write_estimates(estimates: list[MomentEstimate], n: int | None, path: str):
    """`N,y_x,y_y,s,estimate,stderr,ess,chains` CSV."""
    CsvTableWriter(path, ESTIMATE_COLUMNS).write([estimate_row(e, n) for e in estimates])
