"""
Unit tests for the job executor

Ray is replaced by a recorder so the tests run without starting a cluster.
"""

import pytest

from vrjp_lab.framework import executor as executor_module
from vrjp_lab.framework import worker as worker_module
from vrjp_lab.framework.config import ExecutorConfig
from vrjp_lab.framework.executor import Executor


class _RayRecorder:
    def __init__(self, initialized: bool):
        self.initialized = initialized
        self.calls: list[str] = []

    def is_initialized(self) -> bool:
        return self.initialized

    def init(self, **kwargs):
        self.calls.append("init")
        self.initialized = True

    def kill(self, actor):
        self.calls.append("kill")

    def shutdown(self):
        self.calls.append("shutdown")
        self.initialized = False


class _Actor:
    @staticmethod
    def remote(name: str) -> str:
        return name


@pytest.fixture
def fake_ray(monkeypatch):
    def install(initialized: bool) -> _RayRecorder:
        recorder = _RayRecorder(initialized)
        monkeypatch.setattr(executor_module, "ray", recorder)
        monkeypatch.setattr(worker_module, "ChainWorker", _Actor)
        return recorder

    return install


class TestExecutor:
    """Test in-process mapping and Ray lifetime."""

    def test_serial_map_keeps_order(self):
        """One thread runs jobs in-process, in order."""
        with Executor(ExecutorConfig(threads=1)) as executor:
            assert executor.map(lambda x: 2 * x, [{"x": i} for i in range(5)]) == [0, 2, 4, 6, 8]

    def test_started_ray_is_shut_down(self, fake_ray):
        """An executor that started Ray stops it."""
        recorder = fake_ray(initialized=False)
        with Executor(ExecutorConfig(threads=2)):
            pass
        assert recorder.calls == ["init", "kill", "kill", "shutdown"]

    def test_existing_ray_left_running(self, fake_ray):
        """An executor joining a running Ray session leaves it up."""
        recorder = fake_ray(initialized=True)
        with Executor(ExecutorConfig(threads=2)):
            pass
        assert recorder.calls == ["kill", "kill"]
        assert recorder.initialized
