"""
Base: Abstract base class for output writers
"""

from abc import ABC, abstractmethod
from typing import Any


class DataWriter(ABC):
    """Abstract base class for writers of tables, reports and sample streams.

    Writers that hold open resources should implement close().
    """

    @abstractmethod
    def write(self, data: Any):
        """Write one unit of output.

        Args:
            data: Rows, a report dict or a sample set, depending on the writer
        """
        pass

    def close(self):
        """Release resources; no-op by default."""
        pass
