"""
Registry: Check registry for dynamic instantiation

Checks register under their PascalCase class name; config files refer to
them in snake_case (see CheckConfig.get_class_name).
"""

from typing import Any

from .check import Check, _snake_case
from .config import CheckConfig, SuiteConfig


class CheckRegistry:
    """Registry for check classes."""

    _checks: dict[str, type[Check]] = {}

    @classmethod
    def register(cls, name: str, check_class: type[Check]):
        """Register a check class.

        Args:
            name: Check class name (used in config after snake_case conversion)
            check_class: Check class to register
        """
        cls._checks[name] = check_class

    @classmethod
    def create(cls, name: str, params: dict[str, Any] | None = None) -> Check:
        """Create a check instance from registry.

        Raises:
            ValueError: If the check name is not registered
        """
        if name not in cls._checks:
            raise ValueError(f"Check '{name}' not found in registry. Available checks: {list(cls._checks.keys())}")

        params = params or {}
        return cls._checks[name](**params)

    @classmethod
    def list_checks(cls) -> list[str]:
        return list(cls._checks.keys())

    @classmethod
    def suites(cls) -> list[str]:
        """Suite names in registration order."""
        return list(dict.fromkeys(check.suite for check in cls._checks.values()))

    @classmethod
    def default_suite(cls, suite: str) -> SuiteConfig:
        """All registered checks of one suite with default parameters."""
        names = [name for name, check in cls._checks.items() if check.suite == suite]
        if not names:
            raise ValueError(f"Suite '{suite}' not found. Available suites: {cls.suites() + ['all']}")
        return SuiteConfig(name=suite, checks=[CheckConfig(name=_snake_case(name)) for name in names])


def resolve_suites(name: str, configured: list[SuiteConfig]) -> list[SuiteConfig]:
    """Suites to run for `verify <name>`.

    A suite defined in config replaces the registered default of the same
    name; `all` expands to every registered suite.
    """
    by_name = {suite.name: suite for suite in configured}
    names = CheckRegistry.suites() if name == "all" else [name]
    if name == "all":
        names += [suite.name for suite in configured if suite.name not in names]
    return [by_name[n] if n in by_name else CheckRegistry.default_suite(n) for n in names]
