"""Tests for vrjp_lab."""
