"""Shared test configuration.

Hypothesis runs with a fixed derandomized profile so the suite is
reproducible; numerical checks have no timing component, so per-example
deadlines are disabled.
"""
from hypothesis import settings

settings.register_profile("ci", max_examples=100, deadline=None, derandomize=True)
settings.load_profile("ci")
