"""Shared fixtures.

The full recursive bound table is expensive (about two minutes on four
cores), so it is built once per session, lazily, and handed to every test
that needs it together with its build time.
"""
import os
import time

import pytest

from mapface.bounds import beta_table


@pytest.fixture(scope="session")
def beta_full():
    workers = min(8, os.cpu_count() or 1)
    start = time.perf_counter()
    table = beta_table(4157, workers=workers)
    return table, time.perf_counter() - start
