from __future__ import annotations

import csv
import math
import sys
from functools import lru_cache
from pathlib import Path

import numpy as np
import pytest

from dkmax.maximizer import find_lambda
from dkmax.primes import build_prime_table

DATA = Path(__file__).parent / "data"
K_MAX = 2000


def read_rows(name: str) -> list[dict[str, str]]:
    with (DATA / name).open(newline="") as fh:
        return list(csv.DictReader(fh))


def expand_partition() -> dict[int, str]:
    """k -> expected N_max factorization string, from the run-length table."""
    out = {}
    for row in read_rows("nmax_partition.csv"):
        for k in range(int(row["k_first"]), int(row["k_last"]) + 1):
            out[k] = row["n_max"]
    return out


def random_sample(n=200, seed=20250731):
    """(k, eps) pairs with k <= 200 and k**(1/eps) inside the default prime table."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        k = int(rng.integers(2, 201))
        lo = max(0.12, math.log(k) / math.log(1.5e6))
        hi = math.log2(k) * 1.05
        out.append((k, float(rng.uniform(lo, hi))))
    return out


@lru_cache(maxsize=None)
def cached_table(limit: int):
    """Prime tables shared by hypothesis examples, which cannot take fixtures."""
    return build_prime_table(limit)


@pytest.fixture(scope="session")
def table():
    return build_prime_table()


@pytest.fixture(scope="session")
def sweep(table):
    """find_lambda for every k in 2..2000, computed once per session."""
    return {k: find_lambda(k, table) for k in range(2, K_MAX + 1)}


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "REPORT", None)
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
