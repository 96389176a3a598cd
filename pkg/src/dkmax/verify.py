"""Exhaustive scans over [1, n_limit] used as independent checks.

ln d_k(n) is built for the whole range at once with an additive sieve: every
prime power p^e dividing n contributes ln((e + k - 1)/e), and these telescope
to ln C(m + k - 1, k - 1) for the exact power p^m.  Anything the float scan
flags as close to a decision boundary is rechecked with exact integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .divisor import DivisorValue, FactoredNat, d_k, f_k, factorize
from .errors import InvalidArgumentError, ResourceLimitError
from .primes import PrimeTable, build_prime_table

MAX_SCAN = 100_000_000
MAX_SUPERIORITY_SCAN = 10_000_000
MAX_VIOLATIONS = 32
SCAN_TOL = 1e-9


@dataclass
class ScanReport:
    k: int
    n_limit: int
    argmax: int
    max_f: float
    violations: list[tuple[int, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def log_dk_table(k: int, n_limit: int) -> np.ndarray:
    """Array whose entry n is ln d_k(n) for 0 < n <= n_limit (entry 0 unused)."""
    if k < 2:
        raise InvalidArgumentError(f"k must be >= 2, got {k}")
    if n_limit > MAX_SCAN:
        raise ResourceLimitError(f"scan limit {n_limit} exceeds {MAX_SCAN}")
    out = np.zeros(n_limit + 1, dtype=np.float64)
    if n_limit < 2:
        return out
    for p in build_prime_table(max(n_limit, 2)).prime_list(n_limit):
        q, e = p, 1
        while q <= n_limit:
            out[q::q] += math.log1p((k - 1) / e)
            q *= p
            e += 1
    return out


def _exact_dk(n: int, k: int, table: PrimeTable) -> DivisorValue:
    return d_k(factorize(n, table), k)


def _cap(violations: list[tuple[int, str]]) -> list[tuple[int, str]]:
    if len(violations) <= MAX_VIOLATIONS:
        return violations
    extra = len(violations) - MAX_VIOLATIONS
    return violations[:MAX_VIOLATIONS] + [(-1, f"truncated: {extra} more")]


def _f_argmax(k: int, logd: np.ndarray, table: PrimeTable) -> tuple[int, float]:
    n_limit = len(logd) - 1
    if n_limit < 3:
        raise InvalidArgumentError("need n_limit >= 3")
    n = np.arange(3, n_limit + 1, dtype=np.float64)
    ln = np.log(n)
    f = logd[3:] * np.log(ln) / (math.log(k) * ln)
    top = float(f.max())
    near = np.flatnonzero(f >= top - SCAN_TOL) + 3
    # rescore the near-maximal ones exactly; ties go to the smaller n
    best = max(((f_k(factorize(int(m), table), k), -int(m)) for m in near))
    return -best[1], best[0]


def brute_force_max_f(k: int, n_limit: int, table: PrimeTable | None = None) -> ScanReport:
    """argmax of f_k over 3 <= n <= n_limit."""
    table = table or build_prime_table()
    logd = log_dk_table(k, n_limit)
    arg, best = _f_argmax(k, logd, table)
    return ScanReport(k, n_limit, arg, best)


def verify_superiority(
    k: int, eps: float, n: FactoredNat, n_limit: int, table: PrimeTable | None = None
) -> ScanReport:
    """Check ln d_k(m) - eps ln m <= ln d_k(n) - eps ln n for every m <= n_limit.

    The report's argmax/max_f refer to f_k on the scanned range; violations
    list the m that beat n.
    """
    if n_limit > MAX_SUPERIORITY_SCAN:
        raise ResourceLimitError(f"scan limit {n_limit} exceeds {MAX_SUPERIORITY_SCAN}")
    table = table or build_prime_table()
    logd = log_dk_table(k, n_limit)
    target = d_k(n, k).log - eps * n.log_value
    m = np.arange(1, n_limit + 1, dtype=np.float64)
    score = logd[1:] - eps * np.log(m)
    tol = SCAN_TOL * max(1.0, abs(target))
    violations = [
        (int(i) + 1, f"excess {float(score[i]):.12g} > {target:.12g}")
        for i in np.flatnonzero(score > target + tol)
    ]
    arg, best = _f_argmax(k, logd, table) if n_limit >= 3 else (n_limit, math.nan)
    return ScanReport(k, n_limit, arg, best, _cap(violations))


def verify_k_highly_composite(k: int, n: int, table: PrimeTable | None = None) -> ScanReport:
    """Check d_k(m) < d_k(n) for every 1 <= m < n."""
    if n > MAX_SUPERIORITY_SCAN:
        raise ResourceLimitError(f"n={n} exceeds {MAX_SUPERIORITY_SCAN}")
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    table = table or build_prime_table()
    logd = log_dk_table(k, n)
    target = _exact_dk(n, k, table)
    suspects = np.flatnonzero(logd[1:n] >= target.log - SCAN_TOL) + 1
    violations = []
    for m in suspects.tolist():
        dm = _exact_dk(m, k, table).exact
        if dm >= target.exact:
            violations.append((m, f"d_{k}({m}) = {dm} >= d_{k}({n}) = {target.exact}"))
    arg, best = _f_argmax(k, logd, table) if n >= 3 else (n, math.nan)
    return ScanReport(k, n, arg, best, _cap(violations))
