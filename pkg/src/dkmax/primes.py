"""Prime tables and the counting functions pi, theta and psi.

Everything downstream asks questions of the form "how many primes / how much
log-mass lies below x" for irrational x, so the table answers them with floor
semantics against exact integer primes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, OutOfRangeError, ResourceLimitError

DEFAULT_SIEVE_LIMIT = 2_000_000
# odd-only sieve costs limit/2 bytes
MAX_SIEVE_LIMIT = 1_000_000_000


@dataclass(frozen=True)
class BoundConstants:
    """Explicit constants of the prime bounds pi(x) <= omega1*x/ln x and theta(x) <= omega2*x."""

    omega1: float = 1.2551
    omega2: float = 1.00001


BOUNDS = BoundConstants()


def _sieve_odd(limit: int) -> np.ndarray:
    """Return all primes <= limit using an odd-only Eratosthenes sieve."""
    # index i stands for the odd number 2*i + 1
    size = (limit - 1) // 2 + 1
    is_prime = np.ones(size, dtype=bool)
    is_prime[0] = False
    for i in range(1, (math.isqrt(limit) - 1) // 2 + 1):
        if is_prime[i]:
            p = 2 * i + 1
            is_prime[(p * p) // 2 :: p] = False
    odd = 2 * np.flatnonzero(is_prime) + 1
    return np.concatenate(([2], odd)).astype(np.int64)


def _kahan_prefix(values: np.ndarray) -> np.ndarray:
    out = np.empty(len(values), dtype=np.float64)
    total = 0.0
    comp = 0.0
    for i, v in enumerate(values.tolist()):
        y = v - comp
        t = total + y
        comp = (t - total) - y
        total = t
        out[i] = total
    return out


class PrimeTable:
    """Sieved primes up to ``limit`` with compensated prefix sums of ln p.

    Instances are immutable; build a larger one with :meth:`grown`.
    """

    __slots__ = ("limit", "primes", "log_prefix")

    def __init__(self, limit: int, primes: np.ndarray, log_prefix: np.ndarray):
        self.limit = limit
        self.primes = primes
        self.log_prefix = log_prefix
        primes.flags.writeable = False
        log_prefix.flags.writeable = False

    def __repr__(self) -> str:
        return f"PrimeTable(limit={self.limit}, count={len(self.primes)})"

    def __len__(self) -> int:
        return len(self.primes)

    def prime_list(self, upto: float | None = None) -> list[int]:
        """Primes <= upto (all primes when upto is None) as Python ints."""
        if upto is None:
            return self.primes.tolist()
        return self.primes[: prime_pi(self, upto)].tolist()

    def grown(self, limit: int) -> PrimeTable:
        """Return self if it already covers ``limit``, else a rebuilt table."""
        if limit <= self.limit:
            return self
        return build_prime_table(max(limit, 2 * self.limit))


def build_prime_table(limit: int = DEFAULT_SIEVE_LIMIT) -> PrimeTable:
    if limit < 2:
        raise InvalidArgumentError(f"sieve limit must be >= 2, got {limit}")
    if limit > MAX_SIEVE_LIMIT:
        raise ResourceLimitError(
            f"sieve limit {limit} exceeds the memory budget of {MAX_SIEVE_LIMIT}"
        )
    primes = _sieve_odd(int(limit))
    log_prefix = _kahan_prefix(np.log(primes.astype(np.float64)))
    return PrimeTable(int(limit), primes, log_prefix)


def _check_range(table: PrimeTable, x: float) -> None:
    if x > table.limit:
        raise OutOfRangeError(f"x={x} exceeds the prime table limit {table.limit}")
    if x < 0 or math.isnan(x):
        raise OutOfRangeError(f"x={x} must be >= 0")


def _pi_floor(table: PrimeTable, n: int) -> int:
    return int(np.searchsorted(table.primes, n, side="right"))


def prime_pi(table: PrimeTable, x: float) -> int:
    """Number of primes p <= x."""
    _check_range(table, x)
    return _pi_floor(table, math.floor(x))


def _theta_floor(table: PrimeTable, n: int) -> float:
    r = _pi_floor(table, n)
    return float(table.log_prefix[r - 1]) if r else 0.0


def chebyshev_theta(table: PrimeTable, x: float) -> float:
    """Sum of ln p over primes p <= x."""
    _check_range(table, x)
    return _theta_floor(table, math.floor(x))


def iroot(n: int, m: int) -> int:
    """Largest integer r with r**m <= n."""
    if n < 2 or m == 1:
        return n
    r = int(round(n ** (1.0 / m)))
    while r**m > n:
        r -= 1
    while (r + 1) ** m <= n:
        r += 1
    return r


def chebyshev_psi(table: PrimeTable, x: float) -> float:
    """Sum of theta(x**(1/m)) for m = 1 .. floor(log2 x)."""
    _check_range(table, x)
    n = math.floor(x)
    if n < 2:
        return 0.0
    # theta only sees floor(x**(1/m)), which is the integer m-th root of floor(x)
    terms = [_theta_floor(table, iroot(n, m)) for m in range(1, n.bit_length())]
    return math.fsum(terms)
