"""Generalized divisor functions d_k over factored integers.

d_k(n) counts ordered factorizations of n into k factors; for
n = prod p_i^m_i it equals prod C(m_i + k - 1, k - 1).  Large n only ever
appear in factored form, and d_k is carried in the log domain with the exact
integer produced on demand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable

import numpy as np

from .errors import DomainError, InvalidArgumentError, ResourceLimitError
from .primes import PrimeTable

ORACLE_CAP = 1_000_000
ORACLE_MAX_K = 12


@dataclass(frozen=True)
class FactoredNat:
    """A positive integer as ascending (prime, exponent) pairs plus its natural log."""

    factors: tuple[tuple[int, int], ...] = ()
    log_value: float = field(default=0.0, compare=False)

    @classmethod
    def from_factors(cls, factors: Iterable[tuple[int, int]]) -> FactoredNat:
        pairs = tuple(sorted((int(p), int(e)) for p, e in factors if e))
        if any(e < 0 for _, e in pairs):
            raise InvalidArgumentError(f"negative exponent in {pairs}")
        if len({p for p, _ in pairs}) != len(pairs):
            raise InvalidArgumentError(f"repeated prime in {pairs}")
        return cls(pairs, math.fsum(e * math.log(p) for p, e in pairs))

    @classmethod
    def from_exponents(cls, exponents: dict[int, int]) -> FactoredNat:
        return cls.from_factors(exponents.items())

    @cached_property
    def value(self) -> int:
        return math.prod(p**e for p, e in self.factors)

    def exponent(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def exponents(self) -> dict[int, int]:
        return dict(self.factors)

    def times_primes(self, primes: Iterable[int]) -> FactoredNat:
        exps = self.exponents()
        for p in primes:
            exps[p] = exps.get(p, 0) + 1
        return FactoredNat.from_exponents(exps)

    def is_at_most(self, n: int) -> bool:
        """Exact comparison value <= n that avoids materializing huge values."""
        if self.log_value > math.log(n) + 1e-6:
            return False
        return self.value <= n

    def format(self) -> str:
        """Human-readable factorization such as ``2^5 x 3^3 x 5^2 x 7``."""
        if not self.factors:
            return "1"
        return " x ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)

    def __str__(self) -> str:
        return self.format()


@lru_cache(maxsize=1 << 16)
def log_binom(m: int, k: int) -> float:
    """ln C(m + k - 1, k - 1), i.e. ln d_k(p^m)."""
    if m == 0:
        return 0.0
    return math.log(math.comb(m + k - 1, k - 1))


@dataclass(frozen=True)
class DivisorValue:
    """d_k(n) as a log plus a lazily materialized exact integer."""

    n: FactoredNat
    k: int
    log: float

    @cached_property
    def exact(self) -> int:
        return math.prod(math.comb(m + self.k - 1, self.k - 1) for _, m in self.n.factors)


def factorize(n: int, table: PrimeTable) -> FactoredNat:
    """Trial-divide n by sieved primes up to sqrt(n)."""
    if n < 1:
        raise InvalidArgumentError(f"cannot factorize {n}")
    exps: dict[int, int] = {}
    rem = n
    for p in table.prime_list(min(math.isqrt(n), table.limit)):
        if p * p > rem:
            break
        if rem % p == 0:
            e = 0
            while rem % p == 0:
                rem //= p
                e += 1
            exps[p] = e
    if rem > 1:
        if rem > table.limit * table.limit:
            raise ResourceLimitError(
                f"cofactor {rem} of {n} is beyond the reach of primes <= {table.limit}"
            )
        exps[rem] = exps.get(rem, 0) + 1
    return FactoredNat.from_exponents(exps)


def d_k(n: FactoredNat, k: int) -> DivisorValue:
    if k < 2:
        raise InvalidArgumentError(f"k must be >= 2, got {k}")
    return DivisorValue(n, k, math.fsum(log_binom(m, k) for _, m in n.factors))


def f_value(log_dk: float, log_n: float, k: int) -> float:
    """ln d_k(n) * ln ln n / (ln k * ln n) from precomputed logs."""
    return log_dk * math.log(log_n) / (math.log(k) * log_n)


def f_k(n: FactoredNat, k: int) -> float:
    if not n.factors or n.factors == ((2, 1),):
        raise DomainError("f_k is defined only for n >= 3")
    return f_value(d_k(n, k).log, n.log_value, k)


# --- convolution oracle --------------------------------------------------------


@lru_cache(maxsize=4)
def spf_sieve(limit: int) -> np.ndarray:
    """Smallest prime factor of every n <= limit (spf[0] = spf[1] = 0)."""
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, limit + 1):
        if spf[p] == 0:
            spf[p] = p
            if p * p <= limit:
                block = spf[p * p :: p]
                block[block == 0] = p
    return spf


def _divisors(n: int, spf: np.ndarray) -> list[int]:
    divs = [1]
    while n > 1:
        p = int(spf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        divs = [d * p**j for d in divs for j in range(e + 1)]
    return sorted(divs)


def d_k_oracle(n: int, k: int, cap: int = ORACLE_CAP) -> int:
    """d_k(n) by k-1 successive divisor-sum convolutions starting from the all-ones function.

    Deliberately never touches the binomial product formula.
    """
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    if k < 1:
        raise InvalidArgumentError(f"k must be >= 1, got {k}")
    if n > cap:
        raise ResourceLimitError(f"n={n} exceeds the oracle cap {cap}")
    if k > ORACLE_MAX_K:
        raise ResourceLimitError(f"k={k} exceeds the oracle limit {ORACLE_MAX_K}")
    spf = spf_sieve(_oracle_sieve_size(n))
    divs = _divisors(n, spf)
    primes = sorted({int(spf[q]) for q in divs if q > 1})
    values = {q: 1 for q in divs}
    for _ in range(k - 1):
        # g = f * 1 one prime axis at a time: after the pass for p,
        # values[q] sums the old values over q / p^j
        for p in primes:
            for q in divs:
                if q % p == 0:
                    values[q] += values[q // p]
    return values[n]


def _oracle_sieve_size(n: int) -> int:
    # share one sieve between calls: round up to a power of two
    return max(1024, 1 << (n - 1).bit_length())
