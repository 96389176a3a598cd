import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import cached_table
from dkmax.errors import InvalidArgumentError, OutOfRangeError, ResourceLimitError
from dkmax.primes import (
    BOUNDS,
    MAX_SIEVE_LIMIT,
    build_prime_table,
    chebyshev_psi,
    chebyshev_theta,
    iroot,
    prime_pi,
)

FIRST_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71]


@pytest.fixture(scope="module")
def small():
    return build_prime_table(100_000)


def test_small_tables():
    assert build_prime_table(10).prime_list() == [2, 3, 5, 7]
    assert build_prime_table(2).prime_list() == [2]
    hundred = build_prime_table(100).prime_list()
    assert len(hundred) == 25 and hundred[-1] == 97


def test_sieve_matches_trial_division():
    def is_prime(n):
        return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))

    assert build_prime_table(5000).prime_list() == [n for n in range(5001) if is_prime(n)]


def test_limit_errors():
    with pytest.raises(InvalidArgumentError):
        build_prime_table(1)
    with pytest.raises(ResourceLimitError):
        build_prime_table(MAX_SIEVE_LIMIT + 1)


def test_table_is_read_only(small):
    with pytest.raises(ValueError):
        small.primes[0] = 4


def test_grown(small):
    assert small.grown(50) is small
    assert small.grown(300_000).limit >= 300_000


def test_counting_examples(small):
    assert prime_pi(small, 2) == 1
    assert prime_pi(small, 10) == 4
    assert prime_pi(small, 100) == 25
    assert chebyshev_theta(small, 1.9) == 0
    assert chebyshev_theta(small, 10) == pytest.approx(math.log(210), rel=1e-14)
    assert chebyshev_theta(small, 4) == pytest.approx(math.log(6), rel=1e-14)


def test_psi_examples(small):
    assert chebyshev_psi(small, 1.5) == 0
    assert chebyshev_psi(small, 10) == pytest.approx(math.log(2520), rel=1e-14)
    # prime powers up to 8 are 2, 4, 8, 3, 5, 7
    expected = 3 * math.log(2) + math.log(3) + math.log(5) + math.log(7)
    assert chebyshev_psi(small, 8) == pytest.approx(expected, rel=1e-14)
    assert chebyshev_psi(small, 8) == pytest.approx(math.log(840), rel=1e-14)


def test_psi_exact_prime_power_boundaries(small):
    # 125 = 5^3 sits exactly on a cube root that floats get wrong
    assert chebyshev_psi(small, 125) - chebyshev_psi(small, 124) == pytest.approx(math.log(5))
    assert chebyshev_psi(small, 1024) - chebyshev_psi(small, 1023) == pytest.approx(math.log(2))


def test_out_of_range(small):
    with pytest.raises(OutOfRangeError):
        prime_pi(small, small.limit + 1)
    with pytest.raises(OutOfRangeError):
        chebyshev_theta(small, -1)
    with pytest.raises(OutOfRangeError):
        chebyshev_psi(small, float("nan"))


def test_first_twenty_primes(small):
    for r, p in enumerate(FIRST_PRIMES, 1):
        assert prime_pi(small, p) == r
        assert chebyshev_theta(small, p) == pytest.approx(math.log(math.prod(FIRST_PRIMES[:r])), rel=1e-14)


def test_log_prefix_compensated(small):
    exact = np.array([math.fsum(math.log(p) for p in small.prime_list()[: i + 1]) for i in range(0, 9592, 997)])
    got = small.log_prefix[0:9592:997]
    assert np.allclose(got, exact, rtol=1e-12, atol=0)


@given(st.integers(min_value=0, max_value=63), st.integers(min_value=1, max_value=64))
def test_iroot(n_bits, m):
    n = (1 << n_bits) + 12345
    r = iroot(n, m)
    assert r**m <= n < (r + 1) ** m


@settings(max_examples=300)
@given(st.floats(min_value=1.0001, max_value=100_000))
def test_explicit_bounds(x):
    table = cached_table(100_000)
    assert prime_pi(table, x) <= BOUNDS.omega1 * x / math.log(x)
    if x >= 8:
        assert prime_pi(table, x) <= x / 2
    assert chebyshev_theta(table, x) <= BOUNDS.omega2 * x


@settings(max_examples=200)
@given(st.floats(min_value=0, max_value=99_999), st.floats(min_value=0, max_value=1))
def test_theta_below_psi_and_monotone(x, dx):
    table = cached_table(100_000)
    assert chebyshev_theta(table, x) <= chebyshev_psi(table, x) + 1e-12
    assert chebyshev_theta(table, x) <= chebyshev_theta(table, x + dx)
    assert chebyshev_psi(table, x) <= chebyshev_psi(table, x + dx)


def test_bound_constants_fixed():
    assert (BOUNDS.omega1, BOUNDS.omega2) == (1.2551, 1.00001)
