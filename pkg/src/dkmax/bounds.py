"""Explicit constants that confine the maximizer's eps to a bracket.

All logarithms are natural.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .divisor import FactoredNat, d_k
from .errors import InternalInconsistencyError, InvalidArgumentError
from .primes import BOUNDS, PrimeTable
from .shcn import n_tilde

E_SQUARED = math.exp(2.0)
# N2 must exceed e**(e**2) so that ln ln N2 > 2
N2_FLOOR = math.exp(E_SQUARED)
# eps1 given to 4 decimals may round eps0 up; accept and clamp within this
EPS1_ROUNDING_SLACK = 5e-5
# below this k the stopping eps is ln(k)/2, from here on ln((k+10)/11)/ln 2
EPS2_SWITCH_K = 26


@dataclass(frozen=True)
class BoundSet:
    k: int
    eps0: float
    c0: float
    c1: float
    eps1: float
    lambda0: float
    lambda1: float


@dataclass(frozen=True)
class StoppingData:
    k: int
    eps2: float
    n2: FactoredNat
    u: float


def _check_k(k: int) -> None:
    if k < 2:
        raise InvalidArgumentError(f"k must be >= 2, got {k}")


def eps0(k: int) -> float:
    _check_k(k)
    return math.log((k + 1) / 2) / math.log(8)


def c0(k: int) -> float:
    _check_k(k)
    return (k - 1) / (math.e * math.log(2 * k / (k + 1))) + BOUNDS.omega2


def c1(k: int) -> float:
    """Sharper constant in ln N <= c1(k) * k**(1/eps), valid once eps <= eps0(k)."""
    _check_k(k)
    return (k - 1) / (2 * math.e * math.log(2 * k / (k + 1))) + BOUNDS.omega2


def lambda_bound(k: int, eps: float) -> float:
    """Upper bound for f_k over SHCNs attached to eps' <= eps (requires eps <= eps0(k))."""
    lk = math.log(k)
    c = math.log(c1(k))
    return (lk + eps * c) ** 2 / (lk * (lk + (c - 1) * eps))


def resolve_eps1(k: int, eps1: float | None) -> float:
    """Validate eps1 against (0, eps0(k)], clamping values that only exceed eps0 by rounding."""
    e0 = eps0(k)
    if eps1 is None:
        return e0
    if not 0 < eps1 <= e0 + EPS1_ROUNDING_SLACK:
        raise InvalidArgumentError(f"eps1={eps1} must lie in (0, eps0(k)={e0:.6f}]")
    return min(eps1, e0)


def classical_bounds(k: int, eps1: float | None = None) -> BoundSet:
    e0 = eps0(k)
    eps1 = resolve_eps1(k, eps1)
    return BoundSet(
        k=k,
        eps0=e0,
        c0=c0(k),
        c1=c1(k),
        eps1=eps1,
        lambda0=lambda_bound(k, e0),
        lambda1=lambda_bound(k, eps1),
    )


def eps2(k: int) -> float:
    _check_k(k)
    if k < EPS2_SWITCH_K:
        return math.log(k) / 2
    return math.log((k + 10) / 11) / math.log(2)


def stopping_data(k: int, table: PrimeTable) -> StoppingData:
    """eps2(k), N2(k) = n_tilde(k, eps2) and the slack u(k), which must be <= 0.

    u <= 0 certifies that no n < N2 maximizes f_k.
    """
    e2 = eps2(k)
    n2 = n_tilde(k, e2, table)
    u = d_k(n2, k).log - e2 * n2.log_value - E_SQUARED * e2
    if u > 0:
        raise InternalInconsistencyError(f"u({k}) = {u} > 0")
    if not n2.log_value > E_SQUARED:
        raise InternalInconsistencyError(f"N2({k}) = {n2.value} does not exceed e^(e^2)")
    return StoppingData(k, e2, n2, u)


def f_b(b: float, t: float) -> float:
    """e^t/t * (1 - (b-1)t/b^2); on t >= 2 it peaks at t = b with value e^b/b^2."""
    return math.exp(t) / t * (1 - (b - 1) * t / (b * b))
