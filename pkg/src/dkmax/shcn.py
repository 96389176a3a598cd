"""Superior k-highly composite numbers.

For fixed k the optimal exponent of p in the largest SHCN attached to eps is
floor((k-1)/(p**eps - 1)).  As eps decreases this exponent steps from m-1 to m
exactly at the jump point log_p(1 + (k-1)/m).  Walking the jump points in
descending order therefore visits every SHCN in increasing order.

Several primes can share a jump point.  That only happens at integer eps
(p**eps = 1 + (k-1)/m is rational, and a rational power of a prime is rational
only for an integer exponent), so ties are certified with exact integer
arithmetic instead of float comparison.
"""

from __future__ import annotations

import decimal
import math
from dataclasses import dataclass, field
from decimal import Decimal

from .divisor import FactoredNat, d_k, f_k
from .errors import (
    InternalInconsistencyError,
    InvalidArgumentError,
    ResourceLimitError,
)
from .primes import PrimeTable, chebyshev_theta, prime_pi

# relative width inside which two float jump values count as a candidate tie
TIE_RTOL = 1e-11
HP_DIGITS = 50
MAX_TIE_MEMBERS = 20
# widening applied to enumeration windows so clusters at the edges stay whole
_WINDOW_SLACK = 1e-9


@dataclass(frozen=True)
class JumpPoint:
    """The jump eps[k,p;m] = log_p(1 + (k-1)/m), kept as its exact triple."""

    k: int
    p: int
    m: int
    value: float = field(compare=False)

    def high_precision(self) -> Decimal:
        with decimal.localcontext() as ctx:
            ctx.prec = HP_DIGITS
            return (Decimal(self.m + self.k - 1) / Decimal(self.m)).ln() / Decimal(self.p).ln()

    def integer_certificate(self) -> int | None:
        """t when p**t * m == m + k - 1 holds exactly, else None."""
        t = round(self.value)
        if t >= 1 and abs(self.value - t) <= TIE_RTOL * t:
            if self.m * (self.p**t - 1) == self.k - 1:
                return t
        return None

    def label(self) -> str:
        return f"(k={self.k}, p={self.p}, m={self.m})"


@dataclass(frozen=True)
class TieGroup:
    """All jump points sharing one eps value, in ascending prime order."""

    eps: float
    members: tuple[JumpPoint, ...]
    integer_eps: int | None = None

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(j.p for j in self.members)


@dataclass(frozen=True)
class ShcnRecord:
    """The largest SHCN for an eps, with the jump interval it is valid on."""

    k: int
    n: FactoredNat
    eps_lo: float
    eps_hi: float
    f_value: float


def jump_value(k: int, p: int, m: int) -> JumpPoint:
    if k < 2 or p < 2 or m < 1:
        raise InvalidArgumentError(f"bad jump triple k={k}, p={p}, m={m}")
    return JumpPoint(k, p, m, math.log1p((k - 1) / m) / math.log(p))


def _expm1_power(p: int, eps: float) -> float:
    try:
        return math.expm1(eps * math.log(p))
    except OverflowError:
        return math.inf


def exponent_cap(p: int, k: int, eps: float) -> int:
    """floor((k-1)/(p**eps - 1)), resolving exact jumps to the larger exponent."""
    if not eps > 0:
        raise InvalidArgumentError(f"eps must be > 0, got {eps}")
    q = (k - 1) / _expm1_power(p, eps)
    r = round(q)
    # at a jump both r-1 and r are optimal; the largest SHCN takes r
    if r >= 1 and abs(q - r) <= TIE_RTOL * r:
        return r
    return math.floor(q)


def prime_bound(k: int, eps: float) -> float:
    """k**(1/eps): primes above it have exponent 0."""
    try:
        return math.exp(math.log(k) / eps)
    except OverflowError:
        return math.inf


def _require_table(table: PrimeTable, x: float) -> None:
    if x > table.limit:
        raise ResourceLimitError(
            f"need primes up to {x:.6g} but the prime table stops at {table.limit}"
        )


def n_tilde(k: int, eps: float, table: PrimeTable) -> FactoredNat:
    """The largest superior k-highly composite number attached to eps."""
    if not eps > 0:
        raise InvalidArgumentError(f"eps must be > 0, got {eps}")
    x = prime_bound(k, eps) * (1 + _WINDOW_SLACK)
    _require_table(table, x)
    exps = {}
    for p in table.prime_list(x):
        e = exponent_cap(p, k, eps)
        if e:
            exps[p] = e
    return FactoredNat.from_exponents(exps)


def shcn_record(k: int, eps: float, table: PrimeTable) -> ShcnRecord:
    """n_tilde(k, eps) together with the interval (eps_lo, eps_hi] it is constant on."""
    n = n_tilde(k, eps, table)
    x = prime_bound(k, eps) * (1 + _WINDOW_SLACK)
    eps_hi = math.inf
    eps_lo = 0.0
    for p in table.prime_list(x):
        e = n.exponent(p)
        if e:
            eps_hi = min(eps_hi, jump_value(k, p, e).value)
        eps_lo = max(eps_lo, jump_value(k, p, e + 1).value)
    r = len(table.prime_list(x))
    if r >= len(table):
        raise ResourceLimitError("prime table too small to locate the next prime")
    q = int(table.primes[r])
    eps_lo = max(eps_lo, jump_value(k, q, 1).value)
    fv = f_k(n, k) if n.factors and n.factors != ((2, 1),) else math.nan
    return ShcnRecord(k, n, eps_lo, eps_hi, fv)


def _resolve_cluster(cluster: list[JumpPoint]) -> list[TieGroup]:
    by_t: dict[int, list[JumpPoint]] = {}
    entries: list[tuple[Decimal, list[JumpPoint], int | None]] = []
    for jp in cluster:
        t = jp.integer_certificate()
        if t is None:
            entries.append((jp.high_precision(), [jp], None))
        else:
            by_t.setdefault(t, []).append(jp)
    for t, members in by_t.items():
        entries.append((Decimal(t), members, t))
    entries.sort(key=lambda e: e[0], reverse=True)
    for a, b in zip(entries, entries[1:]):
        if abs(a[0] - b[0]) < Decimal(10) ** (10 - HP_DIGITS):
            names = ", ".join(j.label() for j in a[1] + b[1])
            raise InternalInconsistencyError(
                f"cannot separate jump points {names}: equal to {HP_DIGITS} digits "
                "without an integer tie certificate"
            )
    groups = []
    for _, members, t in entries:
        members = sorted(members, key=lambda j: j.p)
        if len({j.p for j in members}) != len(members):
            raise InternalInconsistencyError(f"repeated prime in tie group {members}")
        groups.append(TieGroup(float(t) if t is not None else members[0].value, tuple(members), t))
    return groups


def group_jumps(points: list[JumpPoint]) -> list[TieGroup]:
    """Merge equal jump values into TieGroups, returned in descending eps order."""
    pts = sorted(points, key=lambda j: (-j.value, j.p, j.m))
    groups: list[TieGroup] = []
    i = 0
    while i < len(pts):
        j = i + 1
        while j < len(pts) and pts[j - 1].value - pts[j].value <= TIE_RTOL * max(1.0, pts[j - 1].value):
            j += 1
        cluster = pts[i:j]
        if len(cluster) == 1:
            jp = cluster[0]
            t = jp.integer_certificate()
            groups.append(TieGroup(float(t) if t else jp.value, (jp,), t))
        else:
            groups.extend(_resolve_cluster(cluster))
        i = j
    return groups


def enumerate_jump_groups(
    k: int, eps_lo: float, eps_hi: float, table: PrimeTable
) -> list[TieGroup]:
    """Every jump value in [eps_lo, eps_hi], grouped by exact ties, descending."""
    if not eps_lo > 0:
        raise InvalidArgumentError(f"eps_lo must be > 0, got {eps_lo}")
    if eps_lo >= eps_hi:
        return []
    lo = eps_lo * (1 - _WINDOW_SLACK)
    hi = eps_hi * (1 + _WINDOW_SLACK)
    x = prime_bound(k, lo)
    _require_table(table, x)
    points = []
    for p in table.prime_list(x):
        lp = math.log(p)
        m = max(1, math.floor((k - 1) / _expm1_power(p, hi)))
        while True:
            v = math.log1p((k - 1) / m) / lp
            if v < lo:
                break
            if v <= hi:
                points.append(JumpPoint(k, p, m, v))
            m += 1
    return [g for g in group_jumps(points) if eps_lo <= g.eps <= eps_hi]


def shcn_variants(k: int, group: TieGroup, base: FactoredNat) -> list[FactoredNat]:
    """All 2**r SHCNs attached to a tie group's eps, ascending.

    ``base`` is the SHCN just above the group, so each member prime carries
    exponent m-1 there.
    """
    r = len(group.members)
    if r > MAX_TIE_MEMBERS:
        raise ResourceLimitError(
            f"tie group at eps={group.eps} has {r} members; 2**{r} variants is too many"
        )
    for jp in group.members:
        if base.exponent(jp.p) != jp.m - 1:
            raise InvalidArgumentError(
                f"base has exponent {base.exponent(jp.p)} at p={jp.p}, expected {jp.m - 1}"
            )
    out = []
    for mask in range(1 << r):
        out.append(base.times_primes(group.members[i].p for i in range(r) if mask >> i & 1))
    out.sort(key=lambda n: n.log_value)
    return out


def _snap(x: float) -> float:
    # at a jump x_m is an integer; keep float noise from dropping it below
    n = round(x)
    return float(n) if abs(x - n) <= 1e-12 * max(1.0, x) else x


def analytic_identities(k: int, eps: float, table: PrimeTable) -> tuple[float, float]:
    """(ln n_tilde, ln d_k(n_tilde)) computed through theta and pi alone.

    ln N = sum_m theta(x_m) and ln d_k(N) = eps * sum_m pi(x_m) ln x_m with
    x_m = (1 + (k-1)/m)**(1/eps), for m up to the exponent of 2.
    """
    if not eps > 0:
        raise InvalidArgumentError(f"eps must be > 0, got {eps}")
    _require_table(table, prime_bound(k, eps))
    theta_terms = []
    pi_terms = []
    for m in range(1, exponent_cap(2, k, eps) + 1):
        x = _snap(math.exp((math.log(m + k - 1) - math.log(m)) / eps))
        theta_terms.append(chebyshev_theta(table, x))
        pi_terms.append(prime_pi(table, x) * math.log(x))
    return math.fsum(theta_terms), eps * math.fsum(pi_terms)


def superiority_excess(k: int, eps: float, table: PrimeTable) -> float:
    """ln E(k, eps) = ln d_k(N) - eps ln N for the SHCN N attached to eps."""
    log_n, log_dk = analytic_identities(k, eps, table)
    excess = log_dk - eps * log_n
    if excess < 0:
        if excess < -1e-12 * max(1.0, log_dk):
            raise InternalInconsistencyError(f"negative superiority excess {excess} at k={k}, eps={eps}")
        excess = 0.0
    return excess


def excess_direct(k: int, eps: float, table: PrimeTable) -> float:
    """ln E(k, eps) evaluated straight from the factorization of n_tilde."""
    n = n_tilde(k, eps, table)
    return d_k(n, k).log - eps * n.log_value
