"""Compute lambda(k) = max f_k(n) and the maximizer N_max(k).

The maximizer is a superior k-highly composite number whose eps lies in
[eps1, eps2].  eps2 comes from the stopping data; eps1 starts at eps0(k) and
shrinks geometrically until the best f_k seen on the bracket reaches the
bound lambda1(k, eps1), at which point nothing below eps1 can beat it.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable

from .bounds import lambda_bound, resolve_eps1, stopping_data
from .divisor import FactoredNat, d_k, f_k, f_value
from .errors import (
    InternalInconsistencyError,
    InvalidArgumentError,
    ResourceLimitError,
)
from .primes import PrimeTable, build_prime_table
from .shcn import TieGroup, enumerate_jump_groups, n_tilde, prime_bound

log = logging.getLogger(__name__)

SHRINK = 0.99
MAX_SHRINKS = 60
# candidates within this of the running best are re-scored from scratch
_RESCORE_WINDOW = 1e-9
# relative f difference below which two maximizers are reported as a tie
_F_TIE_RTOL = 1e-13


@dataclass(frozen=True)
class LambdaResult:
    k: int
    lam: float
    n_max: FactoredNat
    eps_lo: float
    eps_hi: float
    eps1_used: float
    lambda1: float
    implied_eps: float = math.nan
    eps2: float = math.nan
    f_tie: bool = False

    @property
    def lam4(self) -> float:
        return round(self.lam, 4)


@dataclass
class ShcnRow:
    """One SHCN on the bracket, with the eps interval it is attached to."""

    eps_lo: float
    eps_hi: float
    n: FactoredNat
    f: float


@dataclass
class _Walk:
    """Exponent state while descending through jump groups."""

    k: int
    exps: dict[int, int]
    log_n: float
    log_d: float
    groups: list[TieGroup] = field(default_factory=list)
    best_f: float = -math.inf
    # (f, log_n, group index or -1, primes added on top of the pre-group state)
    near_best: list[tuple[float, float, int, tuple[int, ...]]] = field(default_factory=list)

    def offer(self, f: float, log_n: float, gi: int, added: tuple[int, ...]) -> None:
        if f < self.best_f - _RESCORE_WINDOW:
            return
        if f > self.best_f:
            self.best_f = f
            self.near_best = [c for c in self.near_best if c[0] >= f - _RESCORE_WINDOW]
        self.near_best.append((f, log_n, gi, added))

    def step(self, group: TieGroup) -> None:
        gi = len(self.groups)
        self.groups.append(group)
        lk = math.log(self.k)
        deltas = []
        for jp in group.members:
            if self.exps.get(jp.p, 0) != jp.m - 1:
                raise InternalInconsistencyError(
                    f"walk out of sync at {jp.label()}: exponent {self.exps.get(jp.p, 0)}"
                )
            deltas.append((jp.p, math.log(jp.p), math.log1p((self.k - 1) / jp.m)))
        r = len(deltas)
        for mask in range(1, 1 << r):
            chosen = [deltas[i] for i in range(r) if mask >> i & 1]
            ln = self.log_n + math.fsum(c[1] for c in chosen)
            ld = self.log_d + math.fsum(c[2] for c in chosen)
            if ln > math.log(2.5):
                self.offer(ld * math.log(ln) / (lk * ln), ln, gi, tuple(c[0] for c in chosen))
        for p, lp, ldelta in deltas:
            self.exps[p] = self.exps.get(p, 0) + 1
            self.log_n += lp
            self.log_d += ldelta


def _absorbed(exps: dict[int, int], group: TieGroup) -> bool:
    """True when the exponent state already carries this group's increments.

    Window edges can sit exactly on a jump point (for k >= 26 eps2 always
    equals the jump of p=2 at m=11), where float comparisons are unreliable,
    so membership is decided on exponents instead.
    """
    have = [exps.get(jp.p, 0) >= jp.m for jp in group.members]
    if any(have) and not all(have):
        raise InternalInconsistencyError(f"tie group at eps={group.eps} is split by N2")
    return all(have)


def _state_before(start: FactoredNat, groups: list[TieGroup], gi: int) -> dict[int, int]:
    exps = start.exponents()
    for g in groups[:gi]:
        for jp in g.members:
            exps[jp.p] = exps.get(jp.p, 0) + 1
    return exps


def find_lambda(
    k: int,
    table: PrimeTable | None = None,
    *,
    eps1_start: float | None = None,
    shrink: float = SHRINK,
    max_shrinks: int = MAX_SHRINKS,
) -> LambdaResult:
    """Run the bracket search for one k."""
    if k < 2:
        raise InvalidArgumentError(f"k must be >= 2, got {k}")
    if table is None:
        table = build_prime_table()
    stop = stopping_data(k, table)
    e2 = stop.eps2
    eps1 = resolve_eps1(k, eps1_start)
    start = stop.n2
    walk = _Walk(k, start.exponents(), start.log_value, d_k(start, k).log)
    walk.offer(f_value(walk.log_d, walk.log_n, k), walk.log_n, -1, ())
    upper = e2
    for attempt in range(max_shrinks + 1):
        if prime_bound(k, eps1) > table.limit:
            raise ResourceLimitError(
                f"k={k}: prime table limit {table.limit} exhausted at eps1={eps1:.6g}"
            )
        for g in enumerate_jump_groups(k, eps1, upper, table):
            # SHCNs at eps2 smaller than N2 are covered by the stopping bound
            if not _absorbed(walk.exps, g):
                walk.step(g)
        upper = eps1
        lam1 = lambda_bound(k, eps1)
        if walk.best_f >= lam1:
            break
        eps1 *= shrink
    else:
        raise InternalInconsistencyError(
            f"k={k}: best f {walk.best_f} never reached lambda1 after {max_shrinks} shrinks"
        )

    n_max, lam, tie = _rescore(k, start, walk)
    lo, hi = eps_range_for_nmax(k, n_max, walk.groups, eps1, e2, start)
    result = LambdaResult(k, lam, n_max, lo, hi, eps1, lam1, eps2=e2, f_tie=tie)
    if tie:
        log.warning("k=%d: several SHCNs attain the maximum; reporting the smallest", k)
    return _with_implied(result)


def _rescore(k: int, start: FactoredNat, walk: _Walk) -> tuple[FactoredNat, float, bool]:
    scored = []
    for _, _, gi, added in walk.near_best:
        base = start if gi < 0 else FactoredNat.from_exponents(_state_before(start, walk.groups, gi))
        n = base.times_primes(added)
        scored.append((f_k(n, k), n))
    top = max(f for f, _ in scored)
    winners = [(f, n) for f, n in scored if f >= top * (1 - _F_TIE_RTOL)]
    winners.sort(key=lambda c: c[1].log_value)
    distinct = {n.factors for _, n in winners}
    f, n = winners[0]
    return n, f, len(distinct) > 1


def implied_epsilon(result: LambdaResult) -> float:
    """The eps at which N_max is superior: lambda ln k (lnln N - 1)/(lnln N)^2."""
    if result.n_max.log_value < math.log(3):
        raise InvalidArgumentError("N_max must be >= 3")
    return implied_eps_from(result.lam, result.k, result.n_max.log_value)


def implied_eps_from(lam: float, k: int, log_n: float) -> float:
    b = math.log(log_n)
    return lam * math.log(k) * (b - 1) / (b * b)


def _with_implied(result: LambdaResult) -> LambdaResult:
    from dataclasses import replace

    return replace(result, implied_eps=implied_epsilon(result))


def eps_range_for_nmax(
    k: int,
    n_max: FactoredNat,
    groups: list[TieGroup],
    eps1: float,
    eps2: float,
    start: FactoredNat | None = None,
    table: PrimeTable | None = None,
) -> tuple[float, float]:
    """The closed eps interval on which n_max is a superior k-highly composite number.

    ``groups`` are the jump groups below eps2 in descending order and
    ``start`` the SHCN at eps2 (computed from ``table`` when omitted).
    """
    if start is None:
        start = n_tilde(k, eps2, table or build_prime_table())
    target = n_max.exponents()
    exps = start.exponents()
    below = [g for g in groups if not _absorbed(start.exponents(), g)]
    if exps == target:
        return (below[0].eps if below else eps1), eps2
    for i, g in enumerate(below):
        members = [jp.p for jp in g.members]
        full = dict(exps)
        for p in members:
            full[p] = full.get(p, 0) + 1
        if full == target:
            return (below[i + 1].eps if i + 1 < len(below) else eps1), g.eps
        if len(members) > 1 and _is_partial(exps, full, target, members):
            return g.eps, g.eps
        exps = full
    raise InvalidArgumentError(f"{n_max} is not on the SHCN chain for k={k}")


def _is_partial(before: dict, after: dict, target: dict, members: list[int]) -> bool:
    keys = set(after) | set(target)
    for p in keys:
        t = target.get(p, 0)
        if p in members:
            if t not in (before.get(p, 0), after[p]):
                return False
        elif t != after.get(p, 0):
            return False
    return True


def shcn_table(
    k: int, eps1: float, table: PrimeTable | None = None, eps2: float | None = None
) -> list[ShcnRow]:
    """Every SHCN attached to some eps in [eps1, eps2] with its f_k value, largest eps first."""
    table = table or build_prime_table()
    stop = stopping_data(k, table)
    e2 = stop.eps2 if eps2 is None else eps2
    start = n_tilde(k, e2, table)
    groups = [g for g in enumerate_jump_groups(k, eps1, e2, table) if not _absorbed(start.exponents(), g)]
    rows = []
    cur = start
    hi = e2
    for i, g in enumerate(groups):
        rows.append(ShcnRow(g.eps, hi, cur, _f_or_nan(cur, k)))
        variants = _strict_variants(cur, g)
        for v in variants:
            rows.append(ShcnRow(g.eps, g.eps, v, _f_or_nan(v, k)))
        cur = cur.times_primes(g.primes)
        hi = g.eps
    rows.append(ShcnRow(eps1, hi, cur, _f_or_nan(cur, k)))
    return rows


def _strict_variants(base: FactoredNat, group: TieGroup) -> list[FactoredNat]:
    r = len(group.members)
    out = [
        base.times_primes(group.members[i].p for i in range(r) if mask >> i & 1)
        for mask in range(1, (1 << r) - 1)
    ]
    return sorted(out, key=lambda n: n.log_value)


def _f_or_nan(n: FactoredNat, k: int) -> float:
    return f_k(n, k) if n.log_value > math.log(2.5) else math.nan


def lambda_range(
    k_lo: int,
    k_hi: int,
    table: PrimeTable | None = None,
    cache=None,
) -> list[LambdaResult]:
    """find_lambda for every k in [k_lo, k_hi], reading and extending ``cache`` when given.

    ``cache`` is any object with ``get(k)`` and ``put(result)``, such as
    :class:`dkmax.cache.ResultCache`.
    """
    if not 2 <= k_lo <= k_hi:
        raise InvalidArgumentError(f"need 2 <= k_lo <= k_hi, got {k_lo}, {k_hi}")
    table = table or build_prime_table()
    out = []
    for k in range(k_lo, k_hi + 1):
        hit = cache.get(k) if cache is not None else None
        if hit is None:
            hit = find_lambda(k, table)
            if cache is not None:
                cache.put(hit)
        out.append(hit)
    _soft_monotone_check(out)
    return out


def _soft_monotone_check(results: Iterable[LambdaResult]) -> list[int]:
    flagged = []
    prev = None
    for r in results:
        if prev is not None and r.k == prev.k + 1 and not r.lam > prev.lam:
            log.warning("lambda(%d)=%r does not exceed lambda(%d)=%r", r.k, r.lam, prev.k, prev.lam)
            flagged.append(r.k)
        prev = r
    return flagged


def nmax_partition(results: list[LambdaResult]) -> list[tuple[int, int, FactoredNat]]:
    """Collapse consecutive k with the same N_max into (k_first, k_last, N_max) runs."""
    runs: list[tuple[int, int, FactoredNat]] = []
    for r in results:
        if runs and runs[-1][2] == r.n_max and runs[-1][1] == r.k - 1:
            runs[-1] = (runs[-1][0], r.k, r.n_max)
        else:
            runs.append((r.k, r.k, r.n_max))
    return runs
