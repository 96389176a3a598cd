"""dkmax command line: jump points, SHCNs, lambda(k), bounds and scans.

    dkmax lambda --k 2 --format json
    dkmax jumps --k 3 --count 3 --format csv
    dkmax lambda-range --k-min 2 --k-max 2000 --cache results.jsonl
"""

from __future__ import annotations

import functools
import math
import sys

import click

from . import __version__
from .bounds import classical_bounds, stopping_data
from .cache import ResultCache
from .divisor import FactoredNat, factorize
from .errors import DkmaxError, InvalidArgumentError
from .maximizer import (
    LambdaResult,
    find_lambda,
    lambda_range,
    nmax_partition,
    shcn_table,
)
from .primes import DEFAULT_SIEVE_LIMIT, build_prime_table
from .render import FORMATS, decimal_or_none, describe_n, render_table
from .shcn import enumerate_jump_groups, n_tilde, shcn_record
from .verify import brute_force_max_f, verify_k_highly_composite, verify_superiority

EXIT_VALIDATION = 1
DEFAULT_JUMP_COUNT = 20


def _check_k(ctx, param, value):
    if value is not None and value < 2:
        raise click.BadParameter("k must be ≥ 2")
    return value


def _positive(ctx, param, value):
    if value is not None and not value > 0:
        raise click.BadParameter("must be > 0")
    return value


def common_options(fn):
    @click.option("--format", "fmt", type=click.Choice(FORMATS), default="md", show_default=True)
    @click.option("--cache", "cache_path", type=click.Path(dir_okay=False), default=None,
                  help="JSON-lines file of lambda results to read and extend.")
    @click.option("--sieve-limit", type=click.IntRange(min=2), default=DEFAULT_SIEVE_LIMIT, show_default=True)
    @click.option("--full-decimal", is_flag=True, help="Print N in decimal even above 10^18.")
    @functools.wraps(fn)
    def wrapper(fmt, cache_path, sieve_limit, full_decimal, **kwargs):
        opts = Options(fmt, cache_path, sieve_limit, full_decimal)
        try:
            fn(opts, **kwargs)
        except InvalidArgumentError as exc:
            raise click.UsageError(str(exc)) from exc
        except DkmaxError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_VALIDATION)

    return wrapper


class Options:
    def __init__(self, fmt: str, cache_path: str | None, sieve_limit: int, full_decimal: bool):
        self.fmt = fmt
        self.cache_path = cache_path
        self.sieve_limit = sieve_limit
        self.full_decimal = full_decimal

    @functools.cached_property
    def table(self):
        return build_prime_table(self.sieve_limit)

    @functools.cached_property
    def cache(self) -> ResultCache | None:
        return ResultCache(self.cache_path) if self.cache_path else None

    def emit(self, rows: list[dict]) -> None:
        click.echo(render_table(rows, self.fmt), nl=False)

    def n_fields(self, n: FactoredNat, name: str) -> dict:
        if self.fmt == "json":
            return {name: decimal_or_none(n, self.full_decimal), f"{name}_factors": n.factors}
        return {name: describe_n(n, self.full_decimal)}


def k_option(fn):
    return click.option("--k", "k", type=int, required=True, callback=_check_k)(fn)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(__version__, prog_name="dkmax")
def main() -> None:
    """Maximal order of d_k(n) through superior k-highly composite numbers."""


@main.command()
@k_option
@click.option("--eps-min", type=float, callback=_positive)
@click.option("--eps-max", type=float, callback=_positive)
@click.option("--count", type=click.IntRange(min=1), help="Emit whole tie groups until at least this many rows.")
@common_options
def jumps(opts: Options, k: int, eps_min, eps_max, count) -> None:
    """Jump points eps[k,p;m] in descending order with the largest SHCN at each."""
    if count is not None and (eps_min is not None or eps_max is not None):
        raise click.UsageError("--count cannot be combined with --eps-min/--eps-max")
    if count is None and eps_min is None:
        count = DEFAULT_JUMP_COUNT
    top = math.log2(k)
    hi = top if eps_max is None else eps_max
    base = n_tilde(k, hi, opts.table)
    cur = base
    rows: list[dict] = []
    seen: set[tuple[int, int]] = set()
    lo = hi if eps_min is None else eps_min
    while True:
        if count is not None:
            lo = lo / 2
        for g in enumerate_jump_groups(k, lo, hi, opts.table):
            # consecutive windows share their endpoint
            if (g.members[0].p, g.members[0].m) in seen:
                continue
            seen.update((jp.p, jp.m) for jp in g.members)
            if all(base.exponent(jp.p) >= jp.m for jp in g.members):
                label = base
            else:
                cur = cur.times_primes(g.primes)
                base = cur
                label = cur
            for jp in g.members:
                rows.append({"eps": g.eps, "p": jp.p, "m": jp.m, **opts.n_fields(label, "n_tilde")})
            if count is not None and len(rows) >= count:
                break
        if count is None or len(rows) >= count:
            break
        hi = lo
    if not rows:
        raise click.UsageError("no jump points in the requested window")
    opts.emit(rows)


@main.command()
@k_option
@click.option("--eps", type=float, required=True, callback=_positive)
@common_options
def shcn(opts: Options, k: int, eps: float) -> None:
    """The largest superior k-highly composite number attached to eps."""
    rec = shcn_record(k, eps, opts.table)
    opts.emit([{"k": k, "eps": eps, **opts.n_fields(rec.n, "n"), "eps_lo": rec.eps_lo,
                "eps_hi": rec.eps_hi, "f": rec.f_value}])


def _lambda_row(opts: Options, r: LambdaResult) -> dict:
    return {
        "k": r.k,
        "lambda": r.lam,
        **opts.n_fields(r.n_max, "nmax"),
        "eps_lo": r.eps_lo,
        "eps_hi": r.eps_hi,
        "eps1_used": r.eps1_used,
        "eps2": r.eps2,
        "lambda1": r.lambda1,
        "implied_eps": r.implied_eps,
    }


def _cached_lambda(opts: Options, k: int) -> LambdaResult:
    cache = opts.cache
    hit = cache.get(k) if cache is not None else None
    if hit is None:
        hit = find_lambda(k, opts.table)
        if cache is not None:
            cache.put(hit)
    return hit


@main.command("lambda")
@k_option
@click.option("--eps1", type=float, callback=_positive, help="Start the bracket here instead of eps0(k).")
@click.option("--table", "as_table", is_flag=True, help="List every SHCN on [eps1, eps2] with its f_k.")
@common_options
def lambda_cmd(opts: Options, k: int, eps1, as_table: bool) -> None:
    """lambda(k) = max f_k(n) and the maximizer N_max(k)."""
    r = find_lambda(k, opts.table, eps1_start=eps1) if eps1 is not None else _cached_lambda(opts, k)
    if not as_table:
        opts.emit([_lambda_row(opts, r)])
        return
    rows = shcn_table(k, r.eps1_used, opts.table)
    opts.emit([{"eps_lo": s.eps_lo, "eps_hi": s.eps_hi, **opts.n_fields(s.n, "n"), "f": s.f} for s in rows])


def _range(opts: Options, k_min: int, k_max: int) -> list[LambdaResult]:
    if k_max < k_min:
        raise click.UsageError("--k-max must be >= --k-min")
    return lambda_range(k_min, k_max, opts.table, opts.cache)


def range_options(fn):
    fn = click.option("--k-max", type=int, required=True, callback=_check_k)(fn)
    return click.option("--k-min", type=int, required=True, callback=_check_k)(fn)


@main.command("lambda-range")
@range_options
@common_options
def lambda_range_cmd(opts: Options, k_min: int, k_max: int) -> None:
    """lambda(k) for every k in a range."""
    opts.emit([_lambda_row(opts, r) for r in _range(opts, k_min, k_max)])


@main.command("nmax-range")
@range_options
@common_options
def nmax_range_cmd(opts: Options, k_min: int, k_max: int) -> None:
    """Runs of consecutive k sharing the same N_max(k)."""
    runs = nmax_partition(_range(opts, k_min, k_max))
    opts.emit([{"k_first": a, "k_last": b, **opts.n_fields(n, "nmax")} for a, b, n in runs])


@main.command("plot-data")
@range_options
@common_options
def plot_data(opts: Options, k_min: int, k_max: int) -> None:
    """(k, lambda(k)) pairs, ready for plotting."""
    opts.emit([{"k": r.k, "lambda": r.lam} for r in _range(opts, k_min, k_max)])


@main.command()
@k_option
@click.option("--eps1", type=float, callback=_positive)
@common_options
def bounds(opts: Options, k: int, eps1) -> None:
    """The explicit constants eps0, c0, c1, lambda0, lambda1 and the stopping data."""
    b = classical_bounds(k, eps1)
    s = stopping_data(k, opts.table)
    opts.emit([{
        "k": k, "eps0": b.eps0, "c0": b.c0, "c1": b.c1, "lambda0": b.lambda0, "eps1": b.eps1,
        "lambda1": b.lambda1, "eps2": s.eps2, **opts.n_fields(s.n2, "n2"), "u": s.u,
    }])


@main.command()
@k_option
@click.option("--limit", type=click.IntRange(min=3), required=True, help="Scan 3 <= n <= limit.")
@click.option("--eps", type=float, callback=_positive, help="With --n: check superiority for eps.")
@click.option("--n", "n", type=click.IntRange(min=1), help="Candidate to check.")
@common_options
def verify(opts: Options, k: int, limit: int, eps, n) -> None:
    """Exhaustive scans: max f_k, superiority of N for eps, or k-highly compositeness of N."""
    if eps is not None and n is None:
        raise click.UsageError("--eps needs --n")
    if n is None:
        report = brute_force_max_f(k, limit, opts.table)
    elif eps is not None:
        report = verify_superiority(k, eps, factorize(n, opts.table), limit, opts.table)
    else:
        report = verify_k_highly_composite(k, n, opts.table)
    rows = [{"k": k, "n_limit": report.n_limit, "argmax": report.argmax, "max_f": report.max_f,
             "violations": len(report.violations), "ok": report.ok}]
    opts.emit(rows)
    for m, detail in report.violations:
        click.echo(f"violation n={m}: {detail}", err=True)
    if not report.ok:
        sys.exit(EXIT_VALIDATION)


if __name__ == "__main__":
    main()
