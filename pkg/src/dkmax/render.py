"""Text output for tables of results: markdown, RFC-4180 CSV and JSON."""

from __future__ import annotations

import csv
import io
import json
import math
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from typing import Any, Sequence

from .divisor import FactoredNat
from .errors import InvalidArgumentError

FORMATS = ("md", "csv", "json")
FULL_DECIMAL_LIMIT = 10**18
TABLE_DECIMALS = 4
JSON_DIGITS = 12


def round4(x: float) -> str:
    """x to 4 decimals, ties to even on the shortest decimal repr of x."""
    if not math.isfinite(x):
        return repr(x)
    q = Decimal(1).scaleb(-TABLE_DECIMALS)
    with localcontext() as ctx:
        ctx.prec = 400  # enough for every finite double at 4 decimals
        return str(Decimal(repr(x)).quantize(q, rounding=ROUND_HALF_EVEN))


def decimal_or_none(n: FactoredNat, full_decimal: bool = False) -> str | None:
    if full_decimal or n.is_at_most(FULL_DECIMAL_LIMIT):
        return str(n.value)
    return None


def describe_n(n: FactoredNat, full_decimal: bool = False) -> str:
    """``6983776800 = 2^5 x ...``, or just the factorization for very large n."""
    dec = decimal_or_none(n, full_decimal)
    if dec is None or n.factors == () or len(n.factors) == 1 and n.factors[0][1] == 1:
        return dec if dec is not None else n.format()
    return f"{dec} = {n.format()}"


def _cell_text(v: Any) -> str:
    if isinstance(v, float):
        return round4(v)
    if v is None:
        return ""
    return str(v)


def _json_value(v: Any) -> Any:
    if isinstance(v, float):
        return None if math.isnan(v) else float(f"{v:.{JSON_DIGITS}g}")
    if isinstance(v, tuple):
        return [_json_value(x) for x in v]
    return v


def render_table(rows: Sequence[dict[str, Any]], fmt: str) -> str:
    """Render dict rows (all with the same keys) in one of md, csv or json."""
    if not rows:
        raise InvalidArgumentError("nothing to render")
    if fmt not in FORMATS:
        raise InvalidArgumentError(f"unknown format {fmt!r}")
    columns = list(rows[0])
    if fmt == "json":
        data = [{c: _json_value(r[c]) for c in columns} for r in rows]
        return json.dumps(data, separators=(",", ":"), ensure_ascii=False) + "\n"
    if fmt == "csv":
        if any("\0" in _cell_text(r[c]) for r in rows for c in columns):
            raise InvalidArgumentError("csv cells cannot contain NUL")
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(columns)
        for r in rows:
            writer.writerow([_cell_text(r[c]) for c in columns])
        return buf.getvalue()
    lines = ["| " + " | ".join(columns) + " |", "|" + "|".join("---" for _ in columns) + "|"]
    for r in rows:
        lines.append("| " + " | ".join(_cell_text(r[c]).replace("|", "\\|") for c in columns) + " |")
    return "\n".join(lines) + "\n"
