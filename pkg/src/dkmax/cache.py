"""Append-only JSON-lines store of lambda(k) results.

Each line is one CacheLine with a fixed key order and floats rounded to 12
significant digits, so loading and re-serializing a file reproduces it byte
for byte.
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .bounds import eps2
from .divisor import FactoredNat
from .errors import CacheError
from .maximizer import LambdaResult, implied_eps_from

log = logging.getLogger(__name__)

FLOAT_DIGITS = 12
_KEYS = ("k", "lambda", "nmax_factors", "eps_lo", "eps_hi", "eps1_used", "lambda1", "tool_version")


def round_sig(x: float, digits: int = FLOAT_DIGITS) -> float:
    return float(f"{x:.{digits}g}")


@dataclass(frozen=True)
class CacheLine:
    k: int
    lam: float
    nmax_factors: tuple[tuple[int, int], ...]
    eps_lo: float
    eps_hi: float
    eps1_used: float
    lambda1: float
    tool_version: str = __version__

    @classmethod
    def from_result(cls, r: LambdaResult) -> CacheLine:
        return cls(
            r.k,
            round_sig(r.lam),
            r.n_max.factors,
            round_sig(r.eps_lo),
            round_sig(r.eps_hi),
            round_sig(r.eps1_used),
            round_sig(r.lambda1),
        )

    def to_json(self) -> str:
        payload = {
            "k": self.k,
            "lambda": round_sig(self.lam),
            "nmax_factors": [list(pe) for pe in self.nmax_factors],
            "eps_lo": round_sig(self.eps_lo),
            "eps_hi": round_sig(self.eps_hi),
            "eps1_used": round_sig(self.eps1_used),
            "lambda1": round_sig(self.lambda1),
            "tool_version": self.tool_version,
        }
        return json.dumps(payload, separators=(",", ":"), ensure_ascii=False)

    @classmethod
    def from_json(cls, text: str) -> CacheLine:
        obj = json.loads(text)
        if not isinstance(obj, dict) or tuple(obj) != _KEYS:
            raise ValueError(f"expected keys {list(_KEYS)}")
        k = obj["k"]
        if not isinstance(k, int) or k < 2:
            raise ValueError(f"bad k {k!r}")
        num = {key: round_sig(float(obj[key])) for key in ("lambda", "eps_lo", "eps_hi", "eps1_used", "lambda1")}
        return cls(
            k=k,
            lam=num["lambda"],
            nmax_factors=tuple((int(p), int(e)) for p, e in obj["nmax_factors"]),
            eps_lo=num["eps_lo"],
            eps_hi=num["eps_hi"],
            eps1_used=num["eps1_used"],
            lambda1=num["lambda1"],
            tool_version=str(obj["tool_version"]),
        )

    def to_result(self) -> LambdaResult:
        n = FactoredNat.from_factors(self.nmax_factors)
        return LambdaResult(
            k=self.k,
            lam=self.lam,
            n_max=n,
            eps_lo=self.eps_lo,
            eps_hi=self.eps_hi,
            eps1_used=self.eps1_used,
            lambda1=self.lambda1,
            implied_eps=implied_eps_from(self.lam, self.k, n.log_value),
            eps2=eps2(self.k),
        )


class ResultCache:
    """A cache file plus its parsed lines keyed by k.

    Malformed lines are skipped with a warning; two well-formed lines that
    disagree about the same k make the file unusable.
    """

    def __init__(self, path: str | os.PathLike):
        self.path = Path(path)
        self.lines: dict[int, CacheLine] = {}
        self.skipped = 0
        if self.path.exists():
            self._load()

    def _load(self) -> None:
        with self.path.open(encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                text = raw.rstrip("\n")
                if not text.strip():
                    continue
                try:
                    line = CacheLine.from_json(text)
                except (ValueError, TypeError, KeyError) as exc:
                    log.warning("%s:%d: skipping malformed cache line (%s)", self.path, lineno, exc)
                    self.skipped += 1
                    continue
                old = self.lines.get(line.k)
                if old is not None and old != line:
                    raise CacheError(f"{self.path}:{lineno}: conflicting entry for k={line.k}")
                self.lines[line.k] = line

    def get(self, k: int) -> LambdaResult | None:
        line = self.lines.get(k)
        return None if line is None else line.to_result()

    def put(self, result: LambdaResult) -> None:
        line = CacheLine.from_result(result)
        old = self.lines.get(line.k)
        if old is not None:
            if old != line:
                raise CacheError(f"{self.path}: k={line.k} already cached with different values")
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.path.open("a", encoding="utf-8", newline="\n") as fh:
            fh.write(line.to_json() + "\n")
        self.lines[line.k] = line


def store(path: str | os.PathLike, results: list[LambdaResult]) -> None:
    cache = ResultCache(path)
    for r in results:
        cache.put(r)


def load(path: str | os.PathLike) -> list[LambdaResult]:
    cache = ResultCache(path)
    return [cache.lines[k].to_result() for k in sorted(cache.lines)]
