import math

import numpy as np
import pytest

from conftest import read_rows
from dkmax.bounds import (
    N2_FLOOR,
    c0,
    c1,
    classical_bounds,
    eps0,
    eps2,
    f_b,
    lambda_bound,
    stopping_data,
)
from dkmax.errors import InvalidArgumentError


def test_examples():
    b = classical_bounds(2, 0.1950)
    assert [round(x, 4) for x in (b.eps0, b.c0, b.c1, b.lambda0, b.lambda1)] == [0.1950, 2.2788, 1.6394, 1.5126, 1.5126]
    b = classical_bounds(25)
    assert [round(x, 4) for x in (b.eps0, b.c0, b.c1, b.lambda0)] == [1.2335, 14.5017, 7.7509, 2.2727]
    assert round(classical_bounds(3, 0.3267).lambda1, 4) == 1.5882


def test_eps1_must_not_exceed_eps0():
    with pytest.raises(InvalidArgumentError):
        classical_bounds(3, eps0(3) * 1.01)
    with pytest.raises(InvalidArgumentError):
        classical_bounds(3, 0.0)
    with pytest.raises(InvalidArgumentError):
        eps0(1)


@pytest.mark.parametrize("row", read_rows("classical_bounds.csv"), ids=lambda r: f"k{r['k']}")
def test_constants_table(row):
    k = int(row["k"])
    assert eps0(k) == pytest.approx(float(row["eps0"]), abs=1e-4)
    assert c0(k) == pytest.approx(float(row["c0"]), abs=1e-4)
    assert c1(k) == pytest.approx(float(row["c1"]), abs=1e-4)


@pytest.mark.parametrize("row", read_rows("lambda0.csv"), ids=lambda r: f"k{r['k']}")
def test_lambda0_table(row):
    assert classical_bounds(int(row["k"])).lambda0 == pytest.approx(float(row["lambda0"]), abs=1e-4)


@pytest.mark.parametrize("row", read_rows("stopping_data.csv"), ids=lambda r: f"k{r['k']}")
def test_stopping_table(table, row):
    s = stopping_data(int(row["k"]), table)
    assert s.eps2 == pytest.approx(float(row["eps2"]), abs=1e-4)
    assert s.n2.value == int(row["n2"])
    assert s.u == pytest.approx(float(row["u"]), abs=1e-3)


def test_stopping_examples(table):
    s = stopping_data(636, table)
    assert (round(s.eps2, 4), s.n2.value, round(s.u, 4)) == (5.8760, 2048, -34.6289)
    assert eps2(26) == pytest.approx(math.log(36 / 11) / math.log(2))
    assert round(eps2(26), 4) == 1.7105


def test_stopping_all_k(table):
    for k in range(2, 2001):
        s = stopping_data(k, table)
        assert s.u <= 0
        assert s.n2.value > N2_FLOOR
        assert eps0(k) <= s.eps2
        if k >= 636:
            assert s.n2.value == 2048


def test_set_invariants():
    for k in range(2, 300):
        e = eps0(k)
        for frac in (1.0, 0.9, 0.5):
            b = classical_bounds(k, e * frac)
            assert b.eps1 <= b.eps0 and 1 < b.lambda1 <= b.lambda0 and b.c1 < b.c0


def test_lambda1_decreases_towards_one():
    for k in (2, 3, 10, 100, 2000):
        vals = [lambda_bound(k, eps0(k) / 2**j) for j in range(40)]
        assert all(b < a for a, b in zip(vals, vals[1:]))
        assert all(v > 1 for v in vals)
        assert vals[-1] == pytest.approx(1, abs=1e-9)


@pytest.mark.parametrize("b", [2.5, 3.0, 5.0])
def test_f_b_peak(b):
    t = np.arange(2.0, 10.0 + 5e-4, 1e-3)
    vals = np.array([f_b(b, x) for x in t])
    i = int(vals.argmax())
    assert abs(t[i] - b) <= 1e-2
    assert vals[i] == pytest.approx(math.exp(b) / b**2, abs=1e-6)


def test_c1_asymptotic_slope():
    # c1(k)/k tends to 1/(2e ln 2)
    assert c1(10**7) / 10**7 == pytest.approx(1 / (2 * math.e * math.log(2)), rel=1e-4)
