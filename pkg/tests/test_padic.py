from fractions import Fraction as F

import pytest

from hgmtrace import gamma_at_rational, gamma_table, omega
from hgmtrace.core import primes_up_to
from hgmtrace.padic import gamma_inverse_values, residue_inverses


class TestOmega:
    @pytest.mark.parametrize("x,p,expected", [(0, 7, 6), (3, 7, 4), (1, 5, 4)])
    def test_values(self, x, p, expected):
        assert omega(x, p) == expected


class TestGammaTable:
    def test_p7(self):
        table = gamma_table(7)
        assert table.values[1] == 6  # Gamma_7(1) = -1
        assert table.values[4] == 6  # (-1)^4 * 1*2*3 = 6

    def test_p5_full(self):
        table = gamma_table(5)
        assert table.values == (1, 4, 1, 3, 1)
        assert table.values[4] == 6 % 5

    @pytest.mark.parametrize("p", [2, 9, 1])
    def test_rejects_non_odd_primes(self, p):
        with pytest.raises(ValueError):
            gamma_table(p)


class TestGammaAtRational:
    def test_integer_zero(self):
        assert gamma_at_rational(gamma_table(7), 0) == 1

    def test_half_mod_seven(self):
        table = gamma_table(7)
        assert gamma_at_rational(table, F(1, 2)) == table.values[4] == 6

    def test_integer_passthrough(self):
        table = gamma_table(5)
        assert gamma_at_rational(table, 3) == table.values[3]

    def test_rejects_divisible_denominator(self):
        with pytest.raises(ValueError):
            gamma_at_rational(gamma_table(5), F(1, 10))

    def test_period_p_in_the_argument(self):
        table = gamma_table(11)
        for x in (F(3, 7), F(9, 5), F(0), F(1, 2)):
            for k in (1, -2, 5):
                assert gamma_at_rational(table, x) == gamma_at_rational(table, x + 11 * k)


def test_functional_equation_and_units_up_to_200():
    for p in primes_up_to(200):
        if p == 2:
            continue
        table = gamma_table(p)
        assert table.values[0] == 1
        assert table.values[1] == p - 1
        for n in range(p - 1):
            assert table.values[n + 1] == omega(n, p) * table.values[n] % p
        assert all(v % p for v in table.values)


def test_inverse_helpers():
    for p in (3, 7, 101):
        inv = residue_inverses(p)
        assert all(i * inv[i] % p == 1 for i in range(1, p))
        table = gamma_table(p)
        ginv = gamma_inverse_values(table)
        assert all(v * w % p == 1 for v, w in zip(table.values, ginv))
