import pytest
from hypothesis import given, strategies as st

from cubeqmc import gf2
from cubeqmc.errors import ConfigError

X = 0b10  # the polynomial x


class TestPolyBasics:
    def test_degree(self):
        assert gf2.poly_degree(0) == gf2.DEG_ZERO
        assert gf2.poly_degree(1) == 0
        assert gf2.poly_degree(0b111) == 2

    def test_hex_roundtrip(self):
        assert gf2.poly_from_hex("0x7") == 0b111
        assert gf2.poly_to_hex(0b111) == "0x7"


class TestMulMod:
    def test_x_times_x_mod_f(self):
        # x * x = x^2 = x + 1 mod x^2+x+1
        assert gf2.poly_mulmod(X, X, 0b111) == 0b11

    def test_identity(self):
        for a in range(16):
            assert gf2.poly_mulmod(a, 1, 0b111) == gf2.poly_mod(a, 0b111)

    def test_xp1_squared(self):
        # (x+1)^2 = x^2 + 1 = x mod x^2+x+1
        assert gf2.poly_mulmod(0b11, 0b11, 0b111) == X

    def test_zero_modulus(self):
        with pytest.raises(ConfigError, match="zero modulus"):
            gf2.poly_mulmod(1, 1, 0)

    @given(st.integers(0, 2**16 - 1), st.integers(0, 2**16 - 1), st.integers(0, 2**16 - 1))
    def test_commutative_associative(self, a, b, c):
        f = 0b10011  # x^4 + x + 1
        assert gf2.poly_mulmod(a, b, f) == gf2.poly_mulmod(b, a, f)
        assert gf2.poly_mulmod(gf2.poly_mulmod(a, b, f), c, f) == gf2.poly_mulmod(
            a, gf2.poly_mulmod(b, c, f), f
        )


class TestGcd:
    def test_coprime(self):
        assert gf2.poly_gcd(0b111, X) == 1

    def test_with_zero(self):
        assert gf2.poly_gcd(0b1101, 0) == 0b1101

    def test_common_factor(self):
        # x^2 + x = x(x+1), gcd with x is x
        assert gf2.poly_gcd(0b110, X) == X

    def test_both_zero(self):
        with pytest.raises(ConfigError, match="gcd undefined"):
            gf2.poly_gcd(0, 0)

    def test_irreducible_coprime_to_all_smaller(self):
        for f in (0b111, 0b1011, 0b10011):
            m = gf2.poly_degree(f)
            for k in range(1, 1 << m):
                assert gf2.poly_gcd(k, f) == 1


class TestIrreducible:
    def test_known_irreducible(self):
        assert gf2.is_irreducible(0b111)  # x^2+x+1

    def test_perfect_square(self):
        assert not gf2.is_irreducible(0b101)  # x^2+1 = (x+1)^2

    def test_degree4_count(self):
        # brute-force trial division as the oracle
        def reducible(f):
            for d in range(2, 1 << 4):
                if gf2.poly_degree(d) < 1 or gf2.poly_degree(d) >= 4:
                    continue
                if gf2.poly_mod(f, d) == 0:
                    return True
            return False

        count = 0
        for f in range(1 << 4, 1 << 5):
            assert gf2.is_irreducible(f) == (not reducible(f))
            count += gf2.is_irreducible(f)
        assert count == 3

    def test_rejects_constants(self):
        with pytest.raises(ConfigError, match="not a candidate modulus"):
            gf2.is_irreducible(1)
        with pytest.raises(ConfigError, match="not a candidate modulus"):
            gf2.is_irreducible(0)


class TestInvMod:
    def test_all_invertible_mod_irreducible(self):
        f = 0b1011
        for a in range(1, 8):
            inv = gf2.poly_invmod(a, f)
            assert gf2.poly_mulmod(a, inv, f) == 1


class TestLaurent:
    def test_one_over_f(self):
        assert gf2.laurent_fraction(1, 0b111, 2) == (0, 1)

    def test_zero_numerator(self):
        assert gf2.laurent_fraction(0, 0b111, 6) == (0,) * 6

    def test_x_over_f(self):
        assert gf2.laurent_fraction(X, 0b111, 2) == (1, 1)

    def test_improper(self):
        with pytest.raises(ConfigError, match="improper fraction"):
            gf2.laurent_fraction(0b111, 0b111, 2)

    def test_digits_eventually_periodic(self):
        # period divides 2^deg(f) - 1 for irreducible f, nonzero g
        for f in (0b111, 0b1011, 0b10011):
            m = gf2.poly_degree(f)
            period = (1 << m) - 1
            for g in range(1, 1 << m):
                digits = gf2.laurent_fraction(g, f, 4 * period)
                assert digits[:period] * 3 == digits[period : 4 * period]


class TestRank:
    def test_identity(self):
        for m in (1, 3, 8):
            assert gf2.f2_rank([1 << i for i in range(m)]) == m

    def test_duplicate_rows(self):
        assert gf2.f2_rank([0b101, 0b101]) == 1

    def test_dependent_triple(self):
        assert gf2.f2_rank([0b01, 0b11, 0b10]) == 2

    @given(st.lists(st.integers(0, 2**6 - 1), max_size=10))
    def test_rank_bounded(self, rows):
        assert gf2.f2_rank(rows) <= min(len(rows), 6)
