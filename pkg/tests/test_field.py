"""Prime-field arithmetic and small linear algebra."""

import random

import pytest

from gasptables import DomainError, PrimeField, is_prime, next_prime
from gasptables.field import is_invertible, mat_add, mat_mul, mat_scale, solve, zero_matrix


def test_is_prime_small():
    primes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}
    for n in range(50):
        assert is_prime(n) == (n in primes), n


def test_is_prime_larger():
    assert is_prime(1_000_003)
    assert not is_prime(1_000_001)  # 101 * 9901
    assert is_prime(2 ** 61 - 1)
    assert not is_prime(2 ** 67 - 1)  # Mersenne composite, 193707721 * ...


@pytest.mark.parametrize("n,p", [(0, 2), (2, 2), (3, 3), (4, 5), (14, 17),
                                 (43, 43), (44, 47), (1_000_000, 1_000_003)])
def test_next_prime(n, p):
    assert next_prime(n) == p


class TestPrimeField:
    def test_rejects_composite(self):
        with pytest.raises(DomainError, match="not prime"):
            PrimeField(10)

    def test_basic_ops(self):
        f = PrimeField(7)
        assert f.add(5, 4) == 2
        assert f.sub(2, 5) == 4
        assert f.mul(3, 5) == 1
        assert f.inv(3) == 5

    def test_inverse_of_zero(self):
        f = PrimeField(7)
        with pytest.raises(DomainError, match="inverse of zero"):
            f.inv(0)
        with pytest.raises(DomainError):
            f.inv(14)

    def test_inv_against_all_elements(self):
        f = PrimeField(23)
        for x in range(1, 23):
            assert f.mul(x, f.inv(x)) == 1

    def test_pow_exponent_reduction(self):
        # x**(q-1) = 1 for nonzero x, so exponents act mod q-1
        f = PrimeField(11)
        for x in range(1, 11):
            for e in (0, 1, 7, 10, 23):
                assert f.pow(x, e) == f.pow(x, e + (f.q - 1))
                assert f.pow(x, e) == pow(x, e, 11)

    def test_pow_of_zero(self):
        f = PrimeField(11)
        assert f.pow(0, 0) == 1
        assert f.pow(0, 5) == 0
        assert f.pow(11, 5) == 0

    def test_pow_huge_exponent(self):
        f = PrimeField(101)
        assert f.pow(3, 10 ** 18 + 4) == pow(3, (10 ** 18 + 4) % 100, 101)

    def test_random_matrix_shape_and_range(self):
        f = PrimeField(5)
        m = f.random_matrix(random.Random(0), 3, 4)
        assert len(m) == 3 and all(len(r) == 4 for r in m)
        assert all(0 <= x < 5 for row in m for x in row)


class TestMatrixOps:
    F = PrimeField(13)

    def test_add_scale(self):
        a = ((1, 2), (3, 4))
        b = ((12, 12), (1, 1))
        assert mat_add(self.F, a, b) == ((0, 1), (4, 5))
        assert mat_scale(self.F, 2, a) == ((2, 4), (6, 8))

    def test_mul(self):
        a = ((1, 2), (3, 4))
        b = ((5, 6), (7, 8))
        assert mat_mul(self.F, a, b) == ((19 % 13, 22 % 13), (43 % 13, 50 % 13))

    def test_zero_matrix(self):
        assert zero_matrix(2, 3) == ((0, 0, 0), (0, 0, 0))


class TestSolve:
    F = PrimeField(7)

    def test_identity(self):
        m = ((1, 0), (0, 1))
        rhs = ((3,), (5,))
        assert solve(self.F, m, rhs) == rhs

    def test_known_system(self):
        # 2x + y = 5, x + 3y = 6 over GF(7): x = 6, y = 0
        m = ((2, 1), (1, 3))
        rhs = ((5,), (6,))
        x = solve(self.F, m, rhs)
        assert x == ((6,), (0,))
        assert mat_mul(self.F, m, x) == rhs

    def test_singular_returns_none(self):
        m = ((1, 2), (2, 4))
        assert solve(self.F, m, ((1,), (1,))) is None

    def test_pivoting_handles_leading_zero(self):
        m = ((0, 1), (1, 0))
        assert solve(self.F, m, ((2,), (3,))) == ((3,), (2,))

    def test_shape_errors(self):
        with pytest.raises(DomainError, match="square"):
            solve(self.F, ((1, 2),), ((1,),))
        with pytest.raises(DomainError, match="row count"):
            solve(self.F, ((1, 0), (0, 1)), ((1,),))

    def test_multicolumn_rhs(self):
        m = ((2, 1), (1, 3))
        rhs = ((5, 1), (6, 0))
        x = solve(self.F, m, rhs)
        assert mat_mul(self.F, m, x) == rhs

    def test_random_roundtrip(self):
        f = PrimeField(101)
        rng = random.Random(12)
        for _ in range(50):
            m = f.random_matrix(rng, 4, 4)
            if not is_invertible(f, m):
                continue
            x = f.random_matrix(rng, 4, 2)
            rhs = mat_mul(f, m, x)
            assert solve(f, m, rhs) == x


class TestIsInvertible:
    F = PrimeField(5)

    def test_examples(self):
        assert is_invertible(self.F, ((1, 2), (3, 4)))
        assert not is_invertible(self.F, ((1, 2), (2, 4)))
        assert not is_invertible(self.F, ((0, 0), (0, 0)))

    def test_vandermonde_always_invertible(self):
        f = PrimeField(97)
        pts = (3, 10, 55, 80)
        m = tuple(tuple(pow(p, i, 97) for i in range(4)) for p in pts)
        assert is_invertible(f, m)

    def test_agrees_with_solve(self):
        f = PrimeField(11)
        rng = random.Random(3)
        eye = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
        for _ in range(100):
            m = f.random_matrix(rng, 3, 3)
            assert is_invertible(f, m) == (solve(f, m, eye) is not None)
