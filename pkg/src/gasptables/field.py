"""Prime fields and exact linear algebra, no floating point anywhere.

Matrices are tuples of tuples of ints already reduced mod q.  Everything the
protocol needs is here: multiplication, addition, scalar combinations,
Gaussian elimination for solving and for invertibility testing.  Inverses go
through Fermat (x^(q-2)), which is plenty at the field sizes involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .degree_table import DomainError

Matrix = tuple[tuple[int, ...], ...]

# Deterministic Miller-Rabin witnesses, valid for all n < 3.3 * 10**24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    """Smallest prime >= n."""
    c = max(n, 2)
    while not is_prime(c):
        c += 1
    return c


@dataclass(frozen=True)
class PrimeField:
    q: int

    def __post_init__(self):
        if not is_prime(self.q):
            raise DomainError(f"{self.q} is not prime")

    def add(self, x: int, y: int) -> int:
        return (x + y) % self.q

    def sub(self, x: int, y: int) -> int:
        return (x - y) % self.q

    def mul(self, x: int, y: int) -> int:
        return x * y % self.q

    def inv(self, x: int) -> int:
        if x % self.q == 0:
            raise DomainError("inverse of zero")
        return pow(x, self.q - 2, self.q)

    def pow(self, x: int, e: int) -> int:
        # Exponents live mod q-1 on nonzero elements; reducing keeps the
        # computation cheap for the occasional huge exponent.
        if x % self.q == 0:
            return 0 if e else 1
        return pow(x, e % (self.q - 1), self.q)

    def random_matrix(self, rng, rows: int, cols: int) -> Matrix:
        return tuple(tuple(rng.randrange(self.q) for _ in range(cols)) for _ in range(rows))


def zero_matrix(rows: int, cols: int) -> Matrix:
    return tuple((0,) * cols for _ in range(rows))


def mat_shape(m: Matrix) -> tuple[int, int]:
    return len(m), len(m[0]) if m else 0


def mat_add(field: PrimeField, a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple((x + y) % field.q for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(field: PrimeField, s: int, a: Matrix) -> Matrix:
    return tuple(tuple(s * x % field.q for x in row) for row in a)


def mat_mul(field: PrimeField, a: Matrix, b: Matrix) -> Matrix:
    q = field.q
    bt = list(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) % q for col in bt)
        for row in a
    )


def solve(field: PrimeField, m: Matrix, rhs: Matrix) -> Optional[Matrix]:
    """Solve m X = rhs over the field; None if m is singular.

    Standard row reduction with modular pivoting; exact by construction.
    """
    q = field.q
    n = len(m)
    if any(len(row) != n for row in m):
        raise DomainError("solve needs a square matrix")
    if len(rhs) != n:
        raise DomainError("rhs row count mismatch")
    w = len(rhs[0]) if rhs else 0
    aug = [list(mr) + list(rr) for mr, rr in zip(m, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] % q), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = pow(aug[col][col], q - 2, q)
        aug[col] = [v * inv % q for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [(v - f * p) % q for v, p in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def is_invertible(field: PrimeField, m: Matrix) -> bool:
    q = field.q
    n = len(m)
    a = [list(row) for row in m]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] % q), None)
        if piv is None:
            return False
        a[col], a[piv] = a[piv], a[col]
        inv = pow(a[col][col], q - 2, q)
        for r in range(col + 1, n):
            if a[r][col]:
                f = a[r][col] * inv % q
                a[r] = [(v - f * p) % q for v, p in zip(a[r], a[col])]
    return True
