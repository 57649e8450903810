"""End-to-end secure multiplication protocol driven by a degree table.

The outer-product scheme: A is cut into K row blocks, B into L column
blocks, both padded with T random masks, and each of the N servers gets one
evaluation of each masked polynomial.  Degrees come straight from the table:
prefix exponents carry data, suffix exponents carry masks.  Any T colluding
servers see T evaluations of the mask space only, which is why the T x T
selection submatrices have to stay invertible.

All arithmetic is exact over a prime field chosen large enough that every
table entry fits below q - 1 (so distinct exponents stay distinct under the
mod q - 1 reduction used during evaluation).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace
from itertools import combinations
from typing import Optional

from .degree_table import DegreeTable, DomainError, require_valid, sumset
from .field import (
    Matrix,
    PrimeField,
    is_invertible,
    mat_add,
    mat_mul,
    mat_scale,
    next_prime,
    solve,
    zero_matrix,
)

DEFAULT_SELECTION_SAMPLES = 50
MAX_POINT_RETRIES = 64
EXHAUSTIVE_SUBSET_LIMIT = 100_000
SAMPLED_SUBSET_COUNT = 10_000


@dataclass(frozen=True)
class SdmmInstance:
    """Everything one protocol run needs, immutable once assembled.

    ``shares`` and ``responses`` are None while the instance is still being
    built; :func:`build_instance` returns them filled in.
    """

    field: PrimeField
    dims: tuple[int, int, int]
    table: DegreeTable
    a_mat: Matrix
    b_mat: Matrix
    r_masks: tuple[Matrix, ...]
    s_masks: tuple[Matrix, ...]
    points: tuple[int, ...]
    shares: Optional[tuple[tuple[Matrix, Matrix], ...]] = None
    responses: Optional[tuple[Matrix, ...]] = None

    @property
    def n_servers(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class DecodeResult:
    product: Matrix
    blocks: dict[tuple[int, int], Matrix]


@dataclass(frozen=True)
class SecurityReport:
    total_subsets: int
    checked: int
    exhaustive: bool
    failures: tuple[tuple[tuple[int, ...], str], ...] = ()

    @property
    def ok(self) -> bool:
        return not self.failures


def _shape_of(m: Matrix, what: str) -> tuple[int, int]:
    if not m or not m[0]:
        raise DomainError(f"{what} must be non-empty")
    cols = len(m[0])
    if any(len(row) != cols for row in m):
        raise DomainError(f"{what} has ragged rows")
    return len(m), cols


def partition(a_mat: Matrix, b_mat: Matrix, K: int, L: int) -> tuple[tuple[Matrix, ...], tuple[Matrix, ...]]:
    """Split A into K row blocks and B into L column blocks.

    Dimensions must divide evenly; anything else is a caller error worth
    stopping on rather than silently padding.
    """
    a, b = _shape_of(a_mat, "A")
    b2, c = _shape_of(b_mat, "B")
    if b != b2:
        raise DomainError(f"inner dimensions differ: A is {a}x{b}, B is {b2}x{c}")
    if a % K:
        raise DomainError(f"A has {a} rows, not divisible by K={K}")
    if c % L:
        raise DomainError(f"B has {c} columns, not divisible by L={L}")
    ra = a // K
    a_blocks = tuple(a_mat[k * ra:(k + 1) * ra] for k in range(K))
    cl = c // L
    b_blocks = tuple(
        tuple(row[l * cl:(l + 1) * cl] for row in b_mat) for l in range(L)
    )
    return a_blocks, b_blocks


def _degrees(table: DegreeTable) -> list[int]:
    return sorted(sumset(table.alpha, table.beta))


def _suffix_rows(field: PrimeField, points, exps) -> list[list[int]]:
    return [[field.pow(x, e) for e in exps] for x in points]


def _subset_ok(field: PrimeField, rows, subset) -> bool:
    return is_invertible(field, tuple(tuple(rows[i]) for i in subset))


def choose_field_and_points(
    table: DegreeTable,
    base_q: int = 2,
    seed: int = 0,
    selection_samples: int = DEFAULT_SELECTION_SAMPLES,
    max_retries: int = MAX_POINT_RETRIES,
) -> tuple[PrimeField, tuple[int, ...]]:
    """Pick a prime field and N distinct nonzero evaluation points.

    q is the smallest prime at least max(base_q, M + 2, N + 1) where M is the
    largest table entry, so exponent arithmetic mod q - 1 cannot merge two
    distinct degrees.  Candidate point sets are rejection-sampled until the
    decode matrix and a batch of randomly selected T x T security submatrices
    are all invertible.
    """
    require_valid(table)
    degrees = _degrees(table)
    n = len(degrees)
    m_big = degrees[-1]
    q = next_prime(max(base_q, m_big + 2, n + 1))
    fld = PrimeField(q)
    t = table.T
    rng = random.Random(f"points:{seed}")
    for _ in range(max_retries):
        pts = tuple(sorted(rng.sample(range(1, q), n)))
        v = tuple(tuple(fld.pow(x, d) for d in degrees) for x in pts)
        if not is_invertible(fld, v):
            continue
        if t:
            rows_a = _suffix_rows(fld, pts, table.alpha_s)
            rows_b = _suffix_rows(fld, pts, table.beta_s)
            total = math.comb(n, t)
            if total <= selection_samples:
                subsets = list(combinations(range(n), t))
            else:
                subsets = [tuple(sorted(rng.sample(range(n), t))) for _ in range(selection_samples)]
            if not all(
                _subset_ok(fld, rows_a, s) and _subset_ok(fld, rows_b, s)
                for s in subsets
            ):
                continue
        return fld, pts
    raise DomainError(
        f"no usable evaluation points after {max_retries} attempts over GF({q});"
        " retry with a larger base_q"
    )


def encode(inst: SdmmInstance) -> tuple[tuple[Matrix, Matrix], ...]:
    """Evaluate both masked polynomials at every server's point."""
    fld = inst.field
    tab = inst.table
    a_blocks, b_blocks = partition(inst.a_mat, inst.b_mat, tab.K, tab.L)
    shares = []
    for x in inst.points:
        f_sh = zero_matrix(*_shape_of(a_blocks[0], "A block"))
        for blk, e in zip(a_blocks + inst.r_masks, tab.alpha):
            f_sh = mat_add(fld, f_sh, mat_scale(fld, fld.pow(x, e), blk))
        g_sh = zero_matrix(*_shape_of(b_blocks[0], "B block"))
        for blk, e in zip(b_blocks + inst.s_masks, tab.beta):
            g_sh = mat_add(fld, g_sh, mat_scale(fld, fld.pow(x, e), blk))
        shares.append((f_sh, g_sh))
    return tuple(shares)


def server_compute(inst: SdmmInstance) -> tuple[Matrix, ...]:
    if inst.shares is None:
        raise DomainError("instance has no shares yet")
    return tuple(mat_mul(inst.field, f_sh, g_sh) for f_sh, g_sh in inst.shares)


def build_instance(
    a_mat: Matrix,
    b_mat: Matrix,
    table: DegreeTable,
    base_q: int = 2,
    seed: int = 0,
    mask_seed: Optional[int] = None,
    zero_masks: bool = False,
    selection_samples: int = DEFAULT_SELECTION_SAMPLES,
) -> SdmmInstance:
    """Assemble a full protocol run: field, points, masks, shares, answers.

    ``mask_seed`` defaults to ``seed``; varying it alone changes every share
    while leaving the decoded product untouched.  ``zero_masks`` exists for
    tests that want to see the unmasked polynomial.
    """
    fld, pts = choose_field_and_points(
        table, base_q=base_q, seed=seed, selection_samples=selection_samples
    )
    a, b = _shape_of(a_mat, "A")
    b2, c = _shape_of(b_mat, "B")
    a_red = tuple(tuple(v % fld.q for v in row) for row in a_mat)
    b_red = tuple(tuple(v % fld.q for v in row) for row in b_mat)
    partition(a_red, b_red, table.K, table.L)
    mrng = random.Random(f"masks:{seed if mask_seed is None else mask_seed}")
    ra, cl = a // table.K, c // table.L
    if zero_masks:
        r_masks = tuple(zero_matrix(ra, b) for _ in range(table.T))
        s_masks = tuple(zero_matrix(b, cl) for _ in range(table.T))
    else:
        r_masks = tuple(fld.random_matrix(mrng, ra, b) for _ in range(table.T))
        s_masks = tuple(fld.random_matrix(mrng, b, cl) for _ in range(table.T))
    inst = SdmmInstance(
        field=fld,
        dims=(a, b, c),
        table=table,
        a_mat=a_red,
        b_mat=b_red,
        r_masks=r_masks,
        s_masks=s_masks,
        points=pts,
    )
    inst = replace(inst, shares=encode(inst))
    return replace(inst, responses=server_compute(inst))


def decode(inst: SdmmInstance) -> DecodeResult:
    """Interpolate the response polynomial and read off the product blocks."""
    if inst.responses is None:
        raise DomainError("instance has no responses yet")
    fld = inst.field
    tab = inst.table
    degrees = _degrees(tab)
    n = len(degrees)
    if len(inst.points) != n:
        raise DomainError(f"expected {n} evaluation points, got {len(inst.points)}")
    v = tuple(tuple(fld.pow(x, d) for d in degrees) for x in inst.points)
    rhs = tuple(tuple(val for row in resp for val in row) for resp in inst.responses)
    coeffs = solve(fld, v, rhs)
    if coeffs is None:
        raise DomainError("decode matrix is singular; pick different evaluation points")
    a, _, c = inst.dims
    ra, cl = a // tab.K, c // tab.L
    index_of = {d: i for i, d in enumerate(degrees)}
    blocks: dict[tuple[int, int], Matrix] = {}
    for k in range(tab.K):
        for l in range(tab.L):
            flat = coeffs[index_of[tab.alpha_p[k] + tab.beta_p[l]]]
            blocks[(k, l)] = tuple(
                tuple(flat[i * cl:(i + 1) * cl]) for i in range(ra)
            )
    product = tuple(
        tuple(val for l in range(tab.L) for val in blocks[(k, l)][i])
        for k in range(tab.K)
        for i in range(ra)
    )
    return DecodeResult(product=product, blocks=blocks)


def plain_product(inst: SdmmInstance) -> Matrix:
    """The product computed directly, for checking a decode."""
    return mat_mul(inst.field, inst.a_mat, inst.b_mat)


def security_check(
    inst: SdmmInstance,
    mode: str = "auto",
    sample_size: int = SAMPLED_SUBSET_COUNT,
    seed: int = 0,
) -> SecurityReport:
    """Verify the T x T mask submatrices are invertible for server subsets.

    Every subset is tried when there are at most 100000 of them (or when
    ``mode="all"`` forces it); otherwise ``sample_size`` random subsets are
    drawn.  A failure names the offending subset and which side leaked.
    """
    if mode not in ("auto", "all", "sampled"):
        raise DomainError(f"unknown mode {mode!r}")
    fld = inst.field
    tab = inst.table
    n = inst.n_servers
    t = tab.T
    total = math.comb(n, t)
    if t == 0:
        return SecurityReport(total_subsets=total, checked=0, exhaustive=True)
    rows_a = _suffix_rows(fld, inst.points, tab.alpha_s)
    rows_b = _suffix_rows(fld, inst.points, tab.beta_s)
    exhaustive = mode == "all" or (mode == "auto" and total <= EXHAUSTIVE_SUBSET_LIMIT)
    if exhaustive:
        subsets = combinations(range(n), t)
        checked = total
    else:
        rng = random.Random(f"security:{seed}")
        subsets = (tuple(sorted(rng.sample(range(n), t))) for _ in range(sample_size))
        checked = sample_size
    failures = []
    for s in subsets:
        if not _subset_ok(fld, rows_a, s):
            failures.append((s, "alpha"))
        if not _subset_ok(fld, rows_b, s):
            failures.append((s, "beta"))
    return SecurityReport(
        total_subsets=total,
        checked=checked,
        exhaustive=exhaustive,
        failures=tuple(failures),
    )
