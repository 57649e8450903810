"""Equivalence of degree tables: squeezing, scaling, and canonical forms.

Two tables are equivalent when one arises from the other by permuting the
entries within each of the four blocks, shifting all alpha entries by a
common constant and all beta entries by another, and scaling everything by a
common nonzero rational (results must stay nonnegative integers).  Equivalent
tables have the same distinct-entry count, so search and census code only
ever has to look at one representative per class.

Squeezing closes oversized gaps: whenever the alpha values split into a low
group and a high group so far apart that no table entry from the low rows can
collide with the high rows, the whole high group can slide down one step
without changing the entry count.  Repeating until no gap qualifies gives a
table whose consecutive sorted gaps are bounded by the other side's spread,
which is what makes exhaustive searches finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .degree_table import DegreeTable, DomainError

Rational = Union[int, Fraction]


@dataclass(frozen=True)
class SqueezeStep:
    """One applied gap-closing step.

    kind is "alpha_op" or "beta_op"; index is the 0-based position i in the
    sorted value list of the squeezed side whose gap to position i+1
    triggered; threshold is that i-th smallest value; affected lists the
    0-based positions (into the concatenated prefix|suffix vector) whose
    entries got decremented.
    """

    kind: str
    index: int
    threshold: int
    affected: tuple[int, ...]


def _decrement_above(vec: tuple[int, ...], threshold: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    new = tuple(v - 1 if v > threshold else v for v in vec)
    affected = tuple(i for i, v in enumerate(vec) if v > threshold)
    return new, affected


def squeeze_step(table: DegreeTable) -> Optional[tuple[DegreeTable, SqueezeStep]]:
    """Apply one gap-closing step if any is feasible, smallest index first.

    The alpha side is scanned before the beta side; at most one side can
    have a feasible gap at a time, so the order only fixes determinism, not
    the outcome.  Entries strictly above the gap's low endpoint are
    decremented, wherever they sit in the vector.
    """
    alpha, beta = table.alpha, table.beta

    vals = sorted(alpha)
    b, big_b = min(beta), max(beta)
    for i in range(len(vals) - 1):
        if vals[i] + big_b < vals[i + 1] - 1 + b:
            new_alpha, affected = _decrement_above(alpha, vals[i])
            step = SqueezeStep(kind="alpha_op", index=i, threshold=vals[i], affected=affected)
            new = DegreeTable(
                K=table.K, L=table.L, T=table.T,
                alpha_p=new_alpha[: table.K], alpha_s=new_alpha[table.K:],
                beta_p=table.beta_p, beta_s=table.beta_s,
            )
            return new, step

    vals = sorted(beta)
    a, big_a = min(alpha), max(alpha)
    for i in range(len(vals) - 1):
        if vals[i] + big_a < vals[i + 1] - 1 + a:
            new_beta, affected = _decrement_above(beta, vals[i])
            step = SqueezeStep(kind="beta_op", index=i, threshold=vals[i], affected=affected)
            new = DegreeTable(
                K=table.K, L=table.L, T=table.T,
                alpha_p=table.alpha_p, alpha_s=table.alpha_s,
                beta_p=new_beta[: table.L], beta_s=new_beta[table.L:],
            )
            return new, step

    return None


def squeeze(table: DegreeTable) -> tuple[DegreeTable, tuple[SqueezeStep, ...]]:
    """Close gaps until none is feasible; returns the result and the trace.

    Terminates because every step strictly decreases the entry sum.  The
    final table does not depend on the order steps were tried in; the trace
    does, and records the deterministic smallest-index-first order.
    """
    steps = []
    while True:
        nxt = squeeze_step(table)
        if nxt is None:
            return table, tuple(steps)
        table, step = nxt
        steps.append(step)


@dataclass(frozen=True)
class EquivalenceTransform:
    """scale * (block-permuted table + per-side shift).

    Shifts apply before scaling: alpha entries map to
    scale * (alpha[perm[i]] + shift_alpha), beta entries analogously.  Scale
    and shifts may be any rationals (scale nonzero, negative allowed); the
    transform is only applicable when every resulting entry is a nonnegative
    integer, which apply_transform checks after the fact.
    """

    scale: Rational = 1
    shift_alpha: Rational = 0
    shift_beta: Rational = 0
    perm_alpha_p: Optional[tuple[int, ...]] = None
    perm_alpha_s: Optional[tuple[int, ...]] = None
    perm_beta_p: Optional[tuple[int, ...]] = None
    perm_beta_s: Optional[tuple[int, ...]] = None


def _check_perm(perm: tuple[int, ...], n: int, name: str) -> tuple[int, ...]:
    if perm is None:
        return tuple(range(n))
    if sorted(perm) != list(range(n)):
        raise DomainError(f"{name} is not a permutation of 0..{n - 1}: {perm!r}")
    return tuple(perm)


def apply_transform(table: DegreeTable, tf: EquivalenceTransform) -> DegreeTable:
    """Apply an equivalence transform, rejecting non-integral results."""
    scale = Fraction(tf.scale)
    if scale == 0:
        raise DomainError("scale must be nonzero")
    sa, sb = Fraction(tf.shift_alpha), Fraction(tf.shift_beta)

    def mapped(vec, perm, shift):
        out = []
        for i in perm:
            v = scale * (vec[i] + shift)
            if v.denominator != 1 or v < 0:
                raise DomainError(f"transform gives non-integer or negative entry {v}")
            out.append(int(v))
        return tuple(out)

    pap = _check_perm(tf.perm_alpha_p, table.K, "perm_alpha_p")
    pas = _check_perm(tf.perm_alpha_s, table.T, "perm_alpha_s")
    pbp = _check_perm(tf.perm_beta_p, table.L, "perm_beta_p")
    pbs = _check_perm(tf.perm_beta_s, table.T, "perm_beta_s")
    return DegreeTable(
        K=table.K, L=table.L, T=table.T,
        alpha_p=mapped(table.alpha_p, pap, sa),
        alpha_s=mapped(table.alpha_s, pas, sa),
        beta_p=mapped(table.beta_p, pbp, sb),
        beta_s=mapped(table.beta_s, pbs, sb),
    )


def transpose(table: DegreeTable) -> DegreeTable:
    """Swap the roles of the two sides (rows become columns)."""
    return DegreeTable(
        K=table.L, L=table.K, T=table.T,
        alpha_p=table.beta_p, alpha_s=table.beta_s,
        beta_p=table.alpha_p, beta_s=table.alpha_s,
    )


def normal(table: DegreeTable) -> DegreeTable:
    """Sort each block, shift each side's minimum to 0, divide out the gcd.

    The gcd is taken over ALL entries of both sides after the shift; a table
    of all zeros (structurally impossible for valid tables) would keep
    divisor 1.
    """
    ap, as_, bp, bs = (sorted(table.alpha_p), sorted(table.alpha_s),
                       sorted(table.beta_p), sorted(table.beta_s))
    ma, mb = min(ap[0], as_[0]), min(bp[0], bs[0])
    ap = [v - ma for v in ap]
    as_ = [v - ma for v in as_]
    bp = [v - mb for v in bp]
    bs = [v - mb for v in bs]
    g = math.gcd(*ap, *as_, *bp, *bs)
    if g == 0:
        g = 1
    return DegreeTable(
        K=table.K, L=table.L, T=table.T,
        alpha_p=tuple(v // g for v in ap), alpha_s=tuple(v // g for v in as_),
        beta_p=tuple(v // g for v in bp), beta_s=tuple(v // g for v in bs),
    )


def is_normal(table: DegreeTable) -> bool:
    blocks = (table.alpha_p, table.alpha_s, table.beta_p, table.beta_s)
    if any(list(b) != sorted(b) for b in blocks):
        return False
    if min(table.alpha) != 0 or min(table.beta) != 0:
        return False
    return math.gcd(*table.alpha, *table.beta) in (0, 1)


def negate(table: DegreeTable) -> DegreeTable:
    """Reflect every entry through the global maximum (x -> max - x).

    Entry sums map through 2*max - s, a bijection, so the distinct-entry
    count is untouched even though the table usually looks very different.
    """
    m = max(max(table.alpha), max(table.beta))
    return DegreeTable(
        K=table.K, L=table.L, T=table.T,
        alpha_p=tuple(m - v for v in table.alpha_p),
        alpha_s=tuple(m - v for v in table.alpha_s),
        beta_p=tuple(m - v for v in table.beta_p),
        beta_s=tuple(m - v for v in table.beta_s),
    )


def _lex_key(table: DegreeTable) -> tuple[int, ...]:
    return table.alpha_p + table.alpha_s + table.beta_p + table.beta_s


def canonical(table: DegreeTable) -> DegreeTable:
    """The lexicographically smaller of normal(t) and normal(negate(normal(t))).

    This is a class invariant: any two equivalent tables (including through
    negation) canonicalize to the same table, and canonical is idempotent.
    Comparison key is the concatenation alpha_p|alpha_s|beta_p|beta_s.
    """
    n = normal(table)
    m = normal(negate(n))
    return n if _lex_key(n) <= _lex_key(m) else m
