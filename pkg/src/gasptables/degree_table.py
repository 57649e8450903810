"""Degree tables for polynomial-coded matrix multiplication.

A degree table for partition parameters (K, L) and collusion tolerance T is a
pair of exponent vectors, alpha = alpha_p | alpha_s of length K + T and
beta = beta_p | beta_s of length L + T.  Entry (i, j) of the table is
alpha_i + beta_j: the degree produced when a server multiplies the two
encoding polynomials evaluated at its point.  A table is usable when

  D1: the entries of alpha are pairwise distinct,
  D2: the entries of beta are pairwise distinct,
  D3: every value in Set(alpha_p) + Set(beta_p) is produced by exactly one
      cell of the whole table.

D3 is what makes the products of the data blocks recoverable: the degree of
each wanted product collides with nothing else.  The number of distinct
entries of the table equals the number of servers needed, so the rest of the
package is about driving that count down subject to D1, D2, D3.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional

ExponentVector = tuple[int, ...]


class DomainError(Exception):
    """An argument is outside the domain an operation is defined on."""


class InvalidTableError(DomainError):
    """A degree table failed validation where a valid one is required.

    Carries the ValidationReport so callers can see which condition broke.
    """

    def __init__(self, message: str, report: "ValidationReport"):
        super().__init__(message)
        self.report = report


def _as_exponent_vector(name: str, values: Iterable[int]) -> ExponentVector:
    vec = tuple(values)
    if len(vec) == 0:
        raise ValueError(f"{name} must be nonempty")
    for v in vec:
        if not isinstance(v, int) or isinstance(v, bool):
            raise ValueError(f"{name} entries must be integers, got {v!r}")
        if v < 0:
            raise ValueError(f"{name} entries must be nonnegative, got {v}")
    return vec


@dataclass(frozen=True)
class DegreeTable:
    """An (alpha, beta) exponent pair with its declared block structure.

    Construction checks structure only (block lengths match K, L, T and all
    entries are nonnegative integers).  Whether the table satisfies D1, D2,
    D3 is a semantic question answered by validate(); structurally sound but
    invalid tables are deliberately constructible since search and
    equivalence code needs to handle them.
    """

    K: int
    L: int
    T: int
    alpha_p: ExponentVector
    alpha_s: ExponentVector
    beta_p: ExponentVector
    beta_s: ExponentVector

    def __post_init__(self):
        for name in ("K", "L", "T"):
            n = getattr(self, name)
            if not isinstance(n, int) or isinstance(n, bool) or n < 1:
                raise ValueError(f"{name} must be a positive integer, got {n!r}")
        object.__setattr__(self, "alpha_p", _as_exponent_vector("alpha_p", self.alpha_p))
        object.__setattr__(self, "alpha_s", _as_exponent_vector("alpha_s", self.alpha_s))
        object.__setattr__(self, "beta_p", _as_exponent_vector("beta_p", self.beta_p))
        object.__setattr__(self, "beta_s", _as_exponent_vector("beta_s", self.beta_s))
        if len(self.alpha_p) != self.K:
            raise ValueError(f"alpha_p has length {len(self.alpha_p)}, expected K={self.K}")
        if len(self.alpha_s) != self.T:
            raise ValueError(f"alpha_s has length {len(self.alpha_s)}, expected T={self.T}")
        if len(self.beta_p) != self.L:
            raise ValueError(f"beta_p has length {len(self.beta_p)}, expected L={self.L}")
        if len(self.beta_s) != self.T:
            raise ValueError(f"beta_s has length {len(self.beta_s)}, expected T={self.T}")

    @property
    def alpha(self) -> ExponentVector:
        return self.alpha_p + self.alpha_s

    @property
    def beta(self) -> ExponentVector:
        return self.beta_p + self.beta_s

    def set_alpha(self) -> set[int]:
        return set(self.alpha)

    def set_beta(self) -> set[int]:
        return set(self.beta)

    def entries_matrix(self) -> list[list[int]]:
        """The full (K+T) x (L+T) table of degree sums, row major."""
        return [[a + b for b in self.beta] for a in self.alpha]

    def to_json_dict(self) -> dict:
        return {
            "K": self.K,
            "L": self.L,
            "T": self.T,
            "alpha_p": list(self.alpha_p),
            "alpha_s": list(self.alpha_s),
            "beta_p": list(self.beta_p),
            "beta_s": list(self.beta_s),
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "DegreeTable":
        missing = {"K", "L", "T", "alpha_p", "alpha_s", "beta_p", "beta_s"} - set(d)
        if missing:
            raise ValueError(f"table object missing keys: {sorted(missing)}")
        return cls(
            K=d["K"],
            L=d["L"],
            T=d["T"],
            alpha_p=tuple(d["alpha_p"]),
            alpha_s=tuple(d["alpha_s"]),
            beta_p=tuple(d["beta_p"]),
            beta_s=tuple(d["beta_s"]),
        )


@dataclass(frozen=True)
class ValidationReport:
    d1_ok: bool
    d2_ok: bool
    d3_ok: bool
    # A sum from the prefix block with more than one representation, when D3
    # fails.  None otherwise.
    d3_witness: Optional[int] = None

    @property
    def ok(self) -> bool:
        return self.d1_ok and self.d2_ok and self.d3_ok


def sumset(a: Iterable[int], b: Iterable[int]) -> set[int]:
    """Set of all pairwise sums {x + y : x in a, y in b}.

    Empty inputs are rejected: an empty sumset has no meaning for a degree
    table and silently returning set() hides bugs upstream.
    """
    sa, sb = set(a), set(b)
    if not sa or not sb:
        raise DomainError("sumset requires nonempty operands")
    return {x + y for x in sa for y in sb}


def validate(table: DegreeTable) -> ValidationReport:
    """Check D1, D2, D3 and report which failed.

    D3 is checked by counting, over Set(alpha) x Set(beta), the
    representations of each value in the prefix sumset; the first value with
    two or more is recorded as the witness.
    """
    d1 = len(set(table.alpha)) == len(table.alpha)
    d2 = len(set(table.beta)) == len(table.beta)
    sa, sb = table.set_alpha(), table.set_beta()
    reps = Counter(x + y for x in sa for y in sb)
    witness = None
    for n in sorted(sumset(table.alpha_p, table.beta_p)):
        if reps[n] != 1:
            witness = n
            break
    return ValidationReport(d1_ok=d1, d2_ok=d2, d3_ok=witness is None, d3_witness=witness)


def require_valid(table: DegreeTable) -> None:
    report = validate(table)
    if not report.ok:
        broken = [
            name
            for name, ok in (("D1", report.d1_ok), ("D2", report.d2_ok), ("D3", report.d3_ok))
            if not ok
        ]
        detail = f" (witness sum {report.d3_witness})" if report.d3_witness is not None else ""
        raise InvalidTableError(f"degree table violates {', '.join(broken)}{detail}", report)


def count_distinct(table: DegreeTable) -> int:
    """Number of distinct entries of a valid degree table.

    This is the number of servers the scheme needs.  Invalid tables are
    rejected because the count is only operationally meaningful under
    D1 to D3; use sumset() directly to size an arbitrary table.
    """
    require_valid(table)
    return len(sumset(table.set_alpha(), table.set_beta()))


@dataclass(frozen=True)
class ScoreBreakdown:
    """Per-suffix-row collision counts, scanning the table top-down.

    left[i] counts prefix-column cells of suffix row i whose value already
    occurred in earlier rows; right[i] the same for suffix-column cells (the
    cells of the current row's prefix part count as "earlier" by then).  The
    total is the score S; larger scores mean more collisions and hence fewer
    distinct entries.
    """

    left: tuple[int, ...]
    right: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.left) + sum(self.right)


def score_bruteforce(table: DegreeTable) -> ScoreBreakdown:
    """Count suffix-row collisions by direct enumeration.

    Rows are scanned top-down, prefix columns before suffix columns within a
    row, maintaining the set of values seen so far.  No validity is assumed;
    on the standard constructions this reproduces the closed-form score.
    """
    seen = set(sumset(table.alpha_p, table.beta))
    left, right = [], []
    for a in table.alpha_s:
        row_p = {a + b for b in table.beta_p}
        left.append(sum(1 for v in row_p if v in seen))
        seen |= row_p
        row_s = {a + b for b in table.beta_s}
        right.append(sum(1 for v in row_s if v in seen))
        seen |= row_s
    return ScoreBreakdown(left=tuple(left), right=tuple(right))
