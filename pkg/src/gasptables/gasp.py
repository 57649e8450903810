"""The GASP family of degree tables and its threshold formulas.

GASP_r ("gap additive secure polynomial", chain length r) fixes

    alpha_p = (0, 1, ..., K-1)
    beta_p  = (0, K, ..., K(L-1))
    beta_s  = (KL, KL+1, ..., KL+T-1)

and fills alpha_s with the first T values of KL + {0..r-1} + K*{0,1,2,...},
i.e. chains of r consecutive integers repeating with period K.  Small r
spreads the suffix rows out (good when T is small relative to K), large r
packs them densely; r = min(K, T) is the "big" end of the family and r = 1
the "small" end.

This module provides the construction, the collision-score closed form, two
independent closed forms for the distinct-entry count N(r), and the
piecewise-linear machinery that shrinks the search for the best r from
min(K, T) candidates down to a handful.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .degree_table import DegreeTable, DomainError, ScoreBreakdown


@dataclass(frozen=True)
class GaspParams:
    """Parameters (K, L, T, r) with K, L normalized so that L <= K.

    The constructions assume L <= K; when called with L > K the roles of the
    two matrices are swapped and `transposed` records that the caller must
    read alpha as the B side and beta as the A side.  All derived quantities
    (scores, N) are invariant under the swap.
    """

    K: int
    L: int
    T: int
    r: int
    transposed: bool = field(default=False, compare=False)

    def __post_init__(self):
        for name in ("K", "L", "T", "r"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 1:
                raise DomainError(f"{name} must be a positive integer, got {v!r}")
        if self.L > self.K:
            k, l = self.L, self.K
            object.__setattr__(self, "K", k)
            object.__setattr__(self, "L", l)
            object.__setattr__(self, "transposed", True)
        if self.r > min(self.K, self.T):
            raise DomainError(
                f"r={self.r} out of range, need 1 <= r <= min(K, T) = {min(self.K, self.T)}"
            )

    @classmethod
    def big(cls, K: int, L: int, T: int) -> "GaspParams":
        """The r = min(K, T) member (after normalization)."""
        kk, ll = (K, L) if L <= K else (L, K)
        return cls(K=K, L=L, T=T, r=min(kk, T))


def construct(params: GaspParams) -> DegreeTable:
    """Build the GASP_r degree table for the given parameters."""
    K, L, T, r = params.K, params.L, params.T, params.r
    kl = K * L
    alpha_s = []
    m = 0
    while len(alpha_s) < T:
        for j in range(r):
            alpha_s.append(kl + K * m + j)
            if len(alpha_s) == T:
                break
        m += 1
    return DegreeTable(
        K=K,
        L=L,
        T=T,
        alpha_p=tuple(range(K)),
        alpha_s=tuple(alpha_s),
        beta_p=tuple(K * j for j in range(L)),
        beta_s=tuple(kl + t for t in range(T)),
    )


def score_closed_form(params: GaspParams) -> ScoreBreakdown:
    """Collision score of GASP_r without building the table.

    Left counts (prefix-column collisions of suffix row i):
        min(L, 2 + floor((T-1-i)/K))   for i <= r, else L.
    Right counts (suffix-column collisions):
        row 1:          max(0, K+T-KL-1)
        i = 1 mod r:    max(0, T-K+r-1)    (for r = 1 this is every row)
        otherwise:      T-1.
    Floor division here is Python's, which rounds toward minus infinity;
    the T-1-i < 0 cases rely on that.
    """
    K, L, T, r = params.K, params.L, params.T, params.r
    left = []
    for i in range(1, T + 1):
        if i <= r:
            left.append(min(L, 2 + (T - 1 - i) // K))
        else:
            left.append(L)
    right = [max(0, K + T - K * L - 1)]
    for i in range(2, T + 1):
        if i % r == 1 % r:
            right.append(max(0, T - K + r - 1))
        else:
            right.append(T - 1)
    return ScoreBreakdown(left=tuple(left), right=tuple(right))


def n_of_r(params: GaspParams) -> int:
    """Distinct-entry count of GASP_r via the collision score.

    The first K rows of the table cover exactly KL + K + T - 1 values; the
    T suffix rows contribute L + T cells each, minus the score.
    """
    K, L, T = params.K, params.L, params.T
    s = score_closed_form(params).total
    return K * L + K + T - 1 + T * (L + T) - s


def n_theorem1(params: GaspParams) -> int:
    """Distinct-entry count of GASP_r from the standalone closed form.

    Independent of n_of_r (no score detour); kept as a cross-check since the
    expression is easy to transcribe wrongly.  Intermediate arithmetic is
    exact rational, and the result is asserted to be an integer.
    """
    K, L, T, r = params.K, params.L, params.T, params.r
    phi = T - 1 - K * L + 2 * K
    mu = (T - 1) % K
    x = min((T - 1 - mu) // K - (1 if mu == 0 else 0), L - 3)
    n = Fraction(
        K * L + 2 * K + 3 * T - 2
        - max(K, phi)
        + (L - 2) * max(0, min(r, r - phi))
        + ((T - 1) // r) * min(T - 1, K - r)
    )
    if phi < r:
        n -= (
            min(0, mu - r)
            + Fraction(r * (T - 1 - mu), K)
            + Fraction(-K * x * x + (-K - 2 * max(0, phi) + 2 * T - 2) * x + (T - 1 - mu), 2)
            - Fraction(T - 1 - mu, K) * Fraction(T - 1 + mu, 2)
        )
    if n.denominator != 1:
        raise AssertionError(f"closed form gave non-integer {n} at {params}")
    return int(n)


def h_function(K: int, L: int, T: int, r: int) -> int:
    """The r-dependent part of N(r) on the regime r > phi.

    Only defined for max(1, phi+1) <= r <= min(K, T); outside that window
    N(r) is governed by a different linear piece and this value would be
    meaningless, so we refuse.
    """
    _check_klt(K, L, T)
    phi = T - 1 - K * L + 2 * K
    lo, hi = max(1, phi + 1), min(K, T)
    if not lo <= r <= hi:
        raise DomainError(f"h_function needs {lo} <= r <= {hi}, got r={r}")
    mu = (T - 1) % K
    return (L - 2 - (T - 1 - mu) // K) * r + max(mu, r) + ((T - 1) // r) * min(T - 1, K - r)


@dataclass
class ChainSearchTrace:
    """Everything the reduced search for the best r looked at.

    W is the set of values floor((T-1)/i) takes on the feasible i-range; each
    w contributes the candidate set q_w (endpoints of the linear piece, or
    the interior kink points in A_w).  Q is their union, Q_prime the three
    regime corner cases, and Q_dprime the final clipped candidate set that a
    minimizer is guaranteed to live in.  evaluated/r_star/n_star are filled
    in by optimal_r.
    """

    K: int
    L: int
    T: int
    phi: int
    mu: int
    x: int
    W: tuple[int, ...]
    q_w: dict[int, tuple[int, ...]]
    Q: tuple[int, ...]
    Q_prime: tuple[int, ...]
    Q_dprime: tuple[int, ...]
    evaluated: tuple[tuple[int, int], ...] = ()
    r_star: Optional[int] = None
    n_star: Optional[int] = None


def _check_klt(K: int, L: int, T: int) -> None:
    for name, v in (("K", K), ("L", L), ("T", T)):
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise DomainError(f"{name} must be a positive integer, got {v!r}")
    if L > K:
        raise DomainError(f"need L <= K, got K={K}, L={L} (swap the roles first)")


def candidate_set(K: int, L: int, T: int) -> ChainSearchTrace:
    """Compute the reduced candidate set Q'' for the best chain length.

    The slope of the r-dependent part changes only at block boundaries of
    floor((T-1)/r) and at the two special points mu and K-T+1, so a
    minimizer is always among: per-block endpoints selected by slope signs
    (Q), the regime corners (Q_prime), clipped to the feasible range.
    """
    _check_klt(K, L, T)
    phi = T - 1 - K * L + 2 * K
    mu = (T - 1) % K
    x = min((T - 1 - mu) // K - (1 if mu == 0 else 0), L - 3)
    i_lo, i_hi = max(1, phi + 1), min(K, T - 1)
    W = sorted({(T - 1) // i for i in range(i_lo, i_hi + 1)})

    step = L - 2 - (T - 1 - mu) // K

    def slope(r: int, w: int) -> int:
        return step + (1 if mu < r else 0) - (w if K - T + 1 < r else 0)

    q_w: dict[int, tuple[int, ...]] = {}
    for w in W:
        l_w = (T - 1) // (w + 1) + 1
        r_w = (T - 1) // w
        a_w = sorted({mu, K - T + 1} & set(range(l_w + 1, r_w)))
        if r_w < l_w:
            cand: tuple[int, ...] = ()
        elif l_w == r_w:
            cand = (l_w,)
        elif a_w and slope(l_w, w) >= 0 and slope(r_w, w) >= 0:
            cand = (l_w,)
        elif a_w and slope(l_w, w) >= 0 and slope(r_w, w) < 0:
            cand = (l_w, r_w)
        elif a_w and slope(l_w, w) < 0 and slope(r_w, w) >= 0:
            cand = tuple(a_w)
        elif a_w and slope(l_w, w) < 0 and slope(r_w, w) < 0:
            cand = (r_w,)
        elif slope(l_w, w) >= 0:
            cand = (l_w,)
        else:
            cand = (r_w,)
        q_w[w] = cand

    Q = sorted(set().union(*q_w.values()) if q_w else set())
    Q_prime = sorted({max(1, min(K, T, phi)), max(1, phi + 1), T})
    Q_dprime = sorted((set(Q_prime) | set(Q)) & set(range(1, min(K, T) + 1)))
    return ChainSearchTrace(
        K=K, L=L, T=T, phi=phi, mu=mu, x=x,
        W=tuple(W), q_w=q_w, Q=tuple(Q),
        Q_prime=tuple(Q_prime), Q_dprime=tuple(Q_dprime),
    )


def optimal_r(K: int, L: int, T: int, mode: str = "reduced") -> tuple[int, int, ChainSearchTrace]:
    """Best chain length r for (K, L, T) and the threshold it achieves.

    mode "reduced" evaluates N(r) only on the candidate set Q''; "full_scan"
    sweeps every r in 1..min(K, T).  Ties go to the smallest r; the trace
    keeps all evaluated (r, N(r)) pairs so other minimizers stay visible.
    """
    if L > K:
        K, L = L, K
    trace = candidate_set(K, L, T)
    if mode == "reduced":
        candidates = list(trace.Q_dprime)
    elif mode == "full_scan":
        candidates = list(range(1, min(K, T) + 1))
    else:
        raise DomainError(f"unknown mode {mode!r}, expected 'reduced' or 'full_scan'")
    evaluated = [(r, n_of_r(GaspParams(K=K, L=L, T=T, r=r))) for r in candidates]
    trace.evaluated = tuple(evaluated)
    best_n = min(n for _, n in evaluated)
    best_r = min(r for r, n in evaluated if n == best_n)
    trace.r_star, trace.n_star = best_r, best_n
    return best_r, best_n, trace


def _w_block_starts(T: int, i_hi: int) -> list[int]:
    """Starts of the constancy blocks of floor((T-1)/i) on [1, i_hi]."""
    starts = []
    i = 1
    while i <= i_hi:
        starts.append(i)
        w = (T - 1) // i
        i = (i_hi if w == 0 else min(i_hi, (T - 1) // w)) + 1
    return starts


def reduction_statistic(k_max: int = 300, t_max: int = 300) -> Fraction:
    """Mean of (5 + #W) / min(K, T) over 1 <= L <= K <= k_max, 1 <= T <= t_max.

    Measures how small the reduced candidate set is relative to scanning all
    of 1..min(K, T).  Exact rational arithmetic; the per-(K, T) inner loop
    uses the block decomposition of floor((T-1)/i), so only the few L with a
    nontrivial range lower end cost a bisect.
    """
    # numerator sums grouped by denominator min(K, T)
    num: dict[int, int] = {}
    triples = 0
    for K in range(1, k_max + 1):
        for T in range(1, t_max + 1):
            d = min(K, T)
            i_hi = min(K, T - 1)
            acc = 5 * K
            if i_hi >= 1:
                starts = _w_block_starts(T, i_hi)
                nblocks = len(starts)
                # i0(L) = max(1, T + 2K - KL) drops below 1 for all
                # L >= l_full, where every block is in range.
                l_full = (T + 2 * K - 2 + K) // K  # ceil((T + 2K - 1) / K)
                if l_full <= K:
                    acc += nblocks * (K - l_full + 1)
                for L in range(1, min(K, l_full - 1) + 1):
                    i0 = T + 2 * K - K * L
                    if i0 <= i_hi:
                        idx = bisect.bisect_right(starts, max(1, i0)) - 1
                        acc += nblocks - idx
            num[d] = num.get(d, 0) + acc
            triples += K
    total = sum(Fraction(v, d) for d, v in num.items())
    return total / triples
