"""Searches for good degree tables.

Three strategies at three price points:

  exhaustive            full census of all normal tables within entry bounds;
                        only affordable when the entry bounds apply (large T)
                        and small, but it is ground truth.
  exhaustive_fixed_prefix   the standard prefix and beta are frozen, only the
                        alpha suffix varies over its finite window; every
                        candidate is automatically a usable table.
  greedy                best-first suffix construction with the pruning rule
                        from the fixed-prefix setting; fast enough for
                        parameters where nothing else is, not guaranteed
                        optimal.

The census inner loop packs each side's value set into a big integer with a
fixed-width field per exponent, so one multiplication yields the multiplicity
of every entry sum at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Union

from .bounds import entry_upper_bounds
from .degree_table import DegreeTable, DomainError
from .equivalence import canonical

EntryBound = Union[int, tuple[int, int]]


@dataclass(frozen=True)
class SearchResult:
    K: int
    L: int
    T: int
    best_n: int
    # Optimal tables exactly as enumerated (blocks sorted ascending).
    optima: tuple[DegreeTable, ...]
    # The same optima after canonical(), deduplicated; usually shorter since
    # negation pairs up distinct normal tables.
    canonical_optima: tuple[DegreeTable, ...]
    tables_examined: int
    valid_tables: int
    entry_bound: tuple[int, int]
    side_candidates: tuple[int, int] = (0, 0)
    budget_exhausted: bool = False


def _dedupe_canonical(optima) -> tuple[DegreeTable, ...]:
    seen = {}
    for t in optima:
        c = canonical(t)
        seen.setdefault(c.alpha + c.beta, c)
    return tuple(seen[k] for k in sorted(seen))


def _side_candidates(p_len: int, s_len: int, bound: int):
    """All sorted-block sides with distinct entries in [0, bound] and 0 present.

    Yields (prefix, suffix, gcd, packed) where packed is the field-packed
    indicator integer used by the census multiplication.
    """
    n = p_len + s_len
    if bound < n - 1:
        return
    for rest in combinations(range(1, bound + 1), n - 1):
        values = (0,) + rest
        g = math.gcd(*values)
        for suffix_idx in combinations(range(n), s_len):
            taken = set(suffix_idx)
            suffix = tuple(values[i] for i in suffix_idx)
            prefix = tuple(values[i] for i in range(n) if i not in taken)
            yield prefix, suffix, g, values


def exhaustive(K: int, L: int, T: int, entry_bound: Optional[EntryBound] = None) -> SearchResult:
    """Census of every normal degree table within the entry bounds.

    Without an explicit entry_bound the proven bounds are used; if they do
    not apply for these parameters (T too small) the search space is not
    known to be finite and we refuse rather than guess.  An explicit bound
    narrows or widens the census at the caller's own risk.
    """
    if entry_bound is None:
        eb = entry_upper_bounds(K, L, T)
        if eb is None:
            raise DomainError(
                "no proven entry bound for these parameters; pass entry_bound= to override"
            )
        bound_a, bound_b = eb
    elif isinstance(entry_bound, int):
        bound_a = bound_b = entry_bound
    else:
        bound_a, bound_b = entry_bound

    # Field width: multiplicities never exceed the cell count.
    shift = ((K + T) * (L + T)).bit_length()
    mask = (1 << shift) - 1

    def pack(values):
        p = 0
        for v in values:
            p |= 1 << (shift * v)
        return p

    alphas = [
        (pre, suf, g, pack(vals))
        for pre, suf, g, vals in _side_candidates(K, T, bound_a)
    ]
    betas = [
        (pre, suf, g, pack(vals))
        for pre, suf, g, vals in _side_candidates(L, T, bound_b)
    ]

    gcd = math.gcd
    best_n: Optional[int] = None
    optima: list[DegreeTable] = []
    valid = 0
    n_fields = bound_a + bound_b + 1
    for a_pre, a_suf, ga, pa in alphas:
        for b_pre, b_suf, gb, pb in betas:
            if gcd(ga, gb) != 1:
                continue
            prod = pa * pb
            ok = True
            for x in a_pre:
                if not ok:
                    break
                for y in b_pre:
                    if (prod >> (shift * (x + y))) & mask != 1:
                        ok = False
                        break
            if not ok:
                continue
            valid += 1
            n = sum(1 for e in range(n_fields) if (prod >> (shift * e)) & mask)
            if best_n is None or n <= best_n:
                table = DegreeTable(K=K, L=L, T=T, alpha_p=a_pre, alpha_s=a_suf,
                                    beta_p=b_pre, beta_s=b_suf)
                if best_n is None or n < best_n:
                    best_n, optima = n, [table]
                else:
                    optima.append(table)
    if best_n is None:
        raise DomainError(f"no valid table found within bounds ({bound_a}, {bound_b})")
    return SearchResult(
        K=K, L=L, T=T, best_n=best_n,
        optima=tuple(optima), canonical_optima=_dedupe_canonical(optima),
        tables_examined=len(alphas) * len(betas), valid_tables=valid,
        entry_bound=(bound_a, bound_b), side_candidates=(len(alphas), len(betas)),
    )


def _fixed_beta(K: int, L: int, T: int) -> tuple[int, ...]:
    return tuple(K * j for j in range(L)) + tuple(K * L + t for t in range(T))


def fixed_prefix_table(K: int, L: int, T: int, alpha_s) -> DegreeTable:
    """Table with the standard prefixes and beta, and the given alpha suffix."""
    beta = _fixed_beta(K, L, T)
    return DegreeTable(
        K=K, L=L, T=T,
        alpha_p=tuple(range(K)), alpha_s=tuple(alpha_s),
        beta_p=beta[:L], beta_s=beta[L:],
    )


def exhaustive_fixed_prefix(K: int, L: int, T: int, budget: Optional[int] = None) -> SearchResult:
    """Optimal alpha suffix given the standard prefix and beta.

    Suffix values live in [KL, T(KL+T)+K-1] with consecutive sorted gaps of
    at most KL+T (tables outside that window are equivalent to ones inside).
    Every candidate is a usable table: suffix values clear the prefix block's
    sum range, so the uniqueness condition cannot break.  budget caps the
    number of complete candidates scored; exceeding it flags the result.
    """
    if L > K:
        raise DomainError(f"need L <= K, got K={K}, L={L}")
    kl = K * L
    beta = _fixed_beta(K, L, T)
    beta_mask = 0
    for b in beta:
        beta_mask |= 1 << b
    base_mask = 0
    for a in range(K):
        base_mask |= beta_mask << a
    v_hi = T * (kl + T) + K - 1
    max_gap = kl + T

    alpha_p = tuple(range(K))
    beta_p, beta_s = beta[:L], beta[L:]
    best_n: Optional[int] = None
    optima: list[DegreeTable] = []
    examined = 0
    exhausted = False

    # DFS over suffix positions; stack holds (next candidate floor, chosen, mask).
    def rec(prev: int, chosen: list[int], cover: int):
        nonlocal best_n, optima, examined, exhausted
        if exhausted:
            return
        if len(chosen) == T:
            if budget is not None and examined >= budget:
                exhausted = True
                return
            examined += 1
            n = cover.bit_count()
            if best_n is None or n < best_n:
                best_n = n
                optima[:] = [tuple(chosen)]
            elif n == best_n:
                optima.append(tuple(chosen))
            return
        lo = max(kl, prev + 1)
        hi = min(v_hi, prev + max_gap)
        for a in range(lo, hi + 1):
            chosen.append(a)
            rec(a, chosen, cover | (beta_mask << a))
            chosen.pop()

    rec(K - 1, [], base_mask)
    if best_n is None:
        raise DomainError("empty search space")
    tables = tuple(
        DegreeTable(K=K, L=L, T=T, alpha_p=alpha_p, alpha_s=suf, beta_p=beta_p, beta_s=beta_s)
        for suf in optima
    )
    return SearchResult(
        K=K, L=L, T=T, best_n=best_n,
        optima=tables, canonical_optima=_dedupe_canonical(tables),
        tables_examined=examined, valid_tables=examined,
        entry_bound=(v_hi, kl + T - 1),
        budget_exhausted=exhausted,
    )


@dataclass(frozen=True)
class GreedyResult:
    alpha_s: tuple[int, ...]
    n: int
    nodes: int
    budget_exhausted: bool


def greedy(K: int, L: int, T: int, budget: Optional[int] = None,
           beam_width: Optional[int] = None) -> GreedyResult:
    """Best-first suffix search: grow alpha_s by the row overlapping most.

    For each unused candidate value i the bitmask S[i] records which columns
    of row i would collide with the table built so far; rows with maximal
    overlap add the fewest new entries, and all argmax candidates are
    branched on (in increasing order), depth first.  A branch is cut when
    even one new entry per remaining row cannot beat the incumbent.
    beam_width, if set, caps how many argmax candidates are expanded per
    node; budget caps total node expansions and flags the result when hit.
    """
    if L > K:
        raise DomainError(f"need L <= K, got K={K}, L={L}")
    kl = K * L
    beta = _fixed_beta(K, L, T)
    beta_set = set(beta)
    width = L + T
    v_lo, v_hi = kl, T * (kl + T) + K - 1
    size_v = v_hi - v_lo + 1
    top = kl + K + T - 2  # largest sum the prefix rows produce

    # overlap_mask[d] = columns c with beta[c] + d in beta (keyed by offset d)
    overlap: dict[int, int] = {}
    for c, bc in enumerate(beta):
        for bv in beta_set:
            d = bv - bc
            overlap[d] = overlap.get(d, 0) | (1 << c)

    init = [0] * size_v
    for idx in range(size_v):
        i = v_lo + idx
        m = 0
        for c, bc in enumerate(beta):
            if i + bc <= top:
                m |= 1 << c
        init[idx] = m

    best_n: Optional[int] = None
    best_suffix: tuple[int, ...] = ()
    nodes = 0
    exhausted = False

    def rec(s: list[int], chosen: list[int], used: set[int], size: int):
        nonlocal best_n, best_suffix, nodes, exhausted
        if exhausted:
            return
        nodes += 1
        if budget is not None and nodes > budget:
            exhausted = True
            return
        if best_n is not None and size + (T - len(chosen)) > best_n:
            return
        if len(chosen) == T:
            if best_n is None or size < best_n:
                best_n = size
                best_suffix = tuple(sorted(chosen))
            return
        best_overlap = -1
        cands: list[int] = []
        for idx in range(size_v):
            i = v_lo + idx
            if i in used:
                continue
            o = s[idx].bit_count()
            if o > best_overlap:
                best_overlap, cands = o, [i]
            elif o == best_overlap:
                cands.append(i)
        if beam_width is not None:
            cands = cands[:beam_width]
        for r in cands:
            child = list(s)
            for idx in range(size_v):
                m = overlap.get(v_lo + idx - r)
                if m:
                    child[idx] |= m
            used.add(r)
            chosen.append(r)
            rec(child, chosen, used, size + width - s[r - v_lo].bit_count())
            chosen.pop()
            used.remove(r)

    rec(init, [], set(), kl + K + T - 1)
    if best_n is None:
        raise DomainError("greedy found no complete suffix (budget too small)")
    return GreedyResult(alpha_s=best_suffix, n=best_n, nodes=nodes, budget_exhausted=exhausted)
