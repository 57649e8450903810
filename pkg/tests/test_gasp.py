"""Construction family, closed forms, and the chain-length search."""

import random
from fractions import Fraction

import pytest

from gasptables import (
    DomainError,
    GaspParams,
    candidate_set,
    construct,
    count_distinct,
    h_function,
    n_of_r,
    n_theorem1,
    optimal_r,
    reduction_statistic,
    score_bruteforce,
    score_closed_form,
)

# Known server counts at K = L = T = 4 for each chain length.
KLT4 = {1: 41, 2: 36, 3: 37, 4: 39}


class TestParams:
    def test_swap_normalizes(self):
        p = GaspParams(2, 5, 3, 2)
        assert (p.K, p.L) == (5, 2)
        assert p.transposed

    def test_no_swap(self):
        p = GaspParams(5, 2, 3, 2)
        assert (p.K, p.L) == (5, 2)
        assert not p.transposed

    def test_r_range_checked_after_swap(self):
        # min(K, T) after swap is min(5, 3) = 3, so r = 3 is fine.
        assert GaspParams(2, 5, 3, 3).r == 3
        with pytest.raises(DomainError, match="r=4 out of range"):
            GaspParams(2, 5, 3, 4)

    def test_big(self):
        assert GaspParams.big(4, 4, 2).r == 2
        assert GaspParams.big(3, 7, 9).r == 7

    def test_rejects_nonpositive(self):
        with pytest.raises(DomainError):
            GaspParams(0, 1, 1, 1)


class TestConstruct:
    def test_beta_is_fixed_across_r(self):
        for r in range(1, 5):
            t = construct(GaspParams(4, 4, 4, r))
            assert t.beta == (0, 4, 8, 12, 16, 17, 18, 19)

    @pytest.mark.parametrize("r,alpha_s", [
        (1, (16, 20, 24, 28)),
        (2, (16, 17, 20, 21)),
        (3, (16, 17, 18, 20)),
        (4, (16, 17, 18, 19)),
    ])
    def test_alpha_suffix_chains(self, r, alpha_s):
        t = construct(GaspParams(4, 4, 4, r))
        assert t.alpha_p == (0, 1, 2, 3)
        assert t.alpha_s == alpha_s

    def test_suffix_is_t_smallest_chain_values(self):
        """The suffix must be the T smallest of {KL + j + K*m : j < r}."""
        rng = random.Random(5)
        for _ in range(40):
            K = rng.randint(1, 9)
            L = rng.randint(1, K)
            T = rng.randint(1, 9)
            r = rng.randint(1, min(K, T))
            t = construct(GaspParams(K, L, T, r))
            kl = K * L
            chain = sorted(
                kl + K * m + j for m in range(T + 1) for j in range(r)
            )[:T]
            assert list(t.alpha_s) == chain


class TestServerCount:
    @pytest.mark.parametrize("r", [1, 2, 3, 4])
    def test_table_iii(self, r):
        p = GaspParams(4, 4, 4, r)
        assert n_of_r(p) == KLT4[r]
        assert count_distinct(construct(p)) == KLT4[r]

    def test_closed_form_equals_bruteforce_small(self):
        for K in range(1, 6):
            for L in range(1, K + 1):
                for T in range(1, 6):
                    for r in range(1, min(K, T) + 1):
                        p = GaspParams(K, L, T, r)
                        assert n_of_r(p) == count_distinct(construct(p)), (K, L, T, r)

    def test_score_closed_form_matches_bruteforce(self):
        for K in range(1, 6):
            for L in range(1, K + 1):
                for T in range(1, 6):
                    for r in range(1, min(K, T) + 1):
                        p = GaspParams(K, L, T, r)
                        cf = score_closed_form(p)
                        bf = score_bruteforce(construct(p))
                        assert cf.left == bf.left, (K, L, T, r)
                        assert cf.right == bf.right, (K, L, T, r)

    @pytest.mark.parametrize("r,score", [(1, 14), (2, 19), (3, 18), (4, 16)])
    def test_table_iii_scores(self, r, score):
        assert score_closed_form(GaspParams(4, 4, 4, r)).total == score

    def test_monolithic_formula_agrees(self):
        for K in range(1, 7):
            for L in range(1, K + 1):
                for T in range(1, 7):
                    for r in range(1, min(K, T) + 1):
                        p = GaspParams(K, L, T, r)
                        assert n_theorem1(p) == n_of_r(p), (K, L, T, r)

    def test_big_never_exceeds_2kl_plus_2t_minus_1(self):
        # The r = min(K, T) member needs at most 2KL + 2T - 1 servers, with
        # equality exactly when its middle band has no gaps (T >= K or L = 1).
        for K in range(1, 8):
            for L in range(1, K + 1):
                for T in range(1, 8):
                    n = n_of_r(GaspParams.big(K, L, T))
                    ub = 2 * K * L + 2 * T - 1
                    assert n <= ub, (K, L, T)
                    assert (n == ub) == (T >= K or L == 1), (K, L, T)

    def test_transposed_params_give_same_count(self):
        assert n_of_r(GaspParams(3, 5, 4, 2)) == n_of_r(GaspParams(5, 3, 4, 2))


def test_h_function_example():
    got = [h_function(9, 6, 9, r) for r in range(1, 10)]
    assert got == [76, 44, 32, 34, 32, 35, 38, 41, 45]


def test_h_function_range():
    with pytest.raises(DomainError):
        h_function(9, 6, 9, 10)
    with pytest.raises(DomainError):
        h_function(9, 6, 9, 0)


def test_h_minimizers_match_n_minimizers():
    # H drops the r-independent terms of N, so argmin sets agree on the
    # shared domain.
    rng = random.Random(11)
    for _ in range(50):
        K = rng.randint(1, 12)
        L = rng.randint(1, K)
        T = rng.randint(1, 12)
        phi = T - 1 - K * L + 2 * K
        lo = max(1, phi + 1)
        hi = min(K, T)
        if lo > hi:
            continue
        hs = {r: h_function(K, L, T, r) for r in range(lo, hi + 1)}
        ns = {r: n_of_r(GaspParams(K, L, T, r)) for r in range(lo, hi + 1)}
        h_min = {r for r, v in hs.items() if v == min(hs.values())}
        n_min = {r for r, v in ns.items() if v == min(ns.values())}
        assert h_min == n_min, (K, L, T)


class TestCandidateSet:
    def test_example_trace(self):
        tr = candidate_set(9, 6, 9)
        assert tr.W == (1, 2, 4, 8)
        assert tr.Q == (1, 2, 3, 5)
        assert tr.Q_prime == (1, 9)
        assert tr.Q_dprime == (1, 2, 3, 5, 9)

    def test_degenerate(self):
        tr = candidate_set(1, 1, 1)
        assert set(tr.Q_dprime) <= {1}

    def test_contains_minimizer_444(self):
        tr = candidate_set(4, 4, 4)
        assert 2 in tr.Q_dprime

    def test_candidates_within_feasible_range(self):
        rng = random.Random(23)
        for _ in range(80):
            K = rng.randint(1, 15)
            L = rng.randint(1, K)
            T = rng.randint(1, 15)
            tr = candidate_set(K, L, T)
            assert all(1 <= r <= min(K, T) for r in tr.Q_dprime), (K, L, T)

    def test_l_greater_than_k_rejected(self):
        with pytest.raises(DomainError, match="swap"):
            candidate_set(2, 3, 1)


class TestOptimalR:
    @pytest.mark.parametrize("n,want_n", [(1, 3), (2, 36), (3, 148), (4, 410)])
    def test_square_parameters(self, n, want_n):
        k = n * n
        r_star, best, trace = optimal_r(k, k, k)
        assert r_star == n
        assert best == want_n
        assert trace.r_star == n and trace.n_star == best

    def test_square_formula(self):
        for n in range(2, 5):
            k = n * n
            _, best, _ = optimal_r(k, k, k)
            assert best == n ** 4 + 2 * n ** 3 + 2 * n ** 2 - n - 2

    def test_modes_agree(self):
        rng = random.Random(37)
        for _ in range(60):
            K = rng.randint(1, 14)
            L = rng.randint(1, 14)
            T = rng.randint(1, 14)
            red = optimal_r(K, L, T, mode="reduced")
            full = optimal_r(K, L, T, mode="full_scan")
            assert red[:2] == full[:2], (K, L, T)

    def test_tie_breaks_to_smallest(self):
        # (9, 6, 9) has two minimizers, 3 and 5; the smaller wins.
        r_star, best, _ = optimal_r(9, 6, 9)
        assert r_star == 3
        assert n_of_r(GaspParams(9, 6, 9, 5)) == best

    def test_accepts_l_greater_than_k(self):
        assert optimal_r(6, 9, 9)[:2] == optimal_r(9, 6, 9)[:2]

    def test_bad_mode(self):
        with pytest.raises(DomainError):
            optimal_r(2, 2, 2, mode="guess")


class TestReductionStatistic:
    def test_matches_direct_enumeration(self):
        for k_max, t_max in ((6, 6), (9, 5), (4, 11)):
            total = Fraction(0)
            count = 0
            for K in range(1, k_max + 1):
                for L in range(1, K + 1):
                    for T in range(1, t_max + 1):
                        tr = candidate_set(K, L, T)
                        total += Fraction(5 + len(tr.W), min(K, T))
                        count += 1
            assert reduction_statistic(k_max, t_max) == total / count, (k_max, t_max)

    def test_exact_rational(self):
        assert isinstance(reduction_statistic(3, 3), Fraction)
