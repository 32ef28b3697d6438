"""Independent reference computations used by the test suite."""

import itertools
from fractions import Fraction


def dense_rank(rows):
    """Gauss-Jordan over Q on a dense list-of-lists matrix."""
    m = [[Fraction(x) for x in r] for r in rows]
    rank, col = 0, 0
    ncols = len(m[0]) if m else 0
    while rank < len(m) and col < ncols:
        piv = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                f = m[r][col] / m[rank][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
        col += 1
    return rank


def partitions_count(weights, w_max):
    """Number of multisets of parts (each part a (label, weight) with unlimited repetition) per total weight."""
    series = [0] * (w_max + 1)
    series[0] = 1
    for w in weights:
        for t in range(w, w_max + 1):
            series[t] += series[t - w]
    return series


def brute_monomial_count(n_gens, w_max):
    """dims of k[x_1..x_n] by explicit enumeration of exponent vectors (all generators of weight 1)."""
    out = [0] * (w_max + 1)
    for exps in itertools.product(range(w_max + 1), repeat=n_gens):
        s = sum(exps)
        if s <= w_max:
            out[s] += 1
    return out


def ce_trivial_dims_bruteforce(lie):
    """H^p(g, Q) from (df)(x_0..x_p) = Σ_{i<j} (-1)^{i+j} f([x_i,x_j], x_0..^i..^j..x_p) on Λ^p g*."""
    n = lie.dim
    subsets = {p: list(itertools.combinations(range(n), p)) for p in range(n + 1)}

    def f_value(S, args):
        # the dual basis cochain e^S on basis vectors args (alternating)
        if sorted(args) != list(S) or len(set(args)) != len(args):
            return Fraction(0)
        perm = [S.index(a) for a in args]
        inv = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
        return Fraction(-1 if inv % 2 else 1)

    ranks = {}
    for p in range(n):
        rows = []
        for T in subsets[p + 1]:
            row = []
            for S in subsets[p]:
                val = Fraction(0)
                for i, j in itertools.combinations(range(p + 1), 2):
                    rest = [T[k] for k in range(p + 1) if k not in (i, j)]
                    for k, c in lie.bracket_basis(T[i], T[j]).items():
                        val += (-1) ** (i + j) * c * f_value(S, [k] + rest)
                row.append(val)
            rows.append(row)
        ranks[p] = dense_rank(rows)
    return [len(subsets[p]) - ranks.get(p, 0) - ranks.get(p - 1, 0) for p in range(n + 1)]


def gap_two_partitions(w_max):
    """Partitions with parts >= 1 differing pairwise by at least 2, per total."""
    out = [0] * (w_max + 1)

    def rec(total, smallest_next):
        out[total] += 1
        for p in range(smallest_next, w_max - total + 1):
            rec(total + p, p + 2)

    rec(0, 1)
    return out


def fermion_subsets_count(n_pairs, w_max):
    """Count subsets of fermionic creation modes by total weight, by enumeration.

    Each pair contributes modes of weight 1, 2, ... (ψ) and 0, 1, 2, ... (ψ*).
    """
    weights = []
    for _ in range(n_pairs):
        weights += list(range(1, w_max + 1))
        weights += list(range(0, w_max + 1))
    out = [0] * (w_max + 1)
    for r in range(len(weights) + 1):
        for sub in itertools.combinations(range(len(weights)), r):
            s = sum(weights[i] for i in sub)
            if s <= w_max:
                out[s] += 1
    return out
