"""Brute-force reference implementations.

Everything here works straight from the definitions with
``itertools.combinations`` and plain sets.  The verifiers and the test suite
use these as the independent side of every cross-check, so nothing in this
module may import from the fast paths.
"""
from itertools import combinations


def nonempty_subsets(elements):
    elements = sorted(elements)
    for r in range(1, len(elements) + 1):
        yield from combinations(elements, r)


def fs(elements):
    return {sum(F) for F in nonempty_subsets(elements)}


def decompositions(elements):
    table = {}
    for F in nonempty_subsets(elements):
        table.setdefault(sum(F), []).append(F)
    return {x: sorted(Fs) for x, Fs in table.items()}


def is_sparse(elements):
    """Distinct nonempty subsets have distinct sums."""
    sums = [sum(F) for F in nonempty_subsets(elements)]
    return len(set(sums)) == len(sums)


def is_very_sparse(elements):
    """No c·D with c in {0,1,2}^n and some c_i = 2 lands in FS(D); D sparse.

    c·D = 2·ΣG + ΣK with G (the 2-positions) nonempty and K disjoint from G.
    This equals ΣF + ΣG for intersecting F, G, the pairwise form checked by
    :func:`is_very_sparse_pairs`.
    """
    if not is_sparse(elements):
        return False
    elements = sorted(elements)
    n = len(elements)
    values = fs(elements)
    sums = [sum(elements[i] for i in range(n) if mask >> i & 1) for mask in range(1 << n)]
    full = (1 << n) - 1
    for g in range(1, full + 1):
        base = 2 * sums[g]
        rest = full ^ g
        k = rest
        while True:
            if base + sums[k] in values:
                return False
            if k == 0:
                break
            k = (k - 1) & rest
    return True


def is_very_sparse_pairs(elements):
    """Literal form: ΣF + ΣG never lies in FS(D) for intersecting F, G."""
    if not is_sparse(elements):
        return False
    subsets = [frozenset(F) for F in nonempty_subsets(elements)]
    sums = {F: sum(F) for F in subsets}
    values = set(sums.values())
    for F in subsets:
        for G in subsets:
            if F & G and sums[F] + sums[G] in values:
                return False
    return True


def fs_contained(small, big):
    """FS(small) ⊆ FS(big), vacuously true for empty ``small``."""
    return fs(small) <= fs(big)


def drop_below(elements, e):
    """``A ∖ e`` under the convention e = {0, 1, ..., e-1}."""
    return [x for x in elements if x >= e]


def fs_witnesses(host, k, universe_cap):
    """All size-k D ⊆ [1, universe_cap] with FS(D) ⊆ host, in lex order."""
    host = set(host)
    return [D for D in combinations(range(1, universe_cap + 1), k)
            if fs(D) <= host]


def ap_lengths(A):
    """Map (start, step) -> length of the longest AP from start inside A."""
    A = set(A)
    out = {}
    for a in A:
        for b in A:
            if b > a:
                step, n = b - a, 1
                while a + n * step in A:
                    n += 1
                out[(a, step)] = n
    return out
