"""Intersections P ∩ P^x and A ∩ A^x for P^x = x^-1 P x.

g lies in P^x iff x g x^-1 lies in P. For a matched pair {a, b},
x (a b) x^-1 = (x(a) x(b)), so the transposition (a b) lies in A^x iff
{x(a), x(b)} is again a matched pair. The number of such pairs is W and
A ∩ A^x is elementary abelian of order 2^W.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import CutoffExceeded
from .forest import SylowForest, build_forest, elements_array, in_sylow_batch
from .perm import DegreeMismatch, Permutation, parity

EXACT_MAX_N = 16


@dataclass(frozen=True)
class Matching:
    pairs: tuple[tuple[int, int], ...]
    n: int

    def __post_init__(self):
        pts = [v for pair in self.pairs for v in pair]
        if len(set(pts)) != len(pts) or any(not 1 <= v <= self.n for v in pts):
            raise ValueError("pairs must be disjoint and lie in 1..n")

    @classmethod
    def from_forest(cls, f: SylowForest) -> Matching:
        return cls(f.matching, f.n)

    @functools.cached_property
    def mate(self) -> dict[int, int]:
        out = {}
        for a, b in self.pairs:
            out[a], out[b] = b, a
        return out


@dataclass
class IntersectionResult:
    w: int
    common_pairs: list[tuple[int, int]]
    full_intersection: Optional[list[Permutation]] = None
    equals_a_part: Optional[bool] = None
    degree: int = field(default=0, repr=False)

    def a_part(self) -> list[Permutation]:
        """All 2^w products of subsets of the common transpositions."""
        out = []
        for mask in itertools.product((False, True), repeat=self.w):
            images = list(range(1, self.degree + 1))
            for use, (a, b) in zip(mask, self.common_pairs):
                if use:
                    images[a - 1], images[b - 1] = b, a
            out.append(Permutation(images))
        return out


def _check(m_n: int, x: Permutation):
    if m_n != x.n:
        raise DegreeMismatch(f"degree mismatch: {m_n} != {x.n}")


def common_matching_rank(m: Matching, x: Permutation) -> int:
    _check(m.n, x)
    mate = m.mate
    return sum(1 for a, b in m.pairs if mate.get(x(a)) == x(b))


def intersection_a(m: Matching, x: Permutation) -> IntersectionResult:
    _check(m.n, x)
    mate = m.mate
    common = [(a, b) for a, b in m.pairs if mate.get(x(a)) == x(b)]
    return IntersectionResult(len(common), common, degree=m.n)


def w_from_columns(n: int, xs: np.ndarray) -> np.ndarray:
    """W for each column of zero-based images ``xs`` (shape (n, B)) under the canonical matching."""
    top = 2 * (n // 2)
    left, right = xs[0:top:2], xs[1:top:2]
    hit = ((left >> 1) == (right >> 1)) & (left < top)
    return hit.sum(axis=0)


class _ExactTables:
    """Per-forest arrays shared by every exact intersection at that n."""

    def __init__(self, f: SylowForest):
        self.forest = f
        self.elements = elements_array(f).astype(np.int64)
        n = f.n
        ident = np.arange(n)
        mate = ident.copy()
        top = 2 * (n // 2)
        mate[:top] ^= 1
        g = self.elements
        self.in_a = ((g == ident) | (g == mate)).all(axis=1)
        self.is_identity = (g == ident).all(axis=1)
        i, j = np.triu_indices(n, k=1)
        self.odd = ((g[:, i] > g[:, j]).sum(axis=1) % 2).astype(bool)


@functools.lru_cache(maxsize=None)
def exact_tables(n: int) -> _ExactTables:
    if n > EXACT_MAX_N:
        raise CutoffExceeded(f"exact intersection limited to n <= {EXACT_MAX_N}, got n={n}")
    return _ExactTables(build_forest(n))


def intersection_mask(n: int, x: np.ndarray) -> np.ndarray:
    """Boolean mask over ``exact_tables(n).elements``: which g satisfy x g x^-1 in P."""
    t = exact_tables(n)
    xinv = np.argsort(x)
    conj = x[t.elements[:, xinv]]
    return in_sylow_batch(t.forest, conj)


def intersection_p_exact(f: SylowForest, x: Permutation, max_n: int = EXACT_MAX_N) -> IntersectionResult:
    _check(f.n, x)
    if f.n > max_n:
        raise CutoffExceeded(f"exact intersection limited to n <= {max_n}, got n={f.n}")
    t = exact_tables(f.n)
    mask = intersection_mask(f.n, x.zero_based())
    members = sorted(
        (Permutation.from_zero_based(row) for row in t.elements[mask]), key=lambda g: g.images
    )
    res = intersection_a(Matching.from_forest(f), x)
    res.full_intersection = members
    # A ∩ A^x ⊆ P ∩ P^x, so equality is a size comparison
    res.equals_a_part = len(members) == 2**res.w
    return res


def trivial_in_alternating(result: IntersectionResult) -> bool:
    if result.full_intersection is None:
        return result.w <= 1
    return all(g.is_identity() for g in result.full_intersection if parity(g) == "even")


def exact_stats(n: int, xs: np.ndarray, chunk_rows: int = 2**20) -> dict[str, np.ndarray]:
    """Exact intersection statistics for each row of zero-based images ``xs`` (shape (B, n)).

    Returns per-x arrays: ``size`` = |P ∩ P^x|, ``non_a`` = |P ∩ P^x \\ A|,
    ``w`` = rank of A ∩ A^x, ``even_trivial`` = whether the even part of
    P ∩ P^x is trivial.
    """
    t = exact_tables(n)
    g = t.elements
    m = g.shape[0]
    xs = np.asarray(xs, dtype=np.int64)
    size, non_a, even_nontrivial = [], [], []
    step = max(1, chunk_rows // m)
    for lo in range(0, xs.shape[0], step):
        x = xs[lo:lo + step]
        b = x.shape[0]
        xinv = np.argsort(x, axis=1)
        inner = np.transpose(g[:, xinv], (1, 0, 2))  # inner[b, k, i] = g_k(xinv_b(i))
        conj = np.take_along_axis(x[:, None, :], inner, axis=2)
        mask = in_sylow_batch(t.forest, conj.reshape(b * m, n)).reshape(b, m)
        size.append(mask.sum(axis=1))
        non_a.append((mask & ~t.in_a).sum(axis=1))
        even_nontrivial.append((mask & ~t.odd & ~t.is_identity).any(axis=1))
    w = w_from_columns(n, xs.T)
    return {
        "size": np.concatenate(size),
        "non_a": np.concatenate(non_a),
        "w": w,
        "even_trivial": ~np.concatenate(even_nontrivial),
    }
