"""Exact element counts of P, A and P \\ A by support and by cycle type.

Tree-level recursions (Aut(T_e) for a complete binary tree of height e):

* support:    G_0 = 1,  G_e = G_{e-1}^2 + 2^(2^e - 2) X^(2^e)
* cycle type: D_0 = {(1)},  D_e = D_{e-1} * D_{e-1} + |Aut(T_{e-1})| double(D_{e-1})

where ``*`` concatenates partitions and ``double`` doubles every part. A
branch-swapping element (a, b; swap) squares to (ab, ba), so its cycle type is
that of ab with each part doubled, and ab is uniform over Aut(T_{e-1}) as b
varies. Forest censuses are products over trees.
"""

from __future__ import annotations

import functools
import math
from collections import defaultdict
from typing import Iterator

from .errors import GuardExceeded
from .forest import binary_weight, build_forest
from .perm import Partition

MAX_CYCLE_TYPE_HEIGHT = 6

SUBSETS = ("A", "P", "P_minus_A")
_SUBSET_ALIASES = {"A": "A", "P": "P", "P_minus_A": "P_minus_A", "PminusA": "P_minus_A"}


def _subset(which: str) -> str:
    try:
        return _SUBSET_ALIASES[which]
    except KeyError:
        raise ValueError(f"unknown subset {which!r}; expected one of {SUBSETS}") from None


class SupportPolynomial(dict):
    """Sparse map ``support -> count`` (a polynomial in X^support)."""

    def __mul__(self, other: SupportPolynomial) -> SupportPolynomial:
        out = defaultdict(int)
        for s1, c1 in self.items():
            for s2, c2 in other.items():
                out[s1 + s2] += c1 * c2
        return SupportPolynomial(sorted(out.items()))

    def __sub__(self, other: SupportPolynomial) -> SupportPolynomial:
        out = dict(self)
        for s, c in other.items():
            out[s] = out.get(s, 0) - c
        if any(c < 0 for c in out.values()):
            raise ArithmeticError("negative coefficient in census difference")
        return SupportPolynomial(sorted((s, c) for s, c in out.items() if c))

    def __add__(self, other: SupportPolynomial) -> SupportPolynomial:
        out = dict(self)
        for s, c in other.items():
            out[s] = out.get(s, 0) + c
        return SupportPolynomial(sorted(out.items()))

    def total(self) -> int:
        return sum(self.values())

    def __missing__(self, key):
        return 0


class CycleTypeCensus(dict):
    """Map ``Partition -> count`` for a subset of S_n."""

    def __init__(self, n: int, counts=()):
        super().__init__(counts)
        self.n = n

    def total(self) -> int:
        return sum(self.values())

    def support_marginal(self) -> SupportPolynomial:
        out = defaultdict(int)
        for lam, c in self.items():
            out[lam.support] += c
        return SupportPolynomial(sorted(out.items()))

    def __missing__(self, key):
        return 0


@functools.lru_cache(maxsize=None)
def support_poly_tree(e: int) -> SupportPolynomial:
    if e < 0:
        raise ValueError("height must be nonnegative")
    if e == 0:
        return SupportPolynomial({0: 1})
    prev = support_poly_tree(e - 1)
    return prev * prev + SupportPolynomial({2**e: 2 ** (2**e - 2)})


def a_support_census(n: int) -> SupportPolynomial:
    f = n // 2
    return SupportPolynomial({2 * k: math.comb(f, k) for k in range(f + 1)})


@functools.lru_cache(maxsize=256)
def support_census(n: int, which: str = "P") -> SupportPolynomial:
    which = _subset(which)
    if n < 1:
        raise ValueError("n must be positive")
    if which == "A":
        return a_support_census(n)
    poly = SupportPolynomial({0: 1})
    for e in build_forest(n).heights:
        poly = poly * support_poly_tree(e)
    if which == "P":
        return poly
    return poly - a_support_census(n)


def _concat(a: dict, b: dict) -> dict:
    out = defaultdict(int)
    for la, ca in a.items():
        for lb, cb in b.items():
            out[Partition(la + lb)] += ca * cb
    return out


@functools.lru_cache(maxsize=None)
def cycle_type_census_tree(e: int) -> CycleTypeCensus:
    if e > MAX_CYCLE_TYPE_HEIGHT:
        raise GuardExceeded(f"cycle-type census limited to tree height <= {MAX_CYCLE_TYPE_HEIGHT}, got {e}")
    if e < 0:
        raise ValueError("height must be nonnegative")
    if e == 0:
        return CycleTypeCensus(1, {Partition((1,)): 1})
    prev = cycle_type_census_tree(e - 1)
    out = _concat(prev, prev)
    weight = 2 ** (2 ** (e - 1) - 1)
    for lam, c in prev.items():
        out[Partition(2 * p for p in lam)] += weight * c
    return CycleTypeCensus(2**e, out)


def a_cycle_type_census(n: int) -> CycleTypeCensus:
    f = n // 2
    return CycleTypeCensus(
        n, {Partition((2,) * k + (1,) * (n - 2 * k)): math.comb(f, k) for k in range(f + 1)}
    )


@functools.lru_cache(maxsize=256)
def cycle_type_census(n: int, which: str = "P") -> CycleTypeCensus:
    which = _subset(which)
    if n < 1:
        raise ValueError("n must be positive")
    if which == "A":
        return a_cycle_type_census(n)
    heights = build_forest(n).heights
    if heights[0] > MAX_CYCLE_TYPE_HEIGHT:
        raise GuardExceeded(
            f"n={n} has a tree of height {heights[0]} > {MAX_CYCLE_TYPE_HEIGHT}"
        )
    counts = {Partition(): 1}
    for e in heights:
        counts = _concat(counts, cycle_type_census_tree(e))
    if which == "P":
        return CycleTypeCensus(n, counts)
    out = dict(counts)
    for lam, c in a_cycle_type_census(n).items():
        out[lam] = out.get(lam, 0) - c
    if any(c < 0 for c in out.values()):
        raise ArithmeticError("A is not contained in P")
    return CycleTypeCensus(n, {lam: c for lam, c in out.items() if c})


def group_order(n: int, which: str = "P") -> int:
    which = _subset(which)
    if which == "A":
        return 2 ** (n // 2)
    order = 2 ** (n - binary_weight(n))
    return order if which == "P" else order - 2 ** (n // 2)


def class_size(lam: Partition) -> int:
    """|C_lambda| = n! / prod_i i^m_i m_i!  in S_n, n = sum(lam)."""
    denom = 1
    for part, mult in Partition(lam).multiplicities().items():
        denom *= part**mult * math.factorial(mult)
    return math.factorial(sum(lam)) // denom


def partition_support(lam) -> int:
    return sum(p for p in lam if p > 1)


def _nonunit_partitions(total: int, largest: int, powers_of_two: bool) -> Iterator[tuple[int, ...]]:
    if total == 0:
        yield ()
        return
    for part in range(min(total, largest), 1, -1):
        if powers_of_two and part & (part - 1):
            continue
        for rest in _nonunit_partitions(total - part, part, powers_of_two):
            yield (part,) + rest


def partitions_with_support(n: int, s: int, power_of_two_parts: bool = False) -> list[Partition]:
    """All partitions of n whose nonunit parts sum to s."""
    if not 0 <= s <= n or s == 1:
        raise ValueError(f"need 0 <= s <= n and s != 1, got n={n}, s={s}")
    return [
        Partition(core + (1,) * (n - s))
        for core in _nonunit_partitions(s, s, power_of_two_parts)
    ]


def census_rows(n: int, which: str, by: str = "support") -> list[tuple]:
    """Rows ``(n, subset, support_or_partition, count)`` for CSV emission."""
    label = {"A": "A", "P": "P", "P_minus_A": "PminusA"}[_subset(which)]
    if by == "support":
        poly = support_census(n, which)
        return [(n, label, s, c) for s, c in sorted(poly.items())]
    if by == "cycle_type":
        counts = cycle_type_census(n, which)
        return [(n, label, str(lam), c) for lam, c in sorted(counts.items(), reverse=True)]
    raise ValueError(f"unknown census kind {by!r}")
