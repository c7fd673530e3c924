"""Permutations of {1..n} and integer partitions.

Convention: ``compose(p, q)`` applies ``q`` first, so ``compose(p, q)(i) == p(q(i))``.
Conjugation is ``g^x = x^-1 g x``; with this convention ``g`` lies in ``P^x``
exactly when ``x g x^-1`` lies in ``P``, and ``x (a b) x^-1 == (x(a) x(b))``.
"""

from __future__ import annotations

import re
from collections import Counter
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "DegreeMismatch",
    "Partition",
    "Permutation",
    "compose",
    "conjugate",
    "cycle_type",
    "format_cycles",
    "identity",
    "inverse",
    "parity",
    "parse_cycles",
    "random_permutation",
    "support_size",
    "transposition",
]


class DegreeMismatch(ValueError):
    pass


class Partition(tuple):
    """Weakly decreasing tuple of positive parts."""

    def __new__(cls, parts: Iterable[int] = ()):
        parts = sorted((int(p) for p in parts), reverse=True)
        if parts and parts[-1] < 1:
            raise ValueError("partition parts must be positive")
        return super().__new__(cls, parts)

    @property
    def parts(self) -> tuple[int, ...]:
        return tuple(self)

    @property
    def n(self) -> int:
        return sum(self)

    @property
    def support(self) -> int:
        return sum(p for p in self if p > 1)

    def multiplicities(self) -> Counter:
        return Counter(self)

    def __repr__(self):
        return f"Partition({list(self)})"

    def __str__(self):
        return "+".join(map(str, self))

    @classmethod
    def parse(cls, text: str) -> Partition:
        text = text.strip()
        return cls(int(t) for t in text.split("+")) if text else cls()


class Permutation:
    """An immutable bijection of {1..n}; ``images[i-1]`` is the image of ``i``."""

    __slots__ = ("_images",)

    def __init__(self, images: Iterable[int]):
        images = tuple(int(v) for v in images)
        if not images:
            raise ValueError("degree must be positive")
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a permutation of 1..{len(images)}: {images}")
        self._images = images

    @classmethod
    def _trusted(cls, images: tuple[int, ...]) -> Permutation:
        p = object.__new__(cls)
        p._images = images
        return p

    @classmethod
    def from_zero_based(cls, arr: Sequence[int]) -> Permutation:
        return cls._trusted(tuple(int(v) + 1 for v in arr))

    @classmethod
    def from_cycles(cls, text: str, n: int | None = None) -> Permutation:
        return parse_cycles(text, n)

    @property
    def images(self) -> tuple[int, ...]:
        return self._images

    @property
    def n(self) -> int:
        return len(self._images)

    def __call__(self, i: int) -> int:
        return self._images[i - 1]

    def zero_based(self) -> np.ndarray:
        return np.asarray(self._images, dtype=np.int64) - 1

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each starting at its smallest point."""
        seen = [False] * (self.n + 1)
        out = []
        for start in range(1, self.n + 1):
            if seen[start]:
                continue
            cyc = []
            i = start
            while not seen[i]:
                seen[i] = True
                cyc.append(i)
                i = self._images[i - 1]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self._images, 1))

    def __mul__(self, other: Permutation) -> Permutation:
        return compose(self, other)

    def __pow__(self, k: int) -> Permutation:
        if k < 0:
            return inverse(self) ** (-k)
        result = identity(self.n)
        base = self
        while k:
            if k & 1:
                result = compose(result, base)
            base = compose(base, base)
            k >>= 1
        return result

    def __eq__(self, other):
        return isinstance(other, Permutation) and self._images == other._images

    def __hash__(self):
        return hash(self._images)

    def __repr__(self):
        return f"Permutation({format_cycles(self)!r}, n={self.n})"

    def __str__(self):
        return format_cycles(self)


def identity(n: int) -> Permutation:
    if n < 1:
        raise ValueError("degree must be positive")
    return Permutation._trusted(tuple(range(1, n + 1)))


def transposition(a: int, b: int, n: int) -> Permutation:
    images = list(range(1, n + 1))
    images[a - 1], images[b - 1] = b, a
    return Permutation(images)


def _check_degree(p: Permutation, q: Permutation):
    if p.n != q.n:
        raise DegreeMismatch(f"degree mismatch: {p.n} != {q.n}")


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Return ``p o q``, i.e. ``i -> p(q(i))``."""
    _check_degree(p, q)
    pi = p.images
    return Permutation._trusted(tuple(pi[v - 1] for v in q.images))


def inverse(p: Permutation) -> Permutation:
    inv = [0] * p.n
    for i, v in enumerate(p.images, 1):
        inv[v - 1] = i
    return Permutation._trusted(tuple(inv))


def conjugate(g: Permutation, x: Permutation) -> Permutation:
    """Return ``x^-1 o g o x``."""
    _check_degree(g, x)
    return compose(inverse(x), compose(g, x))


def cycle_type(p: Permutation) -> Partition:
    lengths = [len(c) for c in p.cycles()]
    lengths.extend([1] * (p.n - sum(lengths)))
    return Partition(lengths)


def support_size(p: Permutation) -> int:
    return sum(1 for i, v in enumerate(p.images, 1) if v != i)


def parity(p: Permutation) -> str:
    # n - #cycles == sum over nontrivial cycles of (length - 1)
    moved = sum(len(c) - 1 for c in p.cycles())
    return "even" if moved % 2 == 0 else "odd"


def random_permutation(n: int, rng: np.random.Generator) -> Permutation:
    """Uniform element of S_n drawn from ``rng`` (Fisher-Yates with unbiased bounded draws)."""
    if n < 1:
        raise ValueError("degree must be positive")
    return Permutation.from_zero_based(rng.permutation(n))


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, n: int | None = None) -> Permutation:
    """Parse cycle notation such as ``"(1 2)(3 4)"``; ``"()"`` is the identity.

    Whitespace and commas inside cycles are ignored. ``n`` defaults to the
    largest label that appears (at least 1).
    """
    stripped = re.sub(r"\s+", "", text)
    if _CYCLE_RE.sub("", text).strip():
        raise ValueError(f"malformed cycle notation: {text!r}")
    cycles = []
    for body in _CYCLE_RE.findall(text):
        labels = [int(t) for t in re.split(r"[\s,]+", body.strip()) if t]
        if len(set(labels)) != len(labels):
            raise ValueError(f"repeated label in cycle ({body})")
        cycles.append(labels)
    if not stripped:
        raise ValueError("empty cycle notation")
    largest = max((max(c) for c in cycles if c), default=1)
    if n is None:
        n = largest
    if largest > n or any(v < 1 for c in cycles for v in c):
        raise ValueError(f"label out of range 1..{n}")
    images = list(range(1, n + 1))
    # cycles are composed right to left, matching compose()
    result = Permutation._trusted(tuple(images))
    for c in reversed(cycles):
        step = list(range(1, n + 1))
        for a, b in zip(c, c[1:] + c[:1]):
            step[a - 1] = b
        result = compose(Permutation._trusted(tuple(step)), result)
    return result


def format_cycles(p: Permutation) -> str:
    cycles = p.cycles()
    if not cycles:
        return "()"
    return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)
