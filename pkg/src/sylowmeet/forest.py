"""The Sylow 2-subgroup P of S_n as the automorphism group of a binary forest.

Write n = 2^e1 + ... + 2^em with e1 > ... > em. Tree i owns the leaves
``base_i + 1 .. base_i + 2^ei`` and the leaves of every subtree form an aligned
dyadic interval. An element of P is a NodeSwapCode: one bit per internal node,
listed tree by tree and breadth first inside each tree. A set bit at node v
swaps the two child subtrees of v; bits are indexed by the node a leaf passes
through *before* the swap (source coordinates), applied root first.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import CutoffExceeded, NotInSylow
from .perm import DegreeMismatch, Permutation

DEFAULT_CUTOFF_BITS = 22

NodeSwapCode = tuple  # tuple[bool, ...]


def binary_weight(n: int) -> int:
    return bin(n).count("1")


@dataclass(frozen=True)
class Node:
    index: int  # position in the code
    tree: int
    depth: int
    height: int
    lo: int  # first leaf, 1-based
    hi: int  # last leaf, 1-based, inclusive

    @property
    def leaves(self) -> range:
        return range(self.lo, self.hi + 1)


@dataclass(frozen=True, eq=False)
class SylowForest:
    n: int
    heights: tuple[int, ...]
    bases: tuple[int, ...]  # zero-based offset of each tree's first leaf
    internal_nodes: tuple[Node, ...]
    tree_offsets: tuple[int, ...]  # index of each tree's root in the code

    @property
    def num_bits(self) -> int:
        return len(self.internal_nodes)

    @property
    def order(self) -> int:
        return 2 ** self.num_bits

    @property
    def matching(self) -> tuple[tuple[int, int], ...]:
        return tuple((2 * k + 1, 2 * k + 2) for k in range(self.n // 2))

    def covered(self, k: int) -> int:
        """Number of leading leaves lying in trees of height >= k."""
        return sum(2**e for e in self.heights if e >= k)

    @property
    def leaf_blocks(self) -> list[frozenset[int]]:
        """Leaf sets of all subtrees, leaves included, largest first."""
        blocks = []
        for k in range(self.heights[0], -1, -1):
            size = 2**k
            for lo in range(0, self.covered(k), size):
                blocks.append(frozenset(range(lo + 1, lo + size + 1)))
        return blocks

    def identity_code(self) -> NodeSwapCode:
        return (False,) * self.num_bits

    def __repr__(self):
        return f"SylowForest(n={self.n}, heights={self.heights})"


@functools.lru_cache(maxsize=None)
def build_forest(n: int) -> SylowForest:
    if n < 1:
        raise ValueError("n must be positive")
    heights = tuple(e for e in range(n.bit_length() - 1, -1, -1) if n >> e & 1)
    bases, offsets, nodes = [], [], []
    base = 0
    for t, e in enumerate(heights):
        bases.append(base)
        offsets.append(len(nodes))
        for d in range(e):
            width = 2 ** (e - d)
            for j in range(2**d):
                lo = base + j * width
                nodes.append(Node(len(nodes), t, d, e - d, lo + 1, lo + width))
        base += 2**e
    return SylowForest(n, heights, tuple(bases), tuple(nodes), tuple(offsets))


def _check_code(f: SylowForest, code: Sequence[bool]):
    if len(code) != f.num_bits:
        raise ValueError(f"code length {len(code)} != {f.num_bits} internal nodes")


def element_to_perm(f: SylowForest, code: Sequence[bool]) -> Permutation:
    _check_code(f, code)
    images = [0] * f.n
    for t, e in enumerate(f.heights):
        base, off = f.bases[t], f.tree_offsets[t]
        for o in range(2**e):
            out = 0
            for d in range(e):
                prefix = o >> (e - d)
                bit = (o >> (e - d - 1)) & 1
                out = (out << 1) | (bit ^ bool(code[off + 2**d - 1 + prefix]))
            images[base + o] = base + out + 1
    return Permutation._trusted(tuple(images))


def _node_image(f: SylowForest, code: Sequence[bool], node: Node) -> int:
    """Code index of the image of ``node`` under the element ``code``."""
    off = f.tree_offsets[node.tree]
    e = f.heights[node.tree]
    src = (node.lo - 1 - f.bases[node.tree]) >> (e - node.depth)
    out = 0
    for d in range(node.depth):
        prefix = src >> (node.depth - d)
        bit = (src >> (node.depth - d - 1)) & 1
        out = (out << 1) | (bit ^ bool(code[off + 2**d - 1 + prefix]))
    return off + 2**node.depth - 1 + out


def code_product(f: SylowForest, c1: Sequence[bool], c2: Sequence[bool]) -> NodeSwapCode:
    """Code of ``compose(element_to_perm(c1), element_to_perm(c2))``, computed on codes.

    The wreath-product rule: bit at v is ``c2[v] xor c1[c2(v)]``.
    """
    _check_code(f, c1)
    _check_code(f, c2)
    return tuple(bool(c2[v.index]) ^ bool(c1[_node_image(f, c2, v)]) for v in f.internal_nodes)


def perm_in_sylow(f: SylowForest, p: Permutation) -> bool:
    """True iff ``p`` maps every subtree's leaf block onto a subtree's leaf block."""
    if p.n != f.n:
        raise DegreeMismatch(f"degree mismatch: {p.n} != {f.n}")
    img = p.images
    for k in range(1, f.heights[0] + 1):
        cov = f.covered(k)
        size = 2**k
        for lo in range(0, cov, size):
            first = img[lo] - 1
            if first >= cov:
                return False
            target = first >> k
            for i in range(lo + 1, lo + size):
                v = img[i] - 1
                if v >= cov or v >> k != target:
                    return False
    return True


def in_sylow_batch(f: SylowForest, perms: np.ndarray) -> np.ndarray:
    """Vectorized ``perm_in_sylow`` over rows of zero-based images, shape (N, n)."""
    perms = np.asarray(perms)
    ok = np.ones(perms.shape[0], dtype=bool)
    for k in range(1, f.heights[0] + 1):
        cov = f.covered(k)
        img = perms[:, :cov]
        ok &= (img < cov).all(axis=1)
        ids = (img >> k).reshape(perms.shape[0], cov >> k, 2**k)
        ok &= (ids == ids[:, :, :1]).all(axis=(1, 2))
    return ok


def perm_to_element(f: SylowForest, p: Permutation) -> NodeSwapCode:
    if not perm_in_sylow(f, p):
        raise NotInSylow(f"{p} does not preserve the blocks of {f}")
    img = p.images
    bits = []
    for v in f.internal_nodes:
        rel = img[v.lo - 1] - 1 - f.bases[v.tree]
        bits.append(bool((rel >> (v.height - 1)) & 1))
    return tuple(bits)


def sample_element(f: SylowForest, rng: np.random.Generator) -> NodeSwapCode:
    """Uniform element of P: one fair bit per internal node."""
    return tuple(bool(b) for b in rng.integers(0, 2, size=f.num_bits))


def sample_elements(f: SylowForest, rng: np.random.Generator, size: int) -> np.ndarray:
    return rng.integers(0, 2, size=(size, f.num_bits)).astype(bool)


def _check_cutoff(f: SylowForest, cutoff_bits: int):
    if f.num_bits > cutoff_bits:
        raise CutoffExceeded(
            f"|P| = 2^{f.num_bits} at n={f.n} exceeds the enumeration cutoff 2^{cutoff_bits}"
        )


def enumerate_elements(f: SylowForest, cutoff_bits: int = DEFAULT_CUTOFF_BITS) -> Iterator[NodeSwapCode]:
    _check_cutoff(f, cutoff_bits)
    return itertools.product((False, True), repeat=f.num_bits)


@functools.lru_cache(maxsize=8)
def _tree_elements(e: int) -> np.ndarray:
    if e == 0:
        return np.zeros((1, 1), dtype=np.int16)
    sub = _tree_elements(e - 1)
    m, w = sub.shape
    a = np.repeat(sub, m, axis=0)
    b = np.tile(sub, (m, 1))
    keep = np.concatenate([a, b + w], axis=1)
    swap = np.concatenate([a + w, b], axis=1)
    return np.concatenate([keep, swap], axis=0)


def elements_array(f: SylowForest, cutoff_bits: int = DEFAULT_CUTOFF_BITS) -> np.ndarray:
    """All elements of P as zero-based image rows, shape (|P|, n), in no particular order."""
    _check_cutoff(f, cutoff_bits)
    out = np.zeros((1, 0), dtype=np.int16)
    for t, e in enumerate(f.heights):
        tree = _tree_elements(e) + f.bases[t]
        m = out.shape[0]
        out = np.concatenate(
            [np.repeat(out, tree.shape[0], axis=0), np.tile(tree, (m, 1))], axis=1
        )
    return out
