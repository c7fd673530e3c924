"""Counter-based random streams and batched uniform permutations.

Samples are grouped in fixed blocks of ``BLOCK_SIZE``. Block ``j`` of a run with
seed ``s`` always draws from Philox keyed by ``s`` with the block index in the
top counter word, so a result depends only on (seed, samples), never on how
blocks are distributed over workers.
"""

from __future__ import annotations

import numpy as np

BLOCK_SIZE = 4096
_MAX_SEED = 2**128


def block_rng(seed: int, block: int) -> np.random.Generator:
    if not 0 <= seed < _MAX_SEED:
        raise ValueError("seed must be in [0, 2^128)")
    return np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, 0, block]))


def block_sizes(samples: int, block_size: int = BLOCK_SIZE) -> list[int]:
    full, rest = divmod(samples, block_size)
    return [block_size] * full + ([rest] if rest else [])


def _index_dtype(n: int):
    return np.int16 if n < 2**15 else np.int32


def shuffle_columns(n: int, size: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """``size`` independent uniform permutations of range(n), one per column.

    Returns ``(images, odd)`` with ``images`` of shape (n, size) and ``odd`` the
    parity of each permutation. Fisher-Yates with unbiased bounded integers.
    """
    arr = np.tile(np.arange(n, dtype=_index_dtype(n))[:, None], (1, size))
    odd = np.zeros(size, dtype=bool)
    cols = np.arange(size)
    for i in range(n - 1, 0, -1):
        j = rng.integers(0, i + 1, size=size)
        top = arr[i].copy()
        arr[i] = arr[j, cols]
        arr[j, cols] = top
        odd ^= j != i
    return arr, odd


def sample_x_columns(n: int, size: int, rng: np.random.Generator, x_space: str = "symmetric") -> np.ndarray:
    """Uniform elements of S_n, or of A_n by parity rejection, as columns (n, size)."""
    if x_space == "symmetric":
        return shuffle_columns(n, size, rng)[0]
    if x_space != "alternating":
        raise ValueError(f"unknown x_space {x_space!r}")
    if n == 1:
        return np.zeros((1, size), dtype=_index_dtype(n))
    chunks, have = [], 0
    while have < size:
        arr, odd = shuffle_columns(n, size, rng)
        keep = arr[:, ~odd]
        chunks.append(keep)
        have += keep.shape[1]
    return np.concatenate(chunks, axis=1)[:, :size]

