"""Probability that P ∩ P^x is trivial: Monte Carlo, exhaustive and exact-law routes."""

from __future__ import annotations

import itertools
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache
from statistics import NormalDist
from typing import Optional

import numpy as np

from .census import MAX_CYCLE_TYPE_HEIGHT, class_size, cycle_type_census
from .errors import CutoffExceeded
from .forest import build_forest
from .intersect import EXACT_MAX_N, exact_stats, w_from_columns
from .sampling import block_rng, block_sizes, sample_x_columns

SQRT_E_INV = math.exp(-0.5)
REFERENCE = {"symmetric": SQRT_E_INV, "alternating": 1.5 * SQRT_E_INV}
MODES = ("symmetric", "alternating")
BACKENDS = ("fast", "exact")
EXHAUSTIVE_MAX_N = 9
_Z95 = NormalDist().inv_cdf(0.975)


def wilson_interval(successes: int, samples: int, z: float = _Z95) -> tuple[float, float]:
    p = successes / samples
    denom = 1 + z * z / samples
    center = (p + z * z / (2 * samples)) / denom
    half = z / denom * math.sqrt(p * (1 - p) / samples + z * z / (4 * samples * samples))
    lo = 0.0 if successes == 0 else max(0.0, min(p, center - half))
    hi = 1.0 if successes == samples else min(1.0, max(p, center + half))
    return lo, hi


def _fraction_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


@dataclass
class EstimateReport:
    n: int
    mode: str
    backend: str
    samples: int
    successes: int
    estimate: Fraction
    ci_low: float
    ci_high: float
    seed: Optional[int]
    reference_value: float
    abs_error: float
    bias_bound: Optional[float] = None
    x_space: str = "symmetric"
    exhaustive: bool = False

    def to_dict(self) -> dict:
        d = asdict(self)
        d["estimate"] = _fraction_str(self.estimate)
        d["estimate_float"] = float(self.estimate)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


@dataclass
class Pmf:
    probabilities: dict
    exact: bool

    def __getitem__(self, k):
        return self.probabilities.get(k, 0)

    def total(self):
        return sum(self.probabilities.values())

    def rows(self) -> list[tuple]:
        return [(k, p) for k, p in sorted(self.probabilities.items())]


# -- fast backend ------------------------------------------------------------

def _w_histogram_block(args) -> np.ndarray:
    n, seed, block, size, x_space = args
    xs = sample_x_columns(n, size, block_rng(seed, block), x_space)
    return np.bincount(w_from_columns(n, xs), minlength=n // 2 + 1)


def _exact_block(args) -> np.ndarray:
    """Per-block counts: [trivial, even part trivial, w == 0, w <= 1]."""
    n, seed, block, size, x_space = args
    xs = sample_x_columns(n, size, block_rng(seed, block), x_space)
    st = exact_stats(n, xs.T)
    return np.array([
        (st["size"] == 1).sum(),
        st["even_trivial"].sum(),
        (st["w"] == 0).sum(),
        (st["w"] <= 1).sum(),
    ], dtype=np.int64)


def _run_blocks(fn, n, samples, seed, x_space, workers):
    tasks = [(n, seed, j, size, x_space) for j, size in enumerate(block_sizes(samples))]
    if workers <= 1 or len(tasks) == 1:
        results = [fn(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(fn, tasks))
    total = results[0].astype(np.int64)
    for r in results[1:]:
        total = total + r
    return total


def w_histogram(n: int, samples: int, seed: int, x_space: str = "symmetric", workers: int = 1) -> np.ndarray:
    """Counts of W over ``samples`` uniform x, deterministic in (n, samples, seed)."""
    if samples < 1:
        raise ValueError("samples must be positive")
    return _run_blocks(_w_histogram_block, n, samples, seed, x_space, workers)


# -- estimates -----------------------------------------------------------------

def _all_x(n: int, x_space: str) -> np.ndarray:
    if n > EXHAUSTIVE_MAX_N:
        raise CutoffExceeded(f"exhaustive enumeration limited to n <= {EXHAUSTIVE_MAX_N}, got n={n}")
    xs = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    if x_space == "alternating":
        i, j = np.triu_indices(n, k=1)
        xs = xs[(xs[:, i] > xs[:, j]).sum(axis=1) % 2 == 0]
    return xs


def estimate_trivial(
    n: int,
    samples: int = 0,
    seed: Optional[int] = None,
    mode: str = "symmetric",
    backend: str = "fast",
    *,
    exhaustive: bool = False,
    x_space: str = "symmetric",
    workers: int = 1,
) -> EstimateReport:
    """Estimate Pr(P ∩ P^x = 1) (symmetric) or Pr(P ∩ P^x ∩ A_n = 1) (alternating).

    The fast backend tests W == 0 or W <= 1; the exact backend tests the full
    intersection. ``exhaustive`` replaces sampling by every x in the x space.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if backend not in BACKENDS:
        raise ValueError(f"backend must be one of {BACKENDS}")
    if n < 1:
        raise ValueError("n must be positive")
    if backend == "exact" and n > EXACT_MAX_N:
        raise CutoffExceeded(f"exact backend limited to n <= {EXACT_MAX_N}, got n={n}")
    if exhaustive:
        xs = _all_x(n, x_space)
        samples = xs.shape[0]
        if backend == "fast":
            w = w_from_columns(n, xs.T)
            successes = int((w == 0).sum() if mode == "symmetric" else (w <= 1).sum())
        else:
            st = exact_stats(n, xs)
            key = st["size"] == 1 if mode == "symmetric" else st["even_trivial"]
            successes = int(key.sum())
        seed = None
    else:
        if samples < 1:
            raise ValueError("samples must be positive")
        if seed is None:
            raise ValueError("a seed is required for sampling")
        if backend == "fast":
            hist = w_histogram(n, samples, seed, x_space, workers)
            successes = int(hist[0] if mode == "symmetric" else hist[:2].sum())
        else:
            counts = _run_blocks(_exact_block, n, samples, seed, x_space, workers)
            successes = int(counts[0] if mode == "symmetric" else counts[1])

    estimate = Fraction(successes, samples)
    if exhaustive:
        lo = hi = float(estimate)
    else:
        lo, hi = wilson_interval(successes, samples)
    ref = REFERENCE[mode]
    return EstimateReport(
        n=n,
        mode=mode,
        backend=backend,
        samples=samples,
        successes=successes,
        estimate=estimate,
        ci_low=lo,
        ci_high=hi,
        seed=seed,
        reference_value=ref,
        abs_error=abs(float(estimate) - ref),
        bias_bound=bias_bound(n),
        x_space=x_space,
        exhaustive=exhaustive,
    )


# -- law of W ------------------------------------------------------------------

def w_pmf_empirical(n: int, samples: int, seed: int, x_space: str = "symmetric", workers: int = 1) -> Pmf:
    hist = w_histogram(n, samples, seed, x_space, workers)
    return Pmf({k: int(c) / samples for k, c in enumerate(hist) if c}, exact=False)


W_PMF_MAX_N = 4000


def w_pmf_exact(n: int) -> Pmf:
    """Exact law of W for uniform x in S_n, by inclusion-exclusion over matched pairs.

    With f = n // 2 pairs, the number of x mapping j specified pairs onto pairs is
    f(f-1)...(f-j+1) 2^j (n-2j)!, and Pr(W = k) = sum_j (-1)^(j-k) C(j, k) S_j
    where S_j = C(f, j) f!/(f-j)! 2^j (n-2j)! / n!.
    """
    if not 1 <= n <= W_PMF_MAX_N:
        raise ValueError(f"need 1 <= n <= {W_PMF_MAX_N}")
    f = n // 2
    sj = [
        math.comb(f, j) * math.perm(f, j) * 2**j * math.factorial(n - 2 * j)
        for j in range(f + 1)
    ]
    total = math.factorial(n)
    probs = {}
    for k in range(f + 1):
        num = sum((-1) ** (j - k) * math.comb(j, k) * sj[j] for j in range(k, f + 1))
        if num:
            probs[k] = Fraction(num, total)
    return Pmf(probs, exact=True)


def w_pmf_exhaustive(n: int) -> Pmf:
    """Law of W by enumerating all of S_n (oracle for small n)."""
    xs = _all_x(n, "symmetric")
    hist = np.bincount(w_from_columns(n, xs.T), minlength=n // 2 + 1)
    return Pmf({k: Fraction(int(c), xs.shape[0]) for k, c in enumerate(hist) if c}, exact=True)


def poisson_reference(k_max: int = 40, lam: float = 0.5) -> Pmf:
    return Pmf({k: math.exp(-lam) * lam**k / math.factorial(k) for k in range(k_max + 1)}, exact=False)


def tv_distance(p: Pmf, q: Pmf) -> float:
    """Half the l1 distance; mass a pmf leaves off its listed keys counts as one tail atom."""
    keys = set(p.probabilities) | set(q.probabilities)
    body = sum(abs(float(p[k]) - float(q[k])) for k in keys)
    tail = abs((1 - float(p.total())) - (1 - float(q.total())))
    return 0.5 * (body + tail)


# -- class-sum expectation -------------------------------------------------------

@lru_cache(maxsize=None)
def expected_non_a(n: int) -> Fraction:
    """E|P ∩ P^x \\ A| = sum over cycle types of |C ∩ P| |C ∩ (P \\ A)| / |C|."""
    in_p = cycle_type_census(n, "P")
    outside_a = cycle_type_census(n, "P_minus_A")
    return sum(
        (Fraction(in_p[lam] * c, class_size(lam)) for lam, c in outside_a.items()),
        Fraction(0),
    )


_FIT_NS = (8, 16, 32, 64)


def bias_bound(n: int) -> float:
    """expected_non_a(n) when the census guard allows it, else C/n fitted on n = 8..64."""
    if build_forest(n).heights[0] <= MAX_CYCLE_TYPE_HEIGHT:
        return float(expected_non_a(n))
    return max(float(m * expected_non_a(m)) for m in _FIT_NS) / n


def poisson_rate_constant(ns) -> float:
    """sup over ``ns`` of n |Pr(W = 0) - e^-1/2|."""
    return max(n * abs(float(w_pmf_exact(n)[0]) - SQRT_E_INV) for n in ns)


@dataclass
class ExhaustiveSummary:
    n: int
    count: int
    pr_trivial: Fraction
    pr_even_part_trivial: Fraction
    pr_w0: Fraction
    pr_w_le_1: Fraction
    pr_not_a_part: Fraction
    mean_non_a: Fraction


def exhaustive_summary(n: int) -> ExhaustiveSummary:
    """Exact statistics of P ∩ P^x over every x in S_n."""
    xs = _all_x(n, "symmetric")
    st = exact_stats(n, xs)
    N = xs.shape[0]
    frac = lambda c: Fraction(int(c), N)  # noqa: E731
    return ExhaustiveSummary(
        n=n,
        count=N,
        pr_trivial=frac((st["size"] == 1).sum()),
        pr_even_part_trivial=frac(st["even_trivial"].sum()),
        pr_w0=frac((st["w"] == 0).sum()),
        pr_w_le_1=frac((st["w"] <= 1).sum()),
        pr_not_a_part=frac((st["size"] != 2 ** st["w"]).sum()),
        mean_non_a=frac(st["non_a"].sum()),
    )
