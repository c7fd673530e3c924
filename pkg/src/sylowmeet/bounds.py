"""Upper bounds on #{g in P \\ A : supp(g) = s}.

Three expressions are evaluated for a support s (even) and degree n:

* ``big_sum``: 2^s times the sum over height profiles (m_h) with
  sum 2^(h-1) m_h = s/2 and m_1 < s/2 of prod_h n^m_h / m_h!   (exact)
* ``bound_small_s``: s 2^(s+1) n^(s/2-1) / (s/2-2)!, valid when
  2 (s/2-2)(s/2-3) / n < 1                                      (exact)
* ``bound_gf``: x^(-s/2) F(x) at x = s/(2n) with
  F(X) = 2^s exp(sum_h n X^(2^(h-1)))                          (log domain)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Optional

from .census import support_census
from .errors import GuardExceeded

GF_TRUNCATION = 1e-30
LOG_SLACK = 1e-9
STABLE_GROWTH = 0.05


@dataclass(frozen=True)
class SolutionVector:
    m: tuple[tuple[int, int], ...]  # sorted (h, m_h) with m_h > 0
    s: int

    def __getitem__(self, h: int) -> int:
        return dict(self.m).get(h, 0)

    @property
    def k(self) -> int:
        """Number of subtrees, sum of m_h."""
        return sum(c for _, c in self.m)

    @property
    def t(self) -> int:
        return self.s // 2 - self.k

    def as_dict(self) -> dict[int, int]:
        return dict(self.m)


def _check_s(s: int):
    if s < 2 or s % 2:
        raise ValueError(f"s must be even and >= 2, got {s}")


def _profiles(total: int, h: int) -> Iterator[dict[int, int]]:
    """Solutions of sum_{h' <= h} 2^(h'-1) m_h' = total."""
    if h == 1:
        yield {1: total} if total else {}
        return
    w = 2 ** (h - 1)
    for c in range(total // w, -1, -1):
        for rest in _profiles(total - c * w, h - 1):
            yield ({h: c} | rest) if c else rest


@lru_cache(maxsize=None)
def enumerate_solutions(s: int) -> tuple[SolutionVector, ...]:
    _check_s(s)
    half = s // 2
    top = half.bit_length()
    out = []
    for prof in _profiles(half, top):
        if prof.get(1, 0) < half:
            out.append(SolutionVector(tuple(sorted(prof.items())), s))
    return tuple(out)


def big_sum(n: int, s: int) -> Fraction:
    _check_s(s)
    total = Fraction(0)
    for sol in enumerate_solutions(s):
        term = Fraction(1)
        for _, c in sol.m:
            term *= Fraction(n**c, math.factorial(c))
        total += term
    return 2**s * total


def small_s_applicable(n: int, s: int) -> bool:
    return 2 * (s // 2 - 2) * (s // 2 - 3) < n


def bound_small_s(n: int, s: int) -> Optional[Fraction]:
    """The largest-term bound, or None when its hypothesis fails."""
    _check_s(s)
    if not small_s_applicable(n, s):
        return None
    half = s // 2
    return Fraction(s * 2 ** (s + 1)) * Fraction(n) ** (half - 1) / math.factorial(max(half - 2, 0))


def gf_exponent(n: int, s: int) -> float:
    """sum_{h>0} n x^(2^(h-1)) at x = s/(2n), truncated once terms are negligible."""
    x = s / (2 * n)
    total = 0.0
    power = x
    while True:
        term = n * power
        total += term
        if term < GF_TRUNCATION * total:
            break
        power *= power
    return total


def log_bound_gf(n: int, s: int) -> float:
    _check_s(s)
    if s > n:
        raise GuardExceeded(f"generating-function bound needs s <= n, got s={s}, n={n}")
    arg = gf_exponent(n, s)
    if arg > s * (1 + 1e-12):
        raise ArithmeticError(f"exponent {arg} exceeds s={s}")
    return (s / 2) * math.log(2 * n / s) + s * math.log(2) + arg


def bound_gf(n: int, s: int) -> float:
    return math.exp(log_bound_gf(n, s))


def log_exact(q) -> float:
    q = Fraction(q)
    if q <= 0:
        return -math.inf
    return math.log(q.numerator) - math.log(q.denominator)


def regime(n: int, s: int) -> str:
    return "small_s" if s * s < 2 * n else "gf"


def grid_row(n: int, s: int) -> dict:
    census = support_census(n, "P_minus_A")[s]
    small = bound_small_s(n, s)
    return {
        "n": n,
        "s": s,
        "census_p_minus_a": census,
        "big_sum": big_sum(n, s),
        "bound_small_s": small,
        "bound_gf": bound_gf(n, s),
        "applicable_regime": regime(n, s),
    }


@dataclass
class Constants:
    n_max: int
    c_a: float
    c_p: float
    c_a_by_n: dict
    c_p_by_n: dict

    def growth(self) -> float:
        """Relative growth of max(C_A, C_P) between n_max // 2 and n_max."""
        half = self.n_max // 2
        early = max(
            max(v for n, v in self.c_a_by_n.items() if n <= half),
            max(v for n, v in self.c_p_by_n.items() if n <= half),
        )
        return max(self.c_a, self.c_p) / early - 1

    @property
    def stable(self) -> bool:
        return self.n_max >= 16 and self.growth() < STABLE_GROWTH


def calibrate_constants(n_max: int) -> Constants:
    """Smallest constants making both counting bounds hold for n <= n_max.

    C_A = max census_A(s)^(2/s) / (n/s), C_P = max census_{P\\A}(s)^(1/s) (n/s)^(-(s/2-1)/s).
    """
    c_a_by_n, c_p_by_n = {}, {}
    for n in range(2, n_max + 1):
        ca, cp = 0.0, 0.0
        a = support_census(n, "A")
        pa = support_census(n, "P_minus_A")
        for s in range(2, n + 1, 2):
            if a[s]:
                ca = max(ca, math.exp(2 * math.log(a[s]) / s) / (n / s))
            if pa[s]:
                cp = max(cp, math.exp(math.log(pa[s]) / s - (s / 2 - 1) / s * math.log(n / s)))
        c_a_by_n[n], c_p_by_n[n] = ca, cp
    c_a, c_p = max(c_a_by_n.values()), max(c_p_by_n.values())
    if not (math.isfinite(c_a) and math.isfinite(c_p)):
        raise ArithmeticError("calibration produced a non-finite constant")
    return Constants(n_max, c_a, c_p, c_a_by_n, c_p_by_n)
