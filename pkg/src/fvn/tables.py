"""Interval subdivisions and per-interval shifted exponents.

The run test only works for exponents in [0, 1], so the half line is split
into intervals I_k = [a_{k-1}, a_k), each with the exponent lowered by a
constant so it starts at 0.  Four schemes are built here:

  exp_vn           a_k = k, selection probability (e-1)/e^k
  exp_brent        a_k = k ln 2, dyadic selection 2^-k
  normal_forsythe  a_k = sqrt(2k-1), stored half-normal masses
  normal_brent     half-normal tail beyond a_k equals 2^-k, dyadic selection

The dyadic schemes store no probability table: selection is one
leading-zero count on a fresh word.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field

from .bitstream import UniformSource

EXP_VN = "exp_vn"
EXP_BRENT = "exp_brent"
NORMAL_FORSYTHE = "normal_forsythe"
NORMAL_BRENT = "normal_brent"
SCHEMES = (EXP_VN, EXP_BRENT, NORMAL_FORSYTHE, NORMAL_BRENT)

MAX_TABLE_LEN = 64
# Matches the default source wordlength: selection never resolves finer.
DEFAULT_TABLE_LEN = 53

_LN2 = math.log(2.0)
_SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)


def half_normal_tail(x: float) -> float:
    """sqrt(2/pi) * integral_x^inf exp(-t^2/2) dt, i.e. erfc(x / sqrt 2)."""
    if x < 0.0:
        raise ValueError(f"tail argument must be >= 0, got {x}")
    return math.erfc(x / math.sqrt(2.0))


def _invert_tail(target: float) -> float:
    """Solve half_normal_tail(a) == target: bracketing bisection, then a
    Newton polish against the exact derivative -sqrt(2/pi) exp(-a^2/2)."""
    lo, hi = 0.0, 12.0   # tail(12) < 2^-64 <= target for every table entry
    while hi - lo > 1e-10:
        mid = 0.5 * (lo + hi)
        if half_normal_tail(mid) > target:
            lo = mid
        else:
            hi = mid
    a = 0.5 * (lo + hi)
    for _ in range(4):
        f = half_normal_tail(a) - target
        a += f / (_SQRT_2_OVER_PI * math.exp(-0.5 * a * a))
    if abs(half_normal_tail(a) - target) > 1e-12:
        raise RuntimeError(f"tail inversion failed to converge at {target}")
    return a


@dataclass(frozen=True)
class IntervalTable:
    """Immutable boundaries a_0 < ... < a_K plus the selection rule.

    ``select_probs`` is present only for the schemes that store masses;
    dyadic schemes select by leading-zero counting.  Normal schemes carry
    ``boundaries_sq`` so the shifted exponent (x^2 - a^2)/2 uses the exact
    squared boundary (2k-1 is exact for the sqrt(2k-1) scheme, where the
    float square of a_k would not be).
    """

    scheme: str
    boundaries: tuple[float, ...]
    K: int
    select_probs: tuple[float, ...] | None = None
    boundaries_sq: tuple[float, ...] | None = None
    cum_probs: tuple[float, ...] | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if len(self.boundaries) != self.K + 1 or self.boundaries[0] != 0.0:
            raise ValueError("boundaries must be (a_0 = 0, ..., a_K)")
        if any(b >= c for b, c in zip(self.boundaries, self.boundaries[1:])):
            raise ValueError("boundaries must be strictly increasing")

    @property
    def is_dyadic(self) -> bool:
        return self.select_probs is None

    @property
    def is_normal(self) -> bool:
        return self.boundaries_sq is not None

    def interval(self, k: int) -> tuple[float, float]:
        return self.boundaries[k - 1], self.boundaries[k]

    def shifted_exponent(self, k: int, x: float) -> float:
        """G_k(x): the exponent on I_k lowered to start at 0."""
        if self.boundaries_sq is not None:
            return (x * x - self.boundaries_sq[k - 1]) * 0.5
        return x - self.boundaries[k - 1]

    def gmax(self, k: int) -> float:
        """Supremum of G_k on I_k (attained at the right endpoint)."""
        if self.boundaries_sq is not None:
            return (self.boundaries_sq[k] - self.boundaries_sq[k - 1]) * 0.5
        return self.boundaries[k] - self.boundaries[k - 1]

    def selection_probability(self, k: int) -> float:
        """Mass used to select I_k (implicit 2^-k for dyadic schemes)."""
        if self.select_probs is None:
            return 2.0 ** -k
        return self.select_probs[k - 1]


def _check_len(K: int) -> None:
    if not isinstance(K, int) or not 1 <= K <= MAX_TABLE_LEN:
        raise ValueError(f"table length must be in [1, {MAX_TABLE_LEN}], got {K}")


def build_exp_vn(K: int = DEFAULT_TABLE_LEN) -> IntervalTable:
    """Unit intervals [k-1, k) with selection mass (e-1)/e^k."""
    _check_len(K)
    boundaries = tuple(float(k) for k in range(K + 1))
    probs = tuple((math.e - 1.0) * math.exp(-k) for k in range(1, K + 1))
    # cumulative mass telescopes to 1 - e^-k; expm1 keeps it exact
    cum = tuple(-math.expm1(-k) for k in range(1, K + 1))
    return IntervalTable(EXP_VN, boundaries, K, select_probs=probs, cum_probs=cum)


def build_exp_brent(K: int = DEFAULT_TABLE_LEN) -> IntervalTable:
    """Intervals [(k-1) ln 2, k ln 2), selected dyadically."""
    _check_len(K)
    boundaries = tuple(k * _LN2 for k in range(K + 1))
    return IntervalTable(EXP_BRENT, boundaries, K)


def build_normal_forsythe(K: int = DEFAULT_TABLE_LEN) -> IntervalTable:
    """Boundaries sqrt(2k-1), so consecutive squared boundaries differ by
    exactly 2 and every shifted exponent tops out at 1."""
    _check_len(K)
    boundaries = (0.0,) + tuple(math.sqrt(2 * k - 1) for k in range(1, K + 1))
    boundaries_sq = (0.0,) + tuple(float(2 * k - 1) for k in range(1, K + 1))
    tails = [half_normal_tail(b) for b in boundaries]
    probs = tuple(tails[k - 1] - tails[k] for k in range(1, K + 1))
    cum = tuple(1.0 - tails[k] for k in range(1, K + 1))
    return IntervalTable(NORMAL_FORSYTHE, boundaries, K,
                         select_probs=probs, boundaries_sq=boundaries_sq,
                         cum_probs=cum)


def build_normal_brent(K: int = DEFAULT_TABLE_LEN) -> IntervalTable:
    """Boundaries with half-normal tail mass exactly 2^-k beyond a_k, so the
    k-th interval holds mass 2^-k and selection is one leading-zero count."""
    _check_len(K)
    boundaries = (0.0,) + tuple(_invert_tail(2.0 ** -k) for k in range(1, K + 1))
    boundaries_sq = tuple(b * b for b in boundaries)
    return IntervalTable(NORMAL_BRENT, boundaries, K, boundaries_sq=boundaries_sq)


_BUILDERS = {
    EXP_VN: build_exp_vn,
    EXP_BRENT: build_exp_brent,
    NORMAL_FORSYTHE: build_normal_forsythe,
    NORMAL_BRENT: build_normal_brent,
}


def build_table(scheme: str, K: int = DEFAULT_TABLE_LEN) -> IntervalTable:
    if scheme not in _BUILDERS:
        raise ValueError(f"unknown scheme {scheme!r}")
    return _BUILDERS[scheme](K)


def select_interval(table: IntervalTable, src: UniformSource) -> int:
    """Pick k in [1, K]; mass beyond the table folds into the last interval."""
    if table.cum_probs is None:
        k = src.geometric_index()
    else:
        k = bisect_right(table.cum_probs, src.next_uniform()) + 1
    K = table.K
    return k if k < K else K


def dump_table(table: IntervalTable) -> str:
    """Plain-text dump: one `k a_{k-1} a_k q_k gmax_k` row per interval,
    17 significant digits, after a `#scheme=<tag> K=<K>` header."""
    lines = [f"#scheme={table.scheme} K={table.K}"]
    for k in range(1, table.K + 1):
        lo, hi = table.interval(k)
        q = table.selection_probability(k)
        lines.append(f"{k} {lo:.17g} {hi:.17g} {q:.17g} {table.gmax(k):.17g}")
    return "\n".join(lines) + "\n"
