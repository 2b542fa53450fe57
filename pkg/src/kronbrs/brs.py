"""Exact discrepancy counting and bounded-remainder experiments.

A box is [0, γ_1) x ... x [0, γ_s) with each γ_i given by base-b digits: a
finite prefix followed by an optional periodic tail.  Membership is decided
by comparing digits, so every count and every discrepancy value is exact.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DomainError, EnumerationTooLarge, InconclusiveError, PrecisionError
from .laurent import base_digits
from .sequences import BadicPoint, DigitalSequence, KroneckerSystem, digits_to_int

DIGIT_CHARS = "0123456789abcdef"


@dataclass(frozen=True)
class GammaSpec:
    """γ = 0.prefix (periodic)(periodic)... in base b, or exactly 1 when ``whole``."""

    b: int
    prefix: tuple[int, ...] = ()
    periodic: tuple[int, ...] = ()
    whole: bool = False

    def __post_init__(self) -> None:
        prefix = tuple(int(d) for d in self.prefix)
        periodic = tuple(int(d) for d in self.periodic)
        if any(not 0 <= d < self.b for d in prefix + periodic):
            raise DomainError(f"gamma digits must lie in [0, {self.b})")
        if periodic and all(d == 0 for d in periodic):
            periodic = ()
        if periodic and all(d == self.b - 1 for d in periodic):
            raise DomainError("a tail of repeated b-1 digits is not a canonical expansion")
        if self.whole and (prefix or periodic):
            raise DomainError("the whole interval takes no digits")
        while prefix and not periodic and prefix[-1] == 0:
            prefix = prefix[:-1]
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "periodic", periodic)

    @classmethod
    def parse(cls, b: int, text: str, periodic: str = "") -> "GammaSpec":
        """Parse "0.11" or "11" plus an optional periodic digit string."""
        text = text.strip().lower()
        if text in ("1", "1.0"):
            return cls.one(b)
        if text.startswith("0."):
            text = text[2:]
        elif text.startswith("."):
            text = text[1:]
        try:
            pre = tuple(DIGIT_CHARS.index(c) for c in text)
            per = tuple(DIGIT_CHARS.index(c) for c in periodic.strip().lower())
        except ValueError as exc:
            raise DomainError(f"bad digit string {text!r}/{periodic!r}") from exc
        return cls(b, pre, per)

    @classmethod
    def one(cls, b: int) -> "GammaSpec":
        return cls(b, whole=True)

    @classmethod
    def from_fraction(cls, value: Fraction, b: int) -> "GammaSpec":
        """Eventually periodic expansion of a rational in [0, 1]."""
        value = Fraction(value)
        if value == 1:
            return cls.one(b)
        if not 0 <= value < 1:
            raise DomainError(f"{value} is outside [0, 1]")
        seen: dict[Fraction, int] = {}
        ds: list[int] = []
        while value and value not in seen:
            seen[value] = len(ds)
            value *= b
            d = int(value)
            ds.append(d)
            value -= d
        if not value:
            return cls(b, tuple(ds))
        start = seen[value]
        return cls(b, tuple(ds[:start]), tuple(ds[start:]))

    @property
    def finite(self) -> bool:
        return not self.periodic

    def digit(self, j: int) -> int:
        """γ_j for j >= 1."""
        if self.whole:
            raise DomainError("gamma = 1 has no fractional digits")
        if j <= len(self.prefix):
            return self.prefix[j - 1]
        if not self.periodic:
            return 0
        return self.periodic[(j - len(self.prefix) - 1) % len(self.periodic)]

    def digits(self, count: int) -> list[int]:
        return [self.digit(j) for j in range(1, count + 1)]

    @property
    def value(self) -> Fraction:
        if self.whole:
            return Fraction(1)
        b = self.b
        v = Fraction(digits_to_int(self.prefix, b), b ** len(self.prefix))
        if self.periodic:
            q = len(self.periodic)
            v += Fraction(digits_to_int(self.periodic, b), (b**q - 1) * b ** len(self.prefix))
        return v

    def truncated(self, m: int) -> "GammaSpec":
        """[γ]_m.  The whole interval is left as it is."""
        if self.whole:
            return self
        return GammaSpec(self.b, tuple(self.digits(m)))

    def nonzero_beyond(self, P: int) -> bool:
        """Whether some digit past position P is nonzero."""
        if self.whole or self.periodic:
            return True
        return any(self.prefix[P:])

    def __str__(self) -> str:
        if self.whole:
            return "1"
        s = "0." + "".join(DIGIT_CHARS[d] for d in self.prefix)
        if self.periodic:
            s += "(" + "".join(DIGIT_CHARS[d] for d in self.periodic) + ")"
        return s


@dataclass(frozen=True)
class BoxSpec:
    gammas: tuple[GammaSpec, ...]

    def __post_init__(self) -> None:
        if not self.gammas:
            raise DomainError("a box needs at least one coordinate")
        if len({g.b for g in self.gammas}) != 1:
            raise DomainError("all gamma digits must share one base")
        object.__setattr__(self, "gammas", tuple(self.gammas))

    @classmethod
    def full(cls, b: int, s: int) -> "BoxSpec":
        return cls(tuple(GammaSpec.one(b) for _ in range(s)))

    @classmethod
    def from_fractions(cls, values: Sequence[Fraction], b: int) -> "BoxSpec":
        return cls(tuple(GammaSpec.from_fraction(v, b) for v in values))

    @property
    def b(self) -> int:
        return self.gammas[0].b

    @property
    def s(self) -> int:
        return len(self.gammas)

    @property
    def finite(self) -> bool:
        return all(g.finite for g in self.gammas)

    @property
    def volume(self) -> Fraction:
        out = Fraction(1)
        for g in self.gammas:
            out *= g.value
        return out

    def truncated(self, m: int) -> "BoxSpec":
        return BoxSpec(tuple(g.truncated(m) for g in self.gammas))

    def __str__(self) -> str:
        return " x ".join(f"[0, {g})" for g in self.gammas)


# -- counting ---------------------------------------------------------------

def _as_block(points) -> np.ndarray:
    if isinstance(points, np.ndarray):
        return points
    pts = list(points)
    if not pts:
        return np.zeros((0, 0, 0), dtype=np.int64)
    return np.array([p.coords for p in pts], dtype=np.int64)


def in_box(box: BoxSpec, block: np.ndarray) -> np.ndarray:
    """Boolean membership of each point of a (N, s, P) digit block."""
    N = block.shape[0]
    inside = np.ones(N, dtype=bool)
    if N == 0:
        return inside
    if block.shape[1] != box.s:
        raise DomainError(f"points have dimension {block.shape[1]}, box has {box.s}")
    P = block.shape[2]
    for i, g in enumerate(box.gammas):
        if g.whole:
            continue
        gd = np.array(g.digits(P), dtype=np.int64)
        diff = block[:, i, :] - gd[None, :]
        nz = diff != 0
        first = np.argmax(nz, axis=1)
        tie = ~nz.any(axis=1)
        less = diff[np.arange(N), first] < 0
        if tie.any() and g.nonzero_beyond(P):
            n = int(np.argmax(tie))
            raise PrecisionError(f"point {n} agrees with gamma_{i + 1} on all {P} stored digits")
        inside &= less & ~tie
    return inside


def delta_count(box: BoxSpec, points) -> Fraction:
    """Δ = #{n : x_n in box} - N * vol(box), exactly."""
    block = _as_block(points)
    N = block.shape[0]
    if N == 0:
        return Fraction(0)
    return int(in_box(box, block).sum()) - N * box.volume


# -- star discrepancy -------------------------------------------------------

STAR_CAP = 2**12


def star_discrepancy_exhaustive(points, cap: int = STAR_CAP) -> Fraction:
    """D* = sup over anchored boxes [0, y) of |A(y)/N - vol(y)|.

    The supremum is attained on the grid of point coordinates together with
    1; at each grid corner both the open count (boundary excluded) and the
    closed count (boundary included) are compared with the volume.
    """
    block = _as_block(points)
    N = block.shape[0]
    if N == 0:
        raise DomainError("star discrepancy of an empty point set")
    if N > cap:
        raise EnumerationTooLarge(f"{N} points exceed the cap {cap}")
    s, P = block.shape[1], block.shape[2]
    if s > 2:
        raise EnumerationTooLarge("exhaustive star discrepancy supports s <= 2")
    b = _base_of(points, block)
    nz_cols = np.nonzero(block.any(axis=(0, 1)))[0]
    P = int(nz_cols[-1]) + 1 if nz_cols.size else 0
    D = b**P
    vals = [[digits_to_int(block[n, i, :P], b) for n in range(N)] for i in range(s)]
    best = Fraction(0)
    if s == 1:
        xs = sorted(vals[0])
        grid = sorted(set(vals[0]) | {D})
        for y in grid:
            opened = bisect_left(xs, y)
            closed = bisect_right(xs, y)
            best = max(best, Fraction(y * N - opened * D, N * D), Fraction(closed * D - y * N, N * D))
        return best
    # Sweep over y1 in rank space: positions are exact integers, the float
    # pass only shortlists corners, which are then evaluated exactly.
    g1 = sorted(set(vals[0]) | {D})
    g2 = sorted(set(vals[1]) | {D})
    r1 = {v: k for k, v in enumerate(g1)}
    r2 = {v: k for k, v in enumerate(g2)}
    x1r = np.array([r1[v] for v in vals[0]], dtype=np.int64)
    x2r = np.array([r2[v] for v in vals[1]], dtype=np.int64)
    order = np.argsort(x1r, kind="stable")
    x1s, x2s = x1r[order], x2r[order]
    g2r = np.arange(len(g2), dtype=np.int64)
    g2f = np.array([v / D for v in g2])
    DD = D * D
    for k1, y1 in enumerate(g1):
        lo = int(np.searchsorted(x1s, k1, side="left"))
        hi = int(np.searchsorted(x1s, k1, side="right"))
        opened = np.searchsorted(np.sort(x2s[:lo]), g2r, side="left")
        closed = np.searchsorted(np.sort(x2s[:hi]), g2r, side="right")
        vol = g2f * (y1 / D)
        over = vol - opened / N
        under = closed / N - vol
        for arr, cnt, sign in ((over, opened, 1), (under, closed, -1)):
            top = arr.max()
            if top < float(best) - 1e-12:
                continue
            for k2 in np.nonzero(arr >= top - 1e-12)[0]:
                exact = Fraction(sign * (y1 * g2[k2] * N - int(cnt[k2]) * DD), N * DD)
                best = max(best, exact)
    return best


def _base_of(points, block: np.ndarray) -> int:
    if isinstance(points, np.ndarray):
        raise DomainError("pass BadicPoints (or use star_discrepancy_block) so the base is known")
    return next(iter(points)).b


def star_discrepancy_block(block: np.ndarray, b: int, cap: int = STAR_CAP) -> Fraction:
    pts = [BadicPoint(b, tuple(map(tuple, p))) for p in block.tolist()]
    return star_discrepancy_exhaustive(pts, cap)


# -- growth profiles --------------------------------------------------------

@dataclass(frozen=True)
class RangeSup:
    lo: int
    hi: int
    sup: Fraction
    argmax: int


@dataclass(frozen=True)
class GrowthProfile:
    """Per dyadic range [2^j, 2^(j+1)) the sup of |Δ| over prefix lengths N."""

    box: BoxSpec
    n_max: int
    ranges: tuple[RangeSup, ...]

    @property
    def sups(self) -> list[Fraction]:
        return [r.sup for r in self.ranges]

    @property
    def cumulative(self) -> list[Fraction]:
        """Running sup over [1, hi); nondecreasing by construction."""
        out, cur = [], Fraction(0)
        for r in self.ranges:
            cur = max(cur, r.sup)
            out.append(cur)
        return out

    @property
    def verdict(self) -> str:
        """Heuristic label from the last two ranges."""
        if len(self.ranges) < 2:
            return "inconclusive"
        if self.ranges[-1].sup == self.ranges[-2].sup:
            return "bounded-consistent"
        return "growth-consistent"

    def sup_for(self, lo: int) -> Fraction:
        for r in self.ranges:
            if r.lo == lo:
                return r.sup
        raise KeyError(lo)

    def to_csv(self) -> str:
        lines = ["range_lo,range_hi,sup_num,sup_den,argmax_N"]
        for r in self.ranges:
            lines.append(f"{r.lo},{r.hi},{r.sup.numerator},{r.sup.denominator},{r.argmax}")
        return "\n".join(lines) + "\n"


def _as_digital(seq, n_max: int, P: int) -> DigitalSequence:
    if isinstance(seq, DigitalSequence):
        return seq
    if isinstance(seq, KroneckerSystem):
        return seq.digital(P, max(1, len(base_digits(max(n_max - 1, 1), seq.b))))
    raise DomainError("expected a DigitalSequence or KroneckerSystem")


def prefix_deltas(seq, box: BoxSpec, n_max: int, precision: int = 64, chunk: int = 1 << 15):
    """Δ·den for N = 1..n_max as an int64 array, and den (the volume denominator)."""
    vol = box.volume
    p, q = vol.numerator, vol.denominator
    ds = _as_digital(seq, n_max, precision)
    P = min(precision, ds.max_rows)
    hits = np.empty(n_max, dtype=np.int64)
    for start in range(0, n_max, chunk):
        cnt = min(chunk, n_max - start)
        hits[start : start + cnt] = in_box(box, ds.x_block(start, cnt, P))
    counts = np.cumsum(hits)
    N = np.arange(1, n_max + 1, dtype=np.int64)
    if q * n_max >= 2**62 or p * n_max >= 2**62:
        scaled = np.array([int(c) * q - int(n) * p for c, n in zip(counts, N)], dtype=object)
    else:
        scaled = counts * q - N * p
    return scaled, q


def brs_profile(seq, box: BoxSpec, n_max: int, precision: int = 64) -> GrowthProfile:
    """Sup of |Δ([0, γ), (x_n)_{n<N})| over N in each complete dyadic range."""
    if n_max < 1:
        return GrowthProfile(box, n_max, ())
    scaled, q = prefix_deltas(seq, box, n_max, precision)
    ranges = []
    j = 0
    while 2 ** (j + 1) - 1 <= n_max:
        lo, hi = 2**j, 2 ** (j + 1)
        seg = np.abs(scaled[lo - 1 : hi - 1])
        k = int(np.argmax(seg))
        ranges.append(RangeSup(lo, hi, Fraction(int(seg[k]), q), lo + k))
        j += 1
    return GrowthProfile(box, n_max, tuple(ranges))


MIN_RANGES = 8


@dataclass(frozen=True)
class DichotomyReport:
    finite: GrowthProfile
    infinite: GrowthProfile
    finite_stable: bool
    infinite_grows: bool

    @property
    def verdict(self) -> str:
        return "PASS" if self.finite_stable and self.infinite_grows else "FAIL"

    def as_text(self) -> str:
        f, g = self.finite, self.infinite
        return "\n".join(
            [
                f"finite gamma {f.box}: last sups {f.sups[-2]} / {f.sups[-1]} -> "
                + ("stable" if self.finite_stable else "not stable"),
                f"infinite gamma {g.box}: first sup {g.sups[0]}, final sup {g.sups[-1]} -> "
                + ("grows" if self.infinite_grows else "does not grow"),
                f"verdict (heuristic, finite N <= {f.n_max}): {self.verdict}",
            ]
        )


def dichotomy_report(seq, gamma_finite: BoxSpec, gamma_infinite: BoxSpec, n_max: int, precision: int = 64) -> DichotomyReport:
    if not gamma_finite.finite:
        raise DomainError(f"{gamma_finite} does not have a finite expansion")
    if gamma_infinite.finite:
        raise DomainError(f"{gamma_infinite} has a finite expansion; an infinite one is required")
    if 2**MIN_RANGES - 1 > n_max:
        raise InconclusiveError(f"N_max = {n_max} gives fewer than {MIN_RANGES} dyadic ranges")
    f = brs_profile(seq, gamma_finite, n_max, precision)
    g = brs_profile(seq, gamma_infinite, n_max, precision)
    stable = f.ranges[-1].sup == f.ranges[-2].sup
    grows = g.ranges[-1].sup >= g.ranges[0].sup + 1
    return DichotomyReport(f, g, stable, grows)


# -- witness positions ------------------------------------------------------

def carry_free_positions(gamma, depth: int) -> list[int]:
    """Positions j <= depth with γ_j in {1..b-2}, or γ_j = b-1 followed by 0."""
    if isinstance(gamma, GammaSpec):
        b, ds = gamma.b, gamma.digits(depth + 1)
    else:
        b, ds = gamma
        ds = list(ds) + [0] * max(0, depth + 1 - len(ds))
    out = []
    for j in range(1, depth + 1):
        d = ds[j - 1]
        if 1 <= d <= b - 2 or (d == b - 1 and ds[j] == 0):
            out.append(j)
    return out


def spaced_positions(W: Sequence[int], gap: int, count: int | None = None) -> list[int]:
    """r(1) = W[0], r(j+1) = least w in W with w >= r(j) + gap."""
    out: list[int] = []
    for w in W:
        if not out or w >= out[-1] + gap:
            out.append(w)
            if count is not None and len(out) == count:
                break
    return out
