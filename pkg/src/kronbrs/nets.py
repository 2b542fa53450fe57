"""Net structure, the quality function T(m), and weak admissibility.

Two independent routes to the net quality are provided: direct counting of
points in elementary intervals (:func:`net_check`) and the rank criterion on
generating matrices (:func:`compute_T`).  They must agree on every digital
block, which the tests use as a cross-oracle.

Weak admissibility is measured through the largest summed norm exponent
``e_max`` over pairs of block points: the minimum product norm is
``kappa_m = b**-e_max``.  The depth used downstream is ``tau_m = e_max``; the
report also carries ``tau_printed = m - e_max`` (the floor-log reading), see
:class:`AdmissibilityReport`.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence

import numpy as np

from .errors import AdmissibilityError, DimensionError, PrecisionError
from .finite_field import FieldSpec
from .gf_linalg import rank
from .sequences import DigitalSequence, GeneratingMatrix


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All (d_1, ..., d_parts) of non-negative integers summing to total."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def _as_array(points) -> np.ndarray:
    """Digit array of shape (N, s, P) from BadicPoints or an existing array."""
    if isinstance(points, np.ndarray):
        return points
    pts = list(points)
    if not pts:
        return np.zeros((0, 0, 0), dtype=np.int64)
    return np.array([p.coords for p in pts], dtype=np.int64)


# -- elementary intervals ----------------------------------------------------

@dataclass(frozen=True)
class ElementaryInterval:
    """Π [a_i b^-d_i, (a_i + 1) b^-d_i)."""

    b: int
    d: tuple[int, ...]
    a: tuple[int, ...]

    def bounds(self) -> list[tuple[Fraction, Fraction]]:
        return [(Fraction(a, self.b**d), Fraction(a + 1, self.b**d)) for a, d in zip(self.a, self.d)]

    def __str__(self) -> str:
        return " x ".join(f"[{lo}, {hi})" for lo, hi in self.bounds())


@dataclass(frozen=True)
class NetCheckResult:
    ok: bool
    t: int
    m: int
    witness: ElementaryInterval | None = None
    count: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def _prefix_keys(block: np.ndarray, d: Sequence[int], b: int) -> np.ndarray:
    """Integer label of the elementary interval of each point, per coordinate."""
    keys = np.zeros((block.shape[0], len(d)), dtype=np.int64)
    for i, di in enumerate(d):
        for j in range(di):
            keys[:, i] = keys[:, i] * b + block[:, i, j]
    return keys


def net_check(points, t: int, m: int, s: int, b: int) -> NetCheckResult:
    """Is the block of b^m points a (t, m, s)-net in base b?

    On failure the witness is the first interval, in lexicographic order of
    shapes and then positions, holding fewer than b^t points.
    """
    block = _as_array(points)
    if block.shape[0] != b**m:
        raise DimensionError(f"a net check at m = {m} needs {b**m} points, got {block.shape[0]}")
    if block.size and block.shape[1] != s:
        raise DimensionError(f"points have dimension {block.shape[1]}, expected {s}")
    if not 0 <= t <= m:
        raise DimensionError(f"t = {t} outside [0, {m}]")
    if block.size and block.shape[2] < m - t:
        raise PrecisionError(f"points carry {block.shape[2]} digits, need {m - t}")
    target = b**t
    for d in compositions(m - t, s):
        counts = Counter(map(tuple, _prefix_keys(block, d, b).tolist()))
        if len(counts) == b ** (m - t) and all(c == target for c in counts.values()):
            continue
        for a in product(*(range(b**di) for di in d)):
            c = counts.get(a, 0)
            if c < target:
                return NetCheckResult(False, t, m, ElementaryInterval(b, tuple(d), a), c)
    return NetCheckResult(True, t, m)


def minimal_t(points, m: int, s: int, b: int) -> int:
    """Smallest t accepted by :func:`net_check`."""
    for t in range(m + 1):
        if net_check(points, t, m, s, b):
            return t
    return m


def compute_T(F: FieldSpec, matrices: Sequence[GeneratingMatrix], m: int) -> int:
    """Quality T(m) of the first b^m block by the rank criterion."""
    for C in matrices:
        if C.cols < m:
            raise DimensionError(f"matrix has {C.cols} columns, need {m}")
    for t in range(m + 1):
        need = m - t
        if any(C.rows < need for C in matrices):
            continue
        if all(
            rank(F, _stack(matrices, d, m)) == need for d in compositions(need, len(matrices))
        ):
            return t
    return m


def _stack(matrices: Sequence[GeneratingMatrix], d: Sequence[int], m: int) -> np.ndarray:
    rows = [C.entries[:di, :m] for C, di in zip(matrices, d) if di]
    if not rows:
        return np.zeros((0, m), dtype=np.int64)
    return np.vstack(rows)


@dataclass(frozen=True)
class UDProfile:
    """Finite-depth table of m - T(m); the verdict is a heuristic surrogate."""

    rows: tuple[tuple[int, int, int], ...]
    verdict: str

    def as_text(self) -> str:
        lines = ["m,T,m-T"] + [f"{m},{T},{g}" for m, T, g in self.rows]
        lines.append(f"verdict (heuristic, finite depth): {self.verdict}")
        return "\n".join(lines)


def ud_criterion(F: FieldSpec, matrices: Sequence[GeneratingMatrix], m_max: int) -> UDProfile:
    rows = []
    for m in range(1, m_max + 1):
        T = compute_T(F, matrices, m)
        rows.append((m, T, m - T))
    gaps = [g for _, _, g in rows]
    half = len(gaps) // 2
    growing = len(gaps) >= 2 and max(gaps[half:]) > max(gaps[:half] or [0])
    verdict = "consistent with u.d." if growing else "not consistent with u.d."
    return UDProfile(tuple(rows), verdict)


# -- weak admissibility ------------------------------------------------------

@dataclass(frozen=True)
class AdmissibilityReport:
    """Minimum pairwise product norm over the first b^m points.

    ``e_max`` is the largest summed exponent, so ``kappa_m = b**-e_max`` and
    ``tau_m = e_max`` is the depth at which distinct block points can no
    longer share their leading digits in every coordinate.
    ``tau_printed = m - e_max`` is the floor-log form [log_b kappa_m] + m.
    """

    m: int
    b: int
    kappa_m: Fraction
    e_max: int | None
    witness: tuple[int, int] | None = None
    precision: int = 0

    @property
    def admissible(self) -> bool:
        return self.kappa_m > 0

    @property
    def tau_m(self) -> int:
        if self.e_max is None:
            raise AdmissibilityError(f"not weakly admissible at m = {self.m}: points {self.witness} collide")
        return self.e_max

    @property
    def tau_printed(self) -> int:
        if self.e_max is None:
            raise AdmissibilityError(f"not weakly admissible at m = {self.m}: points {self.witness} collide")
        return self.m - self.e_max

    def require_tau(self, convention: str = "norm") -> int:
        """tau for downstream use; AdmissibilityError when it is below 1."""
        tau = self.tau_m if convention == "norm" else self.tau_printed
        if tau < 1:
            raise AdmissibilityError(f"tau = {tau} < 1 at m = {self.m} ({convention} convention)")
        return tau

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "b": self.b,
            "kappa_m": str(self.kappa_m),
            "e_max": self.e_max,
            "tau_m": self.e_max,
            "tau_printed": None if self.e_max is None else self.m - self.e_max,
            "witness": list(self.witness) if self.witness else None,
            "precision": self.precision,
        }


def _norm_exponents(diff: np.ndarray) -> np.ndarray:
    """Per coordinate, index of the first nonzero digit plus one; 0 marks all-zero.

    ``diff`` has shape (..., s, P).
    """
    nz = diff != 0
    first = np.argmax(nz, axis=-1) + 1
    return np.where(nz.any(axis=-1), first, 0)


def kappa_of_block(block: np.ndarray, b: int, m: int) -> AdmissibilityReport:
    """Exact pairwise scan over a digit block of shape (b^m, s, P)."""
    N, _, P = block.shape
    if N != b**m:
        raise DimensionError(f"need {b**m} points, got {N}")
    e_max, arg = 0, None
    for n in range(1, N):
        diff = (block[n][None, :, :] - block[:n]) % b
        ex = _norm_exponents(diff)
        dead = (ex == 0).any(axis=1)
        if dead.any():
            k = int(np.argmax(dead))
            return AdmissibilityReport(m, b, Fraction(0), None, (k, n), P)
        tot = ex.sum(axis=1)
        k = int(np.argmax(tot))
        if tot[k] > e_max:
            e_max, arg = int(tot[k]), (k, n)
    return AdmissibilityReport(m, b, Fraction(1, b**e_max), e_max, arg, P)


def kappa(source, m: int, precision: int | None = None) -> AdmissibilityReport:
    """Weak admissibility at depth m.

    ``source`` is a :class:`DigitalSequence` or a list of b^m BadicPoints.
    For a sequence the digit depth is raised until no pair coincides on all
    stored digits or the matrices run out of rows; a pair that still
    coincides is reported as kappa_m = 0.
    """
    if isinstance(source, DigitalSequence):
        b, s = source.b, source.s
        P = precision or min(source.max_rows, s * m + 8)
        while True:
            rep = kappa_of_block(source.x_block(0, b**m, P), b, m)
            if rep.admissible or P >= source.max_rows:
                return rep
            P = min(source.max_rows, 2 * P)
    pts = list(source)
    if not pts:
        raise DimensionError("empty point set")
    return kappa_of_block(_as_array(pts), pts[0].b, m)


def kappa_fast(seq: DigitalSequence, m: int, precision: int | None = None) -> AdmissibilityReport:
    """min over 0 < n < b^m of ||x_n||_b.

    Valid when b is prime and psi, eta are identities: then x_n ⊖ x_k is the
    point of the digit difference of the indices, so the pairwise minimum is
    the minimum over the nonzero block points.
    """
    F, b = seq.field, seq.b
    if F.kappa != 1 or not seq.bijections.is_identity:
        raise DimensionError("the fast scan needs a prime base and identity bijections")
    P = precision or min(seq.max_rows, seq.s * m + 8)
    while True:
        block = seq.x_block(1, b**m - 1, P)
        ex = _norm_exponents(block)
        dead = (ex == 0).any(axis=1)
        if not dead.any():
            tot = ex.sum(axis=1)
            n = int(np.argmax(tot))
            return AdmissibilityReport(m, b, Fraction(1, b ** int(tot[n])), int(tot[n]), (0, n + 1), P)
        if P >= seq.max_rows:
            n = int(np.argmax(dead)) + 1
            return AdmissibilityReport(m, b, Fraction(0), None, (0, n), P)
        P = min(seq.max_rows, 2 * P)
