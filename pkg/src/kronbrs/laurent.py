"""Polynomials F_b[z] and truncated formal Laurent series in z^-1.

A series ``L = sum_{k >= w} u_k z^-k`` is stored from its first nonzero
index ``w`` together with ``end``: the coefficients u_k are known for every
k < end.  ``end=None`` marks an exact series (all coefficients past the
stored ones are zero).  Every operation computes the ``end`` of its result,
and reading a coefficient at or past ``end`` raises PrecisionError instead of
silently returning zero.

Note the sign convention of :func:`valuation`: it returns ``-w``, so a purely
fractional series has negative valuation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, PrecisionError
from .finite_field import BijectionFamily, FieldSpec

NEG_INFINITY = float("-inf")


def base_digits(n: int, b: int) -> list[int]:
    """Base-b digits a_0, a_1, ... of n (least significant first); [] for 0."""
    if n < 0:
        raise DomainError(f"negative index {n}")
    out = []
    while n:
        n, d = divmod(n, b)
        out.append(d)
    return out


@dataclass(frozen=True)
class Poly:
    """Polynomial in z with coefficients low to high; () is the zero polynomial."""

    coeffs: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        c = list(int(x) for x in self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs


def poly_mul(F: FieldSpec, a: Poly, c: Poly) -> Poly:
    if a.is_zero() or c.is_zero():
        return Poly()
    out = np.zeros(len(a.coeffs) + len(c.coeffs) - 1, dtype=np.int64)
    cv = np.array(c.coeffs, dtype=np.int64)
    for i, x in enumerate(a.coeffs):
        if x:
            seg = out[i : i + len(cv)]
            out[i : i + len(cv)] = F.add[seg, F.mul[x, cv]]
    return Poly(tuple(out.tolist()))


def poly_from_index(n: int, bijections: BijectionFamily) -> Poly:
    """The polynomial sum_r psi_r(a_r(n)) z^r attached to the index n."""
    b = bijections.field.b
    return Poly(tuple(bijections.psi(r)[d] for r, d in enumerate(base_digits(n, b))))


@dataclass(frozen=True)
class LaurentSeries:
    w: int
    coeffs: tuple[int, ...]
    end: int | None = None

    def __post_init__(self) -> None:
        c = [int(x) for x in self.coeffs]
        w = self.w
        lead = 0
        while lead < len(c) and c[lead] == 0:
            lead += 1
        c = c[lead:]
        w += lead
        if self.end is None:
            while c and c[-1] == 0:
                c.pop()
        else:
            c = c[: max(0, self.end - w)]
        if not c:
            w = self.end if self.end is not None else 0
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def zero(cls, end: int | None = None) -> "LaurentSeries":
        return cls(0 if end is None else end, (), end)

    @classmethod
    def from_poly(cls, q: Poly) -> "LaurentSeries":
        """Exact series of a polynomial: z^r sits at index -r."""
        if q.is_zero():
            return cls.zero()
        return cls(-q.degree, tuple(reversed(q.coeffs)), None)

    @classmethod
    def from_json(cls, F: FieldSpec, data: dict) -> "LaurentSeries":
        end = data.get("end")
        return cls(int(data["w"]), tuple(F.element(x) for x in data["coeffs"]), end)

    def to_json(self, F: FieldSpec) -> dict:
        return {
            "w": self.w,
            "coeffs": [F.coords(x) for x in self.coeffs],
            "end": self.end,
        }

    @property
    def exact(self) -> bool:
        return self.end is None

    @property
    def precision(self) -> int | None:
        """Count of known coefficients from index w on (None if exact)."""
        return None if self.end is None else self.end - self.w

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> int:
        if self.end is not None and k >= self.end:
            raise PrecisionError(f"coefficient u_{k} unknown (series known below index {self.end})")
        i = k - self.w
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def coeff_range(self, lo: int, hi: int) -> np.ndarray:
        """u_lo .. u_{hi-1} as an array."""
        if self.end is not None and hi > self.end:
            raise PrecisionError(f"coefficients up to u_{hi - 1} requested; known below index {self.end}")
        out = np.zeros(max(0, hi - lo), dtype=np.int64)
        for k in range(max(lo, self.w), min(hi, self.w + len(self.coeffs))):
            out[k - lo] = self.coeffs[k - self.w]
        return out


def _min_end(*ends):
    known = [e for e in ends if e is not None]
    return min(known) if known else None


def valuation(L: LaurentSeries):
    """nu(L) = -w for nonzero L, NEG_INFINITY for zero."""
    if L.is_zero():
        return NEG_INFINITY
    return -L.w


def frac(L: LaurentSeries) -> LaurentSeries:
    """Fractional part: the terms with index k >= 1 (negative powers of z)."""
    if L.is_zero() or L.w >= 1:
        return L
    return LaurentSeries(1, L.coeffs[1 - L.w :], L.end)


def add_laurent(F: FieldSpec, L1: LaurentSeries, L2: LaurentSeries) -> LaurentSeries:
    end = _min_end(L1.end, L2.end)
    if L1.is_zero() and L2.is_zero():
        return LaurentSeries.zero(end)
    starts = [L.w for L in (L1, L2) if not L.is_zero()]
    lo = min(starts)
    hi = max(L.w + len(L.coeffs) for L in (L1, L2))
    if end is not None:
        hi = min(hi, end)
    if hi <= lo:
        return LaurentSeries.zero(end)
    a = _dense(L1, lo, hi)
    c = _dense(L2, lo, hi)
    return LaurentSeries(lo, tuple(F.add[a, c].tolist()), end)


def _dense(L: LaurentSeries, lo: int, hi: int) -> np.ndarray:
    out = np.zeros(hi - lo, dtype=np.int64)
    for k in range(max(lo, L.w), min(hi, L.w + len(L.coeffs))):
        out[k - lo] = L.coeffs[k - L.w]
    return out


def mul_poly_laurent(F: FieldSpec, q: Poly, L: LaurentSeries, upto: int | None = None) -> LaurentSeries:
    """Exact product q * L.

    The result is known below index ``L.end - deg q``.  If ``upto`` is given
    the caller needs every coefficient below that index, and a shorter
    result raises PrecisionError.
    """
    d = q.degree
    if q.is_zero():
        return LaurentSeries.zero()
    end = None if L.end is None else L.end - d
    if upto is not None and end is not None and end < upto:
        raise PrecisionError(
            f"product by a degree-{d} polynomial is known below index {end}, need {upto}"
        )
    if L.is_zero():
        return LaurentSeries.zero(end)
    u = np.array(L.coeffs, dtype=np.int64)
    res = np.zeros(len(u) + d, dtype=np.int64)
    for r, qr in enumerate(q.coeffs):
        if qr:
            seg = res[d - r : d - r + len(u)]
            res[d - r : d - r + len(u)] = F.add[seg, F.mul[qr, u]]
    return LaurentSeries(L.w - d, tuple(res.tolist()), end)


def mul_laurent(F: FieldSpec, L1: LaurentSeries, L2: LaurentSeries) -> LaurentSeries:
    """Product of two series; known below min(w1 + end2, w2 + end1)."""
    if any(L.is_zero() and L.exact for L in (L1, L2)):
        return LaurentSeries.zero()
    ends = []
    if L1.end is not None:
        ends.append(L1.end + L2.w)
    if L2.end is not None:
        ends.append(L2.end + L1.w)
    end = min(ends) if ends else None
    if L1.is_zero() or L2.is_zero():
        return LaurentSeries.zero(end)
    a = np.array(L1.coeffs, dtype=np.int64)
    c = np.array(L2.coeffs, dtype=np.int64)
    res = np.zeros(len(a) + len(c) - 1, dtype=np.int64)
    for i, x in enumerate(a):
        if x:
            res[i : i + len(c)] = F.add[res[i : i + len(c)], F.mul[x, c]]
    return LaurentSeries(L1.w + L2.w, tuple(res.tolist()), end)


def laurent_from_rational(F: FieldSpec, num: Poly, den: Poly, P: int) -> LaurentSeries:
    """First P coefficients (from the leading index on) of num/den by long division."""
    if den.is_zero():
        raise DomainError("division by the zero polynomial")
    if num.is_zero():
        return LaurentSeries.zero()
    dn, dd = num.degree, den.degree
    w = dd - dn
    inv_lead = F.inv_(den.coeffs[-1])
    rem = dict(enumerate(num.coeffs))  # power of z -> coefficient
    quotient = []
    for e in range(dn - dd, -(w + P), -1):
        top = rem.pop(e + dd, 0)
        c = F.mul_(top, inv_lead)
        quotient.append(c)
        if c:
            for i, dc in enumerate(den.coeffs[:-1]):
                rem[e + i] = F.sub_(rem.get(e + i, 0), F.mul_(c, dc))
    return LaurentSeries(w, tuple(quotient), w + P)


def quadratic_root(F: FieldSpec, c: Poly, P: int) -> LaurentSeries:
    """The root L of L^2 + c L + 1 = 0 with leading index deg c, to P coefficients.

    Coefficients come from the recursion obtained by reading off z^-t in the
    equation: u_{t+D} = -(sum_{e<D} c_e u_{t+e} + sum_{k+k'=t} u_k u_k' + [t=0]) / c_D.
    """
    D = c.degree
    if D < 1:
        raise DomainError("quadratic_root needs deg c >= 1")
    inv_lead = F.inv_(c.coeffs[-1])
    u: dict[int, int] = {}
    for t in range(P):
        acc = 1 if t == 0 else 0
        for e in range(D):
            acc = F.add_(acc, F.mul_(c.coeffs[e], u.get(t + e, 0)))
        for k in range(D, t - D + 1):
            acc = F.add_(acc, F.mul_(u[k], u[t - k]))
        u[t + D] = F.mul_(F.neg_(acc), inv_lead)
    return LaurentSeries(D, tuple(u[D + i] for i in range(P)), D + P)


def laurent_from_quadratic_L(F: FieldSpec, P: int) -> LaurentSeries:
    """The fixture L* over F_2: root of L^2 + zL + 1 = 0 with w = 1."""
    if F.b != 2:
        raise DomainError(f"the quadratic fixture is defined over F_2 only, got b = {F.b}")
    return quadratic_root(F, Poly((0, 1)), P)


def embed_real(L: LaurentSeries, eta_row: Sequence[Sequence[int]], P: int) -> list[int]:
    """First P base-b digits eta_{i,k}(u_k), k = 1..P, of the real embedding.

    Indices below max(1, w) are absent from the sum and give digit 0.
    ``eta_row[k-1]`` is the table of eta_{i,k}.
    """
    if L.end is not None and L.end <= P:
        raise PrecisionError(f"embedding needs u_1..u_{P}; series known below index {L.end}")
    if len(eta_row) < P:
        raise DomainError(f"need {P} eta tables, got {len(eta_row)}")
    if L.is_zero():
        return [0] * P
    start = max(1, L.w)
    return [0 if k < start else eta_row[k - 1][L.coeff(k)] for k in range(1, P + 1)]
