"""Digital Kronecker sequences, digital sequences from generating matrices,
and exact operations on b-adic points.

Points are digit vectors and never floats.  The Kronecker route multiplies
Laurent series per index; the matrix route (:class:`DigitalSequence`) builds
whole index ranges at once with numpy gathers and is the workhorse for
scans.  The two agree digit for digit when the matrices are the Hankel
matrices of the series, which the test-suite checks exhaustively.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DimensionError, DomainError
from .finite_field import BijectionFamily, FieldSpec
from .laurent import LaurentSeries, base_digits, embed_real, mul_poly_laurent, poly_from_index


def digits(n: int, b: int) -> list[int]:
    """Digit expansion a_0, a_1, ... of n in base b; [] for n = 0."""
    return base_digits(n, b)


# -- points ------------------------------------------------------------------

@dataclass(frozen=True)
class BadicPoint:
    """An s-tuple of base-b digit vectors x_1 x_2 ... x_P, one per coordinate."""

    b: int
    coords: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        coords = tuple(tuple(int(d) for d in c) for c in self.coords)
        if len({len(c) for c in coords}) > 1:
            raise DimensionError("all coordinates of a point share one precision")
        if any(not 0 <= d < self.b for c in coords for d in c):
            raise DomainError(f"digits must lie in [0, {self.b})")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def zero(cls, b: int, s: int, P: int) -> "BadicPoint":
        return cls(b, tuple((0,) * P for _ in range(s)))

    @classmethod
    def from_values(cls, values: Sequence[Fraction], b: int, P: int) -> "BadicPoint":
        """First P digits of each value in [0, 1)."""
        coords = []
        for v in values:
            v = Fraction(v)
            if not 0 <= v < 1:
                raise DomainError(f"{v} is not in [0, 1)")
            ds = []
            for _ in range(P):
                v *= b
                d = int(v)
                ds.append(d)
                v -= d
            coords.append(tuple(ds))
        return cls(b, tuple(coords))

    @property
    def s(self) -> int:
        return len(self.coords)

    @property
    def precision(self) -> int:
        return len(self.coords[0]) if self.coords else 0

    def values(self) -> tuple[Fraction, ...]:
        """Exact value of the stored digits, Σ x_j b^-j per coordinate."""
        den = self.b**self.precision
        return tuple(Fraction(digits_to_int(c, self.b), den) for c in self.coords)


def digits_to_int(ds: Sequence[int], b: int) -> int:
    """Read x_1 ... x_P as the integer Σ x_j b^(P-j)."""
    out = 0
    for d in ds:
        out = out * b + int(d)
    return out


def truncate(x: BadicPoint, m: int) -> BadicPoint:
    """[x]_m coordinatewise: digits beyond position m set to zero."""
    if m > x.precision:
        raise DimensionError(f"cannot truncate a {x.precision}-digit point at {m}")
    m = max(m, 0)
    return BadicPoint(x.b, tuple(c[:m] + (0,) * (x.precision - m) for c in x.coords))


def _check_pair(x: BadicPoint, y: BadicPoint) -> None:
    if x.b != y.b or x.s != y.s or x.precision != y.precision:
        raise DimensionError("digital shift needs points of equal base, dimension and precision")


def dshift(x: BadicPoint, y: BadicPoint) -> BadicPoint:
    """x ⊕ y: digitwise addition mod b without carry."""
    _check_pair(x, y)
    b = x.b
    return BadicPoint(b, tuple(tuple((p + q) % b for p, q in zip(cx, cy)) for cx, cy in zip(x.coords, y.coords)))


def dsub(x: BadicPoint, y: BadicPoint) -> BadicPoint:
    """x ⊖ y: digitwise subtraction mod b."""
    _check_pair(x, y)
    b = x.b
    return BadicPoint(b, tuple(tuple((p - q) % b for p, q in zip(cx, cy)) for cx, cy in zip(x.coords, y.coords)))


def index_shift(n1: int, n2: int, m: int, b: int) -> int:
    """n1 ⊕ n2 for indices in [0, b^m): digitwise addition mod b of their
    base-b expansions."""
    lim = b**m
    if not (0 <= n1 < lim and 0 <= n2 < lim):
        raise DomainError(f"indices must lie in [0, {lim})")
    out, scale = 0, 1
    for _ in range(m):
        out += ((n1 % b + n2 % b) % b) * scale
        n1 //= b
        n2 //= b
        scale *= b
    return out


def bnorm(ds: Sequence[int], b: int) -> Fraction:
    """‖x‖_b = b^(-k-1), k the number of leading zero digits; 0 for all zeros."""
    for k, d in enumerate(ds):
        if d:
            return Fraction(1, b ** (k + 1))
    return Fraction(0)


def point_norm(x: BadicPoint) -> Fraction:
    out = Fraction(1)
    for c in x.coords:
        out *= bnorm(c, x.b)
    return out


def int_norm(n: int, b: int) -> int:
    """‖n‖_b = b^k for n in [b^k, b^(k+1)); 0 for n = 0."""
    if n < 0:
        raise DomainError("negative index")
    return b ** (len(base_digits(n, b)) - 1) if n else 0


# -- generating matrices -------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GeneratingMatrix:
    """Entries c_{j,r} over F_b; row j = 1..rows is stored at array row j-1."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        a = np.array(self.entries, dtype=np.int64)
        if a.ndim != 2:
            raise DimensionError("a generating matrix is two-dimensional")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def tolist(self) -> list[list[int]]:
        return self.entries.tolist()

    def __eq__(self, other) -> bool:
        return isinstance(other, GeneratingMatrix) and np.array_equal(self.entries, other.entries)


def hankel_matrix(L: LaurentSeries, J: int, R: int) -> GeneratingMatrix:
    """c_{j,r} = u_{j+r}: the coefficient of z^-j in z^r * L."""
    u = L.coeff_range(1, J + R)  # u_1 .. u_{J+R-1}
    return GeneratingMatrix(np.array([[u[j + r - 1] for r in range(R)] for j in range(1, J + 1)], dtype=np.int64))


@dataclass(frozen=True, eq=False)
class DigitalSequence:
    """Digital sequence over F_b given by s generating matrices."""

    field: FieldSpec
    matrices: tuple[GeneratingMatrix, ...]
    bijections: BijectionFamily

    @property
    def s(self) -> int:
        return len(self.matrices)

    @property
    def b(self) -> int:
        return self.field.b

    @property
    def max_rows(self) -> int:
        return min(C.rows for C in self.matrices)

    @property
    def max_cols(self) -> int:
        return min(C.cols for C in self.matrices)

    def y_block(self, start: int, count: int, depth: int) -> np.ndarray:
        """Field digits y^{(i)}_{n,j} for n in [start, start+count), j <= depth.

        Shape (count, s, depth).
        """
        F, b = self.field, self.b
        if depth > self.max_rows:
            raise DimensionError(f"matrices have {self.max_rows} rows, {depth} digits requested")
        if count <= 0:
            return np.zeros((0, self.s, depth), dtype=np.int64)
        ncols = len(base_digits(start + count - 1, b))
        if ncols > self.max_cols:
            raise DimensionError(
                f"index {start + count - 1} needs {ncols} matrix columns, matrices have {self.max_cols}"
            )
        ns = np.arange(start, start + count, dtype=object if start + count > 2**62 else np.int64)
        psi = self.bijections.psi_array(ncols)
        acc = np.zeros((count, self.s, depth), dtype=np.int64)
        for r in range(ncols):
            a_r = np.asarray((ns // b**r) % b, dtype=np.int64)
            f = psi[r][a_r]
            if not f.any():
                continue
            for i, C in enumerate(self.matrices):
                col = C.entries[:depth, r]
                if col.any():
                    acc[:, i, :] = F.add[acc[:, i, :], F.mul[f[:, None], col[None, :]]]
        return acc

    def x_block(self, start: int, count: int, depth: int) -> np.ndarray:
        """Point digits x^{(i)}_{n,j} = eta_{i,j}(y^{(i)}_{n,j}); shape (count, s, depth)."""
        y = self.y_block(start, count, depth)
        eta = self.bijections.eta_array(self.s, depth)
        out = np.empty_like(y)
        for i in range(self.s):
            for j in range(depth):
                out[:, i, j] = eta[i, j][y[:, i, j]]
        return out

    def point(self, n: int, depth: int) -> BadicPoint:
        return BadicPoint(self.b, tuple(tuple(row) for row in self.x_block(n, 1, depth)[0].tolist()))

    def points(self, start: int, count: int, depth: int) -> list[BadicPoint]:
        block = self.x_block(start, count, depth)
        return [BadicPoint(self.b, tuple(tuple(r) for r in p)) for p in block.tolist()]


def digital_point(
    n: int,
    matrices: Sequence[GeneratingMatrix],
    P: int,
    bijections: BijectionFamily,
) -> BadicPoint:
    """Digit j of coordinate i is eta_{i,j}(Σ_r psi_r(a_r(n)) c^{(i)}_{j,r})."""
    seq = DigitalSequence(bijections.field, tuple(matrices), bijections)
    return seq.point(n, P)


# -- Kronecker systems ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class KroneckerSystem:
    """s Laurent series L_1..L_s over F_b with their bijection family."""

    field: FieldSpec
    series: tuple[LaurentSeries, ...]
    bijections: BijectionFamily

    @property
    def s(self) -> int:
        return len(self.series)

    @property
    def b(self) -> int:
        return self.field.b

    def point(self, n: int, P: int) -> BadicPoint:
        return kronecker_point(n, self, P)

    def hankel(self, J: int, R: int) -> tuple[GeneratingMatrix, ...]:
        return tuple(hankel_matrix(L, J, R) for L in self.series)

    def digital(self, J: int, R: int) -> DigitalSequence:
        """The same sequence through its Hankel generating matrices."""
        return DigitalSequence(self.field, self.hankel(J, R), self.bijections)


def kronecker_point(n: int, system: KroneckerSystem, P: int) -> BadicPoint:
    """l_n^{(i)} = eta^{(i)}(n(z) L_i(z)), first P digits per coordinate."""
    F, bij = system.field, system.bijections
    q = poly_from_index(n, bij)
    coords = []
    for i, L in enumerate(system.series, start=1):
        prod = mul_poly_laurent(F, q, L, upto=P + 1)
        coords.append(tuple(embed_real(prod, [bij.eta(i, j) for j in range(1, P + 1)], P)))
    return BadicPoint(system.b, tuple(coords))
