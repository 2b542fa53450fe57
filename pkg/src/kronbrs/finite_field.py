"""Arithmetic in F_p and F_{p^kappa}.

Field elements are plain ints in ``[0, b)``.  The base-p digits of an int are
its coordinates with respect to the power basis ``1, x, ..., x^(kappa-1)`` of
``F_p[x]/(modulus)``; for a prime field the int is the residue itself.  All
operations go through lookup tables built once per :class:`FieldSpec`, so the
tables double as numpy gather indices in the vectorised kernels.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError

MAX_BASE = 16


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


def prime_power(b: int) -> tuple[int, int]:
    """Split ``b = p**kappa``; raise DomainError if b is not a prime power."""
    if b < 2:
        raise DomainError(f"base must be >= 2, got {b}")
    for p in range(2, b + 1):
        if b % p == 0:
            kappa, rest = 0, b
            while rest % p == 0:
                rest //= p
                kappa += 1
            if rest != 1:
                raise DomainError(f"base {b} is not a prime power")
            return p, kappa
    raise AssertionError("unreachable")


# -- polynomials over F_p as coefficient lists, low to high -----------------

def _ptrim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    r = _ptrim(list(a))
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(r) - 1 >= dm:
        f = r[-1] * inv_lead % p
        shift = len(r) - 1 - dm
        for i, c in enumerate(m):
            r[shift + i] = (r[shift + i] - f * c) % p
        _ptrim(r)
    return r


def _pmul(a: Sequence[int], c: Sequence[int], p: int) -> list[int]:
    if not a or not c:
        return []
    out = [0] * (len(a) + len(c) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(c):
                out[i + j] = (out[i + j] + x * y) % p
    return _ptrim(out)


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Brute-force irreducibility: trial division by every monic polynomial
    of degree 1..deg/2."""
    deg = len(modulus) - 1
    if deg < 1 or modulus[-1] % p == 0:
        return False
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _pmod(modulus, list(low) + [1], p):
                return False
    return True


def _first_irreducible(p: int, kappa: int) -> tuple[int, ...]:
    if kappa == 1:
        return (0, 1)
    for code in range(p**kappa):
        low = [(code // p**i) % p for i in range(kappa)]
        cand = low + [1]
        if is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError(f"no irreducible polynomial of degree {kappa} over F_{p}")


def _rank_mod_p(rows: list[list[int]], p: int) -> int:
    rows = [r[:] for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], p - 2, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


@dataclass(frozen=True)
class FieldSpec:
    """The field F_b, b = p**kappa, with a fixed F_p-basis for the digit map.

    ``modulus`` lists coefficients low to high and must be monic and
    irreducible of degree ``kappa``.  ``basis`` holds coordinate vectors of
    beta_1..beta_kappa.  Both default to the obvious choices (first
    irreducible polynomial in enumeration order, power basis).
    """

    p: int
    kappa: int = 1
    modulus: tuple[int, ...] | None = None
    basis: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self) -> None:
        p, kappa = self.p, self.kappa
        if not _is_prime(p):
            raise DomainError(f"p = {p} is not prime")
        if kappa < 1:
            raise DomainError("extension degree must be >= 1")
        b = p**kappa
        if b > MAX_BASE:
            raise DomainError(f"b = {b} exceeds the supported maximum {MAX_BASE}")

        modulus = _first_irreducible(p, kappa) if self.modulus is None else tuple(self.modulus)
        if len(modulus) != kappa + 1 or modulus[-1] != 1:
            raise DomainError(f"modulus {modulus} must be monic of degree {kappa}")
        if any(not 0 <= c < p for c in modulus):
            raise DomainError(f"modulus coefficients must lie in [0, {p})")
        if not is_irreducible(modulus, p):
            raise DomainError(f"modulus {modulus} is reducible over F_{p}")

        if self.basis is None:
            basis = tuple(tuple(int(i == j) for i in range(kappa)) for j in range(kappa))
        else:
            basis = tuple(tuple(int(c) for c in v) for v in self.basis)
        if len(basis) != kappa or any(len(v) != kappa for v in basis):
            raise DomainError("basis must consist of kappa coordinate vectors of length kappa")
        if any(not 0 <= c < p for v in basis for c in v):
            raise DomainError(f"basis coordinates must lie in [0, {p})")
        if _rank_mod_p([list(v) for v in basis], p) != kappa:
            raise DomainError("basis is not F_p-linearly independent")

        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "basis", basis)
        self._build_tables()

    # -- construction helpers ----------------------------------------------

    @classmethod
    def for_base(cls, b: int) -> "FieldSpec":
        p, kappa = prime_power(b)
        return cls(p, kappa)

    @classmethod
    def from_json(cls, data: dict) -> "FieldSpec":
        if "b" in data and "p" not in data:
            return cls.for_base(int(data["b"]))
        basis = data.get("basis")
        return cls(
            int(data["p"]),
            int(data.get("kappa", 1)),
            tuple(data["modulus"]) if data.get("modulus") is not None else None,
            tuple(tuple(v) for v in basis) if basis is not None else None,
        )

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "kappa": self.kappa,
            "modulus": list(self.modulus),
            "basis": [list(v) for v in self.basis],
        }

    def _build_tables(self) -> None:
        p, kappa, b = self.p, self.kappa, self.b
        coords = [self.coords(a) for a in range(b)]
        add = np.zeros((b, b), dtype=np.int64)
        mul = np.zeros((b, b), dtype=np.int64)
        for a in range(b):
            for c in range(b):
                add[a, c] = self.from_coords([(x + y) % p for x, y in zip(coords[a], coords[c])])
                prod = _pmod(_pmul(coords[a], coords[c], p), self.modulus, p)
                mul[a, c] = self.from_coords(prod + [0] * (kappa - len(prod)))
        neg = np.array([self.from_coords([(-x) % p for x in coords[a]]) for a in range(b)])
        sub = add[:, neg]
        inv = np.full(b, -1, dtype=np.int64)
        for a in range(1, b):
            inv[a] = int(np.nonzero(mul[a] == 1)[0][0])

        trace = np.zeros(b, dtype=np.int64)
        for a in range(b):
            t, power = 0, a
            for _ in range(kappa):  # a + a^p + ... + a^(p^(kappa-1))
                t = add[t, power]
                power = self._pow_table(mul, power, p)
            if t >= p:
                raise AssertionError(f"trace of {a} left the prime field: {t}")
            trace[a] = t

        betas = [self.from_coords(list(v)) for v in self.basis]
        omega = np.array(
            [sum(p**j * int(trace[mul[a, beta]]) for j, beta in enumerate(betas)) for a in range(b)],
            dtype=np.int64,
        )
        if sorted(omega.tolist()) != list(range(b)):
            raise DomainError(f"digit map omega is not a bijection for basis {self.basis}")
        omega_inv = np.zeros(b, dtype=np.int64)
        omega_inv[omega] = np.arange(b)

        roots = np.exp(2j * np.pi * np.arange(p) / p)
        # exact values where they are representable
        roots[0] = 1.0
        if p == 2:
            roots[1] = -1.0
        for name, val in dict(
            add=add, mul=mul, neg=neg, sub=sub, inv=inv, trace_table=trace,
            omega_table=omega, omega_inv_table=omega_inv, roots=roots,
            chi=roots[trace], trace_pair=trace[mul],
        ).items():
            if isinstance(val, np.ndarray):
                val.setflags(write=False)
            object.__setattr__(self, name, val)

    @staticmethod
    def _pow_table(mul: np.ndarray, a: int, e: int) -> int:
        r = 1
        for _ in range(e):
            r = int(mul[r, a])
        return r

    # -- basic views ---------------------------------------------------------

    @property
    def b(self) -> int:
        return self.p**self.kappa

    @property
    def elements(self) -> range:
        return range(self.b)

    def coords(self, a: int) -> list[int]:
        return [(a // self.p**i) % self.p for i in range(self.kappa)]

    def from_coords(self, coords: Sequence[int]) -> int:
        if len(coords) > self.kappa:
            raise DomainError(f"too many coordinates for F_{self.b}: {list(coords)}")
        return sum((int(c) % self.p) * self.p**i for i, c in enumerate(coords))

    def element(self, value) -> int:
        """Accept an int or a coordinate list; return the int encoding."""
        if isinstance(value, (list, tuple)):
            return self.from_coords(value)
        value = int(value)
        if not 0 <= value < self.b:
            raise DomainError(f"{value} is not an element of F_{self.b}")
        return value

    # -- arithmetic ----------------------------------------------------------

    def add_(self, a: int, c: int) -> int:
        return int(self.add[a, c])

    def sub_(self, a: int, c: int) -> int:
        return int(self.sub[a, c])

    def mul_(self, a: int, c: int) -> int:
        return int(self.mul[a, c])

    def neg_(self, a: int) -> int:
        return int(self.neg[a])

    def inv_(self, a: int) -> int:
        if a == 0:
            raise DomainError("inverse of zero")
        return int(self.inv[a])

    def arith(self, a: int, c: int | None, op: str) -> int:
        if op == "add":
            return self.add_(a, c)
        if op == "sub":
            return self.sub_(a, c)
        if op == "mul":
            return self.mul_(a, c)
        if op == "inv":
            return self.inv_(a)
        raise DomainError(f"unknown field operation {op!r}")

    def dot(self, u: Sequence[int], v: Sequence[int]) -> int:
        acc = 0
        for x, y in zip(u, v):
            acc = int(self.add[acc, self.mul[x, y]])
        return acc

    # -- trace, character, digit map ----------------------------------------

    def trace(self, a: int) -> int:
        """Absolute trace F_b -> F_p, returned as an int in [0, p)."""
        return int(self.trace_table[a])

    def char(self, a: int) -> complex:
        """Additive character E(a) = exp(2 pi i Tr(a) / p)."""
        return complex(self.chi[a])

    def orthogonality(self, alpha: int) -> complex:
        """(1/b) * sum over beta of E(alpha * beta); equals 1 iff alpha == 0."""
        return complex(self.chi[self.mul[alpha]].sum() / self.b)

    def omega(self, a: int) -> int:
        return int(self.omega_table[a])

    def omega_inv(self, d: int) -> int:
        if not 0 <= d < self.b:
            raise DomainError(f"digit {d} out of range for base {self.b}")
        return int(self.omega_inv_table[d])


def _check_perm(table: Sequence[int], b: int, what: str) -> tuple[int, ...]:
    table = tuple(int(x) for x in table)
    if sorted(table) != list(range(b)):
        raise DomainError(f"{what} is not a permutation of [0, {b}): {table}")
    return table


@dataclass(frozen=True)
class BijectionFamily:
    """The maps psi_r: Z_b -> F_b and eta_{i,j}: F_b -> Z_b.

    Tables are indexed by their argument.  ``psi_tables[r]`` is psi_r and
    ``eta_tables[i-1][j-1]`` is eta_{i,j}; indices past the end of the given
    tables fall back to the defaults ``psi_r = omega^-1`` and
    ``eta_{i,j} = omega``, which make every index relabeling the identity.
    """

    field: FieldSpec
    psi_tables: tuple[tuple[int, ...], ...] = ()
    eta_tables: tuple[tuple[tuple[int, ...], ...], ...] = ()

    def __post_init__(self) -> None:
        b = self.field.b
        psi = tuple(_check_perm(t, b, f"psi_{r}") for r, t in enumerate(self.psi_tables))
        for r, t in enumerate(psi):
            if t[0] != 0:
                raise DomainError(f"psi_{r}(0) must be 0, got {t[0]}")
        eta = tuple(
            tuple(_check_perm(t, b, f"eta_{i + 1},{j + 1}") for j, t in enumerate(row))
            for i, row in enumerate(self.eta_tables)
        )
        object.__setattr__(self, "psi_tables", psi)
        object.__setattr__(self, "eta_tables", eta)

    @classmethod
    def identity(cls, field: FieldSpec) -> "BijectionFamily":
        return cls(field)

    @classmethod
    def from_json(cls, field: FieldSpec, data) -> "BijectionFamily":
        if data in (None, "identity"):
            return cls(field)
        return cls(
            field,
            tuple(tuple(t) for t in data.get("psi", [])),
            tuple(tuple(tuple(t) for t in row) for row in data.get("eta", [])),
        )

    def to_json(self):
        if not self.psi_tables and not self.eta_tables:
            return "identity"
        return {
            "psi": [list(t) for t in self.psi_tables],
            "eta": [[list(t) for t in row] for row in self.eta_tables],
        }

    def psi(self, r: int) -> tuple[int, ...]:
        if r < len(self.psi_tables):
            return self.psi_tables[r]
        return tuple(self.field.omega_inv_table.tolist())

    def psi_inv(self, r: int) -> tuple[int, ...]:
        t = self.psi(r)
        out = [0] * len(t)
        for d, a in enumerate(t):
            out[a] = d
        return tuple(out)

    def eta(self, i: int, j: int) -> tuple[int, ...]:
        if i - 1 < len(self.eta_tables) and j - 1 < len(self.eta_tables[i - 1]):
            return self.eta_tables[i - 1][j - 1]
        return tuple(self.field.omega_table.tolist())

    def eta_inv(self, i: int, j: int) -> tuple[int, ...]:
        t = self.eta(i, j)
        out = [0] * len(t)
        for a, d in enumerate(t):
            out[d] = a
        return tuple(out)

    def psi_array(self, count: int) -> np.ndarray:
        """psi_0..psi_{count-1} stacked as a (count, b) gather table."""
        return np.array([self.psi(r) for r in range(count)], dtype=np.int64).reshape(count, self.field.b)

    def eta_array(self, s: int, depth: int) -> np.ndarray:
        """eta_{i,j} for i <= s, j <= depth as an (s, depth, b) gather table."""
        return np.array(
            [[self.eta(i, j) for j in range(1, depth + 1)] for i in range(1, s + 1)], dtype=np.int64
        ).reshape(s, depth, self.field.b)

    @property
    def eta_fixes_zero(self) -> bool:
        return all(t[0] == 0 for row in self.eta_tables for t in row) and self.field.omega(0) == 0

    @property
    def is_identity(self) -> bool:
        """True when every psi and eta acts as d -> d on integer labels."""
        ident = tuple(range(self.field.b))
        return (
            tuple(self.field.omega_table.tolist()) == ident
            and all(t == ident for t in self.psi_tables)
            and all(t == ident for row in self.eta_tables for t in row)
        )
