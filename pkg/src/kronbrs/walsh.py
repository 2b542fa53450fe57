"""Character analysis of a digital sequence on one block of b^m indices.

Everything here works on a :class:`WalshContext`: a digital sequence, a block
size m and a digit depth tau.  Index vectors k live in G_m, the space of s
spatial blocks of length tau followed by one time block of length m, and are
enumerated by an integer label whose base-b digits are the flat entries of
k (position 0 is k^(1)_1, the time block comes last).

Complex sums are taken over fixed-size chunks of k labels and reduced in
label order, so results do not depend on the thread count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Callable, Sequence

import numpy as np

from .errors import (
    DimensionError,
    DomainError,
    EndConditionFailed,
    EnumerationTooLarge,
    InfeasibleError,
    InternalCheckError,
    SearchFailed,
    SpacingError,
)
from .finite_field import BijectionFamily, FieldSpec
from .gf_linalg import matvec, nullspace, span
from .laurent import base_digits
from .sequences import DigitalSequence

G_CAP = 2**20
LAMBDA_CAP = 2**16
CHUNK = 4096
SIGMA_TOL = 1e-6


# -- index vectors ------------------------------------------------------------

@dataclass(frozen=True)
class IndexVector:
    """s spatial blocks of length tau and one time block of length m."""

    spatial: tuple[tuple[int, ...], ...]
    time: tuple[int, ...]

    def __post_init__(self) -> None:
        sp = tuple(tuple(int(x) for x in blk) for blk in self.spatial)
        if len({len(blk) for blk in sp}) > 1:
            raise DimensionError("spatial blocks must share one length")
        object.__setattr__(self, "spatial", sp)
        object.__setattr__(self, "time", tuple(int(x) for x in self.time))

    @classmethod
    def from_flat(cls, flat: Sequence[int], s: int, tau: int, m: int) -> "IndexVector":
        flat = [int(x) for x in flat]
        if len(flat) != s * tau + m:
            raise DimensionError(f"flat vector has length {len(flat)}, expected {s * tau + m}")
        return cls(tuple(tuple(flat[i * tau : (i + 1) * tau]) for i in range(s)), tuple(flat[s * tau :]))

    @property
    def s(self) -> int:
        return len(self.spatial)

    @property
    def tau(self) -> int:
        return len(self.spatial[0]) if self.spatial else 0

    @property
    def m(self) -> int:
        return len(self.time)

    def flat(self) -> np.ndarray:
        return np.array([x for blk in self.spatial for x in blk] + list(self.time), dtype=np.int64)

    def blocks(self) -> tuple[tuple[int, ...], ...]:
        return self.spatial + (self.time,)

    def is_zero(self) -> bool:
        return not any(self.flat())

    def scaled(self, F: FieldSpec, mu: int) -> "IndexVector":
        return IndexVector.from_flat(F.mul[mu, self.flat()].tolist(), self.s, self.tau, self.m)

    def label(self, b: int) -> int:
        return sum(int(x) * b**t for t, x in enumerate(self.flat()))

    def to_json(self) -> dict:
        return {"spatial": [list(blk) for blk in self.spatial], "time": list(self.time)}


# The relabeled digit vector of an index has the same block layout.
ExtendedDigitVector = IndexVector


def v_of(block: Sequence[int]) -> int:
    """Index (1-based) of the last nonzero entry; 0 for the zero block."""
    for j in range(len(block), 0, -1):
        if block[j - 1]:
            return j
    return 0


# -- relabeling -------------------------------------------------------------

def n_tilde(n: int, bijections: BijectionFamily) -> int:
    """ñ = Σ_r ω(ψ_r(a_r(n))) b^r."""
    F = bijections.field
    b = F.b
    return sum(F.omega(bijections.psi(r)[a]) * b**r for r, a in enumerate(base_digits(n, b)))


def label_add(F: FieldSpec, l1: int, l2: int) -> int:
    """Digitwise sum of labels through ω: the digit of the result is
    ω(ω^-1(d1) + ω^-1(d2)).  For prime b this is digitwise addition mod b."""
    b = F.b
    out, scale = 0, 1
    while l1 or l2:
        d1, d2 = l1 % b, l2 % b
        out += F.omega(F.add_(F.omega_inv(d1), F.omega_inv(d2))) * scale
        l1 //= b
        l2 //= b
        scale *= b
    return out


@dataclass(frozen=True, eq=False)
class WalshContext:
    seq: DigitalSequence
    m: int
    tau: int

    def __post_init__(self) -> None:
        if self.tau < 1:
            raise DomainError(f"tau = {self.tau} < 1")
        if self.m < 1:
            raise DomainError(f"m = {self.m} < 1")
        if self.seq.max_rows < self.tau:
            raise DimensionError(f"matrices have {self.seq.max_rows} rows, tau = {self.tau}")
        if self.seq.max_cols < self.m:
            raise DimensionError(f"matrices have {self.seq.max_cols} columns, m = {self.m}")

    @property
    def F(self) -> FieldSpec:
        return self.seq.field

    @property
    def b(self) -> int:
        return self.seq.b

    @property
    def s(self) -> int:
        return self.seq.s

    @property
    def dim(self) -> int:
        return self.s * self.tau + self.m

    @property
    def size_G(self) -> int:
        return self.b**self.dim

    def u_tilde(self, label: int) -> IndexVector:
        """Spatial Σ_r ω^-1(a_r(label)) c_{j,r}; time ω^-1(a_{m-j}(label))."""
        F, b = self.F, self.b
        ds = base_digits(label, b)
        if len(ds) > self.seq.max_cols:
            raise DimensionError(f"label {label} needs {len(ds)} matrix columns")
        f = [F.omega_inv(a) for a in ds]
        spatial = []
        for C in self.seq.matrices:
            acc = np.zeros(self.tau, dtype=np.int64)
            for r, fr in enumerate(f):
                if fr:
                    acc = F.add[acc, F.mul[fr, C.entries[: self.tau, r]]]
            spatial.append(tuple(acc.tolist()))
        time = tuple(F.omega_inv(ds[self.m - j]) if self.m - j < len(ds) else 0 for j in range(1, self.m + 1))
        return IndexVector(tuple(spatial), time)

    def extended_u(self, n: int) -> IndexVector:
        return self.u_tilde(n_tilde(n, self.seq.bijections))

    def u_block(self, start: int, count: int) -> np.ndarray:
        """Flat extended digit vectors of n in [start, start + count); (count, dim)."""
        b, m = self.b, self.m
        y = self.seq.y_block(start, count, self.tau).reshape(count, self.s * self.tau)
        ns = np.arange(start, start + count, dtype=object if start + count > 2**62 else np.int64)
        psi = self.seq.bijections.psi_array(m)
        time = np.empty((count, m), dtype=np.int64)
        for j in range(1, m + 1):
            r = m - j
            a = np.asarray((ns // b**r) % b, dtype=np.int64)
            time[:, j - 1] = psi[r][a]
        return np.hstack([y, time])

    def kvectors(self, start: int, stop: int) -> np.ndarray:
        """Flat k vectors for labels in [start, stop)."""
        idx = np.arange(start, stop, dtype=np.int64)
        out = np.empty((stop - start, self.dim), dtype=np.int64)
        for t in range(self.dim):
            out[:, t] = idx % self.b
            idx = idx // self.b
        return out


# -- Walsh coefficients -------------------------------------------------------

def _walsh_closed(F: FieldSpec, k: Sequence[int], gd: Sequence[int], depth: int, einv) -> complex:
    """b^-v E(-Σ_{j<v} k_j e_j(γ_j)) [Σ_{c<γ_v} E(-k_v e_v(c)) + E(-k_v e_v(γ_v)) {b^v [γ]}].

    ``einv[j-1]`` maps digit -> field element at position j.
    """
    b = F.b
    v = v_of(k)
    if v == 0:
        return complex(sum(gd[j - 1] * float(b) ** -j for j in range(1, depth + 1)))
    phase = 0
    for j in range(1, v):
        phase = F.add_(phase, F.mul_(k[j - 1], einv[j - 1][gd[j - 1]]))
    kv, ev, gv = k[v - 1], einv[v - 1], gd[v - 1]
    inner = sum(F.char(F.neg_(F.mul_(kv, ev[c]))) for c in range(gv))
    frac = sum(gd[j - 1] * float(b) ** (v - j) for j in range(v + 1, depth + 1))
    tail = F.char(F.neg_(F.mul_(kv, ev[gv]))) * frac
    return float(b) ** -v * F.char(F.neg_(phase)) * (inner + tail)


def _gamma_digits(gamma, depth: int):
    """Digits γ_1..γ_depth, or None for the whole interval."""
    if gamma is None or getattr(gamma, "whole", False):
        return None
    if hasattr(gamma, "digits"):
        return list(gamma.digits(depth))
    gd = [int(x) for x in gamma][:depth]
    return gd + [0] * (depth - len(gd))


def walsh_coeff_space(F: FieldSpec, k: Sequence[int], gamma, tau: int, eta_inv: Sequence[Sequence[int]]) -> complex:
    """Coefficient of E(k·u) in the indicator of η(u) < [γ]_tau, u in F_b^tau."""
    gd = _gamma_digits(gamma, tau)
    if gd is None:
        return 1.0 + 0j if not any(k) else 0j
    return _walsh_closed(F, list(k), gd, tau, eta_inv)


def walsh_coeff_space_oracle(F: FieldSpec, k: Sequence[int], gamma, tau: int, eta: Sequence[Sequence[int]]) -> complex:
    """b^-tau Σ_u 1[η(u) <lex γ_1..γ_tau] E(-k·u), by enumeration of F_b^tau."""
    b = F.b
    gd = _gamma_digits(gamma, tau)
    total = 0j
    for lab in range(b**tau):
        u = [(lab // b**j) % b for j in range(tau)]
        x = [eta[j][u[j]] for j in range(tau)]
        if gd is None or x < gd:
            total += F.char(F.neg_(F.dot(k, u)))
    return total / b**tau


def time_gamma_digits(N: int, m: int, b: int) -> list[int]:
    """Digits of N / b^m: γ_j = a_{m-j}(N)."""
    ds = base_digits(N, b)
    return [ds[m - j] if m - j < len(ds) else 0 for j in range(1, m + 1)]


def _time_maps(psi: Sequence[Sequence[int]], m: int) -> list[Sequence[int]]:
    """Digit -> field map at time position j is ψ_{m-j}."""
    return [psi[m - j] for j in range(1, m + 1)]


def walsh_coeff_time(F: FieldSpec, k: Sequence[int], N: int, m: int, psi: Sequence[Sequence[int]]) -> complex:
    """Coefficient for the time indicator {n / b^m} < N / b^m, N in [1, b^m].

    ``psi[r]`` is ψ_r.  Position j of the time block carries the digit
    a_{m-j}(n) through ψ_{m-j}.
    """
    b = F.b
    if not 0 <= N <= b**m:
        raise DomainError(f"N = {N} outside [0, {b**m}]")
    if N == b**m:
        return 1.0 + 0j if not any(k) else 0j
    if not any(k):
        return complex(N / b**m)
    return _walsh_closed(F, list(k), time_gamma_digits(N, m, b), m, _time_maps(psi, m))


def walsh_coeff_time_oracle(F: FieldSpec, k: Sequence[int], N: int, m: int, psi: Sequence[Sequence[int]]) -> complex:
    """b^-m Σ_u 1[x(u) < N / b^m] E(-k·u), where digit j of x(u) is ψ_{m-j}^-1(u_j)."""
    b = F.b
    inv = []
    for j in range(1, m + 1):
        t = psi[m - j]
        out = [0] * b
        for d, a in enumerate(t):
            out[a] = d
        inv.append(out)
    total = 0j
    for lab in range(b**m):
        u = [(lab // b**j) % b for j in range(m)]
        x = sum(inv[j - 1][u[j - 1]] * b ** (m - j) for j in range(1, m + 1))
        if x < N:
            total += F.char(F.neg_(F.dot(k, u)))
    return total / b**m


def space_table(F: FieldSpec, gamma, tau: int, eta_inv) -> np.ndarray:
    """Coefficients for all b^tau blocks, indexed by Σ k_j b^(j-1)."""
    b = F.b
    out = np.empty(b**tau, dtype=complex)
    for lab in range(b**tau):
        k = [(lab // b**j) % b for j in range(tau)]
        out[lab] = walsh_coeff_space(F, k, gamma, tau, eta_inv)
    return out


def time_table(F: FieldSpec, N: int, m: int, psi) -> np.ndarray:
    b = F.b
    out = np.empty(b**m, dtype=complex)
    for lab in range(b**m):
        k = [(lab // b**j) % b for j in range(m)]
        out[lab] = walsh_coeff_time(F, k, N, m, psi)
    return out


@dataclass(frozen=True, eq=False)
class CoefficientTables:
    """Per-block coefficient tables for one box; \\hat1(k) is their product."""

    ctx: WalshContext
    spatial: tuple[np.ndarray, ...]
    time: np.ndarray
    N: int

    @classmethod
    def build(cls, ctx: WalshContext, gammas, N: int) -> "CoefficientTables":
        F, bij = ctx.F, ctx.seq.bijections
        if len(gammas) != ctx.s:
            raise DimensionError(f"{len(gammas)} gammas for dimension {ctx.s}")
        sp = tuple(
            space_table(F, g, ctx.tau, [bij.eta_inv(i, j) for j in range(1, ctx.tau + 1)])
            for i, g in enumerate(gammas, start=1)
        )
        psi = [bij.psi(r) for r in range(ctx.m)]
        return cls(ctx, sp, time_table(F, N, ctx.m, psi), N)

    def hat(self, labels: np.ndarray) -> np.ndarray:
        """\\hat1(k) for an array of k labels."""
        b, tau = self.ctx.b, self.ctx.tau
        out = np.ones(labels.shape, dtype=complex)
        for i, tab in enumerate(self.spatial):
            out *= tab[(labels // b ** (i * tau)) % b**tau]
        out *= self.time[labels // b ** (self.ctx.s * tau)]
        return out

    def hat_vector(self, k: IndexVector) -> complex:
        return complex(self.hat(np.array([k.label(self.ctx.b)], dtype=np.int64))[0])

    @property
    def zero_value(self) -> complex:
        return complex(self.hat(np.zeros(1, dtype=np.int64))[0])


def walsh_product(ctx: WalshContext, k: IndexVector, gammas, N: int) -> complex:
    """Π_{i=1}^{s+1} \\hat1^{(i)}(k^{(i)})."""
    F, bij = ctx.F, ctx.seq.bijections
    out = 1.0 + 0j
    for i, (blk, g) in enumerate(zip(k.spatial, gammas), start=1):
        out *= walsh_coeff_space(F, blk, g, ctx.tau, [bij.eta_inv(i, j) for j in range(1, ctx.tau + 1)])
    psi = [bij.psi(r) for r in range(ctx.m)]
    return out * walsh_coeff_time(F, k.time, N, ctx.m, psi)


# -- character sums -----------------------------------------------------------

def _char_sums(F: FieldSpec, K: np.ndarray, U: np.ndarray) -> np.ndarray:
    """Σ_n E(k·u_n) for each row k of K; U holds the u_n as rows."""
    p = F.p
    out = np.empty(K.shape[0], dtype=complex)
    step = max(1, (1 << 20) // max(1, U.shape[0]))
    for lo in range(0, K.shape[0], step):
        Kc = K[lo : lo + step]
        acc = np.zeros((Kc.shape[0], U.shape[0]), dtype=np.int64)
        for t in range(K.shape[1]):
            acc += F.trace_pair[Kc[:, t][:, None], U[:, t][None, :]]
        out[lo : lo + step] = F.roots[acc % p].sum(axis=1)
    return out


def _phases(F: FieldSpec, K: np.ndarray, w: np.ndarray) -> np.ndarray:
    """E(k·w) for each row k of K."""
    acc = np.zeros(K.shape[0], dtype=np.int64)
    for t in range(K.shape[1]):
        acc += F.trace_pair[K[:, t], w[t]]
    return F.roots[acc % F.p]


def _chunked(total: int, fn: Callable[[int, int], complex], threads: int) -> complex:
    """Σ fn(lo, hi) over fixed chunks of [0, total), reduced in order."""
    bounds = [(lo, min(total, lo + CHUNK)) for lo in range(0, total, CHUNK)]
    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda ab: fn(*ab), bounds))
    else:
        parts = [fn(lo, hi) for lo, hi in bounds]
    return complex(np.sum(np.array(parts, dtype=complex)))


def char_sum_sigma(ctx: WalshContext, k: IndexVector | np.ndarray, check: bool = True) -> complex:
    """σ(k) = Σ_{n<b^m} E(k·ũ_n); must be 0 or b^m."""
    flat = k.flat() if isinstance(k, IndexVector) else np.asarray(k, dtype=np.int64)
    U = ctx.u_block(0, ctx.b**ctx.m)
    val = complex(_char_sums(ctx.F, flat[None, :], U)[0])
    if check:
        bm = ctx.b**ctx.m
        if abs(val) > SIGMA_TOL and abs(val - bm) > SIGMA_TOL:
            raise InternalCheckError(f"character sum {val} is neither 0 nor {bm}")
    return val


def delta_direct(ctx: WalshContext, A: int, N: int, gammas) -> Fraction:
    """Δ([0, [γ]_tau), (x_n)_{n=b^m A}^{b^m A+N-1}) by counting."""
    b, tau = ctx.b, ctx.tau
    if not 1 <= N <= b**ctx.m:
        raise DomainError(f"N = {N} outside [1, {b**ctx.m}]")
    block = ctx.seq.x_block(b**ctx.m * A, N, tau)
    inside = np.ones(N, dtype=bool)
    vol = Fraction(1)
    for i, g in enumerate(gammas):
        gd = _gamma_digits(g, tau)
        if gd is None:
            continue
        vol *= Fraction(sum(d * b ** (tau - j) for j, d in enumerate(gd, start=1)), b**tau)
        diff = block[:, i, :] - np.array(gd, dtype=np.int64)[None, :]
        nz = diff != 0
        first = np.argmax(nz, axis=1)
        inside &= nz.any(axis=1) & (diff[np.arange(N), first] < 0)
    return int(inside.sum()) - N * vol


def delta_via_walsh(
    ctx: WalshContext,
    A: int,
    N: int,
    gammas,
    form: str = "lemma2",
    threads: int = 1,
    cap: int = G_CAP,
) -> complex:
    """Discrepancy of the truncated box on block A through the Walsh expansion.

    form "lemma2": Σ_{n in block} Σ_{k in G_m} \\hat1(k) E(k·ũ_n) - N Π[γ]_tau.
    form "lemma3": Σ_{k in G_m*} \\hat1(k) E(k·ũ_{b^m A}) Σ_{n<b^m} E(k·ũ_n).
    form "dual":   b^m Σ_{k in D_m*} \\hat1(k) E(k·ũ_{b^m A}).
    """
    if ctx.size_G > cap:
        raise EnumerationTooLarge(f"|G_m| = {ctx.size_G} exceeds the cap {cap}")
    F, b, bm = ctx.F, ctx.b, ctx.b**ctx.m
    tabs = CoefficientTables.build(ctx, gammas, N)
    if form == "lemma2":
        U = ctx.u_block(bm * A, bm)

        def part(lo, hi):
            labels = np.arange(lo, hi, dtype=np.int64)
            return complex(np.sum(tabs.hat(labels) * _char_sums(F, ctx.kvectors(lo, hi), U)))

        # the k = 0 term carries N Π[γ]_tau, which the box volume cancels
        return _chunked(ctx.size_G, part, threads) - bm * tabs.zero_value
    w = ctx.u_block(bm * A, 1)[0]
    if form == "lemma3":
        U = ctx.u_block(0, bm)

        def part(lo, hi):
            lo = max(lo, 1)
            if lo >= hi:
                return 0j
            labels = np.arange(lo, hi, dtype=np.int64)
            K = ctx.kvectors(lo, hi)
            return complex(np.sum(tabs.hat(labels) * _phases(F, K, w) * _char_sums(F, K, U)))

        return _chunked(ctx.size_G, part, threads)
    if form == "dual":
        members = dual_set(ctx).members()[1:]
        if members.shape[0] == 0:
            return 0j
        labels = members @ (b ** np.arange(ctx.dim, dtype=np.int64))
        return complex(bm * np.sum(tabs.hat(labels) * _phases(F, members, w)))
    raise DomainError(f"unknown form {form!r}")


# -- dual set -----------------------------------------------------------------

def dual_system(ctx: WalshContext) -> np.ndarray:
    """Row r: Σ_i Σ_j k^(i)_j c^(i)_{j,r} + k^(s+1)_{m-r}, as an (m, dim) matrix."""
    m, tau = ctx.m, ctx.tau
    M = np.zeros((m, ctx.dim), dtype=np.int64)
    for r in range(m):
        for i, C in enumerate(ctx.seq.matrices):
            M[r, i * tau : (i + 1) * tau] = C.entries[:tau, r]
        M[r, ctx.s * tau + (m - r) - 1] = 1
    return M


@dataclass(frozen=True, eq=False)
class DualBasis:
    field: FieldSpec
    s: int
    tau: int
    m: int
    basis: np.ndarray
    system: np.ndarray

    @property
    def dimension(self) -> int:
        return self.basis.shape[0]

    @property
    def size(self) -> int:
        return self.field.b**self.dimension

    def vectors(self) -> list[IndexVector]:
        return [IndexVector.from_flat(row, self.s, self.tau, self.m) for row in self.basis]

    def members(self) -> np.ndarray:
        """All b^dim members as rows, zero first."""
        if self.dimension == 0:
            return np.zeros((1, self.s * self.tau + self.m), dtype=np.int64)
        return span(self.field, self.basis)

    def contains(self, k: IndexVector | np.ndarray) -> bool:
        flat = k.flat() if isinstance(k, IndexVector) else np.asarray(k, dtype=np.int64)
        return not matvec(self.field, self.system, flat).any()

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "tau": self.tau,
            "s": self.s,
            "dimension": self.dimension,
            "basis": [v.to_json() for v in self.vectors()],
        }


def dual_set(ctx: WalshContext) -> DualBasis:
    M = dual_system(ctx)
    return DualBasis(ctx.F, ctx.s, ctx.tau, ctx.m, nullspace(ctx.F, M), M)


def lemma7_solve(ctx: WalshContext, rho: int) -> IndexVector:
    """A nonzero dual vector supported on k^(s)_1..k^(s)_{rho-1} and
    k^(s+1)_1..k^(s+1)_{m-rho+2}, scaled so that k^(s)_{v} = 1."""
    F, m, s, tau = ctx.F, ctx.m, ctx.s, ctx.tau
    if not 2 <= rho <= m - 2:
        raise DomainError(f"rho = {rho} outside [2, {m - 2}]")
    if tau < rho - 1:
        raise DimensionError(f"tau = {tau} < rho - 1 = {rho - 1}")
    C = ctx.seq.matrices[s - 1].entries
    nt = m - rho + 2
    M = np.zeros((m, rho - 1 + nt), dtype=np.int64)
    for r in range(m):
        M[r, : rho - 1] = C[: rho - 1, r]
        if m - r <= nt:
            M[r, rho - 1 + (m - r) - 1] = 1
    sol = nullspace(F, M)
    if sol.shape[0] == 0:
        raise InfeasibleError(f"no nontrivial solution for rho = {rho}")
    x = sol[0]
    ks = x[: rho - 1]
    v = v_of(ks.tolist())
    if v == 0:
        raise InfeasibleError("solution has a zero spatial block")
    x = F.mul[F.inv_(int(ks[v - 1])), x]
    spatial = [(0,) * tau for _ in range(s - 1)]
    spatial.append(tuple(x[: rho - 1].tolist()) + (0,) * (tau - rho + 1))
    time = tuple(x[rho - 1 :].tolist()) + (0,) * (m - nt)
    return IndexVector(tuple(spatial), time)


# -- Lemma 6 functionals ------------------------------------------------------

def A_func(F: FieldSpec, k: int, c: int, psi: Sequence[int]) -> complex:
    """E(-kψ(c)) Σ_{d<c} E(kψ(d))."""
    return F.char(F.neg_(F.mul_(k, psi[c]))) * sum(F.char(F.mul_(k, psi[d])) for d in range(c))


def B_func(F: FieldSpec, k: int, c: int, psi: Sequence[int], x: float) -> complex:
    """Σ_{d<c} E(kψ(d)) + E(kψ(c)) x."""
    return sum(F.char(F.mul_(k, psi[d])) for d in range(c)) + F.char(F.mul_(k, psi[c])) * x


def all_bijections(b: int) -> list[tuple[int, ...]]:
    return list(permutations(range(b)))


@dataclass(frozen=True)
class Lemma6Result:
    digits: tuple[int, ...]
    candidates_tried: int
    exact_min: float
    grid_min: float
    bound: float


def _a_values(F: FieldSpec) -> np.ndarray:
    b = F.b
    return np.array(
        [A_func(F, k, c, psi) for psi in all_bijections(b) for k in range(b) for c in range(b)],
        dtype=complex,
    )


def lemma6_verify(F: FieldSpec, digits: Sequence[int], grid: int = 64) -> tuple[float, float, bool]:
    """Check |B(z + y b^(-b-7))| >= b^(-b-7) for all k, c, ψ and y in [0, 1].

    Returns (exact minimum over the y interval, minimum over the grid of
    grid + 1 points, passes).  The grid passes only with slack of half a grid
    step, since |A + x| is 1-Lipschitz in x.
    """
    b = F.b
    h = float(b) ** (-b - 7)
    z = sum(a * float(b) ** -j for j, a in enumerate(digits, start=1))
    A = _a_values(F)
    x_star = np.clip(-A.real, z, z + h)
    exact = float(np.min(np.abs(A + x_star)))
    ys = np.linspace(0.0, 1.0, grid + 1)
    vals = np.abs(A[:, None] + (z + ys[None, :] * h))
    gmin = float(vals.min())
    slack = h / grid / 2
    return exact, gmin, exact >= h and gmin >= h + slack


def lemma6_search(F: FieldSpec, grid: int = 64) -> Lemma6Result:
    """First digit tuple a_1..a_{b+7} (a_{b+6} = a_{b+7} = 0, not all zero)
    in lexicographic order that keeps |B| away from zero."""
    b = F.b
    L = b + 5
    h = float(b) ** (-b - 7)
    A = _a_values(F)
    total = b**L
    for lo in range(1, total, 1 << 14):
        t = np.arange(lo, min(total, lo + (1 << 14)), dtype=np.int64)
        z = t / float(total)
        x_star = np.clip(-A.real[None, :], z[:, None], z[:, None] + h)
        ok = np.abs(A[None, :] + x_star).min(axis=1) >= h
        for cand in t[ok]:
            ds = [int(cand) // b ** (L - j) % b for j in range(1, L + 1)] + [0, 0]
            exact, gmin, passes = lemma6_verify(F, ds, grid)
            if passes:
                return Lemma6Result(tuple(ds), int(cand), exact, gmin, h)
    raise SearchFailed(f"no digit tuple passes for b = {b}")


# -- corollary checks ---------------------------------------------------------

@dataclass(frozen=True)
class CorollaryCheck:
    mu: int
    value: float
    bound: float

    @property
    def ok(self) -> bool:
        return self.value >= self.bound * (1 - 1e-12)


def corollary_time_check(F: FieldSpec, k_time: Sequence[int], N: int, m: int, psi, extra: int) -> list[CorollaryCheck]:
    """|\\hat1^(s+1)(μk)| against b^(-v-extra) for every μ in F_b*."""
    b = F.b
    v = v_of(k_time)
    out = []
    for mu in range(1, b):
        k = [F.mul_(mu, x) for x in k_time]
        out.append(CorollaryCheck(mu, abs(walsh_coeff_time(F, k, N, m, psi)), float(b) ** (-v - extra)))
    return out


def closeness(x: Fraction) -> Fraction:
    """⟨x⟩ = min({x}, 1 - {x})."""
    f = x - (x.numerator // x.denominator)
    return min(f, 1 - f)


def corollary_space_check(F: FieldSpec, k_block: Sequence[int], gamma, tau: int, eta_inv) -> tuple[float, float, int]:
    """Σ_μ |\\hat1^(i)(μk)|^2 against b^(-2v-2r), r least with ⟨b^v [γ]_tau⟩ >= b^-r.

    Returns (sum, bound, r).  Requires ⟨b^v [γ]_tau⟩ > 0.
    """
    b = F.b
    v = v_of(k_block)
    gd = _gamma_digits(gamma, tau)
    val = Fraction(sum(d * b ** (tau - j) for j, d in enumerate(gd, start=1)), b**tau)
    c = closeness(val * b**v)
    if c == 0:
        raise DomainError("⟨b^v γ⟩ = 0, no bound applies")
    r = 1
    while c < Fraction(1, b**r):
        r += 1
    total = sum(
        abs(walsh_coeff_space(F, [F.mul_(mu, x) for x in k_block], gd, tau, eta_inv)) ** 2 for mu in range(1, b)
    )
    return float(total), float(b) ** (-2 * v - 2 * r), r


# -- witness construction -------------------------------------------------------

@dataclass(frozen=True)
class WitnessGamma:
    digits: tuple[int, ...]
    N: int
    selected: tuple[int, ...]
    checks: tuple[tuple[int, tuple[CorollaryCheck, ...]], ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for _, cs in self.checks for c in cs)


def select_h1(vs: Sequence[int], b: int) -> list[int]:
    """All indices if the v values are pairwise at least b+8 apart, else the
    first index of the first pair that is too close."""
    for j in range(len(vs)):
        for j1 in range(j + 1, len(vs)):
            if abs(vs[j] - vs[j1]) < b + 8:
                return [j]
    return list(range(len(vs)))


def construct_witness_gamma(
    F: FieldSpec,
    dual_vectors: Sequence[IndexVector],
    digits: Sequence[int],
    m: int,
    psi,
    require_all: bool = False,
) -> WitnessGamma:
    """Time box γ^(s+1) with the searched digits at positions v+1..v+b+7 of
    each selected dual vector's time block, and the Corollary check."""
    b = F.b
    width = b + 7
    if len(digits) != width:
        raise DomainError(f"expected {width} digits, got {len(digits)}")
    vs = [v_of(k.time) for k in dual_vectors]
    H1 = select_h1(vs, b)
    if require_all and len(H1) != len(vs):
        raise SpacingError(f"time-block positions {vs} are not pairwise {b + 8} apart")
    g = [0] * m
    for j in H1:
        if vs[j] + width > m:
            raise SpacingError(f"v = {vs[j]} leaves no room for {width} digits below m = {m}")
        for nu, a in enumerate(digits, start=1):
            g[vs[j] + nu - 1] = a
    N = sum(d * b ** (m - j) for j, d in enumerate(g, start=1))
    checks = tuple(
        (j, tuple(corollary_time_check(F, dual_vectors[j].time, N, m, psi, width))) for j in H1
    )
    return WitnessGamma(tuple(g), N, tuple(H1), checks)


# -- Lemma 5 ----------------------------------------------------------------------

def class_scan(ctx: WalshContext, A_max: int) -> dict[tuple[int, ...], int]:
    """Least A in [1, A_max] per spatial class y_{b^m A} (first tau digits)."""
    bm = ctx.b**ctx.m
    seen: dict[tuple[int, ...], int] = {}
    for A in range(1, A_max + 1):
        key = tuple(ctx.seq.y_block(bm * A, 1, ctx.tau)[0].reshape(-1).tolist())
        seen.setdefault(key, A)
    return seen


def find_g_w(ctx: WalshContext, w: Sequence[int], A_max: int) -> int | None:
    """Least A in [1, A_max] whose block offset matches w on all spatial blocks."""
    bm = ctx.b**ctx.m
    w = tuple(int(x) for x in w)
    for A in range(1, A_max + 1):
        if tuple(ctx.seq.y_block(bm * A, 1, ctx.tau)[0].reshape(-1).tolist()) == w:
            return A
    return None


@dataclass(frozen=True)
class VarianceResult:
    lhs: float
    rhs: float
    rhs_orbit: float
    representatives: tuple[int, ...]
    dual_dimension: int

    @property
    def agree(self) -> bool:
        return abs(self.lhs - self.rhs) < 1e-6 and abs(self.rhs - self.rhs_orbit) < 1e-6


def variance_sigma1(ctx: WalshContext, gammas, N: int, A_max: int, cap: int = LAMBDA_CAP) -> VarianceResult:
    """Mean of Δ² over the class representatives against b^{2m} Σ_{D_m*} |\\hat1|²."""
    F, b = ctx.F, ctx.b
    n_classes = b ** (ctx.s * ctx.tau)
    if n_classes > cap:
        raise EnumerationTooLarge(f"{n_classes} classes exceed the cap {cap}")
    seen = class_scan(ctx, A_max)
    if len(seen) < n_classes:
        unmatched = []
        for lab in range(n_classes):
            w = tuple((lab // b**t) % b for t in range(ctx.s * ctx.tau))
            if w not in seen:
                unmatched.append(w)
        raise EndConditionFailed(unmatched, A_max)
    reps = tuple(sorted(seen.values()))
    sq = [delta_direct(ctx, A, N, gammas) ** 2 for A in reps]
    lhs = float(sum(sq, Fraction(0)) / len(sq))
    tabs = CoefficientTables.build(ctx, gammas, N)
    dual = dual_set(ctx)
    powers = b ** np.arange(ctx.dim, dtype=np.int64)
    scale = float(b) ** (2 * ctx.m)
    members = dual.members()[1:]
    rhs = float(scale * np.sum(np.abs(tabs.hat(members @ powers)) ** 2)) if len(members) else 0.0
    rhs_orbit = 0.0
    for row in members:
        lead = row[np.nonzero(row)[0][0]]
        if lead != 1:
            continue  # one representative per orbit μk
        orbit = np.stack([F.mul[mu, row] for mu in range(1, b)])
        rhs_orbit += float(scale * np.sum(np.abs(tabs.hat(orbit @ powers)) ** 2))
    return VarianceResult(lhs, rhs, rhs_orbit, reps, dual.dimension)
