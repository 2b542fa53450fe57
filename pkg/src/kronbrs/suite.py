"""The lemma suite: seeded numerical checks of the block identities on one
configuration, reported as a fixed-format PASS/FAIL table."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .brs import BoxSpec, GammaSpec, delta_count
from .config import RunConfig
from .errors import EndConditionFailed, EnumerationTooLarge
from .laurent import base_digits
from .nets import kappa
from .walsh import (
    WalshContext,
    char_sum_sigma,
    delta_direct,
    delta_via_walsh,
    dual_set,
    variance_sigma1,
)

TOL = 1e-6
LEMMA1_DIGITS = 12
LEMMA1_A_MAX = 2**8


@dataclass
class SuiteRow:
    name: str
    status: str
    detail: str


@dataclass
class SuiteReport:
    m: int
    tau: int
    seed: int
    rows: list[SuiteRow] = field(default_factory=list)

    @property
    def failed(self) -> bool:
        return any(r.status == "FAIL" for r in self.rows)

    def as_text(self) -> str:
        width = max(len(r.name) for r in self.rows)
        lines = [f"lemma suite: m = {self.m}, tau_m = {self.tau}, seed = {self.seed}"]
        for r in self.rows:
            lines.append(f"{r.name:<{width}}  {r.status:<4}  {r.detail}")
        return "\n".join(lines) + "\n"


def _random_gamma(rng: random.Random, b: int, ndigits: int) -> GammaSpec:
    return GammaSpec(b, tuple(rng.randrange(b) for _ in range(ndigits)))


def run_lemma_suite(cfg: RunConfig, m: int, seed: int = 0, trials: int = 20, threads: int = 1) -> SuiteReport:
    b, s = cfg.b, cfg.s
    rng = random.Random(seed)
    a_max = max(cfg.a_max, LEMMA1_A_MAX)
    rows = max(64, s * m + 16, LEMMA1_DIGITS + 8)
    cols = m + len(base_digits(a_max + 1, b)) + 1
    seq = cfg.digital(rows, cols)
    adm = kappa(seq, m)
    tau = adm.require_tau()
    report = SuiteReport(m, tau, seed)
    report.rows.append(SuiteRow("admissibility", "PASS", f"kappa_m = {adm.kappa_m}"))
    ctx = WalshContext(seq, m, tau)
    bm = b**m

    # Lemma 1: truncating the box at depth tau moves Δ by at most s.
    worst = 0
    P = max(tau, LEMMA1_DIGITS)
    for _ in range(trials):
        A = rng.randint(1, LEMMA1_A_MAX)
        N = rng.randint(1, bm)
        box = BoxSpec(tuple(_random_gamma(rng, b, LEMMA1_DIGITS) for _ in range(s)))
        pts = seq.x_block(bm * A, N, P)
        diff = abs(delta_count(box, pts) - delta_count(box.truncated(tau), pts))
        worst = max(worst, diff)
    report.rows.append(
        SuiteRow("lemma1", "PASS" if worst <= s else "FAIL", f"max |dDelta| = {worst} (bound {s})")
    )

    # Lemma 2 and its regrouped form against direct counting.
    if ctx.size_G <= cfg.caps["G"]:
        err2 = err3 = 0.0
        for _ in range(trials):
            A = rng.randint(0, LEMMA1_A_MAX)
            N = rng.randint(1, bm)
            gammas = [[rng.randrange(b) for _ in range(tau)] for _ in range(s)]
            direct = float(delta_direct(ctx, A, N, gammas))
            err2 = max(err2, abs(delta_via_walsh(ctx, A, N, gammas, "lemma2", threads) - direct))
            err3 = max(err3, abs(delta_via_walsh(ctx, A, N, gammas, "lemma3", threads) - direct))
        status = "PASS" if err2 < TOL and err3 < TOL else "FAIL"
        report.rows.append(SuiteRow("lemma2", status, f"max error {err2:.1e} / regrouped {err3:.1e}"))
    else:
        report.rows.append(SuiteRow("lemma2", "SKIP", f"|G_m| = {ctx.size_G} above cap {cfg.caps['G']}"))

    # Lemma 4: character sums vanish off the dual set and equal b^m on it.
    dual = dual_set(ctx)
    bad = 0
    tested = 0
    samples = [v.flat() for v in dual.vectors()]
    samples += [np.array([rng.randrange(b) for _ in range(ctx.dim)], dtype=np.int64) for _ in range(trials)]
    for k in samples:
        sigma = char_sum_sigma(ctx, k, check=False)
        member = dual.contains(k)
        ok = abs(sigma - bm) < TOL if member else abs(sigma) < TOL
        bad += not ok
        tested += 1
    report.rows.append(
        SuiteRow("lemma4", "PASS" if not bad else "FAIL", f"{tested - bad}/{tested} sums match, dim D_m = {dual.dimension}")
    )

    # Lemma 5: variance over class representatives.
    N = rng.randint(1, bm)
    gammas = [[rng.randrange(b) for _ in range(tau)] for _ in range(s)]
    try:
        res = variance_sigma1(ctx, gammas, N, cfg.a_max, cfg.caps["Lambda"])
        status = "PASS" if res.agree else "FAIL"
        report.rows.append(
            SuiteRow("lemma5", status, f"lhs = {res.lhs:.9f}, rhs = {res.rhs:.9f}, orbit rhs = {res.rhs_orbit:.9f}")
        )
    except EndConditionFailed as exc:
        report.rows.append(SuiteRow("lemma5", "N/A", f"end condition fails: {len(exc.unmatched)} classes unmatched"))
    except EnumerationTooLarge as exc:
        report.rows.append(SuiteRow("lemma5", "SKIP", str(exc)))
    return report
