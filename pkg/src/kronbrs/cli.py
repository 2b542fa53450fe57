"""Command line entry point.

Exit codes: 0 on success, 1 on invalid input or configuration, 2 when an
identity that must hold exactly is violated (an implementation bug).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from pathlib import Path

from .brs import DIGIT_CHARS, BoxSpec, GammaSpec, brs_profile, dichotomy_report, star_discrepancy_exhaustive
from .config import RunConfig
from .errors import InternalCheckError, KronbrsError, SearchFailed
from .laurent import base_digits
from .nets import kappa, minimal_t, net_check
from .sequences import BadicPoint
from .suite import run_lemma_suite
from .walsh import WalshContext, delta_direct, delta_via_walsh, dual_set


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _digit_string(ds) -> str:
    return "".join(DIGIT_CHARS[int(d)] for d in ds)


def _points(cfg: RunConfig, start: int, count: int, P: int):
    """Digit block of x_start .. x_{start+count-1}."""
    cols = max(1, len(base_digits(max(start + count - 1, 1), cfg.b)))
    return cfg.digital(P, cols).x_block(start, count, P)


def cmd_gen(args) -> int:
    cfg = RunConfig.load(args.config)
    P = args.prec or cfg.precision
    if cfg.bijections.eta_fixes_zero:
        block = _points(cfg, args.start, args.count, P).tolist()
    else:
        sys_ = cfg.system(P + len(base_digits(args.start + args.count, cfg.b)) + 2)
        block = [sys_.point(n, P).coords for n in range(args.start, args.start + args.count)]
    den = cfg.b**P
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n"] + [h for i in range(1, cfg.s + 1) for h in (f"x{i}_digits", f"x{i}_value")])
    for n, coords in zip(range(args.start, args.start + args.count), block):
        row = [n]
        for c in coords:
            num = 0
            for d in c:
                num = num * cfg.b + int(d)
            row += [_digit_string(c), f"{num}/{den}"]
        w.writerow(row)
    _emit(buf.getvalue(), args.out)
    return 0


def _read_points(path: str, b: int) -> list[BadicPoint]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise KronbrsError(f"{path}: empty file")
    header, body = rows[0], rows[1:]
    cols = [k for k, h in enumerate(header) if h.endswith("_digits")]
    if not cols:
        raise KronbrsError(f"{path}: no digit columns")
    pts = []
    for row in body:
        pts.append(BadicPoint(b, tuple(tuple(DIGIT_CHARS.index(ch) for ch in row[k]) for k in cols)))
    return pts


def cmd_disc(args) -> int:
    if args.points:
        pts = _read_points(args.points, args.base)
        pts = pts[: args.count] if args.count else pts
    else:
        if not args.config or not args.count:
            raise UsageError("disc needs --points, or --config with --count")
        cfg = RunConfig.load(args.config)
        block = _points(cfg, 0, args.count, args.prec or cfg.precision)
        pts = [BadicPoint(cfg.b, tuple(map(tuple, p))) for p in block.tolist()]
    D = star_discrepancy_exhaustive(pts)
    _emit(json.dumps({"N": len(pts), "star_discrepancy": str(D), "approx": float(D)}) + "\n", args.out)
    return 0


def cmd_net_check(args) -> int:
    pts = _read_points(args.points, args.base)
    need = args.base**args.m
    if len(pts) < need:
        raise KronbrsError(f"need {need} points, file has {len(pts)}")
    block = pts[:need]
    s = block[0].s
    if args.t is None:
        result = {"m": args.m, "minimal_t": minimal_t(block, args.m, s, args.base)}
    else:
        res = net_check(block, args.t, args.m, s, args.base)
        result = {
            "m": args.m,
            "t": args.t,
            "ok": res.ok,
            "witness": str(res.witness) if res.witness else None,
            "count": res.count,
        }
    _emit(json.dumps(result) + "\n", args.out)
    return 0


def _analysis_seq(cfg: RunConfig, m: int, extra_cols: int = 10):
    rows = max(64, cfg.s * m + 16)
    return cfg.digital(rows, m + extra_cols)


def cmd_admissibility(args) -> int:
    cfg = RunConfig.load(args.config)
    rep = kappa(_analysis_seq(cfg, args.m), args.m)
    _emit(json.dumps(rep.to_json()) + "\n", args.out)
    return 0


def _tau(seq, m: int, tau: int | None) -> int:
    return tau if tau is not None else kappa(seq, m).require_tau()


def cmd_dual(args) -> int:
    cfg = RunConfig.load(args.config)
    seq = _analysis_seq(cfg, args.m)
    ctx = WalshContext(seq, args.m, _tau(seq, args.m, args.tau))
    _emit(json.dumps(dual_set(ctx).to_json()) + "\n", args.out)
    return 0


def _parse_gammas(cfg: RunConfig, specs: list[str] | None) -> list[GammaSpec]:
    specs = specs or ["0.1"]
    gammas = [GammaSpec.parse(cfg.b, g) for g in specs]
    if len(gammas) == 1:
        gammas = gammas * cfg.s
    if len(gammas) != cfg.s:
        raise KronbrsError(f"{len(gammas)} gammas for dimension {cfg.s}")
    return gammas


def cmd_walsh_verify(args) -> int:
    cfg = RunConfig.load(args.config)
    seq = _analysis_seq(cfg, args.m)
    ctx = WalshContext(seq, args.m, _tau(seq, args.m, None))
    gammas = _parse_gammas(cfg, args.gamma)
    rng = random.Random(args.seed)
    bm = cfg.b**args.m
    lines = ["A,N,direct,lemma2,lemma3"]
    worst = 0.0
    for _ in range(args.trials):
        A = rng.randint(0, 2**8)
        N = rng.randint(1, bm)
        direct = delta_direct(ctx, A, N, gammas)
        w2 = delta_via_walsh(ctx, A, N, gammas, "lemma2", args.threads, cfg.caps["G"])
        w3 = delta_via_walsh(ctx, A, N, gammas, "lemma3", args.threads, cfg.caps["G"])
        worst = max(worst, abs(w2 - float(direct)), abs(w3 - float(direct)))
        lines.append(f"{A},{N},{direct},{w2.real:.12f},{w3.real:.12f}")
    ok = worst < 1e-6
    lines.append(f"max error {worst:.1e}: {'PASS' if ok else 'FAIL'}")
    _emit("\n".join(lines) + "\n", args.out)
    if not ok:
        raise InternalCheckError(f"Walsh expansion disagrees with counting by {worst:.3e}")
    return 0


def cmd_lemma_suite(args) -> int:
    cfg = RunConfig.load(args.config)
    rep = run_lemma_suite(cfg, args.m, seed=args.seed, trials=args.trials, threads=args.threads)
    _emit(rep.as_text(), args.out)
    return 2 if rep.failed else 0


def cmd_brs(args) -> int:
    cfg = RunConfig.load(args.config)
    if cfg.s != 1 and len(args.gamma) == 1:
        args.gamma = args.gamma * cfg.s
    periodic = args.periodic or [""] * len(args.gamma)
    if len(periodic) != len(args.gamma):
        raise KronbrsError("give one periodic tail per gamma")
    box = BoxSpec(tuple(GammaSpec.parse(cfg.b, g, p) for g, p in zip(args.gamma, periodic)))
    if box.s != cfg.s:
        raise KronbrsError(f"box has dimension {box.s}, sequence has {cfg.s}")
    P = args.prec or max(cfg.precision, 64)
    seq = cfg.digital(P, max(1, len(base_digits(args.nmax, cfg.b))))
    profile = brs_profile(seq, box, args.nmax, P)
    text = profile.to_csv()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    print(f"box {box}: {profile.verdict} (heuristic)")
    if args.compare_gamma:
        other = BoxSpec(
            tuple(GammaSpec.parse(cfg.b, args.compare_gamma, args.compare_periodic or "") for _ in range(cfg.s))
        )
        finite, infinite = (box, other) if box.finite else (other, box)
        print(dichotomy_report(seq, finite, infinite, args.nmax, P).as_text())
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kronbrs", description="Digital Kronecker sequences and bounded remainder boxes.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("--out")
        return sp

    g = common(sub.add_parser("gen", help="emit points as CSV"))
    g.add_argument("--config", required=True)
    g.add_argument("--count", type=int, required=True)
    g.add_argument("--prec", type=int)
    g.add_argument("--start", type=int, default=0)
    g.set_defaults(func=cmd_gen)

    d = common(sub.add_parser("disc", help="exact star discrepancy (s <= 2)"))
    d.add_argument("--config")
    d.add_argument("--points")
    d.add_argument("--base", type=int, default=2)
    d.add_argument("--count", type=int)
    d.add_argument("--prec", type=int)
    d.set_defaults(func=cmd_disc)

    n = common(sub.add_parser("net-check", help="(t, m, s)-net test on a point CSV"))
    n.add_argument("--points", required=True)
    n.add_argument("--m", type=int, required=True)
    n.add_argument("--t", type=int)
    n.add_argument("--base", type=int, default=2)
    n.set_defaults(func=cmd_net_check)

    a = common(sub.add_parser("admissibility", help="kappa_m and tau_m"))
    a.add_argument("--config", required=True)
    a.add_argument("--m", type=int, required=True)
    a.set_defaults(func=cmd_admissibility)

    du = common(sub.add_parser("dual", help="basis of the dual set D_m"))
    du.add_argument("--config", required=True)
    du.add_argument("--m", type=int, required=True)
    du.add_argument("--tau", type=int)
    du.set_defaults(func=cmd_dual)

    w = common(sub.add_parser("walsh-verify", help="Walsh expansion against direct counting"))
    w.add_argument("--config", required=True)
    w.add_argument("--m", type=int, required=True)
    w.add_argument("--gamma", action="append", help="digit string such as 0.11; repeat per coordinate")
    w.add_argument("--trials", type=int, default=20)
    w.set_defaults(func=cmd_walsh_verify)

    ls = common(sub.add_parser("lemma-suite", help="seeded PASS/FAIL table of block identities"))
    ls.add_argument("--config", required=True)
    ls.add_argument("--m", type=int, required=True)
    ls.add_argument("--trials", type=int, default=20)
    ls.set_defaults(func=cmd_lemma_suite)

    br = common(sub.add_parser("brs", help="discrepancy growth profile over dyadic ranges"))
    br.add_argument("--config", required=True)
    br.add_argument("--gamma", action="append", required=True)
    br.add_argument("--periodic", "--gamma-periodic", action="append", dest="periodic")
    br.add_argument("--nmax", type=int, default=2**16)
    br.add_argument("--prec", type=int)
    br.add_argument("--compare-gamma")
    br.add_argument("--compare-periodic")
    br.set_defaults(func=cmd_brs)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.threads < 1:
            raise UsageError("--threads must be at least 1")
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except (InternalCheckError, SearchFailed) as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return 2
    except (KronbrsError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


run = main


if __name__ == "__main__":
    sys.exit(main())
