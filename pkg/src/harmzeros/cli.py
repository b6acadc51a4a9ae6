"""Command-line front end: solve/certify runs, extremal tables, random
ensembles, and machine-readable output.

Exit codes: 0 success, 2 usage/parse error, 3 incomplete certification.
The environment variable HZ_SEED supplies the default seed.  All file
outputs are deterministic for fixed flags and seed (timings go to stderr
only, never into files).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from gmpy2 import mpq

from . import ensembles
from .certifier import certificates_json, solve_and_count
from .ensembles import Model, ModelSpec, fit_quadratic, histogram_csv, run_trials
from .extremal import (ExtremalSpec, build_extremal_pair, default_parameter,
                       lll_bound, wilmshurst_bound)
from .poly import ComplexPoly, HarmonicPair, realify
from .rational import QQi, decimal_string, to_rational
from .tracker import TrackOptions

__all__ = ["main", "RunReport"]


@dataclass
class RunReport:
    n: int
    m: int
    bezout: int
    certified_total: int
    real_count: int
    wilmshurst_bound: int
    excess: int
    lll_bound: int
    a_used: Optional[str]
    seed: int
    wall_time_ms: int

    def to_json(self, with_time: bool = True) -> str:
        d = {
            "n": self.n, "m": self.m, "bezout": self.bezout,
            "certified_total": self.certified_total,
            "real_count": self.real_count,
            "wilmshurst_bound": self.wilmshurst_bound,
            "excess": self.excess, "lll_bound": self.lll_bound,
            "a_used": self.a_used, "seed": self.seed,
        }
        if with_time:
            d["wall_time_ms"] = self.wall_time_ms
        return json.dumps(d, indent=1)

    def to_csv(self) -> str:
        head = ("n,m,bezout,certified_total,real_count,wilmshurst_bound,"
                "excess,lll_bound,a_used,seed")
        row = (f"{self.n},{self.m},{self.bezout},{self.certified_total},"
               f"{self.real_count},{self.wilmshurst_bound},{self.excess},"
               f"{self.lll_bound},{self.a_used or ''},{self.seed}")
        return head + "\n" + row


def _default_seed() -> int:
    return int(os.environ.get("HZ_SEED", "0"))


def _parse_poly(text: str) -> ComplexPoly:
    """Coefficients "re,im;re,im;..." lowest degree first; decimal or
    rational literals."""
    coeffs = []
    for term in text.split(";"):
        parts = term.split(",")
        if len(parts) != 2:
            raise ValueError(f"bad coefficient {term!r}: expected re,im")
        re, im = (to_rational(Fraction(p.strip())) for p in parts)
        coeffs.append(QQi(re, im))
    return ComplexPoly(coeffs)


def _pipeline(pair: HarmonicPair, seed: int, a_used: Optional[str],
              opts: Optional[TrackOptions] = None):
    t0 = time.monotonic()
    if opts is None:
        opts = TrackOptions(seed=seed)
    S = realify(pair)
    cc, certs, _ = solve_and_count(S, opts)
    n, m = pair.n, pair.m
    wil = wilmshurst_bound(n, m)
    report = RunReport(
        n=n, m=m, bezout=n * n,
        certified_total=cc.total_distinct,
        real_count=cc.real_count,
        wilmshurst_bound=wil,
        excess=cc.real_count - wil,
        lll_bound=lll_bound(n, m) if m < n else n * n,
        a_used=a_used,
        seed=seed,
        wall_time_ms=int((time.monotonic() - t0) * 1000),
    )
    return report, cc, certs


def _emit_report(report: RunReport, cc, certs, args) -> int:
    text = report.to_csv() if args.csv else report.to_json(with_time=False)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        print(report.to_json(with_time=True))
    else:
        print(report.to_json(with_time=True) if not args.csv else text)
    if getattr(args, "certs", None):
        with open(args.certs, "w", encoding="utf-8") as fh:
            fh.write(certificates_json(certs) + "\n")
    if not cc.complete:
        print("certification incomplete", file=sys.stderr)
        return 3
    return 0


def cmd_solve(args) -> int:
    try:
        p = _parse_poly(args.p)
        q = _parse_poly(args.q)
        pair = HarmonicPair(p, q)
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report, cc, certs = _pipeline(pair, args.seed, None)
    return _emit_report(report, cc, certs, args)


def _format_a(a: QQi) -> str:
    if a.im == 0:
        return decimal_string(a.re)
    return f"{decimal_string(a.re)},{decimal_string(a.im)}"


def cmd_extremal(args) -> int:
    n = args.n
    ell = args.ell if args.ell is not None else (
        n - args.m if args.m is not None else None)
    if ell is None:
        print("error: need --ell or --m", file=sys.stderr)
        return 2
    if not 0 < ell < n:
        print(f"error: requires 0 < ell < n, got ell={ell}, n={n}",
              file=sys.stderr)
        return 2
    if args.a_real is not None or args.a_imag is not None:
        a = QQi(to_rational(Fraction(args.a_real or "0")),
                to_rational(Fraction(args.a_imag or "0")))
    else:
        a = default_parameter(args.seed + 100 * n + (n - ell))
    try:
        pair = build_extremal_pair(ExtremalSpec(n, ell, a))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report, cc, certs = _pipeline(pair, args.seed, _format_a(a))
    return _emit_report(report, cc, certs, args)


def cmd_random(args) -> int:
    if args.trials < 1:
        print("error: --trials must be >= 1", file=sys.stderr)
        return 2
    try:
        spec = ModelSpec(Model(args.model), args.n, args.m)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    stats = run_trials(spec, args.trials, args.seed)
    csv = ensembles.STATS_CSV_HEADER + "\n" + ensembles.stats_csv(spec, stats)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(csv + "\n")
        hist_path = args.out + ".hist.csv"
        with open(hist_path, "w", encoding="utf-8") as fh:
            fh.write(histogram_csv(stats) + "\n")
    else:
        print(csv)
        print(histogram_csv(stats))
    return 0


_VARIANCE_NS = (10, 15, 20, 25, 30)
_FIGURE45_NS = (10, 15, 20, 25, 30)


def _cell_seed(seed: int, n: int, m: int) -> int:
    return (seed * 1000003 + 1000 * n + m) % (1 << 63)


def _table_extremal(args, excess: bool) -> Tuple[List[str], bool]:
    ns = list(range(7, args.nmax + 1))
    lines = ["m\\n," + ",".join(str(n) for n in ns)]
    ok = True
    for m in range(6, args.nmax):
        row = [str(m)]
        for n in ns:
            if m >= n:
                row.append("")
                continue
            a = default_parameter(args.seed + 100 * n + m)
            pair = build_extremal_pair(ExtremalSpec(n, n - m, a))
            report, cc, _ = _pipeline(pair, args.seed, _format_a(a))
            if not cc.complete:
                row.append("FAIL")
                ok = False
            else:
                val = report.excess if excess else report.real_count
                row.append(str(val))
        lines.append(",".join(row))
    return lines, ok


def _table_random(args, model: Model) -> Tuple[List[str], bool]:
    lines = ["m\\n," + ",".join(str(n) for n in _FIGURE45_NS)]
    ok = True
    for m in range(5, max(_FIGURE45_NS) + 1):
        row = [str(m)]
        for n in _FIGURE45_NS:
            if m > n:
                row.append("")
                continue
            try:
                st = run_trials(ModelSpec(model, n, m), args.trials,
                                _cell_seed(args.seed, n, m))
                row.append(f"({st.mean:.2f} {st.std_dev:.2f})")
            except RuntimeError:
                row.append("FAIL")
                ok = False
        lines.append(",".join(row))
    return lines, ok


def _table_variance(args) -> Tuple[List[str], bool]:
    points = []
    ok = True
    for n in _VARIANCE_NS:
        try:
            st = run_trials(ModelSpec(Model.Kostlan, n, n), args.trials,
                            _cell_seed(args.seed, n, n))
            points.append((n, st.variance))
        except RuntimeError:
            ok = False
    lines = []
    if len({n for n, _ in points}) >= 3:
        fit = fit_quadratic(points)
        lines.append(f"# fit a2={fit.a2:.6f} a1={fit.a1:.6f} "
                     f"a0={fit.a0:.6f} r2={fit.r_squared:.6f}")
    else:
        ok = False
    lines.append("# n variance")
    for n, v in points:
        lines.append(f"{n} {v:.6f}")
    return lines, ok


def cmd_table(args) -> int:
    if args.which in ("figure1", "figure2"):
        lines, ok = _table_extremal(args, excess=(args.which == "figure2"))
        name = args.which + ".csv"
    elif args.which in ("figure4", "figure5"):
        model = Model.Kostlan if args.which == "figure4" else Model.TruncatedKostlan
        lines, ok = _table_random(args, model)
        name = args.which + ".csv"
    else:
        lines, ok = _table_variance(args)
        name = "variance.dat"
    os.makedirs(args.out_dir, exist_ok=True)
    path = os.path.join(args.out_dir, name)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    print(path)
    return 0 if ok else 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="harmzeros",
        description="certified zero counting for harmonic polynomials "
                    "p(z) + conj(q(z))")
    sub = parser.add_subparsers(dest="command", required=True)
    seed_default = _default_seed()

    def common(sp):
        sp.add_argument("--seed", type=int, default=seed_default)

    sp = sub.add_parser("solve", help="solve and certify a given pair")
    sp.add_argument("--p", required=True,
                    help='coefficients "re,im;re,im;..." lowest degree first')
    sp.add_argument("--q", required=True)
    common(sp)
    sp.add_argument("--json", action="store_true", default=True)
    sp.add_argument("--csv", action="store_true")
    sp.add_argument("--out")
    sp.add_argument("--certs", help="write certificate dump (JSON) here")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("extremal", help="build and count an extremal pair")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--ell", type=int)
    sp.add_argument("--m", type=int)
    sp.add_argument("--a-real", dest="a_real")
    sp.add_argument("--a-imag", dest="a_imag")
    common(sp)
    sp.add_argument("--json", action="store_true", default=True)
    sp.add_argument("--csv", action="store_true")
    sp.add_argument("--out")
    sp.add_argument("--certs")
    sp.set_defaults(func=cmd_extremal)

    sp = sub.add_parser("random", help="run a random ensemble")
    sp.add_argument("--model", choices=[m.value for m in Model],
                    required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--trials", type=int, required=True)
    common(sp)
    sp.add_argument("--jobs", type=int, default=1,
                    help="worker bound (trials run sequentially)")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_random)

    sp = sub.add_parser("table", help="emit a counts or statistics table")
    sp.add_argument("--which", required=True,
                    choices=["figure1", "figure2", "figure4", "figure5",
                             "variance"])
    sp.add_argument("--nmax", type=int, default=12)
    sp.add_argument("--trials", type=int, default=300)
    common(sp)
    sp.add_argument("--out-dir", dest="out_dir", default=".")
    sp.set_defaults(func=cmd_table)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
