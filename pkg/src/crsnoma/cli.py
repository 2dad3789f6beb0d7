"""Command-line front end.

Subcommands
    validate-cdf  reproduce the second-symbol CDF validation as CSV + KS stat
    sweep         ergodic sum-rate sweep: simulation, closed form, baseline
    optimize      per-SNR optimal (exhaustive) and suboptimal allocations
    solve-alloc   print the suboptimal (a1, a3) only

Configuration is a flat key=value text file (``--config``); command-line
flags always win, and the CRSNOMA_SEED environment variable supplies a
default seed when neither gives one. Each CSV gets a companion PNG figure
next to it unless --no-plot is passed.

Exit codes: 0 success, 1 validation error, 2 numeric/solver failure,
3 I/O failure.
"""

import argparse
import os
import sys
from typing import Dict, List, Optional

import numpy as np

from . import plots
from .allocation import baseline_grid_search, grid_search, mc_sum_rate_at, suboptimal_solve
from .analysis import AnalysisParams, ccdf_y
from .channel import ChannelVariances
from .link import PowerAllocation, SnrPoint
from .montecarlo import MonteCarloConfig, empirical_cdf_y, sweep

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERIC = 2
EXIT_IO = 3

SETUPS = {
    "1": {"alpha_sd": 1.0, "alpha_sr": 10.0, "alpha_rd": 2.0},
    "2": {"alpha_sd": 1.0, "alpha_sr": 2.0, "alpha_rd": 10.0},
}

_DEFAULTS = {
    "a1": 0.95,
    "a3": 0.05,
    "snr_start": 0.0,
    "snr_stop": 50.0,
    "snr_step": 5.0,
    "n": 20_000,
    "seed": 0,
    "workers": 1,
    "ks_threshold": 0.01,
    "grid_step": 0.01,
    "samples": 100_000,
    "snr_db": 10.0,
}


def parse_config_text(text: str) -> Dict[str, str]:
    """Parse flat key=value lines; '#' starts a comment, blanks ignored."""
    cfg: Dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        cfg[key.strip()] = value.strip()
    return cfg


def serialize_config(cfg: Dict[str, str]) -> str:
    return "".join(f"{k}={v}\n" for k, v in cfg.items())


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def _write_csv(path: str, header: List[str], rows, footer: Optional[str] = None) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    if footer is not None:
        lines.append(footer)
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


class _Options:
    """Resolved options: defaults < CRSNOMA_SEED < config file < flags."""

    def __init__(self, args: argparse.Namespace):
        cfg: Dict[str, str] = {}
        if args.config:
            with open(args.config) as fh:
                cfg = parse_config_text(fh.read())
        self._cfg = cfg
        self._args = args

    def _lookup(self, key: str, cast, default):
        flag = getattr(self._args, key, None)
        if flag is not None:
            return flag
        if key in self._cfg:
            return cast(self._cfg[key])
        if key == "seed" and "CRSNOMA_SEED" in os.environ:
            return cast(os.environ["CRSNOMA_SEED"])
        return default

    def get(self, key: str, cast=float):
        return self._lookup(key, cast, _DEFAULTS.get(key))

    def variances(self) -> ChannelVariances:
        setup = self._lookup("setup", str, None)
        base = dict(SETUPS[str(setup)]) if setup is not None else dict(SETUPS["1"])
        for k in ("alpha_sd", "alpha_sr", "alpha_rd"):
            v = self._lookup(k, float, None)
            if v is not None:
                base[k] = v
        return ChannelVariances(**base)

    def alloc(self) -> PowerAllocation:
        return PowerAllocation.split(self.get("a1"), self.get("a3"))

    def snr_grid(self) -> List[float]:
        start = self.get("snr_start")
        stop = self.get("snr_stop")
        step = self.get("snr_step")
        if step <= 0:
            raise ValueError(f"snr_step must be positive, got {step}")
        count = int(np.floor((stop - start) / step + 1e-9)) + 1
        return [start + k * step for k in range(count)]

    def out(self, default_name: str) -> str:
        path = self._lookup("out", str, None)
        return path if path is not None else default_name

    def want_plot(self) -> bool:
        if getattr(self._args, "no_plot", False):
            return False
        return self._cfg.get("plot", "1") not in ("0", "false", "no")


def _png_path(csv_path: str) -> str:
    stem, _ = os.path.splitext(csv_path)
    return stem + ".png"


def cmd_validate_cdf(opts: _Options) -> int:
    n = int(opts.get("samples", int))
    seed = int(opts.get("seed", int))
    threshold = opts.get("ks_threshold")
    at = SnrPoint.from_db(opts.get("snr_db"))
    variances = opts.variances()
    alloc = opts.alloc()

    cfg = MonteCarloConfig(variances=variances, alloc=alloc, snr_grid_db=(at.rho_db,),
                           n_realizations=n, seed=seed,
                           workers=int(opts.get("workers", int)))
    ecdf = empirical_cdf_y(cfg, at)
    params = AnalysisParams(alloc, variances, at)
    analytic = lambda y: 1.0 - np.asarray(ccdf_y(y, params))
    ks = ecdf.ks_distance(analytic)

    # decimate the sorted samples to ~1000 CSV rows; KS uses the full set
    stride = max(1, n // 1000)
    idx = np.arange(0, ecdf.n, stride)
    if idx[-1] != ecdf.n - 1:
        idx = np.append(idx, ecdf.n - 1)
    ys = ecdf.values[idx]
    ana = np.asarray(analytic(ys), dtype=float)
    emp = np.asarray(ecdf(ys), dtype=float)

    out = opts.out("cdf_validation.csv")
    _write_csv(out, ["y", "analytic_cdf", "empirical_cdf", "abs_diff"],
               zip(ys, ana, emp, np.abs(ana - emp)),
               footer=f"# ks_statistic,{_fmt(ks)}")
    if opts.want_plot():
        plots.plot_cdf_validation(ys, ana, emp, ks, _png_path(out))
    print(f"KS statistic = {ks:.6f} over {n} samples (threshold {threshold})")
    print(f"wrote {out}")
    return EXIT_OK if ks <= threshold else EXIT_NUMERIC


def cmd_sweep(opts: _Options) -> int:
    cfg = MonteCarloConfig(
        variances=opts.variances(),
        alloc=opts.alloc(),
        snr_grid_db=tuple(opts.snr_grid()),
        n_realizations=int(opts.get("n", int)),
        seed=int(opts.get("seed", int)),
        workers=int(opts.get("workers", int)),
    )
    result = sweep(cfg)
    out = opts.out("sweep.csv")
    _write_csv(
        out,
        ["rho_db", "mc_sum_rate", "mc_stderr", "closed_form", "highsnr_approx", "baseline_mc"],
        ((r.rho_db, r.mc_sum_rate, r.mc_stderr, r.closed_form, r.highsnr_approx, r.baseline_mc)
         for r in result.rows),
    )
    if opts.want_plot():
        plots.plot_sweep(result.rows, _png_path(out))
    print(f"wrote {out} ({len(result.rows)} rows)")
    return EXIT_OK


def cmd_optimize(opts: _Options) -> int:
    variances = opts.variances()
    n = int(opts.get("n", int))
    seed = int(opts.get("seed", int))
    step = opts.get("grid_step")

    subopt = suboptimal_solve(variances)
    if not subopt.converged:
        print(f"suboptimal solver: {subopt.note}", file=sys.stderr)

    rows = []
    for db in opts.snr_grid():
        at = SnrPoint.from_db(db)
        best = grid_search(variances, at, objective="monte-carlo", step=step,
                           n_realizations=n, seed=seed)
        sr_sub = mc_sum_rate_at(variances, at, subopt.a1, subopt.a3,
                                n_realizations=n, seed=seed)
        base_a1, base_sr = baseline_grid_search(variances, at, step=step,
                                                n_realizations=n, seed=seed)
        rows.append({
            "rho_db": db, "a1_opt": best.a1, "a3_opt": best.a3, "sr_opt": best.objective,
            "a1_subopt": subopt.a1, "a3_subopt": subopt.a3, "sr_subopt": sr_sub,
            "baseline_opt_sr": base_sr,
        })
        print(f"{db:6.1f} dB: opt=({best.a1:.2f},{best.a3:.2f}) sr={best.objective:.4f} | "
              f"subopt=({subopt.a1:.2f},{subopt.a3:.2f}) sr={sr_sub:.4f} | "
              f"baseline a1={base_a1:.2f} sr={base_sr:.4f}")

    out = opts.out("optimize.csv")
    header = ["rho_db", "a1_opt", "a3_opt", "sr_opt",
              "a1_subopt", "a3_subopt", "sr_subopt", "baseline_opt_sr"]
    _write_csv(out, header, ([r[h] for h in header] for r in rows))
    if opts.want_plot():
        plots.plot_optimize(rows, _png_path(out))
    print(f"wrote {out} ({len(rows)} rows)")
    return EXIT_OK


def cmd_solve_alloc(opts: _Options) -> int:
    sol = suboptimal_solve(opts.variances())
    if not sol.converged:
        print(f"note: {sol.note}", file=sys.stderr)
    print(f"a1={_fmt(sol.a1)} a3={_fmt(sol.a3)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crsnoma",
        description="Two-stage power-allocation NOMA relay simulator and analyzer",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser):
        p.add_argument("--config", help="flat key=value config file")
        p.add_argument("--setup", choices=("1", "2"),
                       help="variance preset: 1 = (1, 10, 2), 2 = (1, 2, 10)")
        p.add_argument("--alpha-sd", dest="alpha_sd", type=float)
        p.add_argument("--alpha-sr", dest="alpha_sr", type=float)
        p.add_argument("--alpha-rd", dest="alpha_rd", type=float)
        p.add_argument("--a1", type=float)
        p.add_argument("--a3", type=float)
        p.add_argument("--seed", type=int)
        p.add_argument("--workers", type=int)
        p.add_argument("--out")
        p.add_argument("--no-plot", action="store_true",
                       help="skip the companion PNG figure")

    def snr_range(p: argparse.ArgumentParser):
        p.add_argument("--snr-start", dest="snr_start", type=float)
        p.add_argument("--snr-stop", dest="snr_stop", type=float)
        p.add_argument("--snr-step", dest="snr_step", type=float)

    p = sub.add_parser("validate-cdf", help="CDF validation CSV + KS statistic")
    common(p)
    p.add_argument("--samples", type=int)
    p.add_argument("--snr-db", dest="snr_db", type=float)
    p.add_argument("--ks-threshold", dest="ks_threshold", type=float)
    p.set_defaults(func=cmd_validate_cdf)

    p = sub.add_parser("sweep", help="ergodic sum-rate sweep CSV")
    common(p)
    snr_range(p)
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("optimize", help="optimal vs suboptimal allocation CSV")
    common(p)
    snr_range(p)
    p.add_argument("--n", type=int)
    p.add_argument("--grid-step", dest="grid_step", type=float)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("solve-alloc", help="print the suboptimal (a1, a3)")
    common(p)
    p.set_defaults(func=cmd_solve_alloc)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        opts = _Options(args)
        return args.func(opts)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (RuntimeError, ArithmeticError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
