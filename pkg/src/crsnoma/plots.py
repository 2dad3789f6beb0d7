"""Figure rendering for the CLI report path (headless, Agg backend).

Each CSV the CLI writes gets a companion PNG with the same stem. Plots are
a convenience view of the delimited output; the CSV stays the machine
contract and carries the full precision.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

_STYLE = {"figure.figsize": (7.0, 5.0), "axes.grid": True, "grid.alpha": 0.3,
          "lines.linewidth": 1.6, "savefig.dpi": 150}


def plot_cdf_validation(y, analytic_cdf, empirical_cdf, ks: float, path: str) -> None:
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        ax.plot(y, analytic_cdf, label="analytic CDF")
        ax.plot(y, empirical_cdf, "--", label="empirical CDF")
        ax.set_xlabel("y")
        ax.set_ylabel("CDF")
        ax.set_title(f"Second-symbol SNR CDF validation (KS = {ks:.4g})")
        ax.legend(loc="lower right")
        fig.savefig(path, bbox_inches="tight")
        plt.close(fig)


def plot_sweep(rows, path: str) -> None:
    db = [r.rho_db for r in rows]
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        ax.plot(db, [r.mc_sum_rate for r in rows], "o-", label="proposed (simulated)")
        ax.plot(db, [r.closed_form for r in rows], "-", label="proposed (closed form)")
        ax.plot(db, [r.highsnr_approx for r in rows], ":", label="high-SNR approximation")
        ax.plot(db, [r.baseline_mc for r in rows], "s--", label="baseline (simulated)")
        ax.set_xlabel("transmit SNR [dB]")
        ax.set_ylabel("ergodic sum rate [bits/s/Hz]")
        ax.legend(loc="upper left")
        fig.savefig(path, bbox_inches="tight")
        plt.close(fig)


def plot_optimize(rows, path: str) -> None:
    db = [r["rho_db"] for r in rows]
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        ax.plot(db, [r["sr_opt"] for r in rows], "o-", label="optimal (grid search)")
        ax.plot(db, [r["sr_subopt"] for r in rows], "^-", label="suboptimal")
        ax.plot(db, [r["baseline_opt_sr"] for r in rows], "s--", label="baseline (optimal)")
        ax.set_xlabel("transmit SNR [dB]")
        ax.set_ylabel("ergodic sum rate [bits/s/Hz]")
        ax.legend(loc="upper left")
        fig.savefig(path, bbox_inches="tight")
        plt.close(fig)
