"""Figures written next to the CSV/JSON outputs."""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "figure.figsize": (7.0, 4.2),
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
}


def _boundaries(ax, report):
    for b in report.segmentation.boundaries[1:-1]:
        ax.axvline(b - 0.5, color="0.6", lw=0.8, ls="--")


def plot_run(report, path):
    with plt.rc_context(STYLE):
        fig, (ax0, ax1) = plt.subplots(1, 2, gridspec_kw={"width_ratios": [2, 1]})
        t = np.arange(1, report.T + 1)
        ax0.plot(t, report.cum_regret_true_seg, lw=1.2, label="cumulative regret")
        ax0.axhline(report.envelopes["switching"], color="C3", lw=0.8, label="switching envelope")
        _boundaries(ax0, report)
        ax0.set_xlabel("trial")
        ax0.set_ylabel("regret vs. best per-segment action")
        ax0.legend(loc="upper left", frameon=False)

        seg = report.per_segment
        ax1.bar(range(1, len(seg) + 1), [r["static_regret"] for r in seg], color="C0")
        ax1.set_xticks(range(1, len(seg) + 1))
        ax1.set_xlabel("segment")
        ax1.set_ylabel("static regret")
        fig.suptitle(f"{report.config['algo']} on {report.config['env']}, seed {report.seed}")
        fig.tight_layout()
        fig.savefig(path, dpi=120)
        plt.close(fig)


def plot_seeds(reports, path):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        curves = np.vstack([r.cum_regret_true_seg for r in reports])
        t = np.arange(1, curves.shape[1] + 1)
        mean, std = curves.mean(axis=0), curves.std(axis=0)
        ax.plot(t, mean, lw=1.2, label=f"mean over {len(reports)} seeds")
        ax.fill_between(t, mean - std, mean + std, alpha=0.25, lw=0)
        _boundaries(ax, reports[0])
        ax.set_xlabel("trial")
        ax.set_ylabel("cumulative regret")
        ax.legend(loc="upper left", frameon=False)
        fig.tight_layout()
        fig.savefig(path, dpi=120)
        plt.close(fig)
