"""Seeded end-to-end runs: play the protocol, account regret, check bounds, write files."""

from __future__ import annotations

import csv
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from reset_oco import base, regret
from reset_oco.domain import Linear, Simplex, check_compatible, quadratic_gradient_bound
from reset_oco.harness.config import RunConfig
from reset_oco.harness.environments import (
    DriftingQuadratic,
    PiecewiseExperts,
    gen_drifting_quadratic,
    gen_piecewise_experts,
)
from reset_oco.reset import Reset
from reset_oco.segtree import switching_bound

TRACE_HEADER = ("trial", "loss", "cum_loss", "cum_regret_true_seg")


def next_power_of_two(n: int) -> int:
    return 1 << max(0, int(n) - 1).bit_length()


def pad_losses(losses: list, dim: int, horizon: int) -> list:
    """Extend a loss stream to ``horizon`` trials with all-zero linear losses."""
    zero = Linear(np.zeros(dim))
    return list(losses) + [zero] * (horizon - len(losses))


def make_learner(algo: str, action_set, horizon: int, grad_bound: float | None):
    """Return (learner, gamma) for one of the named algorithms."""
    kind = algo.split("+")[-1]
    make = base.factory(kind, action_set, grad_bound)
    if algo.startswith("reset+"):
        return Reset(horizon, make), make(1).gamma
    learner = make(horizon)
    return learner, learner.gamma


def play(learner, losses) -> tuple[np.ndarray, np.ndarray]:
    """Run the query/update protocol; returns played actions and per-trial wall time."""
    actions = []
    times = np.empty(len(losses))
    for t, loss in enumerate(losses):
        start = time.perf_counter()
        x = learner.query()
        learner.update(loss)
        times[t] = time.perf_counter() - start
        actions.append(x)
    return np.vstack(actions), times


@dataclass
class RunReport:
    config: dict
    seed: int
    trace: regret.Trace
    segmentation: regret.Segmentation
    cum_loss: np.ndarray
    cum_regret_true_seg: np.ndarray
    regrets: dict
    envelopes: dict
    per_segment: list
    timing: dict
    violations: list = field(default_factory=list)

    @property
    def T(self) -> int:
        return self.trace.T

    def to_json(self) -> dict:
        return {
            "config": {**self.config, "seed": self.seed},
            "regrets": self.regrets,
            "envelopes": self.envelopes,
            "per_segment": self.per_segment,
            "timing": self.timing,
            "violations": self.violations,
        }


def build_environment(config: RunConfig, seed: int):
    """Return (action_set, losses, comparator or None, grad_bound)."""
    segmentation = regret.Segmentation.from_lengths(config.lengths)
    if config.env == "experts":
        env = PiecewiseExperts(config.n, segmentation, config.gap, seed)
        losses, _ = gen_piecewise_experts(env)
        return env.action_set(), losses, None, math.sqrt(config.n)
    drifts = config.drifts if config.drifts is not None else (0.0,) * len(segmentation)
    env = DriftingQuadratic(config.dim, segmentation, tuple(drifts), config.radius, config.scale, seed)
    losses, E = gen_drifting_quadratic(env)
    action_set = env.action_set()
    return action_set, losses, E, quadratic_gradient_bound(action_set, env.loss_scale)


def run_single(config: RunConfig, seed: int) -> RunReport:
    segmentation = regret.Segmentation.from_lengths(config.lengths)
    T = segmentation.T
    action_set, losses, E, grad_bound = build_environment(config, seed)
    for f in losses:
        check_compatible(f, action_set)

    horizon = next_power_of_two(T) if config.algo.startswith("reset+") else T
    learner, gamma = make_learner(config.algo, action_set, horizon, grad_bound)
    actions, times = play(learner, pad_losses(losses, action_set.dim, horizon))
    trace = regret.Trace.from_run(actions[:T], losses)

    comparator = regret.hindsight_comparator(trace, segmentation, action_set)
    cum_regret = regret.cumulative_regret_curve(trace, comparator)
    per_segment = []
    for q, s in segmentation.segments():
        row = {"start": q, "end": s, "length": s - q + 1,
               "static_regret": regret.static_regret(trace, (q, s), action_set)}
        if E is not None:
            row["path_length"] = regret.path_length(E, (q, s))
        per_segment.append(row)

    switching = float(cum_regret[-1])
    regrets = {
        "switching_true_seg": switching,
        "static_full": regret.static_regret(trace, (1, T), action_set),
        "total_loss": float(trace.loss_values.sum()),
    }
    envelopes = {
        "switching": switching_bound(segmentation.lengths, gamma),
        "base_static": gamma * math.sqrt(T),
        "gamma": gamma,
    }
    if E is not None:
        regrets["dynamic"] = regret.dynamic_regret(trace, E)
        envelopes["dynamic_split_shape"] = sum(
            math.sqrt((1.0 + r["path_length"]) * r["length"]) for r in per_segment
        )
        envelopes["dynamic_single_shape"] = math.sqrt((1.0 + regret.path_length(E, (1, T))) * T)

    slack = 0.0 if isinstance(action_set, Simplex) else regret.SOLVER_TOL * len(segmentation)
    violations = []
    if config.algo.startswith("reset+"):
        if switching > envelopes["switching"] + slack:
            violations.append({"check": "switching_envelope", "measured": switching,
                               "bound": envelopes["switching"], "seed": seed})
    elif regrets["static_full"] > envelopes["base_static"] + slack:
        violations.append({"check": "base_static_envelope", "measured": regrets["static_full"],
                           "bound": envelopes["base_static"], "seed": seed})

    timing = {
        "total_s": float(times.sum()),
        "per_trial_mean_s": float(times.mean()),
        "per_trial_max_s": float(times.max()),
        "padded_horizon": horizon,
    }
    return RunReport(config.as_dict(), seed, trace, segmentation, np.cumsum(trace.loss_values),
                     cum_regret, regrets, envelopes, per_segment, timing, violations)


def write_trace_csv(report: RunReport, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRACE_HEADER)
        for t in range(report.T):
            w.writerow([t + 1, f"{report.trace.loss_values[t]:.17g}",
                        f"{report.cum_loss[t]:.17g}", f"{report.cum_regret_true_seg[t]:.17g}"])


def write_outputs(report: RunReport, out_dir, figures: bool = True) -> dict:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {"trace": out / f"trace_seed{report.seed}.csv", "report": out / f"report_seed{report.seed}.json"}
    write_trace_csv(report, paths["trace"])
    paths["report"].write_text(json.dumps(report.to_json(), indent=2) + "\n")
    if figures:
        from reset_oco.harness.plotting import plot_run

        paths["figure"] = out / f"regret_seed{report.seed}.png"
        plot_run(report, paths["figure"])
    return paths


def run_experiment(config: RunConfig, write: bool = True) -> list[RunReport]:
    reports = [run_single(config, seed) for seed in config.seeds]
    if write:
        for r in reports:
            write_outputs(r, config.out_dir, config.figures)
        if len(reports) > 1:
            summarise(reports, config)
    return reports


def summarise(reports: list[RunReport], config: RunConfig) -> None:
    out = Path(config.out_dir)
    switching = np.array([r.regrets["switching_true_seg"] for r in reports])
    summary = {
        "config": config.as_dict(),
        "seeds": [r.seed for r in reports],
        "switching_true_seg": {"mean": float(switching.mean()), "std": float(switching.std()),
                               "max": float(switching.max())},
        "envelope_switching": reports[0].envelopes["switching"],
        "violations": [v for r in reports for v in r.violations],
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    if config.figures:
        from reset_oco.harness.plotting import plot_seeds

        plot_seeds(reports, out / "regret_seeds.png")
