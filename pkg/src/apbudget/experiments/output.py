"""Files written by an experiment sweep: PGM images, bins.csv, summary.csv, local_funds.csv."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

from apbudget.experiments.generators import PointConfig
from apbudget.experiments.runner import EXPERIMENT_RULES, ExperimentResult, run_experiment


def write_grid_outputs(
    root: Path,
    points: Sequence[tuple[str, str, object, PointConfig]],
    repetitions: int,
    seed: int,
    threads: int = 1,
    local: bool = False,
) -> str:
    """Run every grid point and write its files under ``root``; return a text summary.

    ``points`` holds ``(directory name, parameter name, parameter value, config)``.
    Layout: ``root/<dir>/<rule>.pgm`` plus ``root/bins.csv`` (non-zero bins only),
    ``root/summary.csv`` (funds per item group) and, with ``local``,
    ``root/local_funds.csv``.
    """
    root.mkdir(parents=True, exist_ok=True)
    pname = points[0][1] if points else "x"
    bins = [f"{pname},rule,bin_x,bin_y,funds"]
    summary = [f"{pname},rule,group,funds,share"]
    local_rows = [f"{pname},rule,avg_local_funds"]
    text = []
    for dirname, _, value, config in points:
        result: ExperimentResult = run_experiment(config, EXPERIMENT_RULES, repetitions, seed, threads)
        target = root / dirname
        target.mkdir(parents=True, exist_ok=True)
        groups = [g.name for g in config.item_groups]
        label = f"{value:g}" if isinstance(value, float) else str(value)
        for rule in result.rules:
            totals = result.totals[rule.name]
            (target / f"{rule.name}.pgm").write_bytes(totals.histogram.to_pgm())
            for bx, by, funds in totals.histogram.nonzero_rows():
                bins.append(f"{label},{rule.name},{bx},{by},{funds}")
            shares = []
            for g in groups:
                funds = result.funds(rule.name, g)
                share = result.share(rule.name, g)
                summary.append(f"{label},{rule.name},{g},{funds},{share:.6f}")
                shares.append(f"{g}={share:.3f}")
            if local:
                local_rows.append(f"{label},{rule.name},{result.average(rule.name, 'local'):.6f}")
            text.append(f"{pname}={label} {rule.name} spent={totals.histogram.total_funds} " + " ".join(shares))
    (root / "bins.csv").write_text("\n".join(bins) + "\n")
    (root / "summary.csv").write_text("\n".join(summary) + "\n")
    if local:
        (root / "local_funds.csv").write_text("\n".join(local_rows) + "\n")
    return "\n".join(text) + "\n"
