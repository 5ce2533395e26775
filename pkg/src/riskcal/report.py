"""Report rendering: delimited track-record tables plus figures.

The report path writes, next to each other in the output directory:

- ``track_record.csv``  -- the aggregate metrics as a flat table,
- ``track_record.png``  -- expense quantiles of the session's policy and
  the miss-rate / wait trade-off across all five risk classes, with the
  session's class highlighted.

matplotlib is imported lazily so the rest of the CLI stays fast.
"""

from __future__ import annotations

import csv
from pathlib import Path

from .elicitation import RISK_CLASSES
from .policy import TrackRecord, TravelDomainConfig, airport_policy, run_track_record


def write_track_record_csv(path: Path, record: TrackRecord) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["metric", "value"])
        writer.writerow(["policy_lead_hours", record.policy_lead_hours])
        writer.writerow(["episodes", record.episodes])
        writer.writerow(["miss_rate", record.miss_rate])
        writer.writerow(["mean_wait_hours", record.mean_wait_hours])
        for q in sorted(record.expense_quantiles):
            writer.writerow([f"expense_p{int(q * 100):02d}", record.expense_quantiles[q]])


def render_track_record_figure(
    path: Path,
    record: TrackRecord,
    config: TravelDomainConfig,
    seed: int = 0,
) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    by_class = []
    for rc in RISK_CLASSES:
        lead = airport_policy(rc)
        by_class.append((rc.category.value, lead, run_track_record(lead, config, record.episodes, seed)))

    fig, (ax_expense, ax_tradeoff) = plt.subplots(1, 2, figsize=(10, 4))

    quantiles = sorted(record.expense_quantiles)
    ax_expense.plot([q * 100 for q in quantiles], [record.expense_quantiles[q] for q in quantiles],
                    marker="o", color="tab:blue")
    ax_expense.set_xlabel("percentile")
    ax_expense.set_ylabel("trip expense")
    ax_expense.set_title(f"expense distribution (lead {record.policy_lead_hours:g} h)")
    ax_expense.grid(True, alpha=0.3)

    leads = [lead for _, lead, _ in by_class]
    miss = [100.0 * tr.miss_rate for _, _, tr in by_class]
    wait = [tr.mean_wait_hours for _, _, tr in by_class]
    ax_tradeoff.plot(leads, miss, marker="o", color="tab:red", label="miss rate (%)")
    ax_wait = ax_tradeoff.twinx()
    ax_wait.plot(leads, wait, marker="s", color="tab:green", label="mean wait (h)")
    ax_tradeoff.axvline(record.policy_lead_hours, color="tab:blue", linestyle="--", alpha=0.7)
    ax_tradeoff.set_xlabel("arrival lead time (h)")
    ax_tradeoff.set_ylabel("miss rate (%)", color="tab:red")
    ax_wait.set_ylabel("mean wait (h)", color="tab:green")
    ax_tradeoff.set_title("lead-time trade-off across classes")
    ax_tradeoff.grid(True, alpha=0.3)

    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_report_files(
    out_dir: Path,
    profile: dict,
    record: TrackRecord,
    config: TravelDomainConfig,
    seed: int = 0,
) -> list[Path]:
    """Write the delimited table and figure; returns the created paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "track_record.csv"
    png_path = out_dir / "track_record.png"
    write_track_record_csv(csv_path, record)
    render_track_record_figure(png_path, record, config, seed=seed)
    return [csv_path, png_path]
