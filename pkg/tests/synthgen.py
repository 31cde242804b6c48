"""Synthetic corpus builder for pipeline tests.

Lays out a complete run directory: hourly log files, redirect table, filter
config, hoax list, creation list, article fixtures and a run config. In
elevated mode each hoax's link neighborhood gets boosted traffic before the
hoax's creation day, so the expected attention drop is strongly positive; with
elevation off the ground truth is no effect.
"""

from __future__ import annotations

import csv
import gzip
import json
from datetime import date, timedelta
from pathlib import Path

import numpy as np

PROJECT = "en"
NAMESPACE_PREFIXES = ["Talk:", "User:", "Wikipedia:", "File:", "Category:"]

JUNK_LINES = [
    "fr Page_Francaise 3 300\n",
    "de Berlin 7 700\n",
    "en Talk:Discussion_page 5 500\n",
    "en User:Somebody 4 400\n",
    "en #Section_only 2 200\n",
    "en Bad|Pipe_title 6 600\n",
    "en Only_three_fields 9\n",
    "en Too many fields here 1 100\n",
    "en Nonnumeric_count x2 200\n",
    "\n",
]


def _neighbors(title: str, count: int) -> list[str]:
    return [f"Topic_{title}_{k}" for k in range(count)]


def generate(
    root: Path,
    *,
    elevated: bool,
    seed: int,
    n_hoaxes: int = 20,
    hoaxes_per_day: int = 5,
    cohort_size: int = 50,
    neighbors: int = 3,
    daily_rate: float = 120.0,
    boost: float = 3.0,
    slots_per_day: int = 24,
    span: int = 7,
    resamples: int = 10000,
    config_seed: int = 0,
    junk: bool = True,
) -> Path:
    """Build the corpus under root and return the run config path."""
    root = Path(root)
    logs_dir = root / "logs"
    fixtures_dir = root / "fixtures"
    logs_dir.mkdir(parents=True, exist_ok=True)
    fixtures_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)

    n_days = -(-n_hoaxes // hoaxes_per_day)
    first_day = date(2007, 3, 10)
    creation_days = [first_day + timedelta(days=i) for i in range(n_days)]
    coverage = [
        first_day - timedelta(days=span) + timedelta(days=i)
        for i in range(n_days + 2 * span)
    ]

    hoaxes: list[tuple[str, date]] = []
    members: list[tuple[str, date]] = []
    for i in range(n_hoaxes):
        day = creation_days[i // hoaxes_per_day]
        hoaxes.append((f"Synth_hoax_{i:02d}", day))
    for di, day in enumerate(creation_days):
        for j in range(cohort_size):
            members.append((f"Cohort_d{di}_m{j:02d}", day))

    # One alias per neighbor of the first hoax; its traffic arrives partly
    # under the alias and must be folded back by redirect resolution.
    alias_map = {
        nbr: f"Alias_{nbr}" for nbr in _neighbors(hoaxes[0][0], neighbors)
    }

    lines_by_file: dict[tuple[date, int], list[str]] = {
        (day, slot): [] for day in coverage for slot in range(slots_per_day)
    }
    hour_step = 24 // slots_per_day

    def emit(article: str, day0: date, boosted: bool) -> None:
        window = [day0 + timedelta(days=k) for k in range(-span, span + 1)]
        base = daily_rate / slots_per_day
        for nbr in _neighbors(article, neighbors):
            lam = np.full((len(window), slots_per_day), base)
            if boosted:
                lam[: span] *= boost
            counts = rng.poisson(lam)
            alias = alias_map.get(nbr)
            for di, day in enumerate(window):
                row = counts[di]
                for slot in range(slots_per_day):
                    c = int(row[slot])
                    if c == 0:
                        continue
                    name = alias if (alias and slot % 2 == 0) else nbr
                    lines_by_file[(day, slot)].append(f"en {name} {c} {c * 113}\n")

    for title, day in hoaxes:
        emit(title, day, boosted=elevated)
    for title, day in members:
        emit(title, day, boosted=False)

    if junk:
        lines_by_file[(coverage[0], 0)].extend(JUNK_LINES)

    last_key = (coverage[-1], 0)
    for (day, slot), lines in lines_by_file.items():
        hour = slot * hour_step
        name = f"pagecounts-{day:%Y%m%d}-{hour:02d}0000"
        body = "".join(lines)
        if (day, slot) == last_key:
            with gzip.open(logs_dir / (name + ".gz"), "wt", encoding="utf-8") as fh:
                fh.write(body)
        else:
            (logs_dir / name).write_text(body, encoding="utf-8")

    with open(root / "redirects.tsv", "w", encoding="utf-8") as fh:
        for nbr, alias in sorted(alias_map.items()):
            fh.write(f"{alias}\t{nbr}\n")

    (root / "filter.conf").write_text(
        "# project code, then namespace prefixes to drop\n"
        + PROJECT
        + "\n"
        + "\n".join(NAMESPACE_PREFIXES)
        + "\n",
        encoding="utf-8",
    )

    with open(root / "hoaxes.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["title", "created_at"])
        for title, day in hoaxes:
            writer.writerow([title, f"{day.isoformat()}T08:00:00Z"])

    with open(root / "creations.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["title", "created_at", "is_redirect", "redirect_target"])
        for title, day in hoaxes:
            writer.writerow([title, f"{day.isoformat()}T08:00:00Z", "0", ""])
        for idx, (title, day) in enumerate(members):
            hour = 4 + idx % 8
            writer.writerow([title, f"{day.isoformat()}T{hour:02d}:00:00Z", "0", ""])
        # Same-day redirect rows targeting existing members: they must collapse
        # away without changing cohort size.
        for di, day in enumerate(creation_days):
            for k in range(3):
                writer.writerow(
                    [
                        f"Samendir_d{di}_{k}",
                        f"{day.isoformat()}T09:30:00Z",
                        "1",
                        f"Cohort_d{di}_m{k:02d}",
                    ]
                )

    for title, _ in hoaxes + members:
        spaced = title.replace("_", " ")
        linked = ", ".join(f"[[{n}]]" for n in _neighbors(title, neighbors))
        (fixtures_dir / f"{title}.wiki").write_text(
            f"'''{spaced}''' covers {linked}.\n", encoding="utf-8"
        )

    config = {
        "logs": "logs",
        "filter_config": "filter.conf",
        "redirect_table": "redirects.tsv",
        "hoax_list": "hoaxes.csv",
        "creation_lists": "creations.csv",
        "fixtures": "fixtures",
        "out": "out",
        "span": span,
        "resamples": resamples,
        "seed": config_seed,
    }
    config_path = root / "config.json"
    config_path.write_text(json.dumps(config, indent=2) + "\n", encoding="utf-8")
    return config_path


def generate_compact(root: Path, *, elevated: bool, seed: int, config_seed: int = 0) -> Path:
    """Planted layout with coarse hourly bucketing, cheap enough to run repeatedly.

    Two slots a day instead of 24 leaves the daily totals identically
    distributed while cutting file count and line volume by an order of
    magnitude; cohort structure matches the full layout.
    """
    return generate(
        root,
        elevated=elevated,
        seed=seed,
        n_hoaxes=20,
        hoaxes_per_day=5,
        cohort_size=50,
        neighbors=3,
        daily_rate=120.0,
        slots_per_day=2,
        config_seed=config_seed,
        junk=False,
    )
