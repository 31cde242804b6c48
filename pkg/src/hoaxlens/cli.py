"""Pipeline driver: ingest, cohort, features, attention, report.

Every command reads its inputs from a JSON run config (paths resolved relative
to the config file) and writes fixed-name outputs under the out directory.
Identical inputs and seed give byte-identical outputs.
"""

from __future__ import annotations

import argparse
import csv
import glob
import json
import logging
import sys
import traceback
from dataclasses import dataclass, fields
from datetime import date
from pathlib import Path

from . import attention, corpus, logstore, svgplot, wikitext

log = logging.getLogger(__name__)

STORE_DIR = "store"
INGEST_REPORT = "ingest_report.json"
COHORTS_CSV = "cohorts.csv"
COHORT_EXCLUSIONS_CSV = "cohort_exclusions.csv"
FEATURES_CSV = "features.csv"
ZSCORES_CSV = "zscores.csv"
FEATURE_EXCLUSIONS_CSV = "feature_exclusions.csv"
RESULTS_CSV = "results.csv"
COHORT_SCORES_CSV = "cohort_scores.csv"
ATTENTION_EXCLUSIONS_CSV = "attention_exclusions.csv"
SUMMARY_JSON = "summary.json"
D_HISTOGRAM_CSV = "d_histogram.csv"
BOOT_HISTOGRAM_CSV = "bootstrap_means_histogram.csv"
PLOTS_DIR = "plots"

FEATURES_HEADER = ["title", "plain_length", "ratio", "wikilink_density", "extlink_density"]
RESULTS_HEADER = ["hoax_title", "delta_v", "cohort_mean", "cohort_n", "D"]


class InputError(ValueError):
    """Bad or missing input; maps to exit code 1."""


@dataclass
class RunConfig:
    logs: str | None = None
    filter_config: str | None = None
    redirect_table: str | None = None
    hoax_list: str | None = None
    creation_lists: str | None = None
    fixtures: str | None = None
    store: str | None = None
    out: str = "out"
    span: int = 7
    resamples: int = 10000
    seed: int = 0
    histogram_bins: int = 20

    @classmethod
    def load(cls, path: str | Path) -> "RunConfig":
        path = Path(path)
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise InputError(f"config file not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise InputError(f"config {path} is not valid JSON: {exc}") from None
        known = {f.name for f in fields(cls)}
        cfg = cls()
        base = path.parent
        for key, value in raw.items():
            if key not in known:
                log.warning("config %s: ignoring unknown key %r", path, key)
                continue
            if key in ("span", "resamples", "seed", "histogram_bins"):
                setattr(cfg, key, int(value))
            elif value is None:
                setattr(cfg, key, None)
            else:
                setattr(cfg, key, str(base / value))
        if cfg.span < 1:
            raise InputError("span must be >= 1")
        if cfg.resamples < 1:
            raise InputError("resamples must be >= 1")
        return cfg

    def store_dir(self) -> Path:
        return Path(self.store) if self.store else Path(self.out) / STORE_DIR

    def out_dir(self) -> Path:
        return Path(self.out)


def _require(value: str | None, key: str) -> Path:
    if not value:
        raise InputError(f"config key {key!r} is required for this command")
    path = Path(value)
    if not path.exists():
        raise InputError(f"{key} path does not exist: {path}")
    return path


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _read_csv(path: Path, what: str) -> list[list[str]]:
    if not path.exists():
        raise InputError(f"missing {what}: {path} (run the earlier pipeline stage first)")
    with open(path, encoding="utf-8", newline="") as fh:
        return list(csv.reader(fh))


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _log_files(spec: str) -> list[Path]:
    path = Path(spec)
    if path.is_dir():
        files = sorted(p for p in path.iterdir() if logstore.HOUR_FILE_RE.match(p.name))
    elif glob.has_magic(spec):
        files = sorted(Path(p) for p in glob.glob(spec))
    elif path.exists():
        files = [path]
    else:
        files = []
    if not files:
        raise InputError(f"no log files matched {spec!r}")
    return files


def _load_hoaxes_unique(path: Path) -> list[corpus.ArticleMeta]:
    hoaxes = corpus.load_hoaxes(path)
    seen: dict[str, corpus.ArticleMeta] = {}
    for hoax in hoaxes:
        if hoax.title in seen:
            log.warning("duplicate hoax entry %s; keeping the first", hoax.title)
            continue
        seen[hoax.title] = hoax
    return [seen[t] for t in sorted(seen)]


def cmd_ingest(cfg: RunConfig) -> int:
    files = _log_files(str(_require(cfg.logs, "logs")))
    filter_cfg = logstore.FilterConfig.load(_require(cfg.filter_config, "filter_config"))
    table = logstore.RedirectTable.load(_require(cfg.redirect_table, "redirect_table"))
    store = logstore.ingest(files, table, filter_cfg)
    out = cfg.out_dir()
    out.mkdir(parents=True, exist_ok=True)
    logstore.save_store(store, cfg.store_dir())
    report = {
        "coverage": {
            "start": store.coverage_start.isoformat(),
            "end": store.coverage_end.isoformat(),
        },
        "tallies": store.tallies,
        "files": [
            {
                "name": t.name,
                "lines_total": t.lines_total,
                "lines_kept": t.lines_kept,
                "lines_dropped_filter": t.lines_dropped_filter,
                "lines_dropped_title": t.lines_dropped_title,
                "lines_malformed": t.lines_malformed,
            }
            for t in store.file_tallies
        ],
        "unreadable": store.unreadable,
    }
    _write_json(out / INGEST_REPORT, report)
    print(
        f"ingested {store.tallies['files_processed']} files: "
        f"{store.tallies['lines_kept']} lines kept, "
        f"{store.tallies['lines_dropped_filter'] + store.tallies['lines_dropped_title']} dropped, "
        f"{store.tallies['lines_malformed']} malformed; "
        f"coverage {store.coverage_start} to {store.coverage_end}"
    )
    return 0


def cmd_cohort(cfg: RunConfig) -> int:
    hoaxes = _load_hoaxes_unique(_require(cfg.hoax_list, "hoax_list"))
    metas, redirects = corpus.load_creation_list(_require(cfg.creation_lists, "creation_lists"))
    hoax_titles = {h.title for h in hoaxes}
    by_day: dict[date, list[corpus.ArticleMeta]] = {}
    for meta in metas:
        by_day.setdefault(meta.creation_date, []).append(meta)
    out = cfg.out_dir()
    out.mkdir(parents=True, exist_ok=True)
    rows: list[list[str]] = []
    exclusions: list[list[str]] = []
    n_cohorts = 0
    for hoax in hoaxes:
        same_day = by_day.get(hoax.creation_date, [])
        try:
            record = corpus.build_cohort(hoax, same_day, redirects, hoax_titles)
        except corpus.EmptyCohort:
            exclusions.append([hoax.title, "empty_cohort"])
            continue
        n_cohorts += 1
        for member in record.members:
            rows.append([hoax.title, record.creation_date.isoformat(), member.title])
    _write_csv(out / COHORTS_CSV, ["hoax_title", "creation_date", "member_title"], rows)
    _write_csv(out / COHORT_EXCLUSIONS_CSV, ["hoax_title", "reason"], exclusions)
    print(f"built {n_cohorts} cohorts ({len(rows)} member rows), {len(exclusions)} hoaxes excluded")
    return 0


def _read_cohorts(out: Path) -> tuple[dict[str, date], dict[str, list[str]], dict[str, str]]:
    """Cohort membership and carried-over exclusions from the cohort stage."""
    rows = _read_csv(out / COHORTS_CSV, "cohort table")
    creation: dict[str, date] = {}
    members: dict[str, list[str]] = {}
    for row in rows[1:]:
        if not row:
            continue
        hoax_title, day_s, member_title = row
        creation[hoax_title] = date.fromisoformat(day_s)
        members.setdefault(hoax_title, []).append(member_title)
    excluded: dict[str, str] = {}
    exc_path = out / COHORT_EXCLUSIONS_CSV
    if exc_path.exists():
        for row in _read_csv(exc_path, "cohort exclusions")[1:]:
            if row:
                excluded[row[0]] = row[1]
    return creation, members, excluded


def cmd_features(cfg: RunConfig) -> int:
    hoaxes = _load_hoaxes_unique(_require(cfg.hoax_list, "hoax_list"))
    fixtures = _require(cfg.fixtures, "fixtures")
    out = cfg.out_dir()
    _, members, _ = _read_cohorts(out)
    titles = set(members)
    for member_list in members.values():
        titles.update(member_list)
    computed: dict[str, wikitext.ArticleFeatures] = {}
    exclusions: list[list[str]] = []
    for title in sorted(titles):
        try:
            source = wikitext.load_article(fixtures, title)
        except FileNotFoundError:
            exclusions.append([title, "no_fixture"])
            continue
        try:
            computed[title] = wikitext.compute_features(source)
        except wikitext.EmptyArticle:
            exclusions.append([title, "empty_article"])
    feature_rows = []
    for title in sorted(computed):
        f = computed[title]
        feature_rows.append(
            [title, f.plain_length, f.plain_to_markup_ratio, f.wikilink_density, f.extlink_density]
        )
    _write_csv(out / FEATURES_CSV, FEATURES_HEADER, feature_rows)
    hoax_titles = {h.title for h in hoaxes}
    z_rows: list[list] = []
    for hoax_title in sorted(members):
        if hoax_title not in hoax_titles or hoax_title not in computed:
            continue
        hoax_values = wikitext.feature_values(computed[hoax_title])
        cohort_features = [computed[m] for m in members[hoax_title] if m in computed]
        if not cohort_features:
            exclusions.append([hoax_title, "no_cohort_features"])
            continue
        for name in wikitext.FEATURE_NAMES:
            cohort_values = [wikitext.feature_values(f)[name] for f in cohort_features]
            try:
                score = attention.modified_z(hoax_values[name], cohort_values, feature=name)
            except attention.ZeroMAD:
                z_rows.append([hoax_title, name, hoax_values[name], "", "", "", "zero_mad"])
                continue
            z_rows.append(
                [hoax_title, name, score.value, score.cohort_median, score.cohort_mad, score.z, ""]
            )
    _write_csv(
        out / ZSCORES_CSV,
        ["hoax_title", "feature", "value", "cohort_median", "cohort_mad", "z", "flag"],
        z_rows,
    )
    _write_csv(out / FEATURE_EXCLUSIONS_CSV, ["title", "reason"], exclusions)
    print(
        f"features for {len(computed)} articles, z-scores for "
        f"{len({r[0] for r in z_rows})} hoaxes, {len(exclusions)} articles excluded"
    )
    return 0


def cmd_attention(cfg: RunConfig) -> int:
    store_dir = cfg.store_dir()
    if not (store_dir / logstore.MANIFEST_NAME).exists():
        raise InputError(f"missing traffic store: {store_dir} (run ingest first)")
    store = logstore.load_store(store_dir)
    hoaxes = _load_hoaxes_unique(_require(cfg.hoax_list, "hoax_list"))
    fixtures = _require(cfg.fixtures, "fixtures")
    out = cfg.out_dir()
    creation, members, cohort_excluded = _read_cohorts(out)
    hoax_titles = frozenset(h.title for h in hoaxes)
    span = cfg.span

    # Scores are per (title, day); hoaxes created the same day share member scores.
    score_cache: dict[tuple[str, date], attention.AttentionScore | None | str] = {}

    def article_score(title: str, day0: date):
        key = (title, day0)
        if key in score_cache:
            return score_cache[key]
        try:
            source = wikitext.load_article(fixtures, title)
            neighbors = corpus.neighbor_set(source, hoax_titles)
            before, after = logstore.window_totals(store, sorted(neighbors), day0, span)
            result = attention.delta_v(before, after, span=span, title=title)
        except FileNotFoundError:
            result = "no_fixture"
        except corpus.NoNeighbors:
            result = "no_neighbors"
        except logstore.OutOfCoverage:
            result = "out_of_coverage"
        score_cache[key] = result
        return result

    results: list[attention.CohortAttentionResult] = []
    member_rows: list[list] = []
    exclusions: list[list[str]] = []
    for hoax in hoaxes:
        title = hoax.title
        if title in cohort_excluded:
            exclusions.append([title, cohort_excluded[title]])
            continue
        if title not in members:
            exclusions.append([title, "no_cohort"])
            continue
        day0 = creation[title]
        hoax_score = article_score(title, day0)
        if isinstance(hoax_score, str):
            exclusions.append([title, hoax_score])
            continue
        if hoax_score is None:
            exclusions.append([title, "undefined_delta_v"])
            continue
        cohort_scores = []
        for member in members[title]:
            score = article_score(member, day0)
            if isinstance(score, str) or score is None:
                continue
            cohort_scores.append(score)
        try:
            result = attention.cohort_d(hoax_score, cohort_scores)
        except attention.EmptyCohortScores:
            exclusions.append([title, "empty_cohort_scores"])
            continue
        results.append(result)
        for score in result.cohort_scores:
            member_rows.append([title, score.title, score.delta_v])
    result_rows = [
        [r.hoax_score.title, r.hoax_score.delta_v, r.cohort_mean, r.cohort_n, r.d]
        for r in results
    ]
    _write_csv(out / RESULTS_CSV, RESULTS_HEADER, result_rows)
    _write_csv(out / COHORT_SCORES_CSV, ["hoax_title", "member_title", "delta_v"], member_rows)
    _write_csv(out / ATTENTION_EXCLUSIONS_CSV, ["hoax_title", "reason"], exclusions)
    d_values = [r.d for r in results]
    summary: dict = {
        "n_hoaxes": len(hoaxes),
        "n_results": len(results),
        "n_excluded": len(exclusions),
        "d_positive": sum(1 for d in d_values if d > 0),
        "seed": cfg.seed,
        "resamples": cfg.resamples,
    }
    if d_values:
        boot = attention.bootstrap_mean_ci(d_values, resamples=cfg.resamples, seed=cfg.seed)
        summary["sample_mean"] = boot.sample_mean
        summary["ci"] = [boot.ci_low, boot.ci_high]
        edges, counts = svgplot.compute_histogram(d_values, bins=cfg.histogram_bins)
        _write_csv(
            out / D_HISTOGRAM_CSV,
            ["bin_left", "bin_right", "count"],
            [[l, r, c] for l, r, c in zip(edges[:-1], edges[1:], counts)],
        )
        means = attention.bootstrap_resample_means(d_values, resamples=cfg.resamples, seed=cfg.seed)
        m_edges, m_counts = svgplot.compute_histogram(means, bins=cfg.histogram_bins)
        _write_csv(
            out / BOOT_HISTOGRAM_CSV,
            ["bin_left", "bin_right", "count"],
            [[l, r, c] for l, r, c in zip(m_edges[:-1], m_edges[1:], m_counts)],
        )
    else:
        summary["sample_mean"] = None
        summary["ci"] = None
    _write_json(out / SUMMARY_JSON, summary)
    mean_s = f"{summary['sample_mean']:.4f}" if d_values else "n/a"
    print(
        f"attention scores for {len(results)} hoaxes "
        f"({summary['d_positive']} with D > 0, mean D {mean_s}), "
        f"{len(exclusions)} excluded"
    )
    return 0


def cmd_report(cfg: RunConfig) -> int:
    out = cfg.out_dir()
    results = _read_csv(out / RESULTS_CSV, "attention results")
    scores = _read_csv(out / COHORT_SCORES_CSV, "cohort scores")
    summary_path = out / SUMMARY_JSON
    if not summary_path.exists():
        raise InputError(f"missing attention summary: {summary_path} (run attention first)")
    summary = json.loads(summary_path.read_text(encoding="utf-8"))
    member_scores: dict[str, list[float]] = {}
    for row in scores[1:]:
        if row:
            member_scores.setdefault(row[0], []).append(float(row[2]))
    plots = out / PLOTS_DIR
    plots.mkdir(parents=True, exist_ok=True)
    n_plots = 0
    d_values = []
    for row in results[1:]:
        if not row:
            continue
        hoax_title, dv, cohort_mean, _, d = row
        d_values.append(float(d))
        cohort = member_scores.get(hoax_title, [])
        if not cohort:
            continue
        edges, counts = svgplot.compute_histogram(cohort, bins=cfg.histogram_bins)
        svg = svgplot.render_histogram(
            edges,
            counts,
            title=f"Neighborhood traffic drop: {hoax_title}",
            x_label="cohort member delta V/V",
            vlines=[
                (float(dv), "#d62728", f"article {float(dv):.3f}"),
                (float(cohort_mean), "#2ca02c", f"cohort mean {float(cohort_mean):.3f}"),
            ],
        )
        safe = wikitext.fixture_filename(hoax_title, ".svg")
        (plots / f"cohort_{safe}").write_text(svg, encoding="utf-8")
        n_plots += 1
    if not d_values:
        raise InputError(f"no rows in {out / RESULTS_CSV}; nothing to plot")
    edges, counts = svgplot.compute_histogram(d_values, bins=cfg.histogram_bins)
    band = tuple(summary["ci"]) if summary.get("ci") else None
    vlines = []
    if summary.get("sample_mean") is not None:
        vlines.append(
            (summary["sample_mean"], "#d62728", f"mean D {summary['sample_mean']:.3f}")
        )
    svg = svgplot.render_histogram(
        edges,
        counts,
        title="Attention precedence across hoaxes",
        x_label="D (article drop minus cohort mean drop)",
        vlines=vlines,
        band=band,
    )
    (plots / "d_histogram.svg").write_text(svg, encoding="utf-8")
    print(f"wrote {n_plots} cohort plots and 1 summary plot to {plots}")
    return 0


COMMANDS = {
    "ingest": (cmd_ingest, "parse hourly logs into the daily traffic store"),
    "features": (cmd_features, "compute appearance features and cohort z-scores"),
    "cohort": (cmd_cohort, "build same-day creation cohorts for each hoax"),
    "attention": (cmd_attention, "score traffic drops and bootstrap the mean difference"),
    "report": (cmd_report, "render per-hoax and summary plots"),
}


def _seed_type(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="JSON run configuration")
    common.add_argument("--seed", type=_seed_type, metavar="U64", help="override config seed")
    common.add_argument("--out", metavar="DIR", help="override output directory")
    common.add_argument("--verbose", "-v", action="store_true", help="chatty logging")
    parser = argparse.ArgumentParser(
        prog="hoaxlens",
        description="Measure whether attention to a topic preceded its article's creation.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name, (func, help_text) in COMMANDS.items():
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = RunConfig.load(args.config) if args.config else RunConfig()
        if args.seed is not None:
            cfg.seed = args.seed
        if args.out is not None:
            cfg.out = args.out
        return args.func(cfg)
    except (InputError, corpus.MalformedRecord, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception:
        traceback.print_exc()
        return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
