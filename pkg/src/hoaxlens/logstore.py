"""Hourly traffic-log ingestion: parse, clean, filter, resolve redirects, aggregate per day.

Input files follow the classic pagecount dump layout: one line per (project, title)
with space-separated fields ``project title count bytes`` and the UTC hour encoded
in the file name (``pagecounts-YYYYMMDD-HH0000``, optionally gzipped).
"""

from __future__ import annotations

import gzip
import logging
import re
import zlib
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta, timezone
from pathlib import Path
from urllib.parse import unquote

log = logging.getLogger(__name__)

# Characters MediaWiki forbids in titles; a title containing one is garbage in the logs.
_ILLEGAL_RE = re.compile(r"[<>\[\]{}|]")

HOUR_FILE_RE = re.compile(r"^pagecounts-(\d{8})-(\d{2})0000(?:\.gz)?$")

MAX_REDIRECT_HOPS = 16

DEFAULT_SHARDS = 16

MANIFEST_NAME = "manifest.txt"

# Fixed manifest/tally key order; changing it breaks stored-manifest compatibility.
TALLY_KEYS = (
    "files_processed",
    "files_unreadable",
    "lines_total",
    "lines_kept",
    "lines_dropped_filter",
    "lines_dropped_title",
    "lines_malformed",
)


class MalformedLine(ValueError):
    """A log line that does not parse into project/title/count/bytes."""


class OutOfCoverage(ValueError):
    """A queried day falls outside the store's coverage window."""

    def __init__(self, day: date, start: date, end: date):
        super().__init__(f"day {day} outside coverage [{start}, {end}]")
        self.day = day


@dataclass(frozen=True)
class RawLogLine:
    project: str
    title: str
    count: int
    bytes: int


def parse_line(line: str | bytes) -> RawLogLine:
    """Parse one log line; raises MalformedLine on any structural defect.

    Exactly four single-space-separated fields; count and bytes must be plain
    base-10 digits (no sign, no underscores); project and title non-empty.
    """
    if isinstance(line, bytes):
        line = line.decode("utf-8", "replace")
    parts = line.split(" ")
    if len(parts) != 4:
        raise MalformedLine(f"expected 4 fields, got {len(parts)}")
    project, title, count_s, bytes_s = parts
    bytes_s = bytes_s.rstrip("\r\n")
    if not (count_s.isascii() and count_s.isdigit()):
        raise MalformedLine(f"bad count field {count_s!r}")
    if not (bytes_s.isascii() and bytes_s.isdigit()):
        raise MalformedLine(f"bad bytes field {bytes_s!r}")
    if not project or not title:
        raise MalformedLine("empty project or title field")
    return RawLogLine(project, title, int(count_s), int(bytes_s))


def clean_title(raw: str) -> str | None:
    """Normalize a raw title to canonical form; None means the entry is discarded.

    Percent-escapes are decoded to fixpoint (so cleaning is idempotent even for
    double-encoded input), spaces become underscores, a leading ``#`` discards
    the title, an interior ``#`` truncates the fragment, titles containing
    ``< > [ ] { } |`` are discarded, and the first character is uppercased.
    """
    title = raw
    while "%" in title:
        decoded = unquote(title)
        if decoded == title:
            break
        title = decoded
    title = title.replace(" ", "_")
    if not title or title[0] == "#":
        return None
    pos = title.find("#")
    if pos > 0:
        title = title[:pos]
    if _ILLEGAL_RE.search(title):
        return None
    first = title[0]
    if not first.isupper():
        title = first.upper() + title[1:]
    return title


@dataclass
class FilterConfig:
    """Project code to keep plus namespace prefixes to drop (checked post-cleaning)."""

    project: str
    namespace_prefixes: tuple[str, ...]

    @classmethod
    def load(cls, path: str | Path) -> "FilterConfig":
        """First non-comment line is the project code, the rest are prefixes."""
        project = None
        prefixes: list[str] = []
        for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if project is None:
                project = line
            else:
                prefixes.append(line)
        if project is None:
            raise ValueError(f"{path}: no project code found")
        return cls(project=project, namespace_prefixes=tuple(prefixes))


def filter_entry(line: RawLogLine, config: FilterConfig) -> bool:
    """True iff the entry survives the project and namespace filters.

    Titles that clean to Discard are dropped here too; they can never be kept.
    """
    if line.project != config.project:
        return False
    cleaned = clean_title(line.title)
    if cleaned is None:
        return False
    return not cleaned.startswith(config.namespace_prefixes)


@dataclass
class RedirectTable:
    """Source -> target mapping over cleaned titles."""

    mapping: dict[str, str] = field(default_factory=dict)
    max_hops: int = MAX_REDIRECT_HOPS

    @classmethod
    def load(cls, path: str | Path) -> "RedirectTable":
        """Two-column TSV ``source<TAB>target``; blank lines skipped."""
        mapping: dict[str, str] = {}
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.rstrip("\n")
                if not line:
                    continue
                cols = line.split("\t")
                if len(cols) != 2 or not cols[0] or not cols[1]:
                    raise ValueError(f"{path}:{lineno}: expected source<TAB>target")
                mapping[cols[0]] = cols[1]
        return cls(mapping=mapping)

    def resolve(self, title: str) -> str:
        """Follow redirects to the final target.

        Cycles and chains longer than max_hops resolve to the input title and
        are logged, so one bad row cannot stall or derail a run.
        """
        current = title
        seen = {title}
        hops = 0
        while (target := self.mapping.get(current)) is not None:
            if target in seen:
                log.warning("redirect cycle at %r; keeping %r", current, title)
                return title
            if hops >= self.max_hops:
                log.warning("redirect chain from %r exceeds %d hops; keeping it", title, self.max_hops)
                return title
            seen.add(target)
            current = target
            hops += 1
        return current

    def flattened(self) -> dict[str, str]:
        """Every source mapped directly to its final resolution."""
        return {source: self.resolve(source) for source in self.mapping}


@dataclass
class FileTally:
    name: str
    lines_total: int = 0
    lines_kept: int = 0
    lines_dropped_filter: int = 0
    lines_dropped_title: int = 0
    lines_malformed: int = 0


@dataclass
class TrafficSeries:
    title: str
    counts: dict[date, int]  # keys strictly increasing


@dataclass
class TrafficStore:
    """Per-title daily view counts over a contiguous coverage window."""

    coverage_start: date
    coverage_end: date
    counts: dict[str, dict[date, int]]
    tallies: dict[str, int]
    file_tallies: list[FileTally] = field(default_factory=list, compare=False)
    unreadable: list[str] = field(default_factory=list, compare=False)

    def titles(self) -> list[str]:
        return sorted(self.counts)

    def series(self, title: str) -> TrafficSeries:
        days = self.counts.get(title, {})
        return TrafficSeries(title=title, counts=dict(sorted(days.items())))

    def daily_total(self, titles, day: date) -> int:
        if not (self.coverage_start <= day <= self.coverage_end):
            raise OutOfCoverage(day, self.coverage_start, self.coverage_end)
        counts = self.counts
        total = 0
        for t in titles:
            series = counts.get(t)
            if series is not None:
                total += series.get(day, 0)
        return total


def file_hour(path: str | Path) -> datetime:
    """UTC hour encoded in the file name; raises ValueError on a non-matching name."""
    name = Path(path).name
    m = HOUR_FILE_RE.match(name)
    if m is None:
        raise ValueError(f"not an hourly log file name: {name!r}")
    stamp, hour = m.groups()
    return datetime.strptime(stamp, "%Y%m%d").replace(
        hour=int(hour), tzinfo=timezone.utc
    )


_MISS = object()


def _ingest_file(
    path: Path,
    config: FilterConfig,
    clean_cache: dict[str, str | None],
    flat_redirects: dict[str, str],
) -> tuple[dict[str, int], FileTally]:
    """Aggregate one hourly file into title -> count; tallies every line once.

    Tally precedence: malformed, then project filter, then title Discard, then
    namespace filter. The loop inlines parse_line's checks for throughput; the
    semantics must stay identical.
    """
    tally = FileTally(name=path.name)
    counts: dict[str, int] = {}
    project_code = config.project
    prefixes = config.namespace_prefixes
    total = kept = dropped_filter = dropped_title = malformed = 0
    opener = gzip.open if path.suffix == ".gz" else open
    counts_get = counts.get
    cache_get = clean_cache.get
    redirect_get = flat_redirects.get
    with opener(path, "rt", encoding="utf-8", errors="replace") as fh:
        for line in fh:
            total += 1
            parts = line.split(" ")
            if len(parts) != 4:
                malformed += 1
                continue
            project, raw_title, count_s, bytes_s = parts
            bytes_s = bytes_s.rstrip("\r\n")
            if (
                not count_s.isascii()
                or not count_s.isdigit()
                or not bytes_s.isascii()
                or not bytes_s.isdigit()
                or not project
                or not raw_title
            ):
                malformed += 1
                continue
            if project != project_code:
                dropped_filter += 1
                continue
            cleaned = cache_get(raw_title, _MISS)
            if cleaned is _MISS:
                cleaned = clean_title(raw_title)
                clean_cache[raw_title] = cleaned
            if cleaned is None:
                dropped_title += 1
                continue
            if cleaned.startswith(prefixes):
                dropped_filter += 1
                continue
            target = redirect_get(cleaned, cleaned)
            prev = counts_get(target)
            counts[target] = int(count_s) if prev is None else prev + int(count_s)
            kept += 1
    tally.lines_total = total
    tally.lines_kept = kept
    tally.lines_dropped_filter = dropped_filter
    tally.lines_dropped_title = dropped_title
    tally.lines_malformed = malformed
    return counts, tally


def ingest(files, table: RedirectTable, config: FilterConfig) -> TrafficStore:
    """Build a TrafficStore from hourly files.

    Unreadable files are recorded and skipped; the pipeline continues. A file
    that fails mid-read contributes nothing (its partial counts are discarded).
    Order of input files does not affect the resulting counts.
    """
    paths = [Path(p) for p in files]
    if not paths:
        raise ValueError("no input files")
    flat = table.flattened()
    clean_cache: dict[str, str | None] = {}
    per_title: dict[str, dict[date, int]] = {}
    file_tallies: list[FileTally] = []
    unreadable: list[str] = []
    days_seen: list[date] = []
    for path in paths:
        day = file_hour(path).date()
        try:
            counts, tally = _ingest_file(path, config, clean_cache, flat)
        except (OSError, EOFError, UnicodeError) as exc:
            log.warning("unreadable file %s: %s", path, exc)
            unreadable.append(path.name)
            continue
        file_tallies.append(tally)
        days_seen.append(day)
        for title, c in counts.items():
            day_map = per_title.get(title)
            if day_map is None:
                per_title[title] = {day: c}
            else:
                day_map[day] = day_map.get(day, 0) + c
    if not days_seen:
        raise ValueError("no readable input files")
    tallies = {
        "files_processed": len(file_tallies),
        "files_unreadable": len(unreadable),
        "lines_total": sum(t.lines_total for t in file_tallies),
        "lines_kept": sum(t.lines_kept for t in file_tallies),
        "lines_dropped_filter": sum(t.lines_dropped_filter for t in file_tallies),
        "lines_dropped_title": sum(t.lines_dropped_title for t in file_tallies),
        "lines_malformed": sum(t.lines_malformed for t in file_tallies),
    }
    return TrafficStore(
        coverage_start=min(days_seen),
        coverage_end=max(days_seen),
        counts=per_title,
        tallies=tallies,
        file_tallies=file_tallies,
        unreadable=unreadable,
    )


def window_totals(
    store: TrafficStore, titles, day0: date, span: int = 7
) -> tuple[list[int], list[int]]:
    """Daily totals over the title set for [day0-span, day0-1] and [day0+1, day0+span].

    day0 itself belongs to neither window. Raises OutOfCoverage if either end of
    the combined window leaves store coverage; days with no rows count as zero.
    """
    if span < 1:
        raise ValueError("span must be >= 1")
    first = day0 - timedelta(days=span)
    last = day0 + timedelta(days=span)
    if first < store.coverage_start or last > store.coverage_end:
        raise OutOfCoverage(
            first if first < store.coverage_start else last,
            store.coverage_start,
            store.coverage_end,
        )
    title_list = list(titles)
    before = [
        store.daily_total(title_list, day0 - timedelta(days=k))
        for k in range(span, 0, -1)
    ]
    after = [
        store.daily_total(title_list, day0 + timedelta(days=k))
        for k in range(1, span + 1)
    ]
    return before, after


def _shard_index(title: str, n_shards: int) -> int:
    return zlib.crc32(title.encode("utf-8")) % n_shards


def save_store(store: TrafficStore, directory: str | Path, shards: int = DEFAULT_SHARDS) -> None:
    """Write sorted TSV shards plus a manifest; identical stores give identical bytes."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for stale in directory.glob("shard-*.tsv"):
        stale.unlink()
    buckets: list[list[tuple[str, date, int]]] = [[] for _ in range(shards)]
    for title, day_map in store.counts.items():
        bucket = buckets[_shard_index(title, shards)]
        for day, count in day_map.items():
            bucket.append((title, day, count))
    for i, bucket in enumerate(buckets):
        bucket.sort(key=lambda row: (row[0], row[1]))
        lines = [f"{title}\t{day.isoformat()}\t{count}\n" for title, day, count in bucket]
        (directory / f"shard-{i:04d}.tsv").write_text("".join(lines), encoding="utf-8")
    manifest = [
        f"coverage_start={store.coverage_start.isoformat()}",
        f"coverage_end={store.coverage_end.isoformat()}",
        f"shards={shards}",
    ]
    manifest += [f"{key}={store.tallies.get(key, 0)}" for key in TALLY_KEYS]
    (directory / MANIFEST_NAME).write_text("\n".join(manifest) + "\n", encoding="utf-8")


def load_store(directory: str | Path) -> TrafficStore:
    """Inverse of save_store; per-file tallies are not persisted, aggregates are."""
    directory = Path(directory)
    manifest_path = directory / MANIFEST_NAME
    fields: dict[str, str] = {}
    for lineno, line in enumerate(manifest_path.read_text(encoding="utf-8").splitlines(), 1):
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"{manifest_path}:{lineno}: expected key=value")
        fields[key] = value
    try:
        start = date.fromisoformat(fields["coverage_start"])
        end = date.fromisoformat(fields["coverage_end"])
        shards = int(fields["shards"])
    except KeyError as exc:
        raise ValueError(f"{manifest_path}: missing field {exc}") from None
    tallies = {key: int(fields.get(key, 0)) for key in TALLY_KEYS}
    counts: dict[str, dict[date, int]] = {}
    for i in range(shards):
        shard_path = directory / f"shard-{i:04d}.tsv"
        with open(shard_path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.rstrip("\n")
                if not line:
                    continue
                cols = line.split("\t")
                if len(cols) != 3:
                    raise ValueError(f"{shard_path}:{lineno}: expected 3 columns")
                title, day_s, count_s = cols
                counts.setdefault(title, {})[date.fromisoformat(day_s)] = int(count_s)
    return TrafficStore(
        coverage_start=start,
        coverage_end=end,
        counts=counts,
        tallies=tallies,
    )
