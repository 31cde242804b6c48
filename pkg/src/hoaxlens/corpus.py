"""Article metadata, same-day creation cohorts, link neighborhoods, live fetch.

A hoax's cohort is every non-redirect, non-hoax article created on the same UTC
day, with redirect sources collapsed away so each canonical page appears once.
"""

from __future__ import annotations

import csv
import logging
import threading
import time
from dataclasses import dataclass, field
from datetime import date, datetime, timezone
from pathlib import Path

from .logstore import RedirectTable, clean_title
from .wikitext import ArticleSource, extract_wikilinks, fixture_filename

log = logging.getLogger(__name__)

HOAX_HEADER = ["title", "created_at"]
CREATION_HEADER = ["title", "created_at", "is_redirect", "redirect_target"]

_TRUTHY = {"1", "true", "yes"}


class MalformedRecord(ValueError):
    """A CSV record that cannot be parsed; carries file and line number."""

    def __init__(self, path, lineno: int, why: str):
        super().__init__(f"{path}:{lineno}: {why}")
        self.lineno = lineno


class EmptyCohort(ValueError):
    """No eligible articles were created the same day as the hoax."""


class NoNeighbors(ValueError):
    """The article links to nothing usable; attention is unmeasurable."""


@dataclass(frozen=True)
class ArticleMeta:
    title: str
    created_at: datetime
    is_redirect: bool = False
    is_hoax: bool = False

    @property
    def creation_date(self) -> date:
        return self.created_at.date()


@dataclass
class CohortRecord:
    hoax: ArticleMeta
    members: list[ArticleMeta]
    creation_date: date


def _parse_timestamp(value: str, path, lineno: int) -> datetime:
    """ISO-8601; a trailing Z means UTC, naive timestamps are taken as UTC."""
    text = value.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    try:
        stamp = datetime.fromisoformat(text)
    except ValueError:
        raise MalformedRecord(path, lineno, f"bad timestamp {value!r}") from None
    if stamp.tzinfo is None:
        return stamp.replace(tzinfo=timezone.utc)
    return stamp.astimezone(timezone.utc)


def _clean_or_raise(raw: str, path, lineno: int) -> str:
    cleaned = clean_title(raw)
    if cleaned is None:
        raise MalformedRecord(path, lineno, f"unusable title {raw!r}")
    return cleaned


def load_hoaxes(path: str | Path) -> list[ArticleMeta]:
    """Hoax list CSV with header ``title,created_at``; empty file means no hoaxes."""
    path = Path(path)
    hoaxes: list[ArticleMeta] = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        rows = list(reader)
    if not rows:
        return hoaxes
    if rows[0] != HOAX_HEADER:
        raise MalformedRecord(path, 1, f"expected header {','.join(HOAX_HEADER)}")
    for lineno, row in enumerate(rows[1:], 2):
        if not row:
            continue
        if len(row) != 2:
            raise MalformedRecord(path, lineno, f"expected 2 fields, got {len(row)}")
        title = _clean_or_raise(row[0], path, lineno)
        created = _parse_timestamp(row[1], path, lineno)
        hoaxes.append(ArticleMeta(title=title, created_at=created, is_hoax=True))
    return hoaxes


def _load_creation_file(path: Path, metas: list[ArticleMeta], redirects: dict[str, str]) -> None:
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        return
    if rows[0] != CREATION_HEADER:
        raise MalformedRecord(path, 1, f"expected header {','.join(CREATION_HEADER)}")
    for lineno, row in enumerate(rows[1:], 2):
        if not row:
            continue
        if len(row) != 4:
            raise MalformedRecord(path, lineno, f"expected 4 fields, got {len(row)}")
        title = _clean_or_raise(row[0], path, lineno)
        created = _parse_timestamp(row[1], path, lineno)
        is_redirect = row[2].strip().lower() in _TRUTHY
        metas.append(ArticleMeta(title=title, created_at=created, is_redirect=is_redirect))
        if is_redirect and row[3].strip():
            target = _clean_or_raise(row[3], path, lineno)
            redirects[title] = target


def load_creation_list(path: str | Path) -> tuple[list[ArticleMeta], RedirectTable]:
    """Creation records plus the redirect mapping declared by the redirect rows.

    Accepts one CSV or a directory of them (read in sorted name order).
    """
    path = Path(path)
    metas: list[ArticleMeta] = []
    redirects: dict[str, str] = {}
    files = sorted(path.glob("*.csv")) if path.is_dir() else [path]
    if not files:
        raise ValueError(f"{path}: no creation list files")
    for file in files:
        _load_creation_file(file, metas, redirects)
    return metas, RedirectTable(mapping=redirects)


def build_cohort(
    hoax: ArticleMeta,
    same_day,
    redirects: RedirectTable,
    hoax_titles=frozenset(),
) -> CohortRecord:
    """Same-day cohort for one hoax.

    Redirect rows and anything the redirect table knows as a source are
    collapsed away (target already present or absent either way), other hoaxes
    are excluded and logged, and members are deduped and sorted by title so the
    result is independent of input order.
    """
    day = hoax.creation_date
    members: dict[str, ArticleMeta] = {}
    for meta in sorted(same_day, key=lambda m: m.title):
        if meta.creation_date != day:
            raise ValueError(
                f"{meta.title} created {meta.creation_date}, expected {day}"
            )
        if meta.title == hoax.title:
            continue
        if meta.is_hoax or meta.title in hoax_titles:
            log.info("cohort %s: excluding fellow hoax %s", hoax.title, meta.title)
            continue
        if meta.is_redirect:
            continue
        if meta.title in redirects.mapping:
            log.info(
                "cohort %s: collapsing redirect source %s into %s",
                hoax.title,
                meta.title,
                redirects.resolve(meta.title),
            )
            continue
        if meta.title not in members:
            members[meta.title] = meta
    if not members:
        raise EmptyCohort(f"no cohort members for {hoax.title} on {day}")
    return CohortRecord(
        hoax=hoax,
        members=[members[t] for t in sorted(members)],
        creation_date=day,
    )


def neighbor_set(article: ArticleSource, hoax_titles=frozenset()) -> set[str]:
    """Distinct outbound link targets, minus known hoaxes and the article itself."""
    neighbors = set(extract_wikilinks(article.markup))
    neighbors.discard(article.title)
    neighbors -= set(hoax_titles)
    if not neighbors:
        raise NoNeighbors(article.title)
    return neighbors


@dataclass
class LiveConfig:
    """Wiki API endpoint settings; environment variables override the defaults."""

    base_url: str = "https://en.wikipedia.org/w/api.php"
    timeout: float = 30.0
    max_concurrency: int = 2
    user_agent: str = "hoaxlens/0.1 (research tooling)"
    request_interval: float = 0.1

    @classmethod
    def from_env(cls, **overrides) -> "LiveConfig":
        import os

        cfg = cls(**overrides)
        cfg.base_url = os.environ.get("HOAXLENS_API_URL", cfg.base_url)
        cfg.user_agent = os.environ.get("HOAXLENS_USER_AGENT", cfg.user_agent)
        if "HOAXLENS_API_TIMEOUT" in os.environ:
            cfg.timeout = float(os.environ["HOAXLENS_API_TIMEOUT"])
        if "HOAXLENS_API_CONCURRENCY" in os.environ:
            cfg.max_concurrency = int(os.environ["HOAXLENS_API_CONCURRENCY"])
        return cfg


@dataclass
class FetchReport:
    fetched: list[str] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)
    not_found: list[str] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)


def _api_get(session, config: LiveConfig, params: dict) -> dict:
    query = {"format": "json", "formatversion": "2", "action": "query", **params}
    response = session.get(config.base_url, params=query, timeout=config.timeout)
    if getattr(response, "status_code", 200) >= 400:
        raise OSError(f"HTTP {response.status_code}")
    return response.json()


def _fetch_one(session, config: LiveConfig, fixtures_dir: Path, title: str) -> tuple[str, str | None]:
    """Fetch markup, extract and first-revision timestamp; returns (status, created_at)."""
    data = _api_get(
        session,
        config,
        {
            "titles": title,
            "prop": "revisions|extracts",
            "rvprop": "content",
            "rvslots": "main",
            "rvlimit": "1",
            "explaintext": "1",
            "exlimit": "1",
        },
    )
    pages = data.get("query", {}).get("pages", [])
    if not pages or pages[0].get("missing"):
        return "not_found", None
    page = pages[0]
    revisions = page.get("revisions") or []
    if not revisions:
        return "not_found", None
    markup = revisions[0].get("slots", {}).get("main", {}).get("content", "")
    time.sleep(config.request_interval)
    first = _api_get(
        session,
        config,
        {
            "titles": title,
            "prop": "revisions",
            "rvprop": "timestamp",
            "rvlimit": "1",
            "rvdir": "newer",
        },
    )
    first_pages = first.get("query", {}).get("pages", [])
    first_revs = (first_pages[0].get("revisions") or []) if first_pages else []
    created_at = first_revs[0]["timestamp"] if first_revs else None
    (fixtures_dir / fixture_filename(title, ".wiki")).write_text(markup, encoding="utf-8")
    extract = page.get("extract")
    if extract:
        (fixtures_dir / fixture_filename(title, ".txt")).write_text(extract, encoding="utf-8")
    return "fetched", created_at


def fetch_live(
    titles,
    config: LiveConfig,
    fixtures_dir: str | Path,
    session=None,
) -> FetchReport:
    """Download article fixtures for titles not already on disk.

    Idempotent: existing ``.wiki`` fixtures are skipped. Per-title failures are
    tallied, never fatal. Creation timestamps are merged into
    ``creation_times.csv`` in the fixtures directory.
    """
    fixtures_dir = Path(fixtures_dir)
    fixtures_dir.mkdir(parents=True, exist_ok=True)
    if session is None:
        import requests

        session = requests.Session()
        session.headers["User-Agent"] = config.user_agent
    report = FetchReport()
    created: dict[str, str] = {}
    times_path = fixtures_dir / "creation_times.csv"
    if times_path.exists():
        with open(times_path, encoding="utf-8", newline="") as fh:
            for row in list(csv.reader(fh))[1:]:
                if len(row) == 2:
                    created[row[0]] = row[1]
    lock = threading.Lock()

    def worker(title: str) -> None:
        if (fixtures_dir / fixture_filename(title, ".wiki")).exists():
            with lock:
                report.skipped.append(title)
            return
        try:
            status, created_at = _fetch_one(session, config, fixtures_dir, title)
        except Exception as exc:
            log.warning("fetch %s failed: %s", title, exc)
            with lock:
                report.errors.append(title)
            return
        with lock:
            if status == "fetched":
                report.fetched.append(title)
                if created_at:
                    created[title] = created_at
            else:
                report.not_found.append(title)
        time.sleep(config.request_interval)

    ordered = sorted(dict.fromkeys(titles))
    if config.max_concurrency > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=config.max_concurrency) as pool:
            list(pool.map(worker, ordered))
    else:
        for title in ordered:
            worker(title)
    with open(times_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["title", "created_at"])
        for title in sorted(created):
            writer.writerow([title, created[title]])
    report.fetched.sort()
    report.skipped.sort()
    report.not_found.sort()
    report.errors.sort()
    return report
