"""Document sources: local file trees and a polite same-domain crawler.

Local ingestion walks a directory deterministically and yields one document
per file. The crawler breadth-first walks a single domain starting from seed
URLs, honors robots.txt, never leaves the configured domain, caps the page
count, and pauses between requests. Page text comes from a forgiving HTML
parser that keeps only the subtree of a configured element id, so menus,
headers and footers around the content container are dropped.
"""

from __future__ import annotations

import hashlib
import logging
import time
import urllib.robotparser
from collections import deque
from dataclasses import dataclass
from html.parser import HTMLParser
from pathlib import Path
from typing import Callable, Iterator
from urllib.parse import urljoin, urlsplit, urlunsplit

log = logging.getLogger(__name__)

USER_AGENT = "similes-crawler/1.0"

_VOID_TAGS = {
    "area", "base", "br", "col", "embed", "hr", "img", "input",
    "link", "meta", "param", "source", "track", "wbr",
}
_SKIP_TAGS = {"script", "style"}
_BLOCK_TAGS = {
    "p", "div", "br", "li", "ul", "ol", "h1", "h2", "h3", "h4", "h5", "h6",
    "tr", "table", "section", "article", "blockquote", "pre",
}


def doc_id_for(locator: str) -> str:
    """Stable short identifier for a source locator."""
    return hashlib.sha256(locator.encode("utf-8")).hexdigest()[:16]


@dataclass(frozen=True)
class Document:
    doc_id: str
    source_locator: str
    text: str
    fetched_at: float


@dataclass(frozen=True)
class SourceConfig:
    site_name: str
    allowed_domain: str
    content_selector: str
    start_urls: tuple[str, ...]
    max_pages: int = 100
    politeness_delay_ms: int = 500

    def __post_init__(self):
        if not self.allowed_domain:
            raise ValueError("allowed_domain is empty")
        if self.max_pages < 1:
            raise ValueError("max_pages must be >= 1")
        if self.politeness_delay_ms < 0:
            raise ValueError("politeness_delay_ms must be >= 0")
        if not self.start_urls:
            raise ValueError("no start URLs")


def read_local(root_path: str | Path) -> Iterator[Document]:
    """One document per regular file under root, in lexicographic order.

    Locators are root-relative so document ids do not depend on where the
    tree happens to live. Undecodable bytes are replaced and logged;
    unreadable files are logged and skipped.
    """
    root = Path(root_path)
    if not root.is_dir():
        raise FileNotFoundError(f"input directory not found: {root}")
    paths = sorted(
        (p for p in root.rglob("*") if p.is_file()),
        key=lambda p: p.relative_to(root).as_posix(),
    )
    for path in paths:
        locator = path.relative_to(root).as_posix()
        try:
            data = path.read_bytes()
        except OSError as exc:
            log.warning("skipping unreadable file %s: %s", path, exc)
            continue
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError:
            log.warning("file %s is not valid UTF-8; decoding with replacement", path)
            text = data.decode("utf-8", errors="replace")
        yield Document(
            doc_id=doc_id_for(locator),
            source_locator=locator,
            text=text,
            fetched_at=path.stat().st_mtime,
        )


def count_by_subdir(root_path: str | Path) -> dict[str, int]:
    """Document counts keyed by top-level subdirectory, plus a total."""
    root = Path(root_path)
    counts: dict[str, int] = {}
    total = 0
    for doc in read_local(root):
        top = doc.source_locator.split("/")[0] if "/" in doc.source_locator else "."
        counts[top] = counts.get(top, 0) + 1
        total += 1
    counts["total"] = total
    return counts


class _ContentParser(HTMLParser):
    """Collects text inside the first element with the wanted id."""

    def __init__(self, selector: str):
        super().__init__(convert_charrefs=True)
        self.selector = selector
        self.depth = 0
        self.capturing = False
        self.done = False
        self.skip_depth = 0
        self.chunks: list[str] = []

    def handle_starttag(self, tag, attrs):
        if self.done:
            return
        if self.capturing:
            if tag in _SKIP_TAGS:
                self.skip_depth += 1
                return
            if self.skip_depth:
                return
            if tag in _BLOCK_TAGS:
                self.chunks.append("\n")
            if tag not in _VOID_TAGS:
                self.depth += 1
            return
        if tag in _VOID_TAGS:
            return
        if dict(attrs).get("id") == self.selector:
            self.capturing = True
            self.depth = 1

    def handle_startendtag(self, tag, attrs):
        if self.capturing and not self.skip_depth and tag in _BLOCK_TAGS:
            self.chunks.append("\n")

    def handle_endtag(self, tag):
        if self.done or not self.capturing:
            return
        if tag in _SKIP_TAGS and self.skip_depth:
            self.skip_depth -= 1
            return
        if self.skip_depth or tag in _VOID_TAGS:
            return
        if tag in _BLOCK_TAGS:
            self.chunks.append("\n")
        self.depth -= 1
        if self.depth <= 0:
            self.capturing = False
            self.done = True

    def handle_data(self, data):
        if self.capturing and not self.skip_depth:
            # source-formatting newlines are plain whitespace; only block
            # tag boundaries may break lines in the extracted text
            self.chunks.append(data.replace("\n", " "))


def extract_content(html: str, content_selector: str) -> str:
    """Plain text of the element with the given id; "" when absent.

    Tag markup never reaches the output; block-level boundaries become
    newlines and runs of blank space collapse.
    """
    parser = _ContentParser(content_selector)
    parser.feed(html)
    parser.close()
    raw = "".join(parser.chunks)
    lines = [" ".join(line.split()) for line in raw.split("\n")]
    return "\n".join(line for line in lines if line)


class _LinkParser(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.hrefs: list[str] = []

    def handle_starttag(self, tag, attrs):
        if tag == "a":
            href = dict(attrs).get("href")
            if href:
                self.hrefs.append(href)


def extract_links(html: str, base_url: str) -> list[str]:
    parser = _LinkParser()
    parser.feed(html)
    parser.close()
    links = []
    for href in parser.hrefs:
        absolute = urljoin(base_url, href)
        parts = urlsplit(absolute)
        if parts.scheme in ("http", "https"):
            links.append(urlunsplit((parts.scheme, parts.netloc, parts.path, parts.query, "")))
    return links


def in_domain(url: str, allowed_domain: str) -> bool:
    host = urlsplit(url).hostname or ""
    host = host.lower()
    domain = allowed_domain.lower()
    return host == domain or host.endswith("." + domain)


def _default_fetch(url: str) -> str:
    import requests

    response = requests.get(url, headers={"User-Agent": USER_AGENT}, timeout=30)
    response.raise_for_status()
    return response.text


def crawl(
    config: SourceConfig,
    fetch: Callable[[str], str] | None = None,
    sleep: Callable[[float], None] = time.sleep,
    clock: Callable[[], float] = time.time,
) -> Iterator[Document]:
    """Breadth-first same-domain crawl yielding one document per page.

    ``fetch`` maps a URL to its body and is injectable for tests; robots.txt
    goes through the same callable so disallow rules are honored even under
    a stubbed transport. Fetch failures are logged and skipped. The crawl
    stops after ``max_pages`` successfully fetched pages.
    """
    get = fetch if fetch is not None else _default_fetch
    robots: dict[str, urllib.robotparser.RobotFileParser | None] = {}

    def robots_for(url: str) -> urllib.robotparser.RobotFileParser | None:
        parts = urlsplit(url)
        origin = f"{parts.scheme}://{parts.netloc}"
        if origin not in robots:
            parser = urllib.robotparser.RobotFileParser()
            try:
                parser.parse(get(origin + "/robots.txt").splitlines())
                robots[origin] = parser
            except Exception as exc:
                log.info("no robots.txt at %s (%s); allowing", origin, exc)
                robots[origin] = None
        return robots[origin]

    queue: deque[str] = deque()
    seen: set[str] = set()
    for url in config.start_urls:
        if url not in seen:
            seen.add(url)
            queue.append(url)
    fetched = 0
    first_request = True
    while queue and fetched < config.max_pages:
        url = queue.popleft()
        if not in_domain(url, config.allowed_domain):
            log.debug("off-domain link skipped: %s", url)
            continue
        rules = robots_for(url)
        if rules is not None and not rules.can_fetch(USER_AGENT, url):
            log.info("robots.txt disallows %s", url)
            continue
        if not first_request and config.politeness_delay_ms:
            sleep(config.politeness_delay_ms / 1000.0)
        first_request = False
        try:
            body = get(url)
        except Exception as exc:
            log.warning("fetch failed for %s: %s", url, exc)
            continue
        fetched += 1
        yield Document(
            doc_id=doc_id_for(url),
            source_locator=url,
            text=extract_content(body, config.content_selector),
            fetched_at=clock(),
        )
        for link in extract_links(body, url):
            if link not in seen and in_domain(link, config.allowed_domain):
                seen.add(link)
                queue.append(link)
