"""Download helpers for the public benchmark datasets.

Network access is optional: everything in the test suite runs on generated
graphs. Downloads are checksum-verified when a digest is pinned; first
downloads of unpinned entries report the digest so it can be recorded.

Raw files are normalized into the package's edge-list format: comments
dropped, duplicate undirected edges and self-loops removed (the public
collaboration snapshots list both directions of each edge).
"""

from __future__ import annotations

import gzip
import hashlib
import urllib.request
from dataclasses import dataclass
from pathlib import Path

from .errors import ValidationError


@dataclass(frozen=True)
class DatasetEntry:
    name: str
    url: str
    sha256: str | None  # digest of the raw download; None = not pinned yet


REGISTRY = {
    "ca-CondMat": DatasetEntry(
        "ca-CondMat", "https://snap.stanford.edu/data/ca-CondMat.txt.gz", None
    ),
    "soc-Epinions1": DatasetEntry(
        "soc-Epinions1", "https://snap.stanford.edu/data/soc-Epinions1.txt.gz", None
    ),
    "amazon0302": DatasetEntry(
        "amazon0302", "https://snap.stanford.edu/data/amazon0302.txt.gz", None
    ),
    "com-amazon": DatasetEntry(
        "com-amazon",
        "https://snap.stanford.edu/data/bigdata/communities/com-amazon.ungraph.txt.gz",
        None,
    ),
    "com-youtube": DatasetEntry(
        "com-youtube",
        "https://snap.stanford.edu/data/bigdata/communities/com-youtube.ungraph.txt.gz",
        None,
    ),
    "usair97": DatasetEntry(
        "usair97", "http://vlado.fmf.uni-lj.si/pub/networks/data/mix/USAir97.net", None
    ),
}


def normalize_edge_list(text: str) -> str:
    """Clean a raw whitespace-separated edge dump: drop comments, blank
    lines, self-loops, and duplicate undirected edges."""
    seen: set[tuple[str, str]] = set()
    out: list[str] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith("%"):
            continue
        fields = line.split()
        if len(fields) < 2:
            continue
        u, v = fields[0], fields[1]
        if u == v:
            continue
        key = (u, v) if u < v else (v, u)
        if key in seen:
            continue
        seen.add(key)
        if len(fields) >= 3:
            out.append(f"{u} {v} {fields[2]}")
        else:
            out.append(f"{u} {v}")
    return "\n".join(out) + "\n"


def fetch_dataset(name: str, dest: Path, fetcher=None) -> Path:
    """Download one registry entry into ``dest`` and write the normalized
    edge list next to the raw file. Returns the normalized path.

    ``fetcher`` (url -> bytes) exists for tests; the default uses urllib.
    """
    if name not in REGISTRY:
        raise ValidationError(f"unknown dataset {name!r}; known: {sorted(REGISTRY)}")
    entry = REGISTRY[name]
    dest = Path(dest)
    dest.mkdir(parents=True, exist_ok=True)

    if fetcher is None:
        def fetcher(url: str) -> bytes:  # pragma: no cover - network
            with urllib.request.urlopen(url, timeout=60) as resp:
                return resp.read()

    raw = fetcher(entry.url)
    digest = hashlib.sha256(raw).hexdigest()
    if entry.sha256 is not None and digest != entry.sha256:
        raise ValidationError(
            f"checksum mismatch for {name}: expected {entry.sha256}, got {digest}"
        )
    raw_path = dest / Path(entry.url).name
    raw_path.write_bytes(raw)
    (dest / f"{name}.sha256").write_text(f"{digest}  {raw_path.name}\n")

    if raw_path.suffix == ".gz":
        text = gzip.decompress(raw).decode("utf-8", errors="replace")
    else:
        text = raw.decode("utf-8", errors="replace")
    normalized = dest / f"{name}.edges"
    normalized.write_text(normalize_edge_list(text))
    return normalized
