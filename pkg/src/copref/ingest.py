"""Review records, emoji replacement, vote override and the bipartite graph."""

from __future__ import annotations

import csv
import enum
import re
from collections import Counter
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
import scipy.sparse as sp

USER_PREFIX = "user_"
ITEM_PREFIX = "perfume_"
PHRASE_SEPARATOR = " و "

# Trailing code points that belong to the same grapheme as a matched emoji.
_EMOJI_TAIL = "[︎️\U0001f3fb-\U0001f3ff]*"


class InputError(ValueError):
    """Raised for unreadable or malformed input data."""


class Sentiment(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"

    @classmethod
    def parse(cls, value: str) -> Sentiment:
        try:
            return cls(value.strip().lower())
        except ValueError:
            raise InputError(f"unknown sentiment {value!r}") from None


class Category(enum.Enum):
    SCENT = "scent"
    LONGEVITY = "longevity"
    SILLAGE = "sillage"
    BOTTLE_DESIGN = "bottle"

    @classmethod
    def parse(cls, value: str | Category) -> Category:
        if isinstance(value, Category):
            return value
        key = value.strip().lower().replace("_", "").replace(" ", "")
        aliases = {"bottledesign": "bottle"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise InputError(f"unknown category {value!r}") from None


# Categories that drive the vote override and the per-category networks.
NETWORK_CATEGORIES = (Category.SCENT, Category.LONGEVITY, Category.SILLAGE)


@dataclass(frozen=True)
class ReviewRecord:
    user_id: str
    item_id: str
    comment: str = ""
    votes: Mapping[Category, int | None] = field(default_factory=dict)
    sentiment: Sentiment = Sentiment.POSITIVE
    is_reply: bool = False
    item_name: str | None = None

    def __post_init__(self):
        for cat, vote in self.votes.items():
            if vote is not None and not 1 <= vote <= 10:
                raise InputError(f"vote out of range: {cat.value}={vote}")

    def vote(self, category: Category) -> int | None:
        return self.votes.get(category)


class EmojiDictionary(dict):
    """Mapping of emoji sequences to replacement phrases."""

    def __init__(self, mapping: Mapping[str, str] | Iterable[tuple[str, str]] = ()):
        super().__init__(mapping)
        for key, phrase in self.items():
            if not key or not phrase:
                raise InputError(f"empty emoji or phrase in dictionary entry {key!r}")
        self._pattern = None

    @property
    def pattern(self) -> re.Pattern | None:
        # longest keys first so ZWJ sequences and modified emoji win over prefixes
        if self._pattern is None and self:
            keys = sorted(self, key=lambda k: (-len(k), k))
            self._pattern = re.compile("(" + "|".join(map(re.escape, keys)) + ")" + _EMOJI_TAIL)
        return self._pattern

    @classmethod
    def from_tsv(cls, path: str | Path) -> EmojiDictionary:
        mapping = {}
        with open(path, encoding="utf-8", newline="") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.rstrip("\r\n")
                if not line.strip() or line.startswith("#"):
                    continue
                parts = line.split("\t")
                if len(parts) != 2:
                    raise InputError(f"{path}:{lineno}: expected 'emoji<TAB>phrase'")
                emoji, phrase = parts[0].strip(), parts[1].strip()
                if emoji in mapping:
                    raise InputError(f"{path}:{lineno}: duplicate emoji {emoji!r}")
                mapping[emoji] = phrase
        return cls(mapping)


def identity(text: str) -> str:
    return text


def map_emojis(text: str, emojis: EmojiDictionary, normalizer: Callable[[str], str] = identity) -> str:
    """Strip known emoji from ``text`` and append their phrases joined by " و ".

    Unknown emoji are left untouched; text without known emoji is returned
    as is (after ``normalizer``).
    """
    text = normalizer(text)
    pattern = emojis.pattern
    if pattern is None:
        return text
    phrases = [emojis[m.group(1)] for m in pattern.finditer(text)]
    if not phrases:
        return text
    body = pattern.sub("", text).rstrip()
    tail = PHRASE_SEPARATOR.join(phrases)
    return f"{body} {tail}" if body else tail


def apply_vote_override(base: Sentiment, rating: int | None) -> Sentiment:
    """Override ``base`` by a 1-10 category rating.

    7..10 forces positive, 1..3 forces negative, 4..6 or no vote keeps ``base``.
    """
    if rating is None:
        return base
    if not 1 <= rating <= 10:
        raise InputError(f"vote out of range: {rating}")
    if rating >= 7:
        return Sentiment.POSITIVE
    if rating <= 3:
        return Sentiment.NEGATIVE
    return base


def prefix_ids(records: Iterable[ReviewRecord]) -> list[ReviewRecord]:
    """Prefix user and item ids so the two node sets cannot collide."""
    out = []
    for r in records:
        user = r.user_id if r.user_id.startswith(USER_PREFIX) else USER_PREFIX + r.user_id
        item = r.item_id if r.item_id.startswith(ITEM_PREFIX) else ITEM_PREFIX + r.item_id
        out.append(replace(r, user_id=user, item_id=item))
    overlap = {r.user_id for r in out} & {r.item_id for r in out}
    if overlap:
        raise InputError(f"user and item ids overlap: {sorted(overlap)[:3]}")
    return out


def clean_records(records: Iterable[ReviewRecord]) -> list[ReviewRecord]:
    """Drop rows with a missing user/item id and exact (user, item, text) duplicates."""
    seen = set()
    out = []
    for r in records:
        if not r.user_id.strip() or not r.item_id.strip():
            continue
        key = (r.user_id, r.item_id, r.comment)
        if key in seen:
            continue
        seen.add(key)
        out.append(r)
    return out


def filter_low_engagement(records: Sequence[ReviewRecord], min_comments_exclusive: int = 3) -> list[ReviewRecord]:
    """Remove every record whose item has at most ``min_comments_exclusive`` comments.

    Counts use all records regardless of sentiment.
    """
    counts = Counter(r.item_id for r in records)
    return [r for r in records if counts[r.item_id] > min_comments_exclusive]


@dataclass(frozen=True)
class BipartiteGraph:
    """Binary user x item incidence structure."""

    users: tuple[str, ...]
    items: tuple[str, ...]
    pairs: tuple[tuple[str, str], ...]

    def __post_init__(self):
        if len(set(self.pairs)) != len(self.pairs):
            raise InputError("duplicate incidence pairs")
        users, items = set(self.users), set(self.items)
        for u, i in self.pairs:
            if u not in users or i not in items:
                raise InputError(f"incidence ({u!r}, {i!r}) references an unknown node")

    @property
    def n_users(self) -> int:
        return len(self.users)

    @property
    def n_items(self) -> int:
        return len(self.items)

    def matrix(self) -> sp.csr_matrix:
        """Incidence matrix A with users as rows and items as columns."""
        uidx = {u: k for k, u in enumerate(self.users)}
        iidx = {i: k for k, i in enumerate(self.items)}
        r = np.fromiter((uidx[u] for u, _ in self.pairs), dtype=np.int64, count=len(self.pairs))
        c = np.fromiter((iidx[i] for _, i in self.pairs), dtype=np.int64, count=len(self.pairs))
        data = np.ones(len(self.pairs), dtype=np.int64)
        return sp.csr_matrix((data, (r, c)), shape=(self.n_users, self.n_items))

    @classmethod
    def from_matrix(cls, matrix, users=None, items=None) -> BipartiteGraph:
        """Build from a 0/1 matrix; users/items default to ``u<i>``/``p<j>``.

        Rows and columns without any incidence are kept as nodes.
        """
        mat = sp.coo_matrix(matrix)
        n, m = mat.shape
        users = tuple(users) if users is not None else tuple(f"u{i}" for i in range(n))
        items = tuple(items) if items is not None else tuple(f"p{j}" for j in range(m))
        nz = sorted({(int(i), int(j)) for i, j, v in zip(mat.row, mat.col, mat.data) if v})
        return cls(users, items, tuple((users[i], items[j]) for i, j in nz))


def build_bipartite(records: Sequence[ReviewRecord], category: Category | None) -> BipartiteGraph:
    """Positive-only incidence graph for one rating category.

    Each record's sentiment is first overridden by its vote in ``category``.
    ``category=None`` keeps every record regardless of sentiment (the
    unfiltered primary network).
    """
    seen: dict[tuple[str, str], None] = {}
    for r in records:
        if category is not None:
            if apply_vote_override(r.sentiment, r.vote(category)) is not Sentiment.POSITIVE:
                continue
        seen.setdefault((r.user_id, r.item_id), None)
    pairs = tuple(seen)
    users = tuple(dict.fromkeys(u for u, _ in pairs))
    items = tuple(dict.fromkeys(i for _, i in pairs))
    return BipartiteGraph(users, items, pairs)


_VOTE_COLUMNS = {
    Category.SCENT: "vote_scent",
    Category.LONGEVITY: "vote_longevity",
    Category.SILLAGE: "vote_sillage",
    Category.BOTTLE_DESIGN: "vote_bottle",
}
REQUIRED_COLUMNS = ("user_id", "perfume_id", "comment", *_VOTE_COLUMNS.values(), "sentiment", "is_reply")


def _parse_vote(cell: str | None, where: str) -> int | None:
    if cell is None or not cell.strip():
        return None
    try:
        value = int(float(cell))
    except ValueError:
        raise InputError(f"{where}: vote {cell!r} is not a number") from None
    if not 1 <= value <= 10:
        raise InputError(f"{where}: vote out of range: {value}")
    return value


def read_reviews_csv(
    path: str | Path,
    emojis: EmojiDictionary | None = None,
    normalizer: Callable[[str], str] = identity,
) -> list[ReviewRecord]:
    """Load, clean and id-prefix review records from a CSV file.

    Emoji replacement is applied to each comment when ``emojis`` is given.
    An optional ``perfume_name`` column supplies display names.
    """
    try:
        fh = open(path, encoding="utf-8", newline="")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    records = []
    with fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in REQUIRED_COLUMNS if c not in header]
        if missing:
            raise InputError(f"{path}: missing columns {missing}")
        for row in reader:
            where = f"{path}:{reader.line_num}"
            if None in row or any(row[c] is None for c in REQUIRED_COLUMNS):
                raise InputError(f"{where}: wrong number of fields")
            votes = {cat: _parse_vote(row[col], where) for cat, col in _VOTE_COLUMNS.items()}
            reply = row["is_reply"].strip()
            if reply not in ("", "0", "1"):
                raise InputError(f"{where}: is_reply must be 0 or 1")
            try:
                sentiment = Sentiment.parse(row["sentiment"])
            except InputError as exc:
                raise InputError(f"{where}: {exc}") from None
            comment = row["comment"]
            if emojis is not None:
                comment = map_emojis(comment, emojis, normalizer)
            else:
                comment = normalizer(comment)
            records.append(
                ReviewRecord(
                    user_id=row["user_id"].strip(),
                    item_id=row["perfume_id"].strip(),
                    comment=comment,
                    votes=votes,
                    sentiment=sentiment,
                    is_reply=reply == "1",
                    item_name=(row.get("perfume_name") or "").strip() or None,
                )
            )
    return prefix_ids(clean_records(records))


def item_names(records: Iterable[ReviewRecord]) -> dict[str, str]:
    names = {}
    for r in records:
        if r.item_name and r.item_id not in names:
            names[r.item_id] = r.item_name
    return names
