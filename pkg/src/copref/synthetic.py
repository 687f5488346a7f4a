"""Seeded synthetic inputs: planted-partition graphs and grouped review data."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .graph import WeightedGraph
from .ingest import Category, ReviewRecord, Sentiment

_EMOJI = ("❤", "👍", "😍", "😡", "🤢", "👌")


def planted_partition(n_groups: int, group_size: int, p_in: float, p_out: float, seed: int = 0):
    """Unit-weight planted-partition graph and its ground-truth labels."""
    rng = np.random.default_rng(seed)
    truth = np.repeat(np.arange(n_groups), group_size)
    n = len(truth)
    prob = np.where(truth[:, None] == truth[None, :], p_in, p_out)
    upper = np.triu(rng.random((n, n)) < prob, k=1)
    rows, cols = np.nonzero(upper)
    nodes = tuple(f"n{i}" for i in range(n))
    return WeightedGraph(nodes, rows, cols, np.ones(len(rows))), truth


def _vote(rng, positive: bool) -> int | None:
    if rng.random() < 0.15:
        return None
    centre = 8.3 if positive else 3.0
    return int(np.clip(np.rint(rng.normal(centre, 1.6)), 1, 10))


def synthetic_reviews(
    n_users: int,
    n_items: int,
    n_reviews: int,
    n_groups: int,
    p_home: float = 0.85,
    seed: int = 0,
) -> list[ReviewRecord]:
    """Users with a home item group review mostly within it.

    Home-group reviews lean positive and carry high votes; the rest lean
    negative. Ids are already prefixed.
    """
    rng = np.random.default_rng(seed)
    groups = np.arange(n_items) % n_groups
    members = [np.flatnonzero(groups == g) for g in range(n_groups)]
    per_user = rng.multinomial(n_reviews - n_users, np.full(n_users, 1.0 / n_users)) + 1
    records = []
    for u in range(n_users):
        home = u % n_groups
        k = min(int(per_user[u]), n_items)
        n_home = min(rng.binomial(k, p_home), len(members[home]))
        chosen = list(rng.choice(members[home], size=n_home, replace=False))
        others = np.setdiff1d(np.arange(n_items), chosen)
        chosen += list(rng.choice(others, size=k - n_home, replace=False))
        for item in chosen:
            at_home = groups[item] == home
            positive = rng.random() < (0.85 if at_home else 0.3)
            votes = {c: _vote(rng, positive if rng.random() < 0.8 else not positive) for c in Category}
            text = f"review {u}-{item}"
            if rng.random() < 0.2:
                text += " " + _EMOJI[rng.integers(len(_EMOJI))]
            records.append(
                ReviewRecord(
                    user_id=f"user_{u}",
                    item_id=f"perfume_{item}",
                    comment=text,
                    votes=votes,
                    sentiment=Sentiment.POSITIVE if positive else Sentiment.NEGATIVE,
                    is_reply=bool(rng.random() < 0.05),
                    item_name=f"Perfume {item}",
                )
            )
    return records


def write_reviews_csv(records, path) -> None:
    """Write records in the review CSV input format (ids without prefixes)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    cols = {Category.SCENT: "vote_scent", Category.LONGEVITY: "vote_longevity",
            Category.SILLAGE: "vote_sillage", Category.BOTTLE_DESIGN: "vote_bottle"}
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["user_id", "perfume_id", "perfume_name", "comment", *cols.values(), "sentiment", "is_reply"])
        for r in records:
            votes = ["" if r.vote(c) is None else r.vote(c) for c in cols]
            writer.writerow([r.user_id.removeprefix("user_"), r.item_id.removeprefix("perfume_"), r.item_name or "",
                             r.comment, *votes, r.sentiment.value, int(r.is_reply)])
