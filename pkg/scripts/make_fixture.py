"""Regenerate the bundled 30-item fixture under src/copref/data/."""

from dataclasses import replace
from pathlib import Path

from copref.ingest import Category, ReviewRecord, Sentiment
from copref.projection import ratings_from_records
from copref.synthetic import synthetic_reviews, write_reviews_csv

DATA = Path(__file__).resolve().parents[1] / "src" / "copref" / "data"

NAMES = {3: 'Eau "Noire"', 7: "Rose, Oud & Amber", 11: "L'Homme Intense", 19: "Bleu \\ Edition"}


def main():
    records = synthetic_reviews(n_users=90, n_items=30, n_reviews=420, n_groups=3, seed=7)
    records = [replace(r, item_name=NAMES.get(int(r.item_id[8:]), r.item_name)) for r in records]
    # two low-engagement items (3 and 2 comments) that the engagement filter drops
    votes = {c: 9 for c in Category}
    for item, users in (("perfume_30", (1, 2, 3)), ("perfume_31", (4, 5))):
        for u in users:
            records.append(ReviewRecord(f"user_{u}", item, "rare one ❤", votes, Sentiment.POSITIVE))
    records.append(records[0])  # exact duplicate row
    write_reviews_csv(records, DATA / "reviews.csv")
    with open(DATA / "reviews.csv", "a", encoding="utf-8") as fh:
        fh.write(',12,,orphan row without user,5,5,5,5,positive,0\n')

    with open(DATA / "emoji.tsv", "w", encoding="utf-8") as fh:
        for emoji, phrase in (("👍", "پسندیدن"), ("😡", "عصبانی"), ("❤", "عشق"), ("😍", "عالی"), ("🤢", "حالت تهوع")):
            fh.write(f"{emoji}\t{phrase}\n")

    with open(DATA / "ratings.csv", "w", encoding="utf-8") as fh:
        fh.write("perfume_id,category,avg_rating,vote_count\n")
        for cat in (Category.SCENT, Category.LONGEVITY, Category.SILLAGE):
            ratings = ratings_from_records(records, cat)
            for item in sorted(ratings.average, key=lambda s: int(s[8:])):
                fh.write(f"{item[8:]},{cat.value},{ratings.average[item]:.2f},{ratings.votes[item]}\n")


if __name__ == "__main__":
    main()
