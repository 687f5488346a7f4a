import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from copref.ingest import (
    BipartiteGraph,
    Category,
    EmojiDictionary,
    InputError,
    ReviewRecord,
    Sentiment,
    apply_vote_override,
    build_bipartite,
    clean_records,
    filter_low_engagement,
    map_emojis,
    prefix_ids,
    read_reviews_csv,
)

POS, NEG = Sentiment.POSITIVE, Sentiment.NEGATIVE


def rec(user, item, sentiment=POS, text="", **votes):
    return ReviewRecord(user, item, text, {Category.parse(k): v for k, v in votes.items()}, sentiment)


# ---- emoji replacement -------------------------------------------------------

def test_map_emojis_love():
    assert map_emojis("great ❤", EmojiDictionary({"❤": "عشق"})) == "great عشق"


def test_map_emojis_no_match_is_identity():
    d = EmojiDictionary({"❤": "عشق"})
    assert map_emojis("no emoji here", d) == "no emoji here"
    assert map_emojis("no emoji here", EmojiDictionary()) == "no emoji here"


def test_map_emojis_multiple_in_order():
    d = EmojiDictionary({"❤": "عشق", "👍": "پسندیدن"})
    assert map_emojis("x ❤ y 👍", d) == "x  y عشق و پسندیدن"


def test_map_emojis_repeats_and_unknown():
    d = EmojiDictionary({"❤": "عشق"})
    assert map_emojis("a❤b❤ 😀", d) == "ab 😀 عشق و عشق"


def test_map_emojis_longest_match_first():
    d = EmojiDictionary({"👍": "پسندیدن", "👍🏽": "تایید"})
    assert map_emojis("ok 👍🏽", d) == "ok تایید"
    # skin-tone modifier without its own entry is absorbed into the base emoji
    assert map_emojis("ok 👍🏿", d) == "ok پسندیدن"


def test_map_emojis_variation_selector_absorbed():
    assert map_emojis("hi ❤️!", EmojiDictionary({"❤": "عشق"})) == "hi ! عشق"


def test_map_emojis_normalizer_hook():
    out = map_emojis("A ❤", EmojiDictionary({"❤": "عشق"}), normalizer=str.lower)
    assert out == "a عشق"


@given(st.text(alphabet=st.sampled_from(list("ab c❤👍")), max_size=30))
def test_map_emojis_preserves_body_characters(text):
    d = EmojiDictionary({"❤": "L", "👍": "T"})
    out = map_emojis(text, d)
    body = text.replace("❤", "").replace("👍", "")
    if body == text:
        assert out == text
    else:
        assert out.startswith(body.rstrip())


def test_emoji_dictionary_tsv(tmp_path):
    p = tmp_path / "e.tsv"
    p.write_text("❤\tعشق\n👍\tپسندیدن\n", encoding="utf-8")
    assert EmojiDictionary.from_tsv(p) == {"❤": "عشق", "👍": "پسندیدن"}
    p.write_text("❤\tعشق\n❤\tx\n", encoding="utf-8")
    with pytest.raises(InputError, match="duplicate"):
        EmojiDictionary.from_tsv(p)
    with pytest.raises(InputError):
        EmojiDictionary({"❤": ""})


# ---- vote override -----------------------------------------------------------

@pytest.mark.parametrize(
    "base, rating, expected",
    [(POS, 1, NEG), (NEG, 9, POS), (POS, 5, POS), (NEG, None, NEG)],
)
def test_vote_override_examples(base, rating, expected):
    assert apply_vote_override(base, rating) is expected


@pytest.mark.parametrize("rating", [0, 11, -3])
def test_vote_override_out_of_range(rating):
    with pytest.raises(InputError, match="vote out of range"):
        apply_vote_override(POS, rating)


@given(st.sampled_from([POS, NEG]), st.one_of(st.none(), st.integers(1, 10)))
def test_vote_override_idempotent(base, rating):
    once = apply_vote_override(base, rating)
    assert apply_vote_override(once, rating) is once


def test_record_rejects_bad_vote():
    with pytest.raises(InputError):
        rec("u", "p", scent=12)


# ---- engagement filter ------------------------------------------------------

def test_filter_boundary_three_vs_four():
    records = [rec(f"u{i}", "p3") for i in range(3)] + [rec(f"u{i}", "p4") for i in range(4)]
    kept = filter_low_engagement(records)
    assert {r.item_id for r in kept} == {"p4"}
    assert len(kept) == 4


def test_filter_empty():
    assert filter_low_engagement([]) == []


def test_filter_counts_both_sentiments():
    records = [rec(f"u{i}", "a", POS if i % 2 else NEG) for i in range(5)] + [rec("u0", "b"), rec("u1", "b")]
    kept = filter_low_engagement(records)
    assert len(kept) == 5
    assert {r.item_id for r in kept} == {"a"}


def test_clean_and_prefix():
    records = [rec("1", "1", text="x"), rec("1", "1", text="x"), rec("", "2"), rec("2", "1", text="x")]
    cleaned = prefix_ids(clean_records(records))
    assert [(r.user_id, r.item_id) for r in cleaned] == [("user_1", "perfume_1"), ("user_2", "perfume_1")]
    assert prefix_ids(cleaned) == cleaned


# ---- bipartite --------------------------------------------------------------

def test_bipartite_single_positive():
    bip = build_bipartite([rec("u1", "p1", POS, scent=8)], Category.SCENT)
    assert bip.pairs == (("u1", "p1"),)


def test_bipartite_override_drops_pair():
    bip = build_bipartite([rec("u1", "p1", POS, scent=2)], Category.SCENT)
    assert bip.pairs == () and bip.users == () and bip.items == ()


def test_bipartite_duplicates_collapse():
    records = [rec("u1", "p1", text="first"), rec("u1", "p1", text="second")]
    bip = build_bipartite(records, Category.SCENT)
    assert bip.pairs == (("u1", "p1"),)
    assert bip.matrix().toarray().tolist() == [[1]]


def test_bipartite_primary_keeps_negative():
    records = [rec("u1", "p1", NEG), rec("u2", "p1", POS, scent=1)]
    assert len(build_bipartite(records, None).pairs) == 2
    assert build_bipartite(records, Category.SCENT).pairs == ()


votes = st.one_of(st.none(), st.integers(1, 10))


@given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4), st.sampled_from([POS, NEG]), votes, votes),
                max_size=25), st.lists(votes, min_size=25, max_size=25))
def test_category_independence(rows, new_longevity):
    records = [rec(f"u{u}", f"p{i}", s, scent=sc, longevity=lo) for u, i, s, sc, lo in rows]
    changed = [rec(r.user_id, r.item_id, r.sentiment, scent=r.vote(Category.SCENT), longevity=lv)
               for r, lv in zip(records, new_longevity)]
    assert build_bipartite(records, Category.SCENT) == build_bipartite(changed, Category.SCENT)
    distinct = len({(r.user_id, r.item_id) for r in records})
    for cat in (Category.SCENT, Category.LONGEVITY, Category.SILLAGE):
        bip = build_bipartite(records, cat)
        assert len(bip.pairs) <= distinct
        assert set(bip.items) <= {r.item_id for r in records}


def test_bipartite_validation():
    with pytest.raises(InputError):
        BipartiteGraph(("u",), ("p",), (("u", "p"), ("u", "p")))
    with pytest.raises(InputError):
        BipartiteGraph(("u",), ("p",), (("u", "q"),))


# ---- CSV --------------------------------------------------------------------

HEADER = "user_id,perfume_id,comment,vote_scent,vote_longevity,vote_sillage,vote_bottle,sentiment,is_reply\n"


def test_read_reviews_csv(tmp_path):
    p = tmp_path / "r.csv"
    p.write_text(HEADER + '7,7,"nice, really ❤",8,,3,9,Positive,0\n,7,orphan,,,,,negative,0\n'
                 "7,7,\"nice, really ❤\",8,,3,9,positive,0\n8,7,bad,2,2,2,2,NEGATIVE,1\n", encoding="utf-8")
    records = read_reviews_csv(p, EmojiDictionary({"❤": "عشق"}))
    assert len(records) == 2
    first = records[0]
    assert (first.user_id, first.item_id) == ("user_7", "perfume_7")
    assert first.comment == "nice, really عشق"
    assert first.vote(Category.SCENT) == 8 and first.vote(Category.LONGEVITY) is None
    assert first.vote(Category.BOTTLE_DESIGN) == 9
    assert records[1].sentiment is NEG and records[1].is_reply


@pytest.mark.parametrize(
    "row, message",
    [("1,2,x,11,,,,positive,0\n", "out of range"), ("1,2,x,,,,,meh,0\n", "sentiment"),
     ("1,2,x,,,,,positive\n", "fields"), ("1,2,x,abc,,,,positive,0\n", "not a number")],
)
def test_read_reviews_csv_errors_carry_line_number(tmp_path, row, message):
    p = tmp_path / "r.csv"
    p.write_text(HEADER + "1,2,ok,,,,,positive,0\n" + row, encoding="utf-8")
    with pytest.raises(InputError, match=message) as err:
        read_reviews_csv(p)
    assert ":3" in str(err.value)


def test_read_reviews_csv_missing_column(tmp_path):
    p = tmp_path / "r.csv"
    p.write_text("user_id,perfume_id\n1,2\n", encoding="utf-8")
    with pytest.raises(InputError, match="missing columns"):
        read_reviews_csv(p)


def test_category_parse():
    assert Category.parse("Scent") is Category.SCENT
    assert Category.parse("BottleDesign") is Category.BOTTLE_DESIGN
    with pytest.raises(InputError):
        Category.parse("colour")
    assert list(itertools.islice(Category, 3)) == [Category.SCENT, Category.LONGEVITY, Category.SILLAGE]
