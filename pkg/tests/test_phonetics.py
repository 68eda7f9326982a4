import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lirasr.errors import LanguageMismatch
from lirasr.phonetics import (
    EN_PHONEMES,
    UNK,
    PhonemeSequence,
    SubstitutionTable,
    apply_substitutions,
    build_table,
    en_lexicon,
    g2p,
    inventory,
    letter_to_sound,
    phonetic_similarity,
    read_table,
    segment,
    similar_units,
    slots,
    unit_similarity,
    zh_common_chars,
    zh_readings,
)


def en(*tokens):
    return PhonemeSequence(tuple(tokens), "en")


def zh(*tokens):
    return PhonemeSequence(tuple(tokens), "zh")


class TestAssets:
    def test_sizes(self):
        assert len(en_lexicon()) >= 50_000
        assert len(zh_readings()) >= 20_000
        assert len(zh_common_chars()) == 3500

    def test_read_table_skips_comments(self):
        rows = list(read_table(["# header", "", "cat\tK AE T", "中\tzhong1 zhong4"]))
        assert rows == [("cat", ["K", "AE", "T"]), ("中", ["zhong1", "zhong4"])]

    def test_common_chars_are_simplified(self):
        common = set(zh_common_chars())
        assert {"的", "是", "他", "她", "天", "气"} <= common
        assert not {"鍗", "闃", "紶"} & common


class TestG2P:
    @pytest.mark.parametrize(
        "surface,lang,expected",
        [
            ("cat", "en", ("K", "AE", "T")),
            ("中", "zh", ("zhong1",)),
            ("", "en", ()),
            ("", "zh", ()),
            ("Hello, world", "en", ("HH", "AH", "L", "OW", "W", "ER", "L", "D")),
        ],
    )
    def test_examples(self, surface, lang, expected):
        assert en_lexicon()["cat"] == ("K", "AE", "T")
        assert g2p(surface, lang).tokens == expected

    def test_out_of_lexicon_uses_rules(self):
        word = "zorblax"
        assert word not in en_lexicon()
        tokens = g2p(word, "en").tokens
        assert tokens == letter_to_sound(word)
        assert tokens and set(tokens) <= EN_PHONEMES

    def test_unknown_zh_char_is_unk(self):
        assert g2p("☃", "zh").tokens == (UNK,)
        assert g2p("a", "zh").tokens == (UNK,)

    @given(st.text(alphabet="abcdefghijklmnopqrstuvwxyz' ", max_size=25))
    @settings(max_examples=200)
    def test_en_tokens_in_inventory(self, text):
        tokens = g2p(text, "en").tokens
        assert set(tokens) <= inventory("en") | {UNK}
        if any(c.isalpha() for c in text):
            assert tokens

    @given(st.text(alphabet="今天的天气非常好他她它来了中国人", min_size=1, max_size=10))
    def test_zh_tokens_in_inventory(self, text):
        tokens = g2p(text, "zh").tokens
        assert len(tokens) == len(text)
        assert set(tokens) <= inventory("zh")

    def test_polyphone_takes_first_reading(self):
        assert g2p("行", "zh").tokens == (zh_readings()["行"][0],)

    def test_deterministic(self):
        assert g2p("pneumonia", "en") == g2p("pneumonia", "en")


class TestSimilarity:
    def test_identity(self):
        assert phonetic_similarity(en("K", "AE", "T"), en("K", "AE", "T")) == 1.0

    def test_disjoint(self):
        assert phonetic_similarity(en("K", "AE", "T"), en("B", "IY")) == 0.0

    def test_tone_only(self):
        assert phonetic_similarity(zh("zhong1"), zh("zhong4")) == pytest.approx(0.7)

    def test_both_empty(self):
        assert phonetic_similarity(en(), en()) == 1.0

    def test_language_mismatch(self):
        with pytest.raises(LanguageMismatch):
            phonetic_similarity(en("K"), zh("ka1"))

    sylls = st.lists(st.sampled_from(["ma1", "ma3", "ta1", "ta4", "zhong1", "shi4"]), max_size=5)

    @given(sylls, sylls)
    def test_symmetric_and_bounded(self, a, b):
        x, y = zh(*a), zh(*b)
        s = phonetic_similarity(x, y)
        assert s == pytest.approx(phonetic_similarity(y, x))
        assert 0.0 <= s <= 1.0
        assert (s == 1.0) == (a == b)

    def test_polyphone_units_share_any_reading(self):
        assert unit_similarity("他", "她", "zh") == 1.0


class TestSegmentation:
    def test_zh_forward_max_match(self):
        assert segment("我们去公园散步") == ["我们", "去", "公园", "散步"]

    def test_ascii_kept_whole(self):
        assert segment("用gpu训练") == ["用", "gpu", "训练"]

    def test_en_slots_skip_punctuation(self):
        text = "Hello, there world."
        found = slots(text, "en")
        assert [s.key for s in found] == ["hello", "there", "world"]
        assert apply_substitutions(text, {found[1]: "their"}, "en") == "Hello, their world."

    def test_case_preserved(self):
        found = slots("There it is", "en")
        assert apply_substitutions("There it is", {found[0]: "their"}, "en") == "Their it is"

    def test_zh_slots_skip_punctuation(self):
        found = slots("你好，世界", "zh")
        assert [s.key for s in found] == ["你", "好", "世", "界"]


class TestSubstitutionTable:
    def test_explicit_drops_self_and_low_weights(self):
        table = SubstitutionTable("en", 0.6, {"a": {"a": 1.0, "b": 0.9, "c": 0.2}})
        assert table.get("a") == {"b": 0.9}
        assert table.get("zzz") == {}
        assert not table.is_lazy

    def test_unknown_unit_empty(self, zh_table):
        assert similar_units("☃", "zh", zh_table, 0.5) == []

    def test_homophones_of_ta(self, zh_table):
        found = similar_units("他", "zh", zh_table, 1.0)
        assert {"她", "它"} <= set(found)
        assert "他" not in found

    def test_threshold_one_is_exact_homophones(self):
        table = SubstitutionTable("zh", 0.0, {"他": {"她": 1.0, "它": 1.0, "大": 0.7}})
        assert similar_units("他", "zh", table, 1.0) == ["她", "它"]

    def test_ranking(self, zh_table):
        ranked = [zh_table.get("天")[u] for u in similar_units("天", "zh", zh_table, 0.6)]
        assert ranked == sorted(ranked, reverse=True)

    def test_language_mismatch(self, zh_table):
        with pytest.raises(LanguageMismatch):
            similar_units("cat", "en", zh_table, 0.5)

    @pytest.mark.parametrize("unit", list("今天的天气非常好我们去公园散步他来了中国"))
    def test_zh_entries_meet_threshold(self, zh_table, unit):
        for other, w in zh_table.get(unit).items():
            assert other != unit and other in set(zh_common_chars())
            assert w >= zh_table.threshold
            assert unit_similarity(unit, other, "zh") == pytest.approx(w)

    @pytest.mark.parametrize("unit", ["weather", "their", "new", "cat", "read", "flower", "see"])
    def test_en_entries_meet_threshold(self, en_table, unit):
        entries = en_table.get(unit)
        assert entries
        for other, w in entries.items():
            assert other != unit
            assert w >= en_table.threshold
            assert phonetic_similarity(g2p(unit, "en"), g2p(other, "en")) == pytest.approx(w)

    @pytest.mark.parametrize("pair", [("weather", "whether"), ("their", "there"), ("new", "knew"),
                                      ("see", "sea"), ("flour", "flower")])
    def test_en_homophones_listed(self, en_table, pair):
        a, b = pair
        assert en_table.get(a).get(b) == 1.0

    def test_tone_variants_between_thresholds(self, zh_table):
        weights = set(zh_table.get("妈").values())
        assert weights <= {1.0, 0.7}
        assert 0.7 in weights

    def test_higher_threshold_is_subset(self):
        loose, strict = build_table("zh", 0.6), build_table("zh", 1.0)
        for unit in "天气好":
            assert set(strict.get(unit)) <= set(loose.get(unit))
