import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lirasr.errors import EmptyTranscript
from lirasr.injector import NoiseProfile, corrupt
from lirasr.metrics import cer
from lirasr.phonetics import SubstitutionTable, slots, unit_similarity
from lirasr.transcript import Transcript

TWENTY = "今天的天气非常好我们一起去公园散步吧好吗"


def replay(text, profile, table):
    """Replays the seeded draw order to count edits without calling corrupt."""
    rng = random.Random(profile.seed)
    count = 0
    for slot in slots(text, "zh"):
        entries = table.get(slot.key)
        if not entries:
            continue
        if rng.random() >= profile.substitution_rate:
            continue
        rng.random()
        rng.random()  # stands in for the replacement draw
        count += 1
    return count


class TestCorrupt:
    def test_zero_rate(self, zh_table):
        clean = Transcript(TWENTY, "zh")
        noisy, edits = corrupt(clean, NoiseProfile(0.0, seed=3), zh_table)
        assert noisy == clean and edits == []

    def test_full_rate_edits_everything(self):
        table = SubstitutionTable("en", 0.6, {"a": {"b": 1.0}, "c": {"d": 0.8}})
        noisy, edits = corrupt(Transcript("a c a", "en"), NoiseProfile(1.0, 0.5, 9), table)
        assert [e.position for e in edits] == [0, 1, 2]
        assert noisy.text == "b d b"

    def test_seeded_count_matches_replay(self, zh_table):
        assert len(TWENTY) == 20
        profile = NoiseProfile(0.15, 0.7, 1)
        _, edits = corrupt(Transcript(TWENTY, "zh"), profile, zh_table)
        assert len(edits) == replay(TWENTY, profile, zh_table)
        assert 1 <= len(edits) <= 7

    def test_deterministic(self, zh_table):
        profile = NoiseProfile(0.3, 0.5, 42)
        assert corrupt(Transcript(TWENTY, "zh"), profile, zh_table) == corrupt(
            Transcript(TWENTY, "zh"), profile, zh_table)

    def test_bias_one_uses_homophones(self, zh_table):
        _, edits = corrupt(Transcript(TWENTY, "zh"), NoiseProfile(0.5, 1.0, 5), zh_table)
        assert edits
        for e in edits:
            assert zh_table.get(e.original)[e.replacement] == 1.0

    def test_empty(self, zh_table):
        with pytest.raises(EmptyTranscript):
            corrupt(Transcript("", "zh"), NoiseProfile(), zh_table)

    @pytest.mark.parametrize("kw", [dict(substitution_rate=1.5), dict(homophone_bias=-0.1), dict(indel_rate=2)])
    def test_profile_validated(self, kw):
        with pytest.raises(ValueError):
            NoiseProfile(**kw)

    def test_indels_only_when_asked(self, en_table):
        clean = Transcript("the cat sat on the mat today", "en")
        _, edits = corrupt(clean, NoiseProfile(0.0, 0.7, 1, indel_rate=0.5), en_table)
        assert edits and {e.kind for e in edits} <= {"insertion", "deletion"}

    @given(st.integers(0, 2**63), st.floats(0, 1))
    @settings(max_examples=50, deadline=None)
    def test_invariants(self, zh_table, seed, rate):
        clean = Transcript(TWENTY, "zh")
        noisy, edits = corrupt(clean, NoiseProfile(rate, 0.7, seed), zh_table)
        if edits:
            assert cer(clean.text, noisy.text, "zh") > 0
        else:
            assert noisy.text == clean.text
        for e in edits:
            assert e.kind == "substitution"
            assert TWENTY[e.position] == e.original
            assert unit_similarity(e.original, e.replacement, "zh") >= zh_table.threshold
