import pytest
from hypothesis import given
from hypothesis import strategies as st

from lirasr.errors import LanguageMismatch
from lirasr.neighbor import CandidateSet
from lirasr.rules import INDEL, LENGTH, PHONETIC, RuleConfig, check, filter_candidates
from lirasr.transcript import Candidate, Provenance, Transcript


def cand(text, lang="en"):
    return Candidate(text, lang, Provenance.CORRECTED)


TEN = "one two three four five six seven eight nine ten"


class TestCheck:
    def test_identity_passes(self):
        verdict = check(Transcript(TEN, "en"), cand(TEN))
        assert verdict.accepted and verdict.violations == ()

    def test_three_extra_tokens(self):
        verdict = check(Transcript(TEN, "en"), cand(TEN + " eleven twelve thirteen"))
        by_rule = {v.rule: v for v in verdict.violations}
        assert not verdict.accepted
        assert by_rule[LENGTH].measured == pytest.approx(0.3)
        assert by_rule[LENGTH].threshold == 0.2
        assert by_rule[INDEL].measured == pytest.approx(0.3)

    def test_homophone_passes(self):
        assert check(Transcript("他来了", "zh"), cand("她来了", "zh")).accepted

    def test_dissimilar_substitution_fails(self):
        verdict = check(Transcript("他来了", "zh"), cand("我来了", "zh"))
        assert [v.rule for v in verdict.violations] == [PHONETIC]
        assert verdict.violations[0].measured < 0.5

    def test_unknown_units_are_neutral(self):
        origin = Transcript("☃来了", "zh")
        assert check(origin, cand("☂来了", "zh")).accepted
        assert not check(origin, cand("☂来了", "zh"), RuleConfig(min_phonetic_similarity=0.6)).accepted

    def test_language_mismatch(self):
        with pytest.raises(LanguageMismatch):
            check(Transcript("a", "en"), cand("a", "zh"))

    @pytest.mark.parametrize("bad", [dict(min_phonetic_similarity=2), dict(max_length_deviation_ratio=-1)])
    def test_config_validated(self, bad):
        with pytest.raises(ValueError):
            RuleConfig(**bad)

    words = st.lists(st.sampled_from(["there", "their", "cat", "sat", "on", "mat", "bat"]), min_size=1, max_size=8)

    @given(words, words, st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))
    def test_loosening_never_rejects(self, a, b, p, l, r):
        origin, c = Transcript(" ".join(a), "en"), cand(" ".join(b))
        tight = RuleConfig(p, l, r)
        loose = RuleConfig(p / 2, l * 2, r * 2)
        if check(origin, c, tight).accepted:
            assert check(origin, c, loose).accepted


class TestFilter:
    def test_all_identical_kept(self):
        origin = Transcript("a cat", "en")
        assert filter_candidates(origin, [cand("a cat"), cand("a cat")]) == [cand("a cat"), cand("a cat")]

    def test_empty(self):
        origin = Transcript("x", "en")
        assert filter_candidates(origin, []) == []
        out = filter_candidates(origin, CandidateSet((), origin))
        assert isinstance(out, CandidateSet) and len(out) == 0

    def test_drops_doubled_length_only(self):
        origin = Transcript("the cat sat on the mat", "en")
        members = [cand("the cat sat on the mat"), cand("the bat sat on the mat"),
                   cand("the cat sat on the mat the cat sat on the mat")]
        kept = filter_candidates(origin, members)
        assert [c.text for c in kept] == [members[0].text, members[1].text]
        for c in kept:
            assert check(origin, c).accepted

    def test_idempotent_on_candidate_set(self):
        origin = Transcript("他来了", "zh")
        members = (cand("他来了", "zh"), cand("她来了", "zh"), cand("我来了", "zh"), cand("他来了吗", "zh"))
        once = filter_candidates(origin, CandidateSet(members, origin))
        assert filter_candidates(origin, once) == once
        assert once.texts == ["他来了", "她来了"]
