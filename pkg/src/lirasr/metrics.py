"""Edit distance and CER/WER scoring."""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass
from typing import Hashable, Sequence

from .errors import EmptyReference

LANGUAGES = ("zh", "en")

# ASCII punctuation minus the apostrophe, which is part of en words ("don't").
_ASCII_PUNCT = "!\"#$%&()*+,-./:;<=>?@[\\]^_`{|}~"
_ZH_PUNCT = (
    "，。、；：？！“”‘’（）《》〈〉【】「」『』〔〕…\u2014～·．"
    "！＂＃＄％＆＇（）＊＋，－／：；＜＝＞？＠［＼］＾＿｀｛｜｝～"
)
PUNCTUATION = _ASCII_PUNCT + _ZH_PUNCT
_EN_TABLE = str.maketrans({c: " " for c in PUNCTUATION})
_ZH_TABLE = str.maketrans({c: " " for c in PUNCTUATION + "'"})
_SPACES = re.compile(r"\s+")


@dataclass(frozen=True)
class EditCounts:
    substitutions: int
    deletions: int
    insertions: int
    reference_length: int

    @property
    def errors(self) -> int:
        return self.substitutions + self.deletions + self.insertions

    @property
    def rate(self) -> float:
        if self.reference_length == 0:
            raise EmptyReference("reference has no tokens")
        return self.errors / self.reference_length


# Alignment op codes: "=" match, "S" substitution, "D" deletion (reference
# token missing from hypothesis), "I" insertion (extra hypothesis token).
AlignOp = tuple[str, int | None, int | None]


def _cost_table(ref: Sequence[Hashable], hyp: Sequence[Hashable]) -> list[list[int]]:
    m, n = len(ref), len(hyp)
    dp = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(m + 1):
        dp[i][0] = i
    for j in range(n + 1):
        dp[0][j] = j
    for i in range(1, m + 1):
        row, prev = dp[i], dp[i - 1]
        r = ref[i - 1]
        for j in range(1, n + 1):
            if r == hyp[j - 1]:
                row[j] = prev[j - 1]
            else:
                row[j] = 1 + min(prev[j - 1], prev[j], row[j - 1])
    return dp


def align(reference: Sequence[Hashable], hypothesis: Sequence[Hashable]) -> list[AlignOp]:
    """Minimum-cost unit-cost alignment of ``hypothesis`` against ``reference``.

    Each op is ``(code, ref_index, hyp_index)``; indices are None on the side a
    deletion/insertion skips. When several predecessors tie on cost the
    traceback prefers match/substitution, then deletion, then insertion.
    """
    dp = _cost_table(reference, hypothesis)
    ops: list[AlignOp] = []
    i, j = len(reference), len(hypothesis)
    while i > 0 or j > 0:
        if i > 0 and j > 0:
            same = reference[i - 1] == hypothesis[j - 1]
            if dp[i][j] == dp[i - 1][j - 1] + (0 if same else 1):
                ops.append(("=" if same else "S", i - 1, j - 1))
                i, j = i - 1, j - 1
                continue
        if i > 0 and dp[i][j] == dp[i - 1][j] + 1:
            ops.append(("D", i - 1, None))
            i -= 1
            continue
        ops.append(("I", None, j - 1))
        j -= 1
    ops.reverse()
    return ops


def edit_distance(reference: Sequence[Hashable], hypothesis: Sequence[Hashable]) -> EditCounts:
    s = d = ins = 0
    for code, _, _ in align(reference, hypothesis):
        if code == "S":
            s += 1
        elif code == "D":
            d += 1
        elif code == "I":
            ins += 1
    return EditCounts(s, d, ins, len(reference))


def normalize(text: str, language: str) -> str:
    """Scoring normalization.

    en: NFKC, lowercase, punctuation to spaces, whitespace collapsed.
    zh: NFKC, lowercase, punctuation and all whitespace removed except single
    spaces separating two Latin/digit runs.
    """
    _check_language(language)
    text = unicodedata.normalize("NFKC", text).lower()
    if language == "en":
        return _SPACES.sub(" ", text.translate(_EN_TABLE)).strip()
    text = _SPACES.sub(" ", text.translate(_ZH_TABLE)).strip()
    # NFKC has already folded full-width forms, so only CJK-adjacent spaces go.
    return re.sub(r"(?<=[^\x00-\x7f]) | (?=[^\x00-\x7f])", "", text)


def char_tokens(text: str, language: str) -> list[str]:
    return list(normalize(text, language))


def word_tokens(text: str, language: str) -> list[str]:
    text = normalize(text, language)
    if language == "en":
        return text.split()
    from .phonetics import segment

    return segment(text)


def _check_language(language: str) -> None:
    if language not in LANGUAGES:
        raise ValueError(f"unsupported language {language!r}; expected one of {LANGUAGES}")


def cer_counts(reference: str, hypothesis: str, language: str) -> EditCounts:
    return edit_distance(char_tokens(reference, language), char_tokens(hypothesis, language))


def wer_counts(reference: str, hypothesis: str, language: str) -> EditCounts:
    return edit_distance(word_tokens(reference, language), word_tokens(hypothesis, language))


def cer(reference: str, hypothesis: str, language: str) -> float:
    """Character error rate. en counts spaces as characters."""
    return cer_counts(reference, hypothesis, language).rate


def wer(reference: str, hypothesis: str, language: str) -> float:
    """Word error rate. zh words come from the bundled longest-match segmenter."""
    return wer_counts(reference, hypothesis, language).rate
