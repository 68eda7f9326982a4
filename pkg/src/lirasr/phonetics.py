"""G2P, phonetic similarity and similar-sounding substitution tables.

en pronunciations are ARPAbet without stress, one pronunciation per word.
zh pronunciations are tone-numbered pinyin syllables ("zhong1", "le5").
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .errors import LanguageMismatch
from .metrics import PUNCTUATION, _check_language, normalize

UNK = "UNK"
TONE_WEIGHT = 0.3
DEFAULT_TABLE_THRESHOLD = 0.6

EN_PHONEMES = frozenset(
    "AA AE AH AO AW AY B CH D DH EH ER EY F G HH IH IY JH K L M N NG OW OY P R S SH T"
    " TH UH UW V W Y Z ZH".split()
)

# Letter-to-sound fallback for words missing from the lexicon. Rules are tried
# longest grapheme first at each position, scanning left to right.
_LTS_RULES: dict[str, tuple[str, ...]] = {
    "tion": ("SH", "AH", "N"), "sion": ("ZH", "AH", "N"), "ough": ("AO",),
    "augh": ("AO",), "eigh": ("EY",), "tch": ("CH",), "sch": ("S", "K"),
    "igh": ("AY",), "dge": ("JH",), "que": ("K",), "ture": ("CH", "ER"),
    "ch": ("CH",), "sh": ("SH",), "th": ("TH",), "ph": ("F",), "wh": ("W",),
    "ck": ("K",), "ng": ("NG",), "qu": ("K", "W"), "gh": ("G",), "kn": ("N",),
    "wr": ("R",), "mb": ("M",), "ee": ("IY",), "ea": ("IY",), "ie": ("IY",),
    "ei": ("EY",), "oo": ("UW",), "ou": ("AW",), "ow": ("OW",), "oi": ("OY",),
    "oy": ("OY",), "ai": ("EY",), "ay": ("EY",), "au": ("AO",), "aw": ("AO",),
    "oa": ("OW",), "ue": ("UW",), "ew": ("UW",), "ar": ("AA", "R"),
    "er": ("ER",), "ir": ("ER",), "ur": ("ER",), "or": ("AO", "R"),
    "a": ("AE",), "b": ("B",), "c": ("K",), "d": ("D",), "e": ("EH",),
    "f": ("F",), "g": ("G",), "h": ("HH",), "i": ("IH",), "j": ("JH",),
    "k": ("K",), "l": ("L",), "m": ("M",), "n": ("N",), "o": ("AA",),
    "p": ("P",), "q": ("K",), "r": ("R",), "s": ("S",), "t": ("T",),
    "u": ("AH",), "v": ("V",), "w": ("W",), "x": ("K", "S"), "y": ("IY",),
    "z": ("Z",),
}
_LTS_MAX = max(map(len, _LTS_RULES))
_ZH_SYLLABLE = re.compile(r"^([a-z]+)([1-5])$")
_CJK = re.compile(r"[㐀-䶿一-鿿豈-﫿\U00020000-\U0002ffff]")
_ASCII_RUN = re.compile(r"[a-z0-9']+")
_EN_WORD = re.compile(r"^[a-z]+(?:'[a-z]+)?$")
_EN_RUN = re.compile("[^\\s" + re.escape(PUNCTUATION) + "]+")


@dataclass(frozen=True)
class PhonemeSequence:
    tokens: tuple[str, ...]
    language: str

    def __len__(self) -> int:
        return len(self.tokens)


# -- bundled data -----------------------------------------------------------


def read_table(lines: Iterable[str]) -> Iterator[tuple[str, list[str]]]:
    """Parse ``surface<TAB>reading1 reading2 ...`` lines, skipping # comments."""
    for line in lines:
        line = line.rstrip("\n")
        if not line or line.startswith("#"):
            continue
        surface, _, rest = line.partition("\t")
        yield surface, rest.split()


def _asset_lines(name: str) -> list[str]:
    return resources.files("lirasr").joinpath("data").joinpath(name).read_text("utf-8").splitlines()


@lru_cache(maxsize=None)
def en_lexicon() -> Mapping[str, tuple[str, ...]]:
    return {w: tuple(p) for w, p in read_table(_asset_lines("en_lexicon.tsv"))}


@lru_cache(maxsize=None)
def zh_readings() -> Mapping[str, tuple[str, ...]]:
    return {c: tuple(r) for c, r in read_table(_asset_lines("zh_pinyin.tsv"))}


@lru_cache(maxsize=None)
def _zh_word_data() -> tuple[frozenset[str], tuple[str, ...], int]:
    words = [w for w, _ in read_table(_asset_lines("zh_words.tsv"))]
    common = tuple(w for w in words if len(w) == 1)
    return frozenset(words), common, max(map(len, words))


def zh_lexicon() -> frozenset[str]:
    return _zh_word_data()[0]


def zh_common_chars() -> tuple[str, ...]:
    return _zh_word_data()[1]


@lru_cache(maxsize=None)
def zh_inventory() -> frozenset[str]:
    return frozenset(r for rs in zh_readings().values() for r in rs) | {UNK}


def inventory(language: str) -> frozenset[str]:
    _check_language(language)
    return EN_PHONEMES | {UNK} if language == "en" else zh_inventory()


# -- segmentation and units -------------------------------------------------


def segment(text: str) -> list[str]:
    """Greedy forward longest-match zh segmentation over the bundled lexicon.

    Runs of ASCII letters/digits are kept whole; unmatched CJK characters fall
    back to single-character tokens.
    """
    words, _, max_len = _zh_word_data()
    out: list[str] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        m = _ASCII_RUN.match(text, i)
        if m:
            out.append(m.group())
            i = m.end()
            continue
        for size in range(min(max_len, n - i), 1, -1):
            if text[i : i + size] in words:
                out.append(text[i : i + size])
                i += size
                break
        else:
            out.append(ch)
            i += 1
    return out


@dataclass(frozen=True)
class Slot:
    """A substitution unit located in raw text; ``key`` is its normalized form."""

    start: int
    end: int
    key: str


def slots(text: str, language: str) -> list[Slot]:
    """Locate units in raw ``text``: zh characters, en words.

    en words are maximal runs free of whitespace and punctuation, matching
    the tokens of the normalized text; punctuation is never part of a unit.
    """
    _check_language(language)
    out = []
    if language == "zh":
        for i, ch in enumerate(text):
            key = normalize(ch, "zh")
            if len(key) == 1:
                out.append(Slot(i, i + 1, key))
        return out
    for m in _EN_RUN.finditer(text):
        key = normalize(m.group(), "en")
        if key:
            out.append(Slot(m.start(), m.end(), key))
    return out


def units(text: str, language: str) -> list[str]:
    """Substitution units: zh characters, en whitespace words."""
    return [s.key for s in slots(text, language)]


def _match_case(template: str, word: str) -> str:
    if len(template) > 1 and template.isupper():
        return word.upper()
    if template[:1].isupper():
        return word[:1].upper() + word[1:]
    return word


def apply_substitutions(text: str, edits: Mapping[Slot, str], language: str) -> str:
    """Splice replacement units into ``text``; en replacements copy the original casing."""
    parts, last = [], 0
    for slot in sorted(edits, key=lambda s: s.start):
        replacement = edits[slot]
        if language == "en":
            replacement = _match_case(text[slot.start : slot.end], replacement)
        parts.append(text[last : slot.start])
        parts.append(replacement)
        last = slot.end
    parts.append(text[last:])
    return "".join(parts)


def join_units(parts: Sequence[str], language: str) -> str:
    return " ".join(parts) if language == "en" else "".join(parts)


# -- G2P --------------------------------------------------------------------


def letter_to_sound(word: str) -> tuple[str, ...]:
    word = re.sub(r"[^a-z]", "", word.lower())
    if len(word) > 2 and word.endswith("e") and word[-2] not in "aeiou":
        word = word[:-1]  # silent final e
    out: list[str] = []
    i = 0
    while i < len(word):
        for size in range(min(_LTS_MAX, len(word) - i), 0, -1):
            phones = _LTS_RULES.get(word[i : i + size])
            if phones is not None:
                out.extend(phones)
                i += size
                break
        else:
            i += 1
    return tuple(out)


def _en_word_phonemes(word: str) -> tuple[str, ...]:
    lex = en_lexicon()
    if word in lex:
        return lex[word]
    phones = letter_to_sound(word)
    return phones if phones else (UNK,)


def _zh_char_readings(ch: str) -> tuple[str, ...]:
    return zh_readings().get(ch, ())


def g2p(surface: str, language: str) -> PhonemeSequence:
    _check_language(language)
    text = normalize(surface, language)
    tokens: list[str] = []
    if language == "en":
        for word in text.split():
            tokens.extend(_en_word_phonemes(word))
    else:
        for ch in text:
            if ch.isspace():
                continue
            readings = _zh_char_readings(ch)
            tokens.append(readings[0] if readings else UNK)
    return PhonemeSequence(tuple(tokens), language)


# -- similarity ---------------------------------------------------------------


def _zh_sub_cost(a: str, b: str) -> float:
    if a == b:
        return 0.0
    ma, mb = _ZH_SYLLABLE.match(a), _ZH_SYLLABLE.match(b)
    if ma and mb and ma.group(1) == mb.group(1):
        return TONE_WEIGHT
    return 1.0


def _en_sub_cost(a: str, b: str) -> float:
    return 0.0 if a == b else 1.0


def weighted_distance(
    a: Sequence[str], b: Sequence[str], sub_cost: Callable[[str, str], float]
) -> float:
    prev = [float(j) for j in range(len(b) + 1)]
    for i in range(1, len(a) + 1):
        cur = [float(i)] + [0.0] * len(b)
        for j in range(1, len(b) + 1):
            cur[j] = min(
                prev[j - 1] + sub_cost(a[i - 1], b[j - 1]),
                prev[j] + 1.0,
                cur[j - 1] + 1.0,
            )
        prev = cur
    return prev[-1]


def phonetic_similarity(a: PhonemeSequence, b: PhonemeSequence) -> float:
    """1 - distance / max length; zh tone-only mismatches cost 0.3 of a syllable."""
    if a.language != b.language:
        raise LanguageMismatch(f"{a.language} vs {b.language}")
    longest = max(len(a.tokens), len(b.tokens))
    if longest == 0:
        return 1.0
    cost = _zh_sub_cost if a.language == "zh" else _en_sub_cost
    return 1.0 - weighted_distance(a.tokens, b.tokens, cost) / longest


def unit_similarity(a: str, b: str, language: str) -> float:
    """Similarity of two substitution units.

    zh characters compare over every listed reading and keep the best pair, so
    polyphonic characters count as homophones on any shared reading.
    """
    if a == b:
        return 1.0
    if language == "zh" and len(a) == 1 and len(b) == 1:
        ra, rb = _zh_char_readings(a), _zh_char_readings(b)
        if ra and rb:
            return max(1.0 - _zh_sub_cost(x, y) for x in ra for y in rb)
    return phonetic_similarity(g2p(a, language), g2p(b, language))


# -- substitution tables ----------------------------------------------------


class SubstitutionTable:
    """Map from a unit to similar-sounding units with weights in [0, 1].

    Either explicit (``entries``) or resolved lazily from the bundled data.
    Entries below ``threshold`` and self-mappings are dropped on access.
    """

    def __init__(
        self,
        language: str,
        threshold: float = DEFAULT_TABLE_THRESHOLD,
        entries: Mapping[str, Mapping[str, float]] | None = None,
        resolver: Callable[[str], Mapping[str, float]] | None = None,
    ):
        _check_language(language)
        if not 0.0 <= threshold <= 1.0:
            raise ValueError("threshold must lie in [0, 1]")
        self.language = language
        self.threshold = threshold
        self._explicit = {k: dict(v) for k, v in (entries or {}).items()}
        self._resolver = resolver
        self._cache: dict[str, dict[str, float]] = {}
        self._lock = threading.Lock()

    def get(self, unit: str) -> dict[str, float]:
        cached = self._cache.get(unit)
        if cached is not None:
            return cached
        raw: Mapping[str, float] = self._explicit.get(unit, {})
        if self._resolver is not None and unit not in self._explicit:
            raw = self._resolver(unit)
        clean = {u: w for u, w in raw.items() if u != unit and w >= self.threshold}
        with self._lock:
            self._cache[unit] = clean
        return clean

    def explicit_units(self) -> list[str]:
        return sorted(self._explicit)

    @property
    def is_lazy(self) -> bool:
        return self._resolver is not None


class _ZhIndex:
    def __init__(self) -> None:
        readings = zh_readings()
        self.by_reading: dict[str, set[str]] = {}
        self.by_base: dict[str, set[str]] = {}
        for ch in zh_common_chars():
            for r in readings.get(ch, ()):
                self.by_reading.setdefault(r, set()).add(ch)
                self.by_base.setdefault(r[:-1], set()).add(r)

    def resolve(self, unit: str, threshold: float) -> dict[str, float]:
        out: dict[str, float] = {}
        for r in _zh_char_readings(unit) if len(unit) == 1 else ():
            for ch in self.by_reading.get(r, ()):
                out[ch] = 1.0
            if threshold <= 1.0 - TONE_WEIGHT:
                for other in self.by_base.get(r[:-1], ()):
                    if other == r:
                        continue
                    for ch in self.by_reading[other]:
                        out.setdefault(ch, 1.0 - TONE_WEIGHT)
        return out


class _EnIndex:
    """Pronunciation index finding words within one phoneme edit.

    Homophones and single substitutions, insertions and deletions are found by
    probing every one-edit variant of the query; farther pairs are never
    listed.
    """

    def __init__(self) -> None:
        self.exact: dict[tuple[str, ...], list[str]] = {}
        for word, phones in en_lexicon().items():
            if _EN_WORD.match(word):
                self.exact.setdefault(phones, []).append(word)
        self.alphabet = sorted(EN_PHONEMES)

    def _variants(self, phones: tuple[str, ...]) -> Iterator[tuple[str, ...]]:
        yield phones
        for i in range(len(phones) + 1):
            head, tail = phones[:i], phones[i:]
            if tail:
                yield head + tail[1:]
            for p in self.alphabet:
                yield head + (p,) + tail
                if tail and p != tail[0]:
                    yield head + (p,) + tail[1:]

    def resolve(self, unit: str, threshold: float) -> dict[str, float]:
        phones = g2p(unit, "en").tokens
        if not phones or UNK in phones:
            return {}
        src = PhonemeSequence(phones, "en")
        out = {}
        for variant in set(self._variants(phones)):
            words = self.exact.get(variant)
            if not words:
                continue
            w = phonetic_similarity(src, PhonemeSequence(variant, "en"))
            if w >= threshold:
                for word in words:
                    out[word] = w
        return out


@lru_cache(maxsize=None)
def _index(language: str) -> _ZhIndex | _EnIndex:
    return _ZhIndex() if language == "zh" else _EnIndex()


@lru_cache(maxsize=None)
def build_table(language: str, threshold: float = DEFAULT_TABLE_THRESHOLD) -> SubstitutionTable:
    """Substitution table over the bundled pronunciation data.

    zh targets are restricted to the bundled common-character list; en targets
    to plain alphabetic lexicon words.
    """
    _check_language(language)
    return SubstitutionTable(
        language, threshold, resolver=lambda unit: _index(language).resolve(unit, threshold)
    )


def homophone_table(language: str) -> SubstitutionTable:
    return build_table(language, 1.0)


def similar_units(
    unit: str, language: str, table: SubstitutionTable, min_similarity: float
) -> list[str]:
    """Units similar to ``unit`` with weight >= ``min_similarity``.

    Ranked by weight descending, then lexicographically.
    """
    if not 0.0 <= min_similarity <= 1.0:
        raise ValueError("min_similarity must lie in [0, 1]")
    if table.language != language:
        raise LanguageMismatch(f"table is {table.language}, unit is {language}")
    ranked = [(w, u) for u, w in table.get(unit).items() if w >= min_similarity and u != unit]
    ranked.sort(key=lambda p: (-p[0], p[1]))
    return [u for _, u in ranked]


def weighted_similar_units(
    unit: str, language: str, table: SubstitutionTable, min_similarity: float
) -> list[tuple[str, float]]:
    entries = table.get(unit)
    return [(u, entries[u]) for u in similar_units(unit, language, table, min_similarity)]
