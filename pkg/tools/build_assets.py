"""Regenerate the pronunciation assets under src/lirasr/data/.

Not needed at runtime. Requires the ``cmudict`` and ``pypinyin`` packages plus
an unpacked jieba source tree (for its word-frequency dictionary):

    pip install cmudict pypinyin
    python tools/build_assets.py --jieba-dict /path/to/jieba/dict.txt
"""

import argparse
import re
from collections import Counter
from importlib import resources
from pathlib import Path

from pypinyin import Style, lazy_pinyin, pinyin
from pypinyin.pinyin_dict import pinyin_dict

ASSET_VERSION = "1"
DATA_DIR = Path(__file__).resolve().parents[1] / "src" / "lirasr" / "data"
CJK_WORD = re.compile(r"^[一-鿿]+$")

# Counts are fixed so rebuilding yields byte-identical files.
N_COMMON_CHARS = 3500
N_WORDS = 60000


def build_en(out: Path) -> int:
    src = resources.files("cmudict").joinpath("data/cmudict.dict").read_text("utf-8")
    seen = set()
    lines = []
    for raw in src.splitlines():
        raw = raw.split("#", 1)[0].strip()
        if not raw:
            continue
        word, *phones = raw.split()
        word = re.sub(r"\(\d+\)$", "", word)
        if word in seen:
            continue  # first listed pronunciation only
        seen.add(word)
        lines.append(word + "\t" + " ".join(re.sub(r"\d", "", p) for p in phones))
    with out.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# lirasr en pronunciation lexicon v{ASSET_VERSION}\n")
        fh.write("# source: CMU Pronouncing Dictionary (BSD-2-Clause); stress marks removed\n")
        fh.write("# format: word<TAB>ARPAbet phonemes (one pronunciation per word)\n")
        fh.write("\n".join(lines) + "\n")
    return len(lines)


def build_zh_pinyin(out: Path) -> int:
    lines = []
    for cp in sorted(pinyin_dict):
        ch = chr(cp)
        readings = pinyin(ch, style=Style.TONE3, heteronym=True, neutral_tone_with_five=True)[0]
        readings = [r for r in dict.fromkeys(readings) if re.fullmatch(r"[a-z]+[1-5]", r)]
        if readings:
            lines.append(ch + "\t" + " ".join(readings))
    with out.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# lirasr zh character pinyin table v{ASSET_VERSION}\n")
        fh.write("# source: pypinyin pinyin_dict (MIT); tone numbers, 5 = neutral, v = u-umlaut\n")
        fh.write("# format: character<TAB>reading1 reading2 ... (most common reading first)\n")
        fh.write("\n".join(lines) + "\n")
    return len(lines)


def is_gb2312_level1(ch: str) -> bool:
    """Level-1 GB2312 characters: the ~3755 most frequent simplified hanzi."""
    try:
        raw = ch.encode("gb2312")
    except UnicodeEncodeError:
        return False
    return len(raw) == 2 and 0xB0 <= raw[0] <= 0xD7


def build_zh_words(jieba_dict: Path, out: Path) -> int:
    rows = []
    for raw in jieba_dict.read_text("utf-8").splitlines():
        parts = raw.split()
        if len(parts) >= 2 and CJK_WORD.match(parts[0]):
            rows.append((parts[0], int(parts[1])))
    rows.sort(key=lambda r: (-r[1], r[0]))
    # Character usage = summed frequency of every word containing it, which is
    # far less noisy than jieba's single-character entries.
    usage: Counter[str] = Counter()
    for word, freq in rows:
        for ch in word:
            usage[ch] += freq
    level1 = [ch for ch in usage if is_gb2312_level1(ch)]
    level1.sort(key=lambda ch: (-usage[ch], ch))
    singles = level1[:N_COMMON_CHARS]
    multi = [w for w, _ in rows if len(w) > 1][:N_WORDS]
    lines = [
        w + "\t" + " ".join(lazy_pinyin(w, style=Style.TONE3, neutral_tone_with_five=True))
        for w in singles + multi
    ]
    with out.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# lirasr zh word lexicon v{ASSET_VERSION}\n")
        fh.write("# source: jieba dict.txt (MIT) ranked by frequency; common characters are GB2312\n"
                 "# level-1 hanzi ranked by summed word frequency; readings via pypinyin\n")
        fh.write(f"# first {len(singles)} entries are the common-character list\n")
        fh.write("# format: word<TAB>reading per character\n")
        fh.write("\n".join(lines) + "\n")
    return len(lines)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--jieba-dict", type=Path, required=True)
    args = parser.parse_args()
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    print("en_lexicon.tsv", build_en(DATA_DIR / "en_lexicon.tsv"))
    print("zh_pinyin.tsv", build_zh_pinyin(DATA_DIR / "zh_pinyin.tsv"))
    print("zh_words.tsv", build_zh_words(args.jieba_dict, DATA_DIR / "zh_words.tsv"))


if __name__ == "__main__":
    main()
