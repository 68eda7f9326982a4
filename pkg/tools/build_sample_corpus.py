"""Regenerate src/lirasr/data/sample_corpus.jsonl.

References and first-pass hypotheses are hand written; the remaining n-best
entries are sampled with the noise injector and frozen into the file.
"""

from __future__ import annotations

from pathlib import Path

from lirasr.harness.corpus import CorpusRecord, derive_seed, dumps
from lirasr.injector import NoiseProfile, corrupt
from lirasr.phonetics import build_table
from lirasr.transcript import Transcript

NBEST = 6

PAIRS = {
    "zh": [
        ("今天的天气非常好，我们去公园散步吧。", "今天的天汽非常好，我们去公园散布吧。"),
        ("这个问题的原因可以追溯到很多年以前。", "这个问题的原因可以追素到很多年以前。"),
        ("科学家们正在研究一种新的治疗方法。", "科学家门正在研究一种新的治疗方发。"),
        ("会议上大家提出了很多有用的建议。", "会意上大家提出了很多有用的见议。"),
        ("全球气候变化影响着每一个国家。", "全球气侯变化影响着每一个国家。"),
        ("火车将在下午三点到达北京。", "火车将在下午三点到答北京。"),
        ("她每天早上都会喝一杯牛奶。", "他每天早上都会喝一杯牛奶。"),
        ("我们之间的友谊非常珍贵。", "我们之间的友义非常珍贵。"),
        ("妈妈带孩子去医院看病了。", "妈妈带孩子去意院看病了。"),
        ("他认真地完成了所有的作业。", "他认真的完成了所有的作业。"),
    ],
    "en": [
        ("i wonder whether the weather will be nice tomorrow",
         "i wonder weather the weather will be nice tomorrow"),
        ("they left their coats over there by the door",
         "they left there coats over there by the door"),
        ("the doctor knew about the new disease",
         "the doctor new about the knew disease"),
        ("she read the whole book in one night",
         "she red the whole book in one knight"),
        ("we waited for four hours at the station",
         "we waited four four hours at the station"),
        ("go by the store and buy some flour for the bread",
         "go buy the store and by some flower for the bread"),
        ("the council will meet again next week",
         "the counsel will meet again next weak"),
        ("you can see the sea from the top of the hill",
         "you can sea the see from the top of the hill"),
        ("the principal explained the main principle of the school",
         "the principle explained the main principal of the school"),
        ("i can hear the waves from here on the beach",
         "i can here the waves from hear on the beach"),
    ],
}


def build() -> list[CorpusRecord]:
    records = []
    for lang, pairs in PAIRS.items():
        table = build_table(lang, 0.6)
        for idx, (ref, hyp) in enumerate(pairs, 1):
            rid = f"{lang}-{idx:02d}"
            nbest = [hyp]
            attempt = 0
            while len(nbest) < NBEST and attempt < 200:
                profile = NoiseProfile(0.15, 0.7, derive_seed(attempt, rid))
                noisy, _ = corrupt(Transcript(ref, lang), profile, table)
                if noisy.text not in nbest and noisy.text != ref:
                    nbest.append(noisy.text)
                attempt += 1
            records.append(CorpusRecord(rid, lang, hyp, ref, tuple(nbest)))
    return records


if __name__ == "__main__":
    out = Path(__file__).resolve().parents[1] / "src" / "lirasr" / "data" / "sample_corpus.jsonl"
    out.write_text(dumps(build()), encoding="utf-8")
    print(f"wrote {out}")
