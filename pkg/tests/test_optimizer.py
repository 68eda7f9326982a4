from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lirasr.backend import BackendProfile, OracleBackend
from lirasr.errors import EmptyTranscript
from lirasr.fsm import SearchState, StepEvent
from lirasr.injector import NoiseProfile, corrupt
from lirasr.metrics import cer
from lirasr.optimizer import LoopConfig, accept, converged, run
from lirasr.phonetics import homophone_table
from lirasr.transcript import Candidate, Provenance, Score, Transcript

from support import DeadBackend, RandomScoreBackend


def scored(text, value):
    return Candidate(text, "en", Provenance.CORRECTED, Score(value))


def oracle(ref):
    return OracleBackend(BackendProfile(kind="oracle", max_parallel_requests=1), ref)


class TestAccept:
    def test_empty(self):
        cur = scored("cur", 50)
        assert accept(cur, []) == (cur, StepEvent.NOTHING_CHANGED)

    def test_worse(self):
        cur = scored("cur", 50)
        assert accept(cur, [scored("x", 40)]) == (cur, StepEvent.NOTHING_CHANGED)

    def test_tie_keeps_current(self):
        cur = scored("cur", 50)
        assert accept(cur, [scored("x", 50)]) == (cur, StepEvent.NOTHING_CHANGED)

    def test_all_orderings(self):
        cur = scored("cur", 55)
        pool = [scored("a", 40), scored("b", 70), cur]
        for order in permutations(pool):
            nxt, event = accept(cur, list(order))
            assert nxt.text == "b" and event is StepEvent.CHANGED

    def test_equal_best_earliest_wins(self):
        cur = scored("cur", 10)
        nxt, _ = accept(cur, [scored("a", 80), scored("b", 80)])
        assert nxt.text == "a"

    def test_unscored_ignored(self):
        cur = scored("cur", 10)
        assert accept(cur, [Candidate("a", "en")])[0] is cur

    def test_current_needs_score(self):
        with pytest.raises(ValueError):
            accept(Candidate("a", "en"), [])


class TestRun:
    def test_perfect_input_stops_after_two_quiet_steps(self):
        ref = "今天的天气非常好"
        result = run(Transcript(ref, "zh"), oracle(ref), seed=0)
        assert result.final.text == ref
        assert [t.event for t in result.trace] == [StepEvent.NOTHING_CHANGED] * 2
        last = result.trace[-1].fsm_after
        assert last.state is SearchState.END and last.iteration == 2 and last.no_change_streak == 2

    def test_max_iterations_one(self):
        result = run(Transcript("他来了", "zh"), oracle("他来了"), LoopConfig(max_iterations=1))
        assert len(result.trace) == 1

    def test_homophone_repair_seed_7(self):
        ref = "我们今天去公园散步"
        # Pick the first injector seed that produces exactly one homophone error.
        for s in range(100):
            noisy, edits = corrupt(Transcript(ref, "zh"), NoiseProfile(0.15, 1.0, s), homophone_table("zh"))
            if len(edits) == 1:
                break
        assert len(edits) == 1 and noisy.text != ref
        result = run(noisy, oracle(ref), seed=7)
        assert result.final.text == ref
        assert cer(ref, result.final.text, "zh") == 0
        scores = result.scores
        repair = next(i for i, t in enumerate(result.trace) if t.event is StepEvent.CHANGED)
        assert scores[repair + 1] > scores[repair]

    def test_en_repair(self):
        ref = "they left their coats over there"
        result = run(Transcript("they left there coats over their", "en"), oracle(ref), seed=3)
        assert result.final.text == ref

    def test_trace_shape(self):
        ref = "他来了"
        result = run(Transcript("她来了", "zh"), oracle(ref), seed=1)
        for n, t in enumerate(result.trace, 1):
            assert t.iteration == n
            assert t.surviving_after_rules <= len(t.pool)
            d = t.to_dict(timing=False)
            assert "wall_time" not in d and d["accepted"] == t.accepted.text
        assert result.trace[-1].fsm_after.state is SearchState.END
        assert converged(result)
        # The repair in NoSearch moves the controller into Search, which
        # samples real neighbors.
        assert result.trace[0].event is StepEvent.CHANGED
        assert result.trace[1].fsm_before.state is SearchState.SEARCH
        assert result.trace[1].generated == 3

    def test_deterministic(self):
        ref = "今天的天气非常好，我们去公园散步吧。"
        a = run(Transcript("今天的天汽非常好，我们去公园散布吧。", "zh"), oracle(ref), seed=11)
        b = run(Transcript("今天的天汽非常好，我们去公园散布吧。", "zh"), oracle(ref), seed=11)
        assert [t.to_dict(False) for t in a.trace] == [t.to_dict(False) for t in b.trace]

    def test_outage_degrades(self):
        result = run(Transcript("他来了", "zh"), DeadBackend(), seed=0)
        assert result.final.text == "他来了"
        assert all(t.event is StepEvent.NOTHING_CHANGED for t in result.trace)
        assert result.stats.total_outage

    def test_empty_initial(self):
        with pytest.raises(EmptyTranscript):
            run(Transcript("  ", "zh"), oracle("他"))

    @given(st.integers(0, 2**32), st.sampled_from(["今天的天气非常好", "他来了", "我们去公园散步吧"]))
    @settings(max_examples=40, deadline=None)
    def test_monotone_under_random_scores(self, seed, text):
        result = run(Transcript(text, "zh"), RandomScoreBackend(seed), seed=seed)
        scores = result.scores
        assert all(a <= b for a, b in zip(scores, scores[1:]))
        assert all(0 <= s <= 100 for s in scores)
        assert len(result.trace) <= 8
        assert result.trace[-1].fsm_after.state is SearchState.END
