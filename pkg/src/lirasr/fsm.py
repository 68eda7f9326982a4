"""Search-strategy controller: No Search / Search / Search++ / End."""

from __future__ import annotations

from dataclasses import asdict, dataclass, replace
from enum import Enum

from .errors import SteppedTerminated

DEFAULT_MAX_ITERATIONS = 8
DEFAULT_STREAK_THRESHOLD = 2


class SearchState(str, Enum):
    NO_SEARCH = "NoSearch"
    SEARCH = "Search"
    SEARCH_PLUS_PLUS = "SearchPlusPlus"
    END = "End"


class StepEvent(str, Enum):
    CHANGED = "Changed"
    NOTHING_CHANGED = "NothingChanged"


# (state, event) -> (next state, reset streak?)
_TRANSITIONS: dict[tuple[SearchState, StepEvent], tuple[SearchState, bool]] = {
    (SearchState.NO_SEARCH, StepEvent.CHANGED): (SearchState.SEARCH, True),
    (SearchState.NO_SEARCH, StepEvent.NOTHING_CHANGED): (SearchState.NO_SEARCH, False),
    (SearchState.SEARCH, StepEvent.CHANGED): (SearchState.SEARCH_PLUS_PLUS, True),
    (SearchState.SEARCH, StepEvent.NOTHING_CHANGED): (SearchState.NO_SEARCH, True),
    (SearchState.SEARCH_PLUS_PLUS, StepEvent.CHANGED): (SearchState.SEARCH, True),
    (SearchState.SEARCH_PLUS_PLUS, StepEvent.NOTHING_CHANGED): (SearchState.SEARCH_PLUS_PLUS, True),
}


@dataclass(frozen=True)
class FsmSnapshot:
    state: SearchState = SearchState.NO_SEARCH
    iteration: int = 0
    no_change_streak: int = 0
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    streak_threshold: int = DEFAULT_STREAK_THRESHOLD

    @property
    def done(self) -> bool:
        return self.state is SearchState.END

    def to_dict(self) -> dict:
        d = asdict(self)
        d["state"] = self.state.value
        return d


def initial(
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    streak_threshold: int = DEFAULT_STREAK_THRESHOLD,
) -> FsmSnapshot:
    if max_iterations < 1 or streak_threshold < 1:
        raise ValueError("max_iterations and streak_threshold must be >= 1")
    return FsmSnapshot(max_iterations=max_iterations, streak_threshold=streak_threshold)


def step(snapshot: FsmSnapshot, event: StepEvent) -> FsmSnapshot:
    """Apply one iteration outcome; the termination check runs after the counters update."""
    if snapshot.state is SearchState.END:
        raise SteppedTerminated("machine is already in End")
    nxt, reset = _TRANSITIONS[(snapshot.state, StepEvent(event))]
    streak = 0 if reset else snapshot.no_change_streak + 1
    iteration = snapshot.iteration + 1
    if streak >= snapshot.streak_threshold or iteration >= snapshot.max_iterations:
        nxt = SearchState.END
    return replace(snapshot, state=nxt, iteration=iteration, no_change_streak=streak)
