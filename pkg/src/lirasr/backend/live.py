"""Chat-completions HTTP backend.

Speaks the common JSON chat protocol: POST ``{model, messages, temperature}``
and read ``choices[0].message.content``. The API key, when set, comes from
the environment variable named in the profile (``LIR_API_KEY`` by default).
"""

from __future__ import annotations

import json
import logging
import os
import re
import time
from typing import Any, Callable, Sequence

import httpx

from ..errors import BackendUnavailable, EmptyTranscript, MalformedResponse, ScoreParseFailure
from ..transcript import Candidate, Provenance, Score, Transcript
from .base import Backend, BackendProfile

logger = logging.getLogger(__name__)

_SCORE_LINE = re.compile(r"score\s*[:：=]\s*(-?\d+(?:\.\d+)?)(.*)", re.IGNORECASE)
_REASON_LINE = re.compile(r"(?:reason|rationale|explanation)\s*[:：]\s*(.+)", re.IGNORECASE)
_TRANSCRIPT_LINE = re.compile(r"transcript\s*[:：]\s*(.+)", re.IGNORECASE)
_LEADING_SEP = " \t-\u2013\u2014:|,;"
_RETRY_STATUS = {408, 409, 425, 429, 500, 502, 503, 504}


def render(template: str, **values: str) -> str:
    out = template
    for key, value in values.items():
        out = out.replace("{{" + key + "}}", value)
    return out


def first_json_object(text: str) -> dict | None:
    decoder = json.JSONDecoder()
    for i, ch in enumerate(text):
        if ch != "{":
            continue
        try:
            obj, _ = decoder.raw_decode(text, i)
        except json.JSONDecodeError:
            continue
        if isinstance(obj, dict):
            return obj
    return None


def parse_transcript(reply: str) -> str:
    """Pull the transcript out of a correct/fuse reply."""
    reply = (reply or "").strip()
    if not reply:
        raise MalformedResponse("empty reply")
    obj = first_json_object(reply)
    if obj is not None:
        text = obj.get("transcript")
        if isinstance(text, str) and text.strip():
            return text.strip()
        raise MalformedResponse("JSON reply without a non-empty 'transcript' field")
    for line in reply.splitlines():
        m = _TRANSCRIPT_LINE.match(line.strip())
        if m:
            return m.group(1).strip().strip('"')
    lines = [ln.strip() for ln in reply.splitlines() if ln.strip()]
    if len(lines) == 1:
        return lines[0]
    raise MalformedResponse(f"cannot find a transcript in reply: {reply[:80]!r}")


def parse_score(reply: str, f_max: float = 100.0) -> Score:
    """Parse ``{"score": n, "reason": ...}`` or a ``Score: n - reason`` line.

    Out-of-range values are clamped to [0, f_max].
    """
    reply = (reply or "").strip()
    obj = first_json_object(reply)
    if obj is not None and "score" in obj:
        try:
            value = float(obj["score"])
        except (TypeError, ValueError) as exc:
            raise ScoreParseFailure(f"non-numeric score {obj['score']!r}") from exc
        reason = obj.get("reason") or obj.get("rationale") or obj.get("explanation") or ""
        return Score.clamped(value, f_max, str(reason).strip())
    for line in reply.splitlines():
        m = _SCORE_LINE.search(line)
        if not m:
            continue
        reason = m.group(2).strip(_LEADING_SEP)
        if not reason:
            for other in reply.splitlines():
                r = _REASON_LINE.search(other)
                if r:
                    reason = r.group(1).strip()
                    break
        return Score.clamped(float(m.group(1)), f_max, reason)
    raise ScoreParseFailure(f"no score in reply: {reply[:80]!r}")


class LiveHttpBackend(Backend):
    def __init__(
        self,
        profile: BackendProfile,
        client: httpx.Client | None = None,
        sleep: Callable[[float], None] = time.sleep,
    ):
        super().__init__(profile)
        self._client = client or httpx.Client(timeout=profile.request_timeout)
        self._owns_client = client is None
        self._sleep = sleep
        if not os.environ.get(profile.api_key_env):
            logger.warning("%s is not set; sending requests without credentials", profile.api_key_env)

    def close(self) -> None:
        if self._owns_client:
            self._client.close()

    def _headers(self) -> dict[str, str]:
        headers = {"Content-Type": "application/json"}
        key = os.environ.get(self.profile.api_key_env)
        if key:
            headers["Authorization"] = f"Bearer {key}"
        return headers

    def payload(self, prompt: str) -> dict[str, Any]:
        return {
            "model": self.profile.model_name,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": 0,
        }

    def chat(self, prompt: str) -> str:
        """Send one prompt, retrying transport errors with exponential backoff."""
        last: Exception | None = None
        for attempt in range(self.profile.retry_budget + 1):
            if attempt:
                self._sleep(self.profile.backoff_base * 2 ** (attempt - 1))
            try:
                resp = self._client.post(
                    self.profile.endpoint_url, json=self.payload(prompt), headers=self._headers()
                )
            except httpx.HTTPError as exc:
                last = exc
                logger.warning("request failed (attempt %d): %s", attempt + 1, exc)
                continue
            if resp.status_code in _RETRY_STATUS:
                last = BackendUnavailable(f"HTTP {resp.status_code}")
                logger.warning("HTTP %d (attempt %d)", resp.status_code, attempt + 1)
                continue
            if resp.status_code >= 400:
                raise BackendUnavailable(f"HTTP {resp.status_code}: {resp.text[:200]}")
            try:
                content = resp.json()["choices"][0]["message"]["content"]
            except (ValueError, KeyError, IndexError, TypeError) as exc:
                raise MalformedResponse("response is not a chat completion") from exc
            if not isinstance(content, str):
                raise MalformedResponse("message content is not text")
            return content
        raise BackendUnavailable(
            f"gave up after {self.profile.retry_budget + 1} attempts: {last}"
        ) from last

    def correct(self, candidate: Candidate, context: Transcript) -> Candidate:
        if not candidate.text.strip():
            raise EmptyTranscript("candidate is empty")
        prompt = render(
            self.profile.prompt_templates["correct"],
            candidate=candidate.text,
            context=context.text,
        )
        text = parse_transcript(self.chat(prompt))
        return Candidate(text, candidate.language, Provenance.CORRECTED)

    def fuse(self, current: Transcript, corrected: Sequence[Candidate]) -> Candidate:
        if not corrected:
            raise ValueError("fuse needs at least one corrected candidate")
        if len(corrected) == 1:
            return Candidate(corrected[0].text, corrected[0].language, Provenance.FUSED)
        listing = "\n".join(f"{i + 1}. {c.text}" for i, c in enumerate(corrected))
        prompt = render(
            self.profile.prompt_templates["fuse"],
            context=current.text,
            candidate=current.text,
            candidates=listing,
        )
        text = parse_transcript(self.chat(prompt))
        return Candidate(text, current.language, Provenance.FUSED)

    def score(self, candidate: Candidate) -> Score:
        if not candidate.text.strip():
            raise EmptyTranscript("candidate is empty")
        prompt = render(self.profile.prompt_templates["score"], candidate=candidate.text)
        reply = self.chat(prompt)
        try:
            return parse_score(reply, self.f_max)
        except ScoreParseFailure:
            logger.warning("unparseable score reply: %r", reply[:120])
            return Score(0.0, self.f_max, "unparseable")
