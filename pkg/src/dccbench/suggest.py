"""Few-shot prompt construction and the pluggable completion service.

A prompt holds five exemplar blocks — the four nearest same-label neighbors
in increasing similarity order, then the seed DCC — and ends with an empty
sixth header eliciting a new example. The context word tying premise to
hypothesis is Implication / Possibility / Contradiction for entailment /
neutral / contradiction respectively.

The completion service is an interface with two implementations: an HTTP
client and a seeded deterministic mock, so nothing here ever needs a paid
API to run.
"""

from __future__ import annotations

import hashlib
import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Protocol, Union

import httpx

from .corpus import CorpusHandle, Label
from .errors import InsufficientNeighbors, ServiceUnavailable, UnparseableCompletion
from .mining import DccRecord
from .neighbors import NeighborIndex

CONTEXT_WORDS: dict[Label, str] = {
    Label.ENTAILMENT: "Implication",
    Label.NEUTRAL: "Possibility",
    Label.CONTRADICTION: "Contradiction",
}

PROMPT_EXEMPLARS = 4  # same-label neighbors per prompt, before the DCC itself

_EXAMPLE_HEADER = re.compile(r"^Example \d+:\s*$")
_ANY_CONTEXT_WORD = re.compile(r"^(Implication|Possibility|Contradiction): ")


def prompt_fingerprint(rendered: str) -> str:
    """Stable hash of the rendered prompt text."""
    return hashlib.sha256(rendered.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class PromptSpec:
    """A fully rendered few-shot prompt plus the pieces it was built from."""

    exemplars: tuple[tuple[str, str], ...]  # (premise, hypothesis) x 5, DCC last
    context_word: str
    rendered: str

    @property
    def fingerprint(self) -> str:
        return prompt_fingerprint(self.rendered)


@dataclass(frozen=True)
class Suggestion:
    premise: str
    hypothesis: str
    source: str  # "llm" or "user_edit"
    raw_completion: str
    prompt_fingerprint: str


def render_exemplar_block(index: int, premise: str, hypothesis: str, context_word: str) -> str:
    return f"Example {index}:\n{premise}\n{context_word}: {hypothesis}\n\n"


def render_prompt(exemplars: tuple[tuple[str, str], ...], context_word: str) -> str:
    blocks = [
        render_exemplar_block(i, premise, hypothesis, context_word)
        for i, (premise, hypothesis) in enumerate(exemplars, 1)
    ]
    return "".join(blocks) + f"Example {len(exemplars) + 1}:\n"


def build_prompt(dcc: DccRecord, corpus: CorpusHandle, index: NeighborIndex) -> PromptSpec:
    """Prompt for one DCC: four nearest same-label neighbors, then the DCC.

    Exemplars are ordered by increasing similarity so the closest neighbor
    sits directly before the DCC itself.
    """
    point = corpus.point(dcc.id)
    same_label = index.label_split(dcc.id, min(len(corpus) - 1, PROMPT_EXEMPLARS)).same_label
    if len(same_label) < PROMPT_EXEMPLARS:
        raise InsufficientNeighbors(
            f"{dcc.id!r} has {len(same_label)} same-label neighbors, "
            f"need {PROMPT_EXEMPLARS}"
        )
    ordered = tuple(reversed(same_label[:PROMPT_EXEMPLARS]))  # increasing similarity
    exemplars = tuple(
        (corpus.point(nb.id).premise, corpus.point(nb.id).hypothesis) for nb in ordered
    ) + ((point.premise, point.hypothesis),)
    context_word = CONTEXT_WORDS[point.gold_label]
    return PromptSpec(
        exemplars=exemplars,
        context_word=context_word,
        rendered=render_prompt(exemplars, context_word),
    )


def parse_completion(text: str, context_word: str) -> tuple[str, str]:
    """Split a completion into (premise, hypothesis) on the context-word line.

    The premise is every line before the separator, minus block headers and
    blanks; the hypothesis is the remainder of the separator line. Raises
    UnparseableCompletion when no separator line exists or either side is
    empty.
    """
    separator = f"{context_word}: "
    lines = text.splitlines()
    for i, line in enumerate(lines):
        if line.startswith(separator):
            premise_lines = [
                ln.strip()
                for ln in lines[:i]
                if ln.strip() and not _EXAMPLE_HEADER.match(ln.strip())
            ]
            premise = "\n".join(premise_lines)
            hypothesis = line[len(separator):].strip()
            if not premise or not hypothesis:
                raise UnparseableCompletion(text)
            return premise, hypothesis
    raise UnparseableCompletion(text)


class SuggestionClient(Protocol):
    """Anything that can turn a prompt into n completion strings."""

    def complete(self, prompt: str, n: int) -> list[str]: ...


class HttpSuggestionClient:
    """Text-completion client for the POST {prompt, n, temperature, max_tokens}
    wire format; the response carries {"completions": [str, ...]}.

    When parallelism > 1 the n completions are split across that many
    concurrent requests; results are concatenated in request order.
    """

    def __init__(
        self,
        endpoint: str,
        temperature: float = 0.7,
        max_tokens: int = 128,
        api_key_env: str | None = None,
        parallelism: int = 1,
        timeout: float = 30.0,
    ):
        self.endpoint = endpoint
        self.temperature = temperature
        self.max_tokens = max_tokens
        self.api_key_env = api_key_env
        self.parallelism = max(1, parallelism)
        self.timeout = timeout

    def _headers(self) -> dict[str, str]:
        headers = {"Content-Type": "application/json"}
        if self.api_key_env:
            key = os.environ.get(self.api_key_env)
            if key:
                headers["Authorization"] = f"Bearer {key}"
        return headers

    def _request(self, prompt: str, n: int) -> list[str]:
        payload = {
            "prompt": prompt,
            "n": n,
            "temperature": self.temperature,
            "max_tokens": self.max_tokens,
        }
        try:
            response = httpx.post(
                self.endpoint, json=payload, headers=self._headers(), timeout=self.timeout
            )
            response.raise_for_status()
            body = response.json()
        except httpx.HTTPError as exc:
            raise ServiceUnavailable(f"suggestion service at {self.endpoint}: {exc}") from exc
        except ValueError as exc:
            raise ServiceUnavailable(f"suggestion service returned non-JSON body") from exc
        completions = body.get("completions") if isinstance(body, dict) else None
        if not isinstance(completions, list) or not all(isinstance(c, str) for c in completions):
            raise ServiceUnavailable("suggestion service response missing 'completions'")
        return completions

    def complete(self, prompt: str, n: int) -> list[str]:
        if self.parallelism == 1 or n == 1:
            return self._request(prompt, n)
        chunks = _balanced_chunks(n, self.parallelism)
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            batches = list(pool.map(lambda size: self._request(prompt, size), chunks))
        return [completion for batch in batches for completion in batch]


def _balanced_chunks(n: int, parts: int) -> list[int]:
    parts = min(parts, n)
    base, extra = divmod(n, parts)
    return [base + (1 if i < extra else 0) for i in range(parts)]


_MOCK_PREMISES = (
    "A man in a gray jacket reads a newspaper on a bench.",
    "A woman with a red umbrella waits for the morning bus.",
    "Two children build a sandcastle at the beach.",
    "A street musician plays an accordion near the fountain.",
    "An elderly couple walks slowly through the market.",
    "A group of tourists takes photographs of the old bridge.",
    "A cyclist rides along the river path.",
    "A dog chases a ball across the park.",
    "Workers in hard hats repair the roof of a barn.",
    "A girl in a yellow raincoat jumps over a puddle.",
    "Three friends share a pizza at an outdoor table.",
    "A fisherman untangles his net on the dock.",
)
_MOCK_CLAIMS = (
    "Someone is outdoors.",
    "A person is sleeping indoors.",
    "People are having a picnic.",
    "Somebody is holding an instrument.",
    "A child is swimming.",
    "Everyone is waiting in line.",
    "An animal is running.",
    "A vehicle is being used.",
)


class MockSuggestionClient:
    """Seeded deterministic stand-in for the completion service.

    Completions are a pure function of (seed, prompt, completion index), so
    identical prompts always yield identical suggestion lists. The context
    word is read back out of the prompt, keeping every completion parseable.
    """

    def __init__(self, seed: int = 0):
        self.seed = seed

    def _context_word(self, prompt: str) -> str:
        for line in prompt.splitlines():
            match = _ANY_CONTEXT_WORD.match(line)
            if match:
                return match.group(1)
        return "Possibility"

    def complete(self, prompt: str, n: int) -> list[str]:
        word = self._context_word(prompt)
        completions = []
        for i in range(n):
            digest = hashlib.sha256(f"{self.seed}|{i}|{prompt}".encode("utf-8")).digest()
            premise = _MOCK_PREMISES[digest[0] % len(_MOCK_PREMISES)]
            hypothesis = _MOCK_CLAIMS[digest[1] % len(_MOCK_CLAIMS)]
            completions.append(f"{premise}\n{word}: {hypothesis}")
        return completions


def client_from_target(
    target: str,
    temperature: float = 0.7,
    max_tokens: int = 128,
    api_key_env: str | None = None,
    parallelism: int = 1,
) -> SuggestionClient:
    """Resolve a config target: "mock:<seed>" or an HTTP(S) endpoint URL."""
    if target.startswith("mock:"):
        return MockSuggestionClient(seed=int(target.split(":", 1)[1]))
    return HttpSuggestionClient(
        target,
        temperature=temperature,
        max_tokens=max_tokens,
        api_key_env=api_key_env,
        parallelism=parallelism,
    )


FetchResult = Union[Suggestion, UnparseableCompletion]


def _parse_one(raw: str, prompt: PromptSpec, fingerprint: str) -> FetchResult:
    try:
        premise, hypothesis = parse_completion(raw, prompt.context_word)
    except UnparseableCompletion as exc:
        return exc
    return Suggestion(
        premise=premise,
        hypothesis=hypothesis,
        source="llm",
        raw_completion=raw,
        prompt_fingerprint=fingerprint,
    )


def fetch_suggestions(
    prompt: PromptSpec, n: int, client: SuggestionClient, retries: int = 0
) -> list[FetchResult]:
    """Fetch and parse n completions.

    Unparseable completions come back as UnparseableCompletion values in
    the result list (same position they were received in), never raised
    and never dropped — the caller decides how to surface them. With
    retries > 0, replacement completions are requested for the failed
    slots up to that many times before the remaining failures surface.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if retries < 0:
        raise ValueError(f"retries must be >= 0, got {retries}")
    fingerprint = prompt.fingerprint
    results: list[FetchResult] = [
        _parse_one(raw, prompt, fingerprint) for raw in client.complete(prompt.rendered, n)
    ]
    for _ in range(retries):
        failed = [i for i, r in enumerate(results) if isinstance(r, UnparseableCompletion)]
        if not failed:
            break
        replacements = client.complete(prompt.rendered, len(failed))
        for slot, raw in zip(failed, replacements):
            results[slot] = _parse_one(raw, prompt, fingerprint)
    return results
