"""Similarity scorers and the novelty weight of an interaction against its history."""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from . import _kernels
from .config import InteractionEvent, TaskRepresentation

Similarity = Callable[[TaskRepresentation, TaskRepresentation], float]

__all__ = [
    "edit_similarity",
    "keyword_similarity",
    "hybrid_similarity",
    "register_similarity",
    "known_methods",
    "get_similarity",
    "novelty_weight",
    "push_history",
]


def edit_similarity(a: TaskRepresentation, b: TaskRepresentation) -> float:
    """1 - Levenshtein(a, b) / max(len a, len b); two empty texts score 1."""
    la, lb = len(a.normalized_text), len(b.normalized_text)
    longest = max(la, lb)
    if longest == 0:
        return 1.0
    if a.normalized_text == b.normalized_text:
        return 1.0
    return 1.0 - int(_kernels.levenshtein(a.codes, b.codes)) / longest


def keyword_similarity(a: TaskRepresentation, b: TaskRepresentation) -> float:
    """Jaccard index of the keyword sets; two empty sets count as duplicates."""
    ka, kb = a.keyword_set, b.keyword_set
    if not ka and not kb:
        return 1.0
    inter = len(ka & kb)
    return inter / (len(ka) + len(kb) - inter)


def hybrid_similarity(a: TaskRepresentation, b: TaskRepresentation) -> float:
    return max(edit_similarity(a, b), keyword_similarity(a, b))


_BUILTIN = {"edit": edit_similarity, "keyword": keyword_similarity, "hybrid": hybrid_similarity}
_REGISTRY: dict[str, Similarity] = dict(_BUILTIN)


def register_similarity(name: str, scorer: Similarity) -> None:
    """Plug in an extra scorer (for instance an embedding model) under ``name``.

    The scorer must be symmetric and return values in [0, 1].
    """
    if name in _BUILTIN:
        raise ValueError(f"cannot replace built-in similarity {name!r}")
    _REGISTRY[name] = scorer


def known_methods() -> frozenset[str]:
    return frozenset(_REGISTRY)


def get_similarity(method: str) -> Similarity:
    try:
        return _REGISTRY[method]
    except KeyError:
        raise ValueError(f"unknown similarity method {method!r}") from None


def _max_edit(query: TaskRepresentation, history: Sequence[TaskRepresentation]) -> float:
    lens = np.fromiter((len(h.normalized_text) for h in history), dtype=np.int64,
                       count=len(history))
    offsets = np.zeros(len(history) + 1, dtype=np.int64)
    np.cumsum(lens, out=offsets[1:])
    buf = np.concatenate([h.codes for h in history]) if offsets[-1] else np.empty(0, np.uint32)
    return float(_kernels.max_edit_similarity(query.codes, buf, offsets))


def _max_keyword(query: TaskRepresentation, history: Sequence[TaskRepresentation]) -> float:
    return max(keyword_similarity(query, h) for h in history)


def max_similarity(query: TaskRepresentation, history: Sequence[TaskRepresentation],
                   method: str = "hybrid") -> float:
    """Largest similarity between ``query`` and any history entry (0 for empty history)."""
    if not history:
        return 0.0
    if method == "edit":
        return _max_edit(query, history)
    if method == "keyword":
        return _max_keyword(query, history)
    if method == "hybrid":
        # max over j of max(edit, keyword) == max(max edit, max keyword)
        kw = _max_keyword(query, history)
        if kw >= 1.0:
            return 1.0
        return max(kw, _max_edit(query, history))
    scorer = get_similarity(method)
    return max(scorer(query, h) for h in history)


def novelty_weight(query: TaskRepresentation | InteractionEvent,
                   history: Sequence[TaskRepresentation], method: str = "hybrid") -> float:
    """Novelty in [0, 1]: 1 with no history, else 1 minus the best match.

    ``query`` may be an :class:`InteractionEvent` or a bare representation.
    """
    query = getattr(query, "task_repr", query)
    if not history:
        return 1.0
    return max(0.0, 1.0 - max_similarity(query, history, method))


def push_history(history: tuple[TaskRepresentation, ...], rep: TaskRepresentation,
                 capacity: int) -> tuple[TaskRepresentation, ...]:
    """Append ``rep``, dropping the oldest entries beyond ``capacity``."""
    out = history + (rep,)
    if len(out) > capacity:
        out = out[len(out) - capacity:]
    return out
