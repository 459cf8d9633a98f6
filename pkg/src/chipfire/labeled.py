"""Labeled chip-firing: distinguishable chips and the triple-firing rule.

Chips carry labels 1..N.  A vertex with at least 3 chips fires by picking
3 of them; the smallest goes to the left child, the largest to the right
child, and the middle one to the parent (back onto the root itself when
the root fires).  Unlike the unlabeled game, the choice of triples changes
which stable configuration is reached, so there can be many endpoints;
only the per-vertex chip counts are forced.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

from . import unlabeled

__all__ = [
    "LabeledConfig",
    "POLICIES",
    "initial_config",
    "fire",
    "run_policy",
    "run_policy_traced",
]

POLICIES = ("min-triple", "max-triple", "random")


@dataclass(frozen=True)
class LabeledConfig:
    """A placement of chips 1..n_chips on tree vertices.

    `cells` maps a vertex to the ascending list of labels sitting on it;
    vertices without chips are absent.  Instances are treated as
    immutable: fire() builds a new one.
    """

    n_chips: int
    cells: dict[int, list[int]]

    def validate(self) -> None:
        seen: list[int] = []
        for v, labels in self.cells.items():
            if v < 1:
                raise ValueError(f"bad vertex {v}")
            if labels != sorted(labels):
                raise ValueError(f"labels at vertex {v} are not ascending: {labels}")
            seen.extend(labels)
        if sorted(seen) != list(range(1, self.n_chips + 1)):
            raise ValueError("labels are not exactly 1..n_chips")

    def is_stable(self) -> bool:
        return all(len(labels) <= 2 for labels in self.cells.values())

    def shadow(self) -> dict[int, int]:
        """Per-vertex chip counts (the unlabeled view)."""
        return {v: len(labels) for v, labels in sorted(self.cells.items())}

    def label_at(self, v: int) -> int:
        """The single label on vertex v; v must hold exactly one chip."""
        labels = self.cells.get(v, [])
        if len(labels) != 1:
            raise ValueError(f"vertex {v} holds {len(labels)} chips, expected 1")
        return labels[0]

    def canonical_json(self) -> str:
        """Byte-exact serialization used as the deduplication key."""
        obj = {
            "n_chips": self.n_chips,
            "cells": [
                {"v": v, "chips": list(labels)} for v, labels in sorted(self.cells.items())
            ],
        }
        return json.dumps(obj, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "LabeledConfig":
        obj = json.loads(text)
        cfg = cls(
            n_chips=obj["n_chips"],
            cells={entry["v"]: list(entry["chips"]) for entry in obj["cells"]},
        )
        cfg.validate()
        return cfg


def initial_config(n_chips: int) -> LabeledConfig:
    """All chips 1..n_chips stacked on the root."""
    if n_chips < 1:
        raise ValueError("n_chips must be >= 1")
    return LabeledConfig(n_chips=n_chips, cells={1: list(range(1, n_chips + 1))})


def fire(config: LabeledConfig, v: int, triple: tuple[int, int, int]) -> LabeledConfig:
    """Fire vertex v, dispersing the given 3 labels.

    The triple is an unordered 3-subset of the labels at v; routing is by
    relative size only.
    """
    labels = config.cells.get(v, [])
    if len(labels) < 3:
        raise ValueError(f"vertex {v} holds {len(labels)} chips; firing needs 3")
    chosen = sorted(set(triple))
    if len(chosen) != 3 or any(t not in labels for t in chosen):
        raise ValueError(f"triple {triple!r} is not a 3-subset of the chips at vertex {v}")

    small, mid, large = chosen
    pv = v >> 1 if v > 1 else v  # middle chip returns to the root via its self-loop
    cells = {u: list(ls) for u, ls in config.cells.items()}
    remaining = [t for t in cells[v] if t not in (small, mid, large)]
    if remaining:
        cells[v] = remaining
    else:
        del cells[v]
    for label, dest in ((small, 2 * v), (mid, pv), (large, 2 * v + 1)):
        bucket = cells.setdefault(dest, [])
        bucket.append(label)
        bucket.sort()
    return LabeledConfig(n_chips=config.n_chips, cells=cells)


def _pick_triple(labels: list[int], policy: str, rng: random.Random | None) -> tuple[int, int, int]:
    if policy == "min-triple":
        return tuple(labels[:3])
    if policy == "max-triple":
        return tuple(labels[-3:])
    return tuple(rng.sample(labels, 3))


def run_policy_traced(
    n_chips: int, policy: str = "min-triple", seed: int | None = None
) -> tuple[LabeledConfig, dict[int, int]]:
    """Like run_policy, but also returns the per-vertex fire tallies."""
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}; expected one of {POLICIES}")
    rng = random.Random(seed) if policy == "random" else None
    config = initial_config(n_chips)
    fired: dict[int, int] = {}
    cap = 4 * unlabeled.total_fires(n_chips) + 16
    steps = 0
    while not config.is_stable():
        if steps >= cap:
            raise RuntimeError(f"labeled game exceeded its step cap ({cap})")
        v = min(u for u, labels in config.cells.items() if len(labels) >= 3)
        triple = _pick_triple(config.cells[v], policy, rng)
        config = fire(config, v, triple)
        fired[v] = fired.get(v, 0) + 1
        steps += 1
    return config, dict(sorted(fired.items()))


def run_policy(n_chips: int, policy: str = "min-triple", seed: int | None = None) -> LabeledConfig:
    """Play a full game, always firing the lowest-index fireable vertex.

    The policy only decides which 3 chips that vertex disperses.  The
    number of fires performed is F(n_chips) no matter what.
    """
    config, _ = run_policy_traced(n_chips, policy, seed)
    return config
