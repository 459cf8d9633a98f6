"""Unlabeled chip-firing dynamics and their closed-form counts.

Start with N >= 1 indistinguishable chips on the root.  A vertex holding
at least 3 chips may fire: it sends one chip to each of its 3 neighbors.
The root's third neighbor is itself (self-loop), so a root fire is a net
loss of 2 chips there.  Firing order never changes the outcome: the final
configuration and every per-vertex fire tally are unique.

Closed forms are driven by the binary digits a_0..a_n of N + 1, where
n = floor(log2(N + 1)):

* the stable configuration puts c_i = a_i + 1 chips on every vertex of
  layer i + 1, for 0 <= i <= n - 1;
* every vertex on layer k + 1 fires f_k = sum_{j=1}^{n-k-1} (2^j - 1) *
  c_{k+j} times;
* the total number of fires is F(N) = sum_{k=1}^{n-1} ((k-1) 2^k + 1) c_k.

Arrays c and f are 0-indexed (entry k describes layer k + 1) throughout.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

__all__ = [
    "UnlabeledProfile",
    "UnlabeledState",
    "STRATEGIES",
    "profile",
    "binary_digits",
    "stable_chip_counts",
    "fires_per_layer",
    "root_fires_closed",
    "root_fires_recursive",
    "total_fires",
    "simulate",
    "diff_root_fires",
    "diff_total_fires",
    "SEQUENCE_NAMES",
    "sequence",
]

STRATEGIES = ("lowest-index-first", "random", "highest-layer-first")
SEQUENCE_NAMES = ("f0", "F", "diff-f0", "diff-F")


def _check_chips(n_chips: int) -> None:
    if not isinstance(n_chips, int) or n_chips < 1:
        raise ValueError(f"number of chips must be a positive integer, got {n_chips!r}")


def binary_digits(value: int) -> list[int]:
    """Binary digits of `value`, least significant first."""
    if value < 1:
        raise ValueError("value must be positive")
    return [(value >> k) & 1 for k in range(value.bit_length())]


def stable_chip_counts(n_chips: int) -> list[int]:
    """Per-layer chip count of the stable configuration, c_0..c_{n-1}."""
    _check_chips(n_chips)
    digits = binary_digits(n_chips + 1)
    return [a + 1 for a in digits[:-1]]


def fires_per_layer(n_chips: int) -> list[int]:
    """Per-layer fire tally f_0..f_{n-1} (f_k for every vertex on layer k+1)."""
    c = stable_chip_counts(n_chips)
    n = len(c)
    return [sum((2**j - 1) * c[k + j] for j in range(1, n - k)) for k in range(n)]


def root_fires_closed(n_chips: int) -> int:
    """Number of root fires, as the weighted sum over c_1..c_{n-1}."""
    c = stable_chip_counts(n_chips)
    return sum((2**j - 1) * c[j] for j in range(1, len(c)))


def root_fires_recursive(n_chips: int) -> int:
    """Number of root fires via the halving recursion.

    f0(N) = ceil(N/2) - 1 + f0(ceil(N/2) - 1), grounded at f0(N) = 0 for
    N <= 2 (fewer than 3 chips never fire).  Agrees with
    root_fires_closed for every N.
    """
    _check_chips(n_chips)
    total = 0
    while n_chips > 2:
        half = (n_chips + 1) // 2
        total += half - 1
        n_chips = half - 1
    return total


def total_fires(n_chips: int) -> int:
    """Total number of fires over the whole stabilization."""
    c = stable_chip_counts(n_chips)
    return sum(((k - 1) * 2**k + 1) * c[k] for k in range(1, len(c)))


def diff_root_fires(m: int) -> int:
    """Root-fire increment f0(2m+2) - f0(2m).

    Equals i when m = 2^i - 1 and i + 1 when the binary expansion of m
    ends with exactly i ones otherwise.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    return root_fires_closed(2 * m + 2) - root_fires_closed(2 * m)


def diff_total_fires(m: int) -> int:
    """Total-fire increment F(2m+2) - F(2m); always of the form 2^d - d - 1."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return total_fires(2 * m + 2) - total_fires(2 * m)


@dataclass(frozen=True)
class UnlabeledProfile:
    """Everything the closed forms say about stabilizing n_chips chips."""

    n_chips: int
    n: int
    digits: list[int]
    chip_counts: list[int]
    fire_counts: list[int]
    root_fires: int
    total_fires: int

    def to_dict(self) -> dict:
        return {
            "n_chips": self.n_chips,
            "n": self.n,
            "digits": self.digits,
            "chip_counts": self.chip_counts,
            "fire_counts": self.fire_counts,
            "root_fires": self.root_fires,
            "total_fires": self.total_fires,
        }


def profile(n_chips: int) -> UnlabeledProfile:
    digits = binary_digits(n_chips + 1)
    f = fires_per_layer(n_chips)
    return UnlabeledProfile(
        n_chips=n_chips,
        n=len(digits) - 1,
        digits=digits,
        chip_counts=stable_chip_counts(n_chips),
        fire_counts=f,
        root_fires=f[0] if f else 0,
        total_fires=total_fires(n_chips),
    )


@dataclass
class UnlabeledState:
    """Final state of a simulation: nonzero cells and per-vertex fire tallies."""

    n_chips: int
    cells: dict[int, int]
    fired: dict[int, int] = field(default_factory=dict)

    def total(self) -> int:
        return sum(self.cells.values())


def simulate(
    n_chips: int,
    strategy: str = "lowest-index-first",
    seed: int | None = None,
    step_cap: int | None = None,
    validate: bool = False,
) -> UnlabeledState:
    """Run the firing process to its stable configuration.

    `strategy` picks which fireable vertex goes next; by confluence the
    result never depends on it.  `random` draws uniformly from the
    fireable set with a generator seeded by `seed`.  A step cap (default
    4*F(N) + 16) turns a runaway loop into a hard error instead of a hang.
    `validate` re-checks chip conservation after every fire (slow; for
    tests).
    """
    _check_chips(n_chips)
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    cap = step_cap if step_cap is not None else 4 * total_fires(n_chips) + 16
    rng = random.Random(seed) if strategy == "random" else None

    cells: dict[int, int] = {1: n_chips}
    fired: dict[int, int] = {}
    fireable: set[int] = {1} if n_chips >= 3 else set()
    steps = 0

    while fireable:
        if steps >= cap:
            raise RuntimeError(
                f"simulation exceeded its step cap ({cap}) for n_chips={n_chips}; "
                "this indicates an internal error"
            )
        if strategy == "lowest-index-first":
            v = min(fireable)
        elif strategy == "highest-layer-first":
            v = min(fireable, key=lambda u: (-u.bit_length(), u))
        else:
            v = rng.choice(sorted(fireable))

        pv = v >> 1 if v > 1 else v  # self-loop: a root fire returns one chip
        touched = (v, pv, 2 * v, 2 * v + 1)
        cells[v] -= 3
        for u in (pv, 2 * v, 2 * v + 1):
            cells[u] = cells.get(u, 0) + 1
        fired[v] = fired.get(v, 0) + 1
        for u in touched:
            if cells.get(u, 0) >= 3:
                fireable.add(u)
            else:
                fireable.discard(u)
        steps += 1
        if validate:
            assert sum(cells.values()) == n_chips, "chip conservation violated"

    return UnlabeledState(
        n_chips=n_chips,
        cells={v: k for v, k in sorted(cells.items()) if k},
        fired=dict(sorted(fired.items())),
    )


def sequence(name: str, count: int) -> list[int]:
    """First `count` terms (m = 1..count) of one of the even-argument series.

    f0:     root fires for 2m chips
    F:      total fires for 2m chips
    diff-f0: f0(2m+2) - f0(2m)
    diff-F:  F(2m+2) - F(2m)

    Odd arguments add nothing: neither count depends on the lowest binary
    digit of N + 1, so f0(2m-1) = f0(2m) and F(2m-1) = F(2m).
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if name == "f0":
        return [root_fires_closed(2 * m) for m in range(1, count + 1)]
    if name == "F":
        return [total_fires(2 * m) for m in range(1, count + 1)]
    if name == "diff-f0":
        return [diff_root_fires(m) for m in range(1, count + 1)]
    if name == "diff-F":
        return [diff_total_fires(m) for m in range(1, count + 1)]
    raise ValueError(f"unknown sequence {name!r}; expected one of {SEQUENCE_NAMES}")
