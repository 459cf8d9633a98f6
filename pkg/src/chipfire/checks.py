"""Structural property checkers for stable labeled configurations.

Every checker takes a stable configuration of N = 2^ell - 1 chips whose
shadow is one chip on each vertex of the first ell layers, and returns a
CheckReport listing violations (with the witnessing vertices) instead of
raising.  Handing a checker anything outside that domain is a usage
error, not a failed check.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import tree
from .labeled import LabeledConfig

__all__ = [
    "Violation",
    "CheckReport",
    "check_anchors",
    "check_subtree_extremes",
    "check_zigzag_alternation",
    "check_penultimate",
    "check_ballot",
    "check_forbidden_order",
    "relative_order_key",
    "CHECKERS",
    "min_layers_for",
    "full_layers",
]

PENULTIMATE_MODES = ("strict", "lenient", "literal")


@dataclass(frozen=True)
class Violation:
    vertex: int
    detail: str


@dataclass
class CheckReport:
    property: str
    passed: bool = True
    violations: list[Violation] = field(default_factory=list)

    def add(self, vertex: int, detail: str) -> None:
        self.violations.append(Violation(vertex, detail))
        self.passed = False


def full_layers(config: LabeledConfig) -> int:
    """Validate the one-chip-per-vertex layout and return its layer count."""
    n = config.n_chips
    ell = n.bit_length()
    if n != 2**ell - 1:
        raise ValueError(f"checkers need n_chips of the form 2^ell - 1, got {n}")
    if not config.is_stable():
        raise ValueError("checkers only accept stable configurations")
    expected = set(range(1, 2**ell))
    if set(config.cells) != expected or any(len(ls) != 1 for ls in config.cells.values()):
        raise ValueError("configuration is not one chip on each vertex of the first layers")
    return ell


def min_layers_for(property_name: str) -> int:
    """Smallest layer count a property is defined for."""
    return {"anchors": 2, "penultimate": 2, "forbidden": 3}.get(property_name, 1)


def _positions(config: LabeledConfig) -> dict[int, int]:
    return {labels[0]: v for v, labels in config.cells.items()}


def check_anchors(config: LabeledConfig) -> CheckReport:
    """The two smallest and two largest chips sit in forced positions.

    Chip 1 ends at the leftmost bottom vertex and chip N at the rightmost;
    for ell >= 3, chip 2 sits at the parent of chip 1's vertex and chip
    N - 1 at the parent of chip N's vertex.
    """
    ell = full_layers(config)
    if ell < 2:
        raise ValueError("anchor check needs at least 2 layers")
    n = config.n_chips
    pos = _positions(config)
    report = CheckReport("anchors")
    targets = [(1, 2 ** (ell - 1)), (n, 2**ell - 1)]
    if ell >= 3:
        targets += [(2, 2 ** (ell - 2)), (n - 1, 2 ** (ell - 1) - 1)]
    for chip, want in targets:
        got = pos[chip]
        if got != want:
            report.add(want, f"chip {chip} expected at vertex {want}, found at vertex {got}")
    return report


def _subtree_extremes(config: LabeledConfig, ell: int) -> tuple[dict[int, int], dict[int, int]]:
    """Per-vertex min and max label over the subtree within the first ell layers."""
    mins: dict[int, int] = {}
    maxs: dict[int, int] = {}
    for v in range(2**ell - 1, 0, -1):
        lab = config.label_at(v)
        lo = hi = lab
        if tree.layer(v) < ell:
            lo = min(lo, mins[2 * v], mins[2 * v + 1])
            hi = max(hi, maxs[2 * v], maxs[2 * v + 1])
        mins[v], maxs[v] = lo, hi
    return mins, maxs


def check_subtree_extremes(config: LabeledConfig) -> CheckReport:
    """Each subtree keeps its smallest chip bottom-straight-left and its
    largest bottom-straight-right."""
    ell = full_layers(config)
    mins, maxs = _subtree_extremes(config, ell)
    report = CheckReport("extremes")
    for v in range(1, 2**ell):
        bl = tree.bottom_straight_left(v, ell)
        br = tree.bottom_straight_right(v, ell)
        if config.label_at(bl) != mins[v]:
            report.add(
                v,
                f"subtree minimum {mins[v]} is not at vertex {bl} "
                f"(found chip {config.label_at(bl)})",
            )
        if config.label_at(br) != maxs[v]:
            report.add(
                v,
                f"subtree maximum {maxs[v]} is not at vertex {br} "
                f"(found chip {config.label_at(br)})",
            )
    return report


def _maximal_zigzag_starts(ell: int) -> list[tuple[int, str | None]]:
    """Start vertices of zigzags no longer zigzag can pass through.

    A non-root vertex v continues its parent's zigzag exactly when v and
    parent(v) have opposite parity (or the parent is the root, whose two
    zigzags absorb both children), so maximal starts are the root plus
    same-parity children of non-root vertices.
    """
    starts: list[tuple[int, str | None]] = [(1, "left"), (1, "right")]
    for v in range(4, 2**ell):
        if (v & 1) == ((v >> 1) & 1):
            starts.append((v, None))
    return starts


def check_zigzag_alternation(config: LabeledConfig) -> CheckReport:
    """Chips along every maximal zigzag rise and fall alternately.

    Zigzags starting at a left child (or at the root moving right) open
    ascending: c1 < c2 > c3 < ...; starts at a right child (or the root
    moving left) open descending.
    """
    ell = full_layers(config)
    report = CheckReport("zigzag")
    for v, first_move in _maximal_zigzag_starts(ell):
        path = tree.zigzag_from(v, ell, first_move).vertices
        ascending = path[0] % 2 == 0 or first_move == "right"
        for a, b in zip(path, path[1:]):
            ca, cb = config.label_at(a), config.label_at(b)
            ok = ca < cb if ascending else ca > cb
            if not ok:
                rel = "<" if ascending else ">"
                report.add(a, f"expected chip {ca} at {a} {rel} chip {cb} at {b}")
            ascending = not ascending
    return report


def _straight_ancestors(v: int, left: bool) -> list[int]:
    """Proper ancestors of v reached by undoing only left (or only right) steps."""
    out = []
    u = v
    while u > 1 and (u % 2 == 0) == left:
        u >>= 1
        out.append(u)
    return out


def check_penultimate(config: LabeledConfig, mode: str = "strict") -> CheckReport:
    """Chips one layer above the bottom are extremes of their straight
    ancestors' subtrees, once the bottom layer is excluded.

    For v on layer ell - 1 and any vertex u having v as a straight-left
    descendant, the chip at v is the smallest chip in u's subtree above
    the bottom layer (symmetrically largest on the straight-right side).
    Modes: "strict" also evaluates the coinciding u = v case (trivially
    true), "lenient" restricts to proper ancestors, and "literal" tests
    the chip at u instead of the chip at v, which is the other possible
    reading of the property; it fails on genuine stable configurations
    with 3 or more layers and is kept for comparison only.
    """
    if mode not in PENULTIMATE_MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {PENULTIMATE_MODES}")
    ell = full_layers(config)
    if ell < 2:
        raise ValueError("penultimate check needs at least 2 layers")
    mins, maxs = _subtree_extremes(config, ell - 1)  # bottom layer excluded
    report = CheckReport("penultimate")
    for v in range(2 ** (ell - 2), 2 ** (ell - 1)):
        for left in (True, False):
            ancestors = _straight_ancestors(v, left)
            if mode != "lenient":
                ancestors = [v] + ancestors
            word = "smallest" if left else "largest"
            for u in ancestors:
                extreme = mins[u] if left else maxs[u]
                probe = u if mode == "literal" else v
                got = config.label_at(probe)
                if got != extreme:
                    report.add(
                        probe,
                        f"chip {got} at vertex {probe} is not the {word} "
                        f"above the bottom layer in the subtree at {u} (that is {extreme})",
                    )
    return report


def _subtree_sorted_labels(config: LabeledConfig, ell: int) -> dict[int, list[int]]:
    out: dict[int, list[int]] = {}
    for v in range(2**ell - 1, 0, -1):
        labels = [config.label_at(v)]
        if tree.layer(v) < ell:
            labels += out[2 * v] + out[2 * v + 1]
            labels.sort()
        out[v] = labels
    return out


def check_ballot(config: LabeledConfig) -> CheckReport:
    """Left subtrees are pointwise dominated by their right siblings.

    At every vertex above the bottom layer, the i-th smallest chip of the
    left child's subtree must be smaller than the i-th smallest chip of
    the right child's subtree, for all i.
    """
    ell = full_layers(config)
    sub = _subtree_sorted_labels(config, ell)
    report = CheckReport("ballot")
    for v in range(1, 2 ** (ell - 1)):
        left, right = sub[2 * v], sub[2 * v + 1]
        for i, (a, b) in enumerate(zip(left, right)):
            if a >= b:
                report.add(
                    v,
                    f"rank {i + 1} chip of left subtree at {2 * v} is {a}, "
                    f"not below {b} on the right at {2 * v + 1}",
                )
                break
    return report


def check_forbidden_order(config: LabeledConfig) -> CheckReport:
    """No bottom-anchored 3-layer subtree shows the impossible order.

    The excluded pattern has the second-smallest chip away from the parent
    of the smallest chip while the second-largest chip is simultaneously
    away from the parent of the largest chip.
    """
    ell = full_layers(config)
    if ell < 3:
        raise ValueError("forbidden-order check needs at least 3 layers")
    report = CheckReport("forbidden")
    for s in range(2 ** (ell - 3), 2 ** (ell - 2)):
        vertices = [s, 2 * s, 2 * s + 1] + [4 * s + i for i in range(4)]
        ranked = sorted(vertices, key=config.label_at)
        lo, lo2, hi2, hi = ranked[0], ranked[1], ranked[-2], ranked[-1]
        lo_ok = lo != s and lo >> 1 == lo2
        hi_ok = hi != s and hi >> 1 == hi2
        if not lo_ok and not hi_ok:
            report.add(
                s,
                f"subtree at {s} shows the excluded order: chip {config.label_at(lo2)} "
                f"is not at the parent of chip {config.label_at(lo)} and chip "
                f"{config.label_at(hi2)} is not at the parent of chip {config.label_at(hi)}",
            )
    return report


def relative_order_key(config: LabeledConfig, subtree_root: int, depth: int) -> str:
    """Canonical signature of the relative chip order on a subtree.

    Labels on the `depth`-layer subtree under `subtree_root` are replaced
    by their ranks 1..2^depth - 1; the signature lists ranks level by
    level, layers separated by ';'.  Two label-disjoint subtrees with the
    same relative order share a key.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    levels: list[list[int]] = []
    for d in range(depth):
        row = [subtree_root * 2**d + i for i in range(2**d)]
        for v in row:
            if len(config.cells.get(v, [])) != 1:
                raise ValueError(f"subtree at {subtree_root} is not fully occupied at vertex {v}")
        levels.append([config.label_at(v) for v in row])
    rank = {lab: i + 1 for i, lab in enumerate(sorted(x for row in levels for x in row))}
    return ";".join(",".join(str(rank[x]) for x in row) for row in levels)


CHECKERS = {
    "anchors": check_anchors,
    "extremes": check_subtree_extremes,
    "zigzag": check_zigzag_alternation,
    "penultimate": check_penultimate,
    "ballot": check_ballot,
    "forbidden": check_forbidden_order,
}
