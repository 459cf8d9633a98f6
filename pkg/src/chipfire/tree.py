"""Index arithmetic for the infinite binary tree.

Vertices are heap-indexed positive integers: the root is 1, vertex v has
left child 2v, right child 2v+1, and (for v > 1) parent v // 2.  Layers
are 1-based; the root sits on layer 1.  Nothing is ever materialized:
every operation here is pure arithmetic on ints.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "layer",
    "parent",
    "left_child",
    "right_child",
    "bottom_straight_left",
    "bottom_straight_right",
    "ZigzagPath",
    "zigzag_from",
    "zigzag_partition",
]


def _check_vertex(v: int) -> None:
    if not isinstance(v, int) or v < 1:
        raise ValueError(f"vertex index must be a positive integer, got {v!r}")


def layer(v: int) -> int:
    """1-based layer of vertex v; equals floor(log2(v)) + 1."""
    _check_vertex(v)
    return v.bit_length()


def parent(v: int) -> int:
    """Parent of v. The root (v=1) has no parent."""
    _check_vertex(v)
    if v == 1:
        raise ValueError("the root has no parent")
    return v >> 1


def left_child(v: int) -> int:
    _check_vertex(v)
    return 2 * v


def right_child(v: int) -> int:
    _check_vertex(v)
    return 2 * v + 1


def bottom_straight_left(v: int, bottom_layer: int) -> int:
    """Descend from v taking only left children until `bottom_layer`."""
    k = bottom_layer - layer(v)
    if k < 0:
        raise ValueError(f"vertex {v} is already below layer {bottom_layer}")
    return v << k


def bottom_straight_right(v: int, bottom_layer: int) -> int:
    """Descend from v taking only right children until `bottom_layer`."""
    k = bottom_layer - layer(v)
    if k < 0:
        raise ValueError(f"vertex {v} is already below layer {bottom_layer}")
    # appending k ones in binary
    return ((v + 1) << k) - 1


@dataclass(frozen=True)
class ZigzagPath:
    """A downward path whose left/right moves strictly alternate.

    start_side records how the path is anchored: paths starting at a left
    child move right first, paths starting at a right child move left
    first, and the two paths starting at the root are distinguished by
    their first move.
    """

    vertices: tuple[int, ...]
    start_side: str  # root-left | root-right | from-left-child | from-right-child


def _zigzag_next(u: int) -> int:
    # left children (even) continue right, right children (odd) continue left
    return 2 * u + 1 if u % 2 == 0 else 2 * u


def zigzag_from(v: int, end_layer: int, first_move: str | None = None) -> ZigzagPath:
    """Alternating path from v down to `end_layer` inclusive.

    `first_move` ("left" or "right") must be given exactly when v is the
    root; for any other start the first move is forced by which child v is.
    """
    _check_vertex(v)
    if end_layer < layer(v):
        raise ValueError(f"end_layer {end_layer} is above vertex {v} (layer {layer(v)})")
    if v == 1:
        if first_move not in ("left", "right"):
            raise ValueError("a zigzag from the root needs first_move 'left' or 'right'")
        side = "root-left" if first_move == "left" else "root-right"
        second = 2 if first_move == "left" else 3
    else:
        if first_move is not None:
            raise ValueError("first_move is only accepted for zigzags from the root")
        side = "from-left-child" if v % 2 == 0 else "from-right-child"
        second = _zigzag_next(v)

    path = [v]
    nxt = second
    while len(path) < end_layer - layer(v) + 1:
        path.append(nxt)
        nxt = _zigzag_next(nxt)
    return ZigzagPath(vertices=tuple(path), start_side=side)


def zigzag_partition(ell: int, first_move: str) -> list[tuple[int, int]]:
    """Split layers 1..ell into the root zigzag and hanging subtrees.

    Removing the length-ell root zigzag leaves, at each zigzag vertex above
    the bottom, the child not taken by the path; that child roots a full
    subtree of ell - i layers.  Returns (subtree_root, layers) pairs, one
    per zigzag step, with layer counts ell-1 down to 1.
    """
    if ell < 2:
        raise ValueError("zigzag_partition needs ell >= 2")
    zz = zigzag_from(1, ell, first_move).vertices
    out: list[tuple[int, int]] = []
    for i in range(ell - 1):
        u, taken = zz[i], zz[i + 1]
        sibling = taken ^ 1  # the other child of u
        assert sibling >> 1 == u
        out.append((sibling, ell - (i + 1)))
    return out
