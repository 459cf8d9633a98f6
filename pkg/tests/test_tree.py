import pytest
from hypothesis import given
from hypothesis import strategies as st

from chipfire import tree

vertices = st.integers(min_value=1, max_value=2**62)


@pytest.mark.parametrize("v,expected", [(1, 1), (5, 3), (21, 5), (2, 2), (1023, 10)])
def test_layer(v, expected):
    assert tree.layer(v) == expected


def test_children_and_parent():
    assert tree.left_child(3) == 6
    assert tree.right_child(1) == 3
    assert tree.parent(7) == 3
    assert tree.parent(6) == 3


def test_root_has_no_parent():
    with pytest.raises(ValueError):
        tree.parent(1)


@pytest.mark.parametrize("bad", [0, -3])
def test_vertices_are_positive(bad):
    with pytest.raises(ValueError):
        tree.layer(bad)


@given(vertices)
def test_parent_inverts_children(v):
    assert tree.parent(tree.left_child(v)) == v
    assert tree.parent(tree.right_child(v)) == v


@given(vertices)
def test_children_are_one_layer_down(v):
    assert tree.layer(tree.left_child(v)) == tree.layer(v) + 1
    assert tree.layer(tree.right_child(v)) == tree.layer(v) + 1


def test_parent_child_roundtrip_exhaustive():
    for v in range(1, 2**16 + 1):
        assert tree.parent(tree.left_child(v)) == v
        assert tree.parent(tree.right_child(v)) == v


def test_bottom_straight_descendants():
    assert tree.bottom_straight_left(1, 4) == 8
    assert tree.bottom_straight_left(3, 4) == 12
    assert tree.bottom_straight_right(1, 4) == 15
    assert tree.bottom_straight_left(5, 3) == 5
    assert tree.bottom_straight_right(2, 4) == 11


def test_bottom_straight_below_layer_is_error():
    with pytest.raises(ValueError):
        tree.bottom_straight_left(8, 2)
    with pytest.raises(ValueError):
        tree.bottom_straight_right(8, 2)


class TestZigzag:
    def test_from_root_left_first(self):
        path = tree.zigzag_from(1, 5, "left")
        assert path.vertices == (1, 2, 5, 10, 21)
        assert path.start_side == "root-left"

    def test_from_root_right_first(self):
        assert tree.zigzag_from(1, 5, "right").vertices == (1, 3, 6, 13, 26)

    def test_from_right_child(self):
        path = tree.zigzag_from(3, 5)
        assert path.vertices == (3, 6, 13, 26)
        assert path.start_side == "from-right-child"

    def test_from_left_child(self):
        path = tree.zigzag_from(4, 5)
        assert path.vertices == (4, 9, 18)
        assert path.start_side == "from-left-child"

    def test_length_matches_layer_span(self):
        for v, end in [(1, 7), (2, 6), (7, 9), (12, 4)]:
            first = "left" if v == 1 else None
            path = tree.zigzag_from(v, end, first).vertices
            assert len(path) == end - tree.layer(v) + 1
            assert tree.layer(path[-1]) == end

    def test_first_move_only_for_root(self):
        with pytest.raises(ValueError):
            tree.zigzag_from(4, 6, "left")
        with pytest.raises(ValueError):
            tree.zigzag_from(1, 6)

    def test_end_layer_above_vertex_is_error(self):
        with pytest.raises(ValueError):
            tree.zigzag_from(8, 3)

    def test_root_left_path_alternates_binary_digits(self):
        # indices on this path read 1, 10, 101, 1010, ... in binary
        path = tree.zigzag_from(1, 10, "left").vertices
        for v in path:
            bits = bin(v)[2:]
            assert all(a != b for a, b in zip(bits, bits[1:]))

    @given(vertices.filter(lambda v: v > 1), st.integers(min_value=0, max_value=40))
    def test_parity_strictly_alternates(self, v, extra):
        path = tree.zigzag_from(v, tree.layer(v) + extra).vertices
        for a, b in zip(path, path[1:]):
            assert b in (2 * a, 2 * a + 1)
            assert a % 2 != b % 2


class TestZigzagPartition:
    def test_depths_for_four_layers(self):
        parts = tree.zigzag_partition(4, "left")
        assert sorted(d for _, d in parts) == [1, 2, 3]

    def test_two_layers(self):
        assert [d for _, d in tree.zigzag_partition(2, "left")] == [1]

    def test_needs_two_layers(self):
        with pytest.raises(ValueError):
            tree.zigzag_partition(1, "left")

    @pytest.mark.parametrize("ell", range(2, 11))
    @pytest.mark.parametrize("first_move", ["left", "right"])
    def test_partition_covers_tree_exactly(self, ell, first_move):
        covered = list(tree.zigzag_from(1, ell, first_move).vertices)
        for root, depth in tree.zigzag_partition(ell, first_move):
            assert tree.layer(root) + depth - 1 == ell
            for d in range(depth):
                start = root * 2**d
                covered.extend(range(start, start + 2**d))
        assert sorted(covered) == list(range(1, 2**ell))
