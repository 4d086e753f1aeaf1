import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ancestry_labels import (
    EmptyInput,
    MalformedTree,
    children_by_subtree_size,
    from_edge_list,
    from_parent_array,
    is_ancestor_oracle,
)
from ancestry_labels.tree import format_tree, parse_tree, read_tree, to_edge_list, write_tree
from conftest import trees


def test_empty_parent_array_is_single_node():
    t = from_parent_array([])
    assert t.n == 1
    assert t.subtree_size.tolist() == [1]
    assert t.children(0) == ()


def test_chain_and_star_sizes():
    assert from_parent_array([0, 1]).subtree_size.tolist() == [3, 2, 1]
    star = from_parent_array([0, 0])
    assert star.subtree_size.tolist() == [3, 1, 1]
    assert star.children(0) == (1, 2)


@pytest.mark.parametrize("bad", [[1], [-1], [0, 2], [0, 1, 3]])
def test_parent_not_below_child_is_rejected(bad):
    with pytest.raises(MalformedTree):
        from_parent_array(bad)


def test_zero_nodes_is_empty_input():
    with pytest.raises(EmptyInput):
        from_parent_array([], n=0)
    with pytest.raises(MalformedTree):
        from_parent_array([0], n=3)


def test_non_integer_parents_rejected():
    with pytest.raises(MalformedTree):
        from_parent_array([0.5])


def test_tree_is_immutable():
    t = from_parent_array([0, 0])
    with pytest.raises(ValueError):
        t.subtree_size[0] = 7
    with pytest.raises(ValueError):
        t.parent_array[1] = 0


def test_edge_list_relabels_to_chain():
    t, mapping = from_edge_list(3, 2, [(2, 0), (0, 1)])
    assert t.parents.tolist() == [0, 1]
    assert mapping == [1, 2, 0]


def test_edge_list_single_node():
    t, mapping = from_edge_list(1, 0, [])
    assert t.n == 1 and mapping == [0]


@pytest.mark.parametrize("n,edges", [
    (3, [(0, 1), (1, 2), (2, 0)]),           # cycle, too many edges
    (4, [(0, 1), (1, 2), (2, 0)]),           # cycle plus isolated node
    (3, [(0, 1), (0, 1)]),                   # duplicate
    (3, [(0, 0), (1, 2)]),                   # self loop
    (3, [(0, 1), (1, 5)]),                   # endpoint out of range
    (3, [(0, 1)]),                           # too few edges
])
def test_edge_list_errors(n, edges):
    with pytest.raises(MalformedTree):
        from_edge_list(n, 0, edges)


def test_edge_list_empty():
    with pytest.raises(EmptyInput):
        from_edge_list(0, 0, [])


def test_oracle_examples(path3):
    assert is_ancestor_oracle(path3, 0, 2)
    assert not is_ancestor_oracle(path3, 2, 0)
    assert is_ancestor_oracle(path3, 1, 1)
    with pytest.raises(IndexError):
        is_ancestor_oracle(path3, 0, 3)


def test_children_by_subtree_size():
    assert children_by_subtree_size(from_parent_array([0, 0, 0]), 0) == [1, 2, 3]
    # root children: 1 (size 5), 2 (size 1), 3 (size 3)
    t = from_parent_array([0, 0, 0, 1, 1, 1, 1, 3, 3])
    assert [int(t.subtree_size[v]) for v in (1, 2, 3)] == [5, 1, 3]
    assert children_by_subtree_size(t, 0) == [2, 3, 1]
    assert children_by_subtree_size(t, 2) == []


@given(trees(max_n=30))
def test_subtree_size_counts_descendants(t):
    for u in range(t.n):
        count = sum(is_ancestor_oracle(t, u, v) for v in range(t.n))
        assert t.subtree_size[u] == count


@given(trees(max_n=25))
def test_oracle_is_partial_order(t):
    anc = [[is_ancestor_oracle(t, u, v) for v in range(t.n)] for u in range(t.n)]
    for u in range(t.n):
        assert anc[u][u]
        assert anc[0][u]
        for v in range(t.n):
            if u != v:
                assert not (anc[u][v] and anc[v][u])
            for w in range(t.n):
                if anc[u][v] and anc[v][w]:
                    assert anc[u][w]


@given(trees(max_n=40))
def test_ancestor_matrix_matches_scalar_oracle(t):
    m = t.ancestor_matrix()
    for u in range(t.n):
        for v in range(t.n):
            assert m[u, v] == is_ancestor_oracle(t, u, v)


@given(trees(max_n=40), st.integers(0, 2**32))
def test_edge_list_round_trip_under_relabel(t, seed):
    rng = random.Random(seed)
    perm = list(range(t.n))
    rng.shuffle(perm)
    edges = [(perm[p], perm[c]) for p, c in to_edge_list(t)]
    rng.shuffle(edges)
    edges = [(y, x) if rng.random() < 0.5 else (x, y) for x, y in edges]
    t2, mapping = from_edge_list(t.n, perm[0], edges)
    assert t2.parents.tolist() == [] or all(p < i for i, p in enumerate(t2.parents.tolist(), 1))
    # node u of t is node mapping[perm[u]] of t2
    image = [mapping[perm[u]] for u in range(t.n)]
    assert image[0] == 0
    for u in range(1, t.n):
        assert t2.parent_of(image[u]) == image[t.parent_of(u)]
    assert sorted(t2.subtree_size.tolist()) == sorted(t.subtree_size.tolist())


def test_text_format_round_trip(tmp_path):
    t = from_parent_array([0, 0, 1, 1, 4])
    path = tmp_path / "t.txt"
    write_tree(t, path, comment="hello\nworld")
    text = path.read_text()
    assert text.startswith("# hello\n# world\n6\n0 0 1 1 4\n")
    assert read_tree(path) == t
    assert parse_tree(format_tree(from_parent_array([]))) == from_parent_array([])
    assert format_tree(from_parent_array([])) == "1\n"


@pytest.mark.parametrize("text,exc", [
    ("", EmptyInput),
    ("# only a comment\n", EmptyInput),
    ("0\n", EmptyInput),
    ("x\n", MalformedTree),
    ("3\n", MalformedTree),
    ("3\n0 1\n0 1\n", MalformedTree),
    ("3\n0 2\n", MalformedTree),
    ("3\n0 a\n", MalformedTree),
    ("3\n0\n", MalformedTree),
    ("1\n0\n", MalformedTree),
])
def test_text_format_errors(text, exc):
    with pytest.raises(exc):
        parse_tree(text)


def test_comments_and_blank_lines_ignored():
    t = parse_tree("# c\n\n4\n  # inner\n0 0 2\n")
    assert t.parents.tolist() == [0, 0, 2]


def test_child_csr_is_ascending():
    t = from_parent_array([0, 0, 1, 0, 1])
    indptr, kids = t.child_csr
    assert indptr.tolist() == [0, 3, 5, 5, 5, 5, 5]
    assert kids.tolist() == [1, 2, 4, 3, 5]
    assert t.children(0) == (1, 2, 4)
    assert np.array_equal(t.parents, [0, 0, 1, 0, 1])
