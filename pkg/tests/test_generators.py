import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ancestry_labels import BadSpec, GenSpec, enumerate_all, generate
from ancestry_labels.generators import KINDS, bounded, prufer_decode, splitmix64

M64 = (1 << 64) - 1


def splitmix_ref(seed, count):
    # textbook scalar SplitMix64
    state = seed & M64
    out = []
    for _ in range(count):
        state = (state + 0x9E3779B97F4A7C15) & M64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & M64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & M64
        out.append(z ^ (z >> 31))
    return out


def test_splitmix_known_first_output():
    assert int(splitmix64(0, 1)[0]) == 0xE220A8397B1DCDAF


@given(st.integers(0, 2 ** 64 - 1), st.integers(1, 50))
def test_splitmix_matches_scalar_reference(seed, count):
    assert [int(x) for x in splitmix64(seed, count)] == splitmix_ref(seed, count)


@given(st.lists(st.tuples(st.integers(0, M64), st.integers(1, 2 ** 32 - 1)), min_size=1, max_size=40))
def test_bounded_is_exact_high_product(rows):
    words = np.array([w for w, _ in rows], dtype=np.uint64)
    got = bounded(words, [b for _, b in rows]).tolist()
    assert got == [(w * b) >> 64 for w, b in rows]


def test_examples():
    assert generate(GenSpec("path", 3)).parents.tolist() == [0, 1]
    assert generate(GenSpec("star", 4)).parents.tolist() == [0, 0, 0]
    assert generate(GenSpec("kary", 7, arity=2)).parents.tolist() == [0, 0, 1, 1, 2, 2]
    assert generate(GenSpec("caterpillar", 6)).parents.tolist() == [0, 1, 0, 1, 2]
    for kind in KINDS:
        assert generate(GenSpec(kind, 1)).n == 1


def test_attach_golden():
    words = splitmix_ref(42, 4)
    expected = [(w * i) >> 64 for w, i in zip(words, range(1, 5))]
    t = generate(GenSpec("attach", 5, 42))
    assert t.parents.tolist() == expected
    assert generate(GenSpec("attach", 5, 42)) == t


@pytest.mark.parametrize("kind", KINDS)
def test_deterministic_and_valid(kind):
    a = generate(GenSpec(kind, 500, 7, arity=3))
    b = generate(GenSpec(kind, 500, 7, arity=3))
    assert a == b and a.n == 500
    assert all(p < i for i, p in enumerate(a.parents.tolist(), 1))


def test_seeds_differ():
    assert generate(GenSpec("attach", 200, 1)) != generate(GenSpec("attach", 200, 2))
    assert generate(GenSpec("prufer", 200, 1)) != generate(GenSpec("prufer", 200, 2))


@given(st.lists(st.integers(0, 7), min_size=6, max_size=6))
def test_prufer_decode_builds_a_tree(code):
    edges = prufer_decode(code)
    assert len(edges) == 7
    # union-find: no cycles means a spanning tree on 8 nodes
    root = list(range(8))

    def find(x):
        while root[x] != x:
            x = root[x]
        return x

    for x, y in edges:
        rx, ry = find(x), find(y)
        assert rx != ry
        root[rx] = ry
    # node degree is 1 + occurrences in the code
    for v in range(8):
        assert sum(v in e for e in edges) == 1 + code.count(v)


@pytest.mark.parametrize("n", range(1, 10))
def test_enumerate_counts(n):
    trees = list(enumerate_all(n)) if n <= 8 else None
    if trees is not None:
        assert len(trees) == math.factorial(n - 1)
        assert len({tuple(t.parents.tolist()) for t in trees}) == len(trees)
    else:
        assert sum(1 for _ in enumerate_all(n)) == math.factorial(8)


def test_enumerate_n3_and_total():
    assert sorted(t.parents.tolist() for t in enumerate_all(3)) == [[0, 0], [0, 1]]
    assert sum(sum(1 for _ in enumerate_all(n)) for n in range(1, 9)) == 5914


@pytest.mark.parametrize("spec", [
    GenSpec("tree", 5), GenSpec("path", 0), GenSpec("kary", 5, arity=0), GenSpec("path", 2 ** 32),
    GenSpec("path", 2.5),
])
def test_bad_spec(spec):
    with pytest.raises(BadSpec):
        generate(spec)


@pytest.mark.parametrize("n", [0, 10])
def test_enumerate_guard(n):
    with pytest.raises(BadSpec):
        next(enumerate_all(n))
