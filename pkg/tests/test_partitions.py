import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from connmat.errors import DomainError, OrderError, ParseError, SizeLimitError
from connmat.partitions import (
    CoherentOrder,
    Partition,
    bell_number,
    class_size,
    coherent_order,
    conjugate,
    conjugation_classes,
    enumerate_partitions,
    integer_partitions,
    is_trivial,
    leq,
    num_blocks,
    product,
)

from conftest import PAPER_ORDER_3, reversed_order


def P(text):
    return Partition.parse(text)


def brute_partitions(n):
    """Set partitions of 1..n by inserting each element into an existing block or a new one."""
    if n == 0:
        return [[]]
    out = []
    for blocks in brute_partitions(n - 1):
        for k in range(len(blocks)):
            out.append([b | {n} if i == k else b for i, b in enumerate(blocks)])
        out.append(blocks + [frozenset({n})])
    return out


def bell_by_recurrence(n):
    # B(n+1) = sum_k C(n, k) B(k), independent of the triangle used by the library
    from math import comb

    b = [1]
    for m in range(n):
        b.append(sum(comb(m, k) * b[k] for k in range(m + 1)))
    return b[n]


@st.composite
def partitions_of(draw, n):
    labels = draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    return Partition.from_labels(labels)


@st.composite
def partition_tuple(draw, size, max_n=6):
    n = draw(st.integers(1, max_n))
    return tuple(draw(partitions_of(n)) for _ in range(size))


# -- representation -------------------------------------------------------


def test_text_round_trip_and_canonical_form():
    a = P("6|3 5 4|2 1")
    assert str(a) == "1 2|3 4 5|6"
    assert a.rgs == (0, 0, 1, 1, 1, 2)
    assert P(str(a)) == a


@given(st.integers(1, 7).flatmap(lambda n: st.permutations(range(n)).map(lambda perm: (n, perm))), st.data())
def test_any_block_set_canonicalizes_uniquely(n_perm, data):
    n, perm = n_perm
    labels = data.draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    a = Partition.from_labels(labels)
    # shuffle the block list and the elements inside each block
    blocks = [list(b) for b in a.blocks()]
    data.draw(st.randoms()).shuffle(blocks)
    for b in blocks:
        b.reverse()
    b2 = Partition.from_blocks(blocks)
    assert b2 == a
    assert Partition.from_labels([perm[x] for x in labels]) == a


def test_invalid_rgs_and_text_rejected():
    with pytest.raises(DomainError):
        Partition((1, 0))
    with pytest.raises(DomainError):
        Partition((0, 2))
    with pytest.raises(ParseError):
        Partition.parse("1 2|2 3")
    with pytest.raises(ParseError):
        Partition.parse("1 x|3")
    with pytest.raises(ParseError):
        Partition.parse("1|3")


# -- enumeration ----------------------------------------------------------


def test_enumerate_small_cases():
    assert [str(p) for p in enumerate_partitions(1)] == ["1"]
    part3 = enumerate_partitions(3)
    assert len(part3) == 5
    assert {str(p) for p in part3} == set(PAPER_ORDER_3)
    assert len(enumerate_partitions(4)) == 15


def test_enumeration_is_lexicographic_rgs():
    parts = enumerate_partitions(6)
    assert [p.rgs for p in parts] == sorted(p.rgs for p in parts)


@pytest.mark.parametrize("n", range(1, 9))
def test_enumeration_matches_brute_force(n):
    brute = {Partition.from_blocks([sorted(b) for b in blocks]) for blocks in brute_partitions(n)}
    parts = enumerate_partitions(n)
    assert len(parts) == len(set(parts)) == len(brute)
    assert set(parts) == brute


@pytest.mark.parametrize("n", range(0, 15))
def test_bell_number_oracle(n):
    assert bell_number(n) == bell_by_recurrence(n)
    if 1 <= n <= 9:
        assert len(enumerate_partitions(n)) == bell_number(n)


def test_bell_12_is_the_cap():
    assert bell_number(12) == 4213597
    with pytest.raises(SizeLimitError):
        enumerate_partitions(13)
    with pytest.raises(DomainError):
        enumerate_partitions(0)
    assert len(enumerate_partitions(3, max_n=3)) == 5
    with pytest.raises(SizeLimitError):
        enumerate_partitions(4, max_n=3)


# -- monoid ---------------------------------------------------------------


def test_product_examples():
    a, b = P("1 2|3"), P("1|2 3")
    assert product(a, b) == P("1 2 3")
    assert is_trivial(product(a, b))
    assert a * b == product(a, b)
    for x in enumerate_partitions(4):
        assert product(x, Partition.singletons(4)) == x
        assert product(x, x) == x
        assert product(x, Partition.one_block(4)).is_trivial


def test_product_mismatched_n():
    with pytest.raises(DomainError):
        product(P("1 2"), P("1|2|3"))
    with pytest.raises(DomainError):
        leq(P("1 2"), P("1|2|3"))


def join_oracle(a, b):
    """Join via connected components of the graph joining block-mates (networkx-free BFS)."""
    n = a.n
    adj = {i: set() for i in range(n)}
    for p in (a, b):
        for blk in p.blocks():
            for x, y in itertools.combinations(blk, 2):
                adj[x - 1].add(y - 1)
                adj[y - 1].add(x - 1)
    comp = [-1] * n
    for s in range(n):
        if comp[s] < 0:
            stack = [s]
            comp[s] = s
            while stack:
                u = stack.pop()
                for v in adj[u]:
                    if comp[v] < 0:
                        comp[v] = s
                        stack.append(v)
    return Partition.from_labels(comp)


@pytest.mark.parametrize("n", [3, 4])
def test_product_matches_component_oracle(n):
    parts = enumerate_partitions(n)
    for a in parts:
        for b in parts:
            assert product(a, b) == join_oracle(a, b)


@given(partition_tuple(3))
def test_monoid_laws(abc):
    a, b, c = abc
    unit = Partition.singletons(a.n)
    assert product(product(a, b), c) == product(a, product(b, c))
    assert product(a, b) == product(b, a)
    assert product(a, a) == a
    assert product(a, unit) == a == product(unit, a)


@pytest.mark.parametrize("n", range(1, 6))
def test_leq_iff_product_absorbs(n):
    parts = enumerate_partitions(n)
    for a in parts:
        for b in parts:
            assert leq(a, b) == (product(a, b) == b)


def test_leq_examples():
    assert all(leq(Partition.singletons(3), x) for x in enumerate_partitions(3))
    assert leq(P("1 2|3"), P("1 2 3"))
    assert not leq(P("1 2|3"), P("1 3|2"))
    assert not leq(P("1 3|2"), P("1 2|3"))


def test_num_blocks():
    assert num_blocks(P("1 2|3 4 5|6")) == 3
    assert num_blocks(Partition.singletons(5)) == 5
    assert num_blocks(Partition.one_block(5)) == 1


def test_merge_is_product_with_transposition():
    for a in enumerate_partitions(5):
        for i, j in itertools.combinations(range(5), 2):
            labels = list(range(5))
            labels[j] = i
            assert a.merge(i, j) == product(a, Partition.from_labels(labels))


# -- conjugation ----------------------------------------------------------


def test_conjugate_examples():
    assert conjugate((2, 1, 3), P("1 3|2")) == P("2 3|1")
    a = P("1 2|3 4 5|6")
    assert conjugate((1, 2, 3, 4, 5, 6), a) == a
    assert conjugate((3, 1, 2), Partition.singletons(3)) == Partition.singletons(3)


def test_conjugate_rejects_non_bijection():
    with pytest.raises(DomainError):
        conjugate((1, 1, 2), P("1 2|3"))
    with pytest.raises(DomainError):
        conjugate((1, 2), P("1 2|3"))


def test_conjugation_is_monoid_morphism_exhaustive_n4():
    parts = enumerate_partitions(4)
    unit = Partition.singletons(4)
    for sigma in itertools.permutations(range(1, 5)):
        assert conjugate(sigma, unit) == unit
        for a in parts:
            ca = conjugate(sigma, a)
            for b in parts:
                assert conjugate(sigma, product(a, b)) == product(ca, conjugate(sigma, b))


def find_conjugator(a, b):
    for sigma in itertools.permutations(range(1, a.n + 1)):
        if conjugate(sigma, a) == b:
            return sigma
    return None


@pytest.mark.parametrize("n", range(1, 6))
def test_conjugate_iff_equal_signature(n):
    parts = enumerate_partitions(n)
    for a in parts:
        for b in parts:
            sigma = find_conjugator(a, b)
            assert (sigma is not None) == (a.signature == b.signature)


def test_conjugation_classes_n4_sizes():
    classes = conjugation_classes(4)
    assert [len(c) for c in classes] == [1, 6, 3, 4, 1]
    assert [c.signature for c in classes] == [(1, 1, 1, 1), (2, 1, 1), (2, 2), (3, 1), (4,)]
    o3 = {str(p) for p in classes[2].members}
    assert o3 == {"1 4|2 3", "1 3|2 4", "1 2|3 4"}


def test_conjugation_classes_small():
    assert [len(c) for c in conjugation_classes(2)] == [1, 1]
    assert [len(c) for c in conjugation_classes(3)] == [1, 3, 1]


@pytest.mark.parametrize("n", range(1, 9))
def test_class_size_closed_form(n):
    sizes = {c.signature: len(c) for c in conjugation_classes(n)}
    assert sizes == {sig: class_size(sig) for sig in integer_partitions(n)}


def test_class_order_compatible_with_refinement():
    classes = conjugation_classes(5)
    for i, ci in enumerate(classes):
        for cj in classes[:i]:
            # nothing in an earlier class is coarser than something in a later one
            assert not any(leq(b, a) and a != b for a in cj.members for b in ci.members)


# -- coherent orders ------------------------------------------------------


def assert_coherent(order):
    seq = order.sequence
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            assert not (leq(seq[j], seq[i]) and seq[i] != seq[j])
    for s, e in order.class_boundaries:
        assert len({p.signature for p in seq[s:e]}) == 1
    assert len({seq[s].signature for s, _ in order.class_boundaries}) == len(order.class_boundaries)


@pytest.mark.parametrize("n", range(1, 7))
def test_coherent_order_invariants(n):
    order = coherent_order(n)
    assert len(order) == bell_number(n)
    assert_coherent(order)
    assert [o.rgs for o in order.sequence[:1]] == [tuple(range(n))]
    assert order.sequence[-1].is_trivial


def test_coherent_order_n3_matches_example_up_to_class():
    order = coherent_order(3)
    paper = [P(t) for t in PAPER_ORDER_3]
    assert order[0] == paper[0] and order[4] == paper[4]
    assert set(order.sequence[1:4]) == set(paper[1:4])


def test_coherent_order_n4_class_sequence():
    order = coherent_order(4)
    sizes = [e - s for s, e in order.class_boundaries]
    assert sizes in ([1, 6, 3, 4, 1], [1, 6, 4, 3, 1])


def test_coherent_order_single():
    order = coherent_order(1)
    assert len(order) == 1 and order.class_boundaries == ((0, 1),)


def test_user_orders_validated(paper_order_3):
    assert_coherent(paper_order_3)
    assert_coherent(reversed_order(4))
    seq = list(coherent_order(3).sequence)
    with pytest.raises(OrderError):
        CoherentOrder.from_sequence(list(reversed(seq)))
    with pytest.raises(OrderError):
        CoherentOrder.from_sequence(seq[:-1])
    with pytest.raises(OrderError):
        CoherentOrder.from_sequence(seq[:-1] + seq[:1])
    # coherent but class {12|34, 13|24, 14|23} interleaved with the 3+1 class
    seq4 = list(coherent_order(4).sequence)
    mixed = seq4[:7] + [seq4[10]] + seq4[7:10] + seq4[11:]
    with pytest.raises(OrderError):
        CoherentOrder.from_sequence(mixed)


def test_order_file_round_trip():
    order = reversed_order(4)
    text = "# Part_4\n\n" + order.to_text()
    assert CoherentOrder.parse(text).sequence == order.sequence
    with pytest.raises(OrderError):
        CoherentOrder.parse(order.to_text(), n=5)


def test_random_linear_extensions_are_accepted():
    rng = random.Random(7)
    classes = conjugation_classes(5)
    for _ in range(20):
        seq = []
        for m in range(5, 0, -1):
            level = [c for c in classes if c.num_blocks == m]
            rng.shuffle(level)
            for c in level:
                members = list(c.members)
                rng.shuffle(members)
                seq.extend(members)
        assert_coherent(CoherentOrder.from_sequence(seq))
