"""Lattice operations, sub-universes and the product construction."""

from __future__ import annotations

import itertools

import pytest
from hypothesis import given, strategies as st

from qprob.errors import NotBelow, SizeCapExceeded, WidthMismatch
from qprob.lattice import (
    MAX_ATOMS,
    Partition,
    Statement,
    SubUniverse,
    Universe,
    complement,
    enumerate_statements,
    join,
    leq,
    localise,
    meet,
    product_universe,
    relative_complement,
)

FOUR = Universe(("a", "b", "c", "d"))


def stmt(labels: str) -> Statement:
    return FOUR.statement_of_labels(list(labels))


def bits4(n: int) -> Statement:
    return Statement(n, 4)


class TestBooleanOps:
    def test_join_of_disjoint_singletons(self):
        assert join(stmt("a"), stmt("b")) == stmt("ab")

    def test_meet_is_intersection(self):
        assert meet(stmt("ab"), stmt("ac")) == stmt("a")

    def test_complement_within_width(self):
        assert complement(stmt("ab")) == stmt("cd")

    def test_leq(self):
        assert leq(stmt("a"), stmt("ab"))
        assert not leq(stmt("ab"), stmt("a"))

    def test_width_mismatch(self):
        other = Statement(1, 3)
        with pytest.raises(WidthMismatch):
            join(stmt("a"), other)

    def test_level_is_popcount(self):
        assert FOUR.bottom().level == 0
        assert stmt("abc").level == 3
        assert FOUR.top().level == 4


class TestRelativeComplement:
    def test_two_element_ideal(self):
        assert relative_complement(stmt("ab"), stmt("a")) == stmt("b")

    def test_top_reduces_to_ambient(self):
        assert relative_complement(FOUR.top(), stmt("a")) == stmt("bcd")

    def test_hand_expanded_case(self):
        # not(not t or s) with t=abc, s=ab expands to c
        assert relative_complement(stmt("abc"), stmt("ab")) == stmt("c")

    def test_requires_below(self):
        with pytest.raises(NotBelow):
            relative_complement(stmt("ab"), stmt("c"))

    def test_involution_and_boolean_axioms_exhaustive(self):
        # the ideal of any t is a Boolean lattice under the relative complement
        for n in (2, 3, 4):
            u = Universe(tuple("pqrs"[:n]))
            for t_bits in range(1, 1 << n):
                t = Statement(t_bits, n)
                members = [
                    Statement(b, n) for b in range(1 << n) if b & t_bits == b
                ]
                for s in members:
                    r = relative_complement(t, s)
                    assert relative_complement(t, r) == s
                    assert join(s, r) == t
                    assert meet(s, r) == u.bottom()
                for s, w in itertools.product(members, members):
                    # de morgan inside the ideal
                    assert relative_complement(t, join(s, w)) == meet(
                        relative_complement(t, s), relative_complement(t, w)
                    )


class TestLocalise:
    def test_paper_labelling_case(self):
        # (B=0) localised to (A=0) is the joint outcome (A=0, B=0)
        u = product_universe([2, 2], ["A", "B"])
        assert localise(u.event("B=0"), u.event("A=0")) == u.event("A=0,B=0")

    def test_bottom_and_top(self):
        assert localise(FOUR.bottom(), stmt("ab")) == FOUR.bottom()
        assert localise(FOUR.top(), stmt("ab")) == stmt("ab")

    def test_partition_localises_to_partition(self):
        cells = Partition.of(FOUR, (stmt("ab"), stmt("c"), stmt("d")))
        local = cells.localise(stmt("ac"))
        assert local.top == stmt("ac")
        assert local.cells == (stmt("a"), stmt("c"))


class TestUniverse:
    def test_rejects_duplicate_labels(self):
        with pytest.raises(ValueError):
            Universe(("a", "a"))

    def test_rejects_too_many_atoms(self):
        with pytest.raises(SizeCapExceeded):
            Universe(tuple(f"x{i}" for i in range(MAX_ATOMS + 1)))

    def test_labels_roundtrip(self):
        s = stmt("bd")
        assert FOUR.labels_of(s) == ["b", "d"]
        assert FOUR.statement_of_labels(["b", "d"]) == s
        assert FOUR.labels_of(FOUR.bottom()) == []


class TestSubUniverse:
    def test_ideal_enumeration(self):
        sub = SubUniverse.ideal(FOUR, stmt("ab"))
        assert list(sub.members()) == [
            FOUR.bottom(),
            stmt("a"),
            stmt("b"),
            stmt("ab"),
        ]

    def test_coarse_grain_enumeration(self):
        sub = SubUniverse.coarse_grain(FOUR, [(0, 1), (2, 3)])
        assert list(sub.members()) == [
            FOUR.bottom(),
            stmt("ab"),
            stmt("cd"),
            FOUR.top(),
        ]

    def test_coarse_grain_closure_exhaustive(self):
        # closed under ambient meet, join and complement; contains bottom, top
        for blocks in ([(0,), (1, 2), (3, 4)], [(0, 1), (2, 3, 4)]):
            u = Universe(tuple("vwxyz"))
            sub = SubUniverse.coarse_grain(u, blocks)
            members = set(sub.members())
            assert u.bottom() in members and u.top() in members
            for s, t in itertools.product(members, members):
                assert join(s, t) in members
                assert meet(s, t) in members
            for s in members:
                assert complement(s) in members

    def test_composite_restriction(self):
        sub = SubUniverse.coarse_grain(FOUR, [(0, 1), (2,), (3,)])
        inner = sub.restrict(stmt("abc"))
        assert list(inner.members()) == [
            FOUR.bottom(),
            stmt("ab"),
            stmt("c"),
            stmt("abc"),
        ]

    def test_membership(self):
        sub = SubUniverse.coarse_grain(FOUR, [(0, 1), (2, 3)])
        assert sub.contains(stmt("ab"))
        assert not sub.contains(stmt("a"))

    def test_local_complement(self):
        sub = SubUniverse.ideal(FOUR, stmt("abc"))
        assert sub.local_complement(stmt("ab")) == stmt("c")


class TestEnumerate:
    def test_full_universe_order(self):
        three = Universe(("x", "y", "z"))
        out = list(enumerate_statements(three))
        assert len(out) == 8
        assert out[0] == three.bottom()
        assert out[-1] == three.top()
        assert [s.bits for s in out] == sorted(s.bits for s in out)

    def test_enumeration_cap(self):
        big = Universe(tuple(f"x{i}" for i in range(21)))
        with pytest.raises(SizeCapExceeded):
            list(enumerate_statements(big))


class TestPartition:
    def test_rejects_overlap(self):
        with pytest.raises(ValueError):
            Partition.of(FOUR, (stmt("ab"), stmt("bc")))

    def test_rejects_gap(self):
        with pytest.raises(ValueError):
            Partition.of(FOUR, (stmt("ab"), stmt("c")))


class TestProductUniverse:
    def test_two_binary_variables(self):
        u = product_universe([2, 2], ["A", "B"])
        assert u.atom_labels == ("A=0,B=0", "A=0,B=1", "A=1,B=0", "A=1,B=1")
        assert u.event("A=0") == Statement(0b0011, 4)
        assert u.event("B=0") == Statement(0b0101, 4)

    def test_single_variable(self):
        u = product_universe([2], ["X"])
        assert u.atom_count == 2

    def test_equality_event(self):
        u = product_universe([2, 2], ["A", "B"])
        assert u.event("A=B") == Statement(0b1001, 4)

    def test_conjunction_event(self):
        u = product_universe([2, 3], ["A", "B"])
        assert u.event("A=1,B=2") == u.statement_of_labels(["A=1,B=2"])

    def test_size_cap(self):
        with pytest.raises(SizeCapExceeded):
            product_universe([5, 5], ["A", "B"])

    def test_rejects_unary_variable(self):
        with pytest.raises(ValueError):
            product_universe([1, 2], ["A", "B"])

    def test_bad_event(self):
        u = product_universe([2, 2], ["A", "B"])
        with pytest.raises(ValueError):
            u.event("C=0")
        with pytest.raises(ValueError):
            u.event("A=7")


statements4 = st.integers(min_value=0, max_value=15).map(bits4)


class TestAlgebraicLaws:
    @given(statements4, statements4, statements4)
    def test_distributivity(self, s, t, w):
        assert meet(s, join(t, w)) == join(meet(s, t), meet(s, w))

    @given(statements4, statements4)
    def test_de_morgan(self, s, t):
        assert complement(join(s, t)) == meet(complement(s), complement(t))

    @given(statements4)
    def test_double_complement(self, s):
        assert complement(complement(s)) == s

    @given(statements4, statements4)
    def test_leq_via_meet(self, s, t):
        assert leq(s, t) == (meet(s, t) == s)

    @given(statements4, statements4)
    def test_localise_is_idempotent(self, s, t):
        once = localise(s, t)
        assert localise(once, t) == once
