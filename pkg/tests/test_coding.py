"""
Tests for the coding semigroup and its representations.
"""

import pytest
from factories import Q5, typed_surface

from tcb_foliation.core.coding import (
    CodeWord,
    CodingSemigroup,
    closed_curve_of_word,
    nonzero_words,
    orbit_word,
    parse_symbols,
    represent_homology,
    represent_pi1,
    word_support,
)
from tcb_foliation.core.genus2_glue import (
    TopologyType,
    broken_isometry_map,
    five_partition,
    phi_table,
)
from tcb_foliation.core.intervals import Interval, IntervalUnion
from tcb_foliation.errors import CapExceeded, ClosedUp, InstanceFormatError, ZeroWord


@pytest.fixture
def parts(glued):
    return broken_isometry_map(glued), five_partition(glued)


@pytest.fixture
def semigroup(parts):
    return CodingSemigroup(*parts)


@pytest.fixture
def table(glued):
    return phi_table(glued)


class TestSymbols:
    def test_parse(self):
        assert parse_symbols("R1R4 R2") == (1, 4, 2)

    @pytest.mark.parametrize("text", ["", "R6", "R1x", "1 2"])
    def test_bad_words(self, text):
        with pytest.raises(InstanceFormatError):
            parse_symbols(text)

    def test_orbit_word_reads_right_to_left(self):
        assert orbit_word([1, 4, 2]) == (2, 4, 1)


class TestSupports:
    """Test word supports and their measures."""

    def test_single_symbols_are_the_pieces(self, semigroup, parts):
        _, fp = parts
        for q in range(1, 6):
            word = semigroup.support([q])
            assert word.support == IntervalUnion([fp.domains[q - 1]])
            assert word.measure == fp.tau[q - 1]

    def test_zero_word(self, semigroup):
        word = semigroup.support([3, 3])
        assert word.is_zero()
        assert not word.support

    def test_two_letter_support(self, semigroup):
        word = semigroup.support([1, 1])
        assert word.support == IntervalUnion(
            [Interval(Q5("0"), Q5("-41/10+2*sqrt(5)"))]
        )
        assert word.labels == ((1, 2), (1, 2))

    def test_module_function(self, parts):
        word = word_support(*parts, [2])
        assert word.shift == Q5("4-2*sqrt(5)")

    def test_bad_symbol(self, semigroup):
        with pytest.raises(InstanceFormatError):
            semigroup.support([0])
        with pytest.raises(InstanceFormatError):
            semigroup.support([])

    def test_associativity(self, semigroup, rng):
        """Composing supports agrees with the support of the concatenation."""
        for _ in range(1000):
            u, v, w = (
                [rng.randint(1, 5) for _ in range(rng.randint(2, 4))] for _ in range(3)
            )
            U, V, W = (semigroup.support(s) for s in (u, v, w))
            left = semigroup.compose(semigroup.compose(U, V), W)
            right = semigroup.compose(U, semigroup.compose(V, W))
            direct = semigroup.support(u + v + w)
            assert left.symbols == right.symbols == direct.symbols
            assert left.support == right.support == direct.support
            assert left.measure == direct.measure
            assert left.shift == right.shift == direct.shift


class TestNonzeroWords:
    """Test enumeration of nonzero words."""

    def test_length_one(self, parts):
        words = nonzero_words(*parts, 1)
        assert [w.symbols for w in words] == [(1,), (2,), (3,), (4,), (5,)]

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
    def test_measures_partition_the_obstacle(self, semigroup, glued, n):
        words = semigroup.nonzero_words(n)
        total = sum((w.measure for w in words), Q5("0"))
        assert total == glued.m
        assert all(w.measure.sign() > 0 for w in words)

    @pytest.mark.slow
    @pytest.mark.parametrize("type_id", list(TopologyType))
    def test_measures_partition_every_type(self, type_id):
        gs = typed_surface(type_id)
        semigroup = CodingSemigroup(broken_isometry_map(gs), five_partition(gs))
        for n in range(1, 11):
            words = semigroup.nonzero_words(n)
            assert sum((w.measure for w in words), Q5("0")) == gs.m
            pieces = [piece for w in words for piece in w.support]
            assert IntervalUnion(pieces) == semigroup.segment
            assert sum((p.length for p in pieces), Q5("0")) == gs.m

    @pytest.mark.parametrize("type_id", list(TopologyType))
    def test_supports_are_intervals(self, type_id):
        """Each nonzero word is supported on one cylinder interval."""
        gs = typed_surface(type_id)
        semigroup = CodingSemigroup(broken_isometry_map(gs), five_partition(gs))
        for n in range(1, 8):
            for word in semigroup.nonzero_words(n):
                assert word.support.is_interval()
                assert word.support == semigroup.support(word.symbols).support

    def test_length_three_total(self, semigroup):
        words = semigroup.nonzero_words(3)
        assert sum((w.measure for w in words), Q5("0")) == Q5("9/10")

    def test_suffixes_are_nonzero(self, semigroup):
        shorter = {w.symbols for w in semigroup.nonzero_words(2)}
        for word in semigroup.nonzero_words(3):
            assert word.symbols[1:] in shorter

    def test_depth_cap(self, semigroup):
        with pytest.raises(CapExceeded):
            semigroup.nonzero_words(13)
        with pytest.raises(CapExceeded):
            semigroup.nonzero_words(3, max_depth=2)

    def test_word_cap(self, semigroup):
        with pytest.raises(CapExceeded):
            semigroup.nonzero_words(1, max_words=3)

    def test_length_must_be_positive(self, semigroup):
        with pytest.raises(InstanceFormatError):
            semigroup.nonzero_words(0)


class TestRepresentations:
    """Test the fundamental group and homology representations."""

    def test_single_label(self, semigroup, table):
        word = semigroup.support([1])
        assert represent_pi1(word, table).format() == "b1 a2^-1"
        assert represent_homology(word, table) == (0, 1, -1, 0)

    def test_table_is_optional(self, semigroup, table):
        word = semigroup.support([2, 3])
        assert represent_homology(word) == represent_homology(word, table)
        assert represent_pi1(word) == represent_pi1(word, table)
        assert closed_curve_of_word(semigroup.support([1])).word.format() == "a2 b1^-1"

    def test_product_in_written_order(self, semigroup, table):
        word = semigroup.support([2, 3])
        assert represent_pi1(word, table) == table[(0, 2)] * table[(2, 1)]

    def test_zero_word(self, semigroup, table):
        with pytest.raises(ZeroWord):
            represent_pi1(semigroup.support([3, 3]), table)

    def test_closed_curve_orientation(self, semigroup, table):
        backward = closed_curve_of_word(semigroup.support([2]), table)
        assert backward.orientation == 1
        assert backward.measure == Q5("-4+2*sqrt(5)")
        forward = closed_curve_of_word(semigroup.support([1]), table)
        assert forward.orientation == -1
        assert forward.word.format() == "a2 b1^-1"

    def test_closed_up(self, semigroup, table):
        base = semigroup.support([1])
        word = CodeWord(
            symbols=base.symbols,
            labels=base.labels,
            support=base.support,
            measure=base.measure,
            shift=Q5("0"),
        )
        with pytest.raises(ClosedUp):
            closed_curve_of_word(word, table)
