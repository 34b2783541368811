"""
Tests for free words, matrix words, lifts and conjugation orbits.
"""

import math

import pytest

from tcb_foliation.core.word_algebra import (
    KAPPA_RANK2,
    RANK4,
    ConjugationOrbit,
    FreeWord,
    Generator,
    MatrixWord,
    TcbPair,
    abelianize,
    conjugate_orbit,
    lift_T,
    random_matrix_word,
    reduce_pair,
    simple_curve_word,
)
from tcb_foliation.errors import (
    CommonPower,
    InstanceFormatError,
    NonPositive,
    NotCoprime,
    UnknownGenerator,
)


class TestFreeWord:
    """Test reduction and basic operations."""

    def test_parse_reduces(self):
        w = FreeWord.parse("a1 b1 b1^-1 a2", RANK4)
        assert w.format() == "a1 a2"
        assert len(w) == 2

    def test_aliases(self):
        assert FreeWord.parse("a' b' a b") == FreeWord.parse("ap bp ap bp")

    def test_identity_tokens(self):
        assert FreeWord.parse("1").is_identity()
        assert FreeWord.parse("ap ap^-1").format() == "1"

    def test_unknown_generator(self):
        with pytest.raises(UnknownGenerator):
            FreeWord.parse("ap c")

    def test_inverse_and_power(self):
        w = FreeWord.parse("ap bp")
        assert (w * w.inverse()).is_identity()
        assert (w**3).abelianize() == (3, 3)
        assert (w**-2) == (w.inverse() * w.inverse())

    def test_commutator_abelianizes_to_zero(self):
        assert KAPPA_RANK2.format() == "ap bp ap^-1 bp^-1"
        assert abelianize(KAPPA_RANK2) == (0, 0)

    def test_rotations(self):
        w = FreeWord.parse("bp ap ap")
        assert w.rotate(1).format() == "ap ap bp"
        assert len(w.rotations()) == 3
        assert w.rotate(2).is_rotation_of(w)

    def test_substitute(self):
        w = FreeWord.parse("ap bp^-1")
        image = w.substitute({"ap": FreeWord.parse("ap bp")})
        assert image.format() == "ap"

    def test_mixed_alphabets(self):
        with pytest.raises(UnknownGenerator):
            FreeWord.parse("ap") * FreeWord.parse("a1", RANK4)


class TestMatrixWord:
    def test_parse_and_merge(self):
        mw = MatrixWord.parse("T1,T1^2 t2")
        assert mw.factors == ((Generator.T1, 3), (Generator.T2, 1))
        assert mw.format() == "T1^3,T2"

    def test_non_positive_power(self):
        with pytest.raises(NonPositive):
            MatrixWord(((Generator.T1, 0),))

    def test_bad_factor(self):
        with pytest.raises(UnknownGenerator):
            MatrixWord.parse("T3")

    def test_matrix_product(self):
        assert MatrixWord.parse("T1,T2").matrix == ((2, 1), (1, 1))

    def test_from_matrix(self):
        assert MatrixWord.from_matrix(((2, 1), (1, 1))).format() == "T1,T2"
        with pytest.raises(InstanceFormatError):
            MatrixWord.from_matrix(((2, 1), (1, 2)))


class TestLift:
    """Test lifting matrix words to positive word pairs."""

    @pytest.mark.parametrize(
        "text,A,B",
        [
            ("T1", "ap bp", "bp"),
            ("T2", "ap", "bp ap"),
            ("T1,T2", "ap bp ap", "bp ap"),
            ("T1^2,T2", "ap bp ap bp ap", "bp ap"),
        ],
    )
    def test_examples(self, text, A, B):
        pair = lift_T(MatrixWord.parse(text))
        assert pair.format() == (A, B)
        assert pair.abelian_matrix == MatrixWord.parse(text).matrix

    def test_empty_word(self):
        with pytest.raises(InstanceFormatError):
            lift_T(MatrixWord(()))

    def test_lift_fixes_commutator(self, rng):
        for _ in range(100):
            pair = lift_T(random_matrix_word(rng))
            assert pair.commutator() == KAPPA_RANK2
            assert pair.determinant == 1
            assert pair.is_positive()


class TestConjugationOrbit:
    """Test reduction and the simultaneous conjugation orbit."""

    @pytest.mark.parametrize(
        "pair,size",
        [
            (TcbPair.parse("ap", "bp"), 0),
            (TcbPair.parse("ap bp", "bp"), 1),
            (TcbPair.parse("ap bp ap", "bp ap"), 3),
            (TcbPair.parse("ap bp ap bp ap", "bp ap"), 5),
        ],
    )
    def test_sizes(self, pair, size):
        orbit = conjugate_orbit(pair)
        assert isinstance(orbit, ConjugationOrbit)
        assert len(orbit) == size
        assert orbit.expected_size() == size
        assert orbit.reduced == pair

    def test_members_of_t1_t2(self):
        orbit = conjugate_orbit(TcbPair.parse("ap bp ap", "bp ap"))
        assert [m.format() for m in orbit] == [
            ("ap ap bp", "ap bp"),
            ("bp ap ap", "bp ap"),
            ("ap bp ap", "ap bp"),
        ]
        assert [m.crossing_index for m in orbit] == [1, 2, 3]

    def test_reduce_pair(self):
        pair, steps = reduce_pair(TcbPair.parse("ap bp ap bp ap", "ap bp"))
        assert steps == 5
        assert pair.format() == ("ap bp ap bp ap", "bp ap")
        assert pair.is_reduced()

    def test_power_of_common_word(self):
        with pytest.raises(CommonPower):
            reduce_pair(TcbPair.parse("ap bp", "ap bp"))

    def test_non_positive_pair(self):
        with pytest.raises(InstanceFormatError):
            reduce_pair(TcbPair.parse("ap^-1", "bp"))

    def test_t2_power(self):
        orbit = conjugate_orbit(lift_T(MatrixWord.parse("T2^4")))
        assert len(orbit) == 4
        assert orbit.members[-1].format() == ("ap", "ap ap ap ap bp")

    @pytest.mark.slow
    def test_size_law_over_small_matrices(self):
        """Orbit size is k+l+p+q-2 for every non-negative unimodular matrix."""
        bound = 8
        checked = 0
        for a in range(bound + 1):
            for b in range(bound + 1):
                for c in range(bound + 1):
                    for d in range(bound + 1):
                        if a * d - b * c != 1 or (a, b, c, d) == (1, 0, 0, 1):
                            continue
                        pair = lift_T(MatrixWord.from_matrix(((a, b), (c, d))))
                        orbit = conjugate_orbit(pair)
                        assert len(orbit) == a + b + c + d - 2
                        checked += 1
        assert checked > 20


class TestSimpleCurveWord:
    """Test the words of simple transversal curves."""

    def test_two_one(self):
        assert simple_curve_word(2, 1).format() == "bp ap ap"

    def test_single_cycles(self):
        assert simple_curve_word(1, 0).format() == "ap"
        assert simple_curve_word(0, 1).format() == "bp"

    def test_swapped_roles(self):
        assert simple_curve_word(1, 2).format() == "ap bp bp"

    @pytest.mark.parametrize("k,l", [(2, 4), (3, 6), (0, 0), (-1, 2)])
    def test_bad_classes(self, k, l):
        with pytest.raises((NotCoprime, NonPositive)):
            simple_curve_word(k, l)

    def test_start_out_of_range(self):
        with pytest.raises(InstanceFormatError):
            simple_curve_word(2, 1, start=4)

    @pytest.mark.slow
    def test_coprime_classes(self):
        for k in range(0, 31):
            for l in range(0, 31 - k):
                if (k, l) == (0, 0) or math.gcd(k, l) != 1:
                    continue
                word = simple_curve_word(k, l)
                assert word.abelianize() == (k, l)
                assert word.is_positive()
                for start in range(1, k + l + 1):
                    assert simple_curve_word(k, l, start).is_rotation_of(word)
