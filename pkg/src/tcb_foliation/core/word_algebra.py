"""Free-group words, the T1/T2 matrix semigroup and its lifts, transversal
canonical base pairs and simple transversal curve words."""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, Iterator, List, Tuple

from ..errors import (
    CommonPower,
    InstanceFormatError,
    InvariantViolation,
    NonPositive,
    NotCoprime,
    UnknownGenerator,
)
from ..utils.logging import get_logger

logger = get_logger(__name__)

Letter = Tuple[str, int]
Matrix = Tuple[Tuple[int, int], Tuple[int, int]]


@dataclass(frozen=True)
class Alphabet:
    """Ordered set of free generators."""

    name: str
    generators: Tuple[str, ...]
    aliases: Dict[str, str] = field(default_factory=dict, compare=False, hash=False)

    def canonical(self, name: str) -> str:
        name = self.aliases.get(name, name)
        if name not in self.generators:
            raise UnknownGenerator(
                f"'{name}' is not a generator of {self.name}",
                details={"letter": name, "alphabet": list(self.generators)},
            )
        return name

    def index(self, name: str) -> int:
        return self.generators.index(self.canonical(name))


RANK2 = Alphabet("rank2", ("ap", "bp"), {"a'": "ap", "b'": "bp", "a": "ap", "b": "bp"})
RANK4 = Alphabet("rank4", ("a1", "b1", "a2", "b2"))
ALPHABETS = {"rank2": RANK2, "rank4": RANK4}


def _reduce_letters(letters: Iterable[Letter]) -> Tuple[Letter, ...]:
    stack: List[Letter] = []
    for gen, exp in letters:
        if stack and stack[-1][0] == gen and stack[-1][1] == -exp:
            stack.pop()
        else:
            stack.append((gen, exp))
    return tuple(stack)


class FreeWord:
    """Freely reduced word over a named alphabet."""

    __slots__ = ("_letters", "_alphabet")

    def __init__(self, letters: Iterable[Letter] = (), alphabet: Alphabet = RANK2):
        checked = []
        for gen, exp in letters:
            if exp not in (1, -1):
                raise InstanceFormatError(
                    f"exponent {exp} is not +1 or -1", invariant="word.exponent"
                )
            checked.append((alphabet.canonical(gen), exp))
        self._letters: Tuple[Letter, ...] = _reduce_letters(checked)
        self._alphabet = alphabet

    @classmethod
    def _trusted(cls, letters: Tuple[Letter, ...], alphabet: Alphabet) -> "FreeWord":
        obj = cls.__new__(cls)
        obj._letters = letters
        obj._alphabet = alphabet
        return obj

    @classmethod
    def parse(cls, text: str, alphabet: Alphabet = RANK2) -> "FreeWord":
        """Parse whitespace-separated letters such as ``a1 b1^-1``."""
        letters: List[Letter] = []
        for token in text.split():
            if token in ("1", "e"):
                continue
            exp = 1
            if token.endswith("^-1"):
                token, exp = token[:-3], -1
            elif token.endswith("^1"):
                token = token[:-2]
            letters.append((alphabet.canonical(token), exp))
        return cls(letters, alphabet)

    @classmethod
    def generator(cls, name: str, alphabet: Alphabet = RANK2) -> "FreeWord":
        return cls([(name, 1)], alphabet)

    @property
    def letters(self) -> Tuple[Letter, ...]:
        return self._letters

    @property
    def alphabet(self) -> Alphabet:
        return self._alphabet

    def __len__(self) -> int:
        return len(self._letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self._letters)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FreeWord):
            return NotImplemented
        return self._letters == other._letters and self._alphabet == other._alphabet

    def __hash__(self) -> int:
        return hash((self._letters, self._alphabet.name))

    def _check_same(self, other: "FreeWord") -> None:
        if other._alphabet != self._alphabet:
            raise UnknownGenerator(
                f"cannot multiply words over {self._alphabet.name} and "
                f"{other._alphabet.name}"
            )

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        if not isinstance(other, FreeWord):
            return NotImplemented
        self._check_same(other)
        return FreeWord._trusted(
            _reduce_letters(self._letters + other._letters), self._alphabet
        )

    def inverse(self) -> "FreeWord":
        return FreeWord._trusted(
            tuple((g, -e) for g, e in reversed(self._letters)), self._alphabet
        )

    def __pow__(self, n: int) -> "FreeWord":
        base = self if n >= 0 else self.inverse()
        out = FreeWord._trusted((), self._alphabet)
        for _ in range(abs(n)):
            out = out * base
        return out

    def is_identity(self) -> bool:
        return not self._letters

    def is_positive(self) -> bool:
        return all(exp == 1 for _, exp in self._letters)

    def abelianize(self) -> Tuple[int, ...]:
        counts = [0] * len(self._alphabet.generators)
        for gen, exp in self._letters:
            counts[self._alphabet.generators.index(gen)] += exp
        return tuple(counts)

    def first(self) -> Letter:
        return self._letters[0]

    def last(self) -> Letter:
        return self._letters[-1]

    def rotate(self, k: int) -> "FreeWord":
        """Cyclic rotation moving the first k letters to the end."""
        if not self._letters:
            return self
        k %= len(self._letters)
        return FreeWord(self._letters[k:] + self._letters[:k], self._alphabet)

    def rotations(self) -> List["FreeWord"]:
        return [self.rotate(k) for k in range(max(1, len(self._letters)))]

    def is_rotation_of(self, other: "FreeWord") -> bool:
        return len(self) == len(other) and any(
            r._letters == other._letters for r in self.rotations()
        )

    def substitute(self, images: Dict[str, "FreeWord"]) -> "FreeWord":
        """Apply the endomorphism given on generators."""
        out = FreeWord._trusted((), self._alphabet)
        for gen, exp in self._letters:
            image = images.get(gen, FreeWord._trusted(((gen, 1),), self._alphabet))
            out = out * (image if exp == 1 else image.inverse())
        return out

    def format(self) -> str:
        if not self._letters:
            return "1"
        return " ".join(g if e == 1 else f"{g}^-1" for g, e in self._letters)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"FreeWord('{self.format()}', {self._alphabet.name})"


def reduce(w: FreeWord) -> FreeWord:
    """Free reduction; words are kept reduced so this re-checks the letters."""
    return FreeWord(w.letters, w.alphabet)


def abelianize(w: FreeWord) -> Tuple[int, ...]:
    return w.abelianize()


def commutator(x: FreeWord, y: FreeWord) -> FreeWord:
    return x * y * x.inverse() * y.inverse()


A_PRIME = FreeWord.generator("ap")
B_PRIME = FreeWord.generator("bp")
KAPPA_RANK2 = commutator(A_PRIME, B_PRIME)


class Generator(str, Enum):
    """Generators of the non-negative unimodular matrix semigroup."""

    T1 = "T1"
    T2 = "T2"


GENERATOR_MATRIX: Dict[Generator, Matrix] = {
    Generator.T1: ((1, 1), (0, 1)),
    Generator.T2: ((1, 0), (1, 1)),
}


def mat_mul(x: Matrix, y: Matrix) -> Matrix:
    (a, b), (c, d) = x
    (e, f), (g, h) = y
    return (a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h)


def mat_det(x: Matrix) -> int:
    (a, b), (c, d) = x
    return a * d - b * c


IDENTITY: Matrix = ((1, 0), (0, 1))


@dataclass(frozen=True)
class MatrixWord:
    """Word in T1, T2 with positive powers; consecutive equal factors merge."""

    factors: Tuple[Tuple[Generator, int], ...]

    def __post_init__(self):
        merged: List[Tuple[Generator, int]] = []
        for gen, power in self.factors:
            gen = Generator(gen)
            if power <= 0:
                raise NonPositive(
                    f"factor power must be positive, got {power}",
                    invariant="matrix.positive_power",
                )
            if merged and merged[-1][0] is gen:
                merged[-1] = (gen, merged[-1][1] + power)
            else:
                merged.append((gen, power))
        object.__setattr__(self, "factors", tuple(merged))

    @classmethod
    def parse(cls, text: str) -> "MatrixWord":
        """Parse ``T1,T2^3,T1`` (commas or spaces)."""
        factors = []
        for token in text.replace(",", " ").split():
            name, _, power = token.partition("^")
            try:
                factors.append((Generator(name.upper()), int(power) if power else 1))
            except ValueError:
                raise UnknownGenerator(
                    f"'{token}' is not a T1/T2 factor", details={"factor": token}
                )
        return cls(tuple(factors))

    @classmethod
    def from_matrix(cls, matrix: Matrix) -> "MatrixWord":
        """Factor a non-negative determinant-one matrix into T1, T2 powers."""
        (a, b), (c, d) = matrix
        if min(a, b, c, d) < 0 or a * d - b * c != 1:
            raise InstanceFormatError(
                "matrix must be non-negative with determinant 1",
                invariant="matrix.unimodular",
                details={"matrix": [[a, b], [c, d]]},
            )
        peeled: List[Tuple[Generator, int]] = []
        while ((a, b), (c, d)) != IDENTITY:
            if a >= c and b >= d:
                a, b = a - c, b - d
                peeled.append((Generator.T1, 1))
            elif c >= a and d >= b:
                c, d = c - a, d - b
                peeled.append((Generator.T2, 1))
            else:
                raise InvariantViolation("matrix rows are not comparable")
        return cls(tuple(peeled))

    @property
    def matrix(self) -> Matrix:
        out = IDENTITY
        for gen, power in self.factors:
            for _ in range(power):
                out = mat_mul(out, GENERATOR_MATRIX[gen])
        return out

    def is_empty(self) -> bool:
        return not self.factors

    def format(self) -> str:
        return ",".join(
            gen.value if power == 1 else f"{gen.value}^{power}"
            for gen, power in self.factors
        )

    def __str__(self) -> str:
        return self.format() or "I"


def _lift_images(gen: Generator, power: int) -> Dict[str, FreeWord]:
    if gen is Generator.T1:
        return {"ap": A_PRIME * B_PRIME**power, "bp": B_PRIME}
    return {"ap": A_PRIME, "bp": B_PRIME * A_PRIME**power}


@dataclass(frozen=True)
class TcbPair:
    """Pair of positive words (A, B) representing a transversal canonical basis."""

    A: FreeWord
    B: FreeWord
    crossing_index: int = 0

    @classmethod
    def parse(cls, a_text: str, b_text: str) -> "TcbPair":
        return cls(FreeWord.parse(a_text), FreeWord.parse(b_text))

    @property
    def abelian_matrix(self) -> Matrix:
        """Rows are the abelianizations of A and B."""
        k, l = self.A.abelianize()
        p, q = self.B.abelianize()
        return (k, l), (p, q)

    @property
    def determinant(self) -> int:
        return mat_det(self.abelian_matrix)

    def commutator(self) -> FreeWord:
        return commutator(self.A, self.B)

    def is_positive(self) -> bool:
        return self.A.is_positive() and self.B.is_positive()

    def is_reduced(self) -> bool:
        return self.A.first() != self.B.first()

    def strip_leading(self) -> "TcbPair":
        """Conjugate both words by their shared first letter."""
        return TcbPair(self.A.rotate(1), self.B.rotate(1), self.crossing_index + 1)

    def unstrip_trailing(self) -> "TcbPair":
        """Conjugate both words by their shared last letter (inverse move)."""
        return TcbPair(self.A.rotate(-1), self.B.rotate(-1), self.crossing_index - 1)

    def key(self) -> Tuple[Tuple[Letter, ...], Tuple[Letter, ...]]:
        return self.A.letters, self.B.letters

    def format(self) -> Tuple[str, str]:
        return self.A.format(), self.B.format()


def lift_T(mw: MatrixWord) -> TcbPair:
    """Lift a matrix word to a pair of positive words.

    The written factors act as substitutions on the current pair, first
    factor first, so the row matrix of the result equals the written product.
    """
    if mw.is_empty():
        raise InstanceFormatError(
            "cannot lift the empty matrix word", invariant="matrix.nonempty"
        )
    A, B = A_PRIME, B_PRIME
    for gen, power in mw.factors:
        images = _lift_images(gen, power)
        A, B = A.substitute(images), B.substitute(images)
    pair = TcbPair(A, B)
    if pair.abelian_matrix != mw.matrix:
        raise InvariantViolation(
            "lift abelianization disagrees with the matrix product",
            details={"word": mw.format()},
        )
    return pair


def _validate_pair(p: TcbPair) -> None:
    if not p.is_positive() or p.A.is_identity() or p.B.is_identity():
        raise InstanceFormatError(
            "pair words must be non-empty positive words", invariant="pair.positive"
        )
    if abs(p.determinant) != 1:
        raise CommonPower(
            "abelianized pair is not a basis",
            details={"matrix": [list(r) for r in p.abelian_matrix]},
        )


def reduce_pair(p: TcbPair) -> Tuple[TcbPair, int]:
    """Strip shared leading letters until the words start differently."""
    _validate_pair(p)
    seen = {p.key()}
    steps = 0
    current = p
    while not current.is_reduced():
        current = current.strip_leading()
        steps += 1
        if current.key() in seen:
            raise CommonPower(
                "words keep sharing a leading letter; they are powers of one word",
                details={"pair": list(p.format())},
            )
        seen.add(current.key())
    logger.debug("pair reduced after %d steps", steps)
    return TcbPair(current.A, current.B, 0), steps


@dataclass(frozen=True)
class ConjugationOrbit:
    """Simultaneous cyclic conjugates of a pair, and its reduced form."""

    reduced: TcbPair
    members: Tuple[TcbPair, ...]
    steps_to_reduce: int

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[TcbPair]:
        return iter(self.members)

    def expected_size(self) -> int:
        (k, l), (p, q) = self.reduced.abelian_matrix
        return k + l + p + q - 2


def conjugate_orbit(p: TcbPair) -> ConjugationOrbit:
    """All pairs reachable from the reduced pair by the inverse stripping move.

    The reduced pair itself is reported separately and is not a member.
    """
    reduced, steps = reduce_pair(p)
    members: List[TcbPair] = []
    seen = {reduced.key()}
    current = reduced
    while current.A.last() == current.B.last():
        current = current.unstrip_trailing()
        if current.key() in seen:
            raise CommonPower(
                "conjugation chain closed up; words are powers of one word",
                details={"pair": list(p.format())},
            )
        seen.add(current.key())
        members.append(TcbPair(current.A, current.B, len(members) + 1))
    return ConjugationOrbit(
        reduced=reduced, members=tuple(members), steps_to_reduce=steps
    )


class SegmentGroup(str, Enum):
    """Street passages of a simple curve through the longest street."""

    I = "I"  # from street 2 into street 1
    II = "II"  # from street 2 back to street 2
    III = "III"  # from street 1 into street 2


@dataclass(frozen=True)
class CurveSegment:
    index: int
    group: SegmentGroup
    letter: str
    successor: int


def simple_curve_segments(k: int, l: int) -> List[CurveSegment]:
    """Segments t_1..t_{k+l} of the simple curve k[a'] + l[b'], for k >= l."""
    if k < l:
        raise InstanceFormatError("segment table needs k >= l", invariant="curve.order")
    segments = []
    for s in range(1, k + l + 1):
        if s <= l:
            segments.append(CurveSegment(s, SegmentGroup.I, "bp", s + k))
        elif s <= k:
            segments.append(CurveSegment(s, SegmentGroup.II, "ap", s - l))
        else:
            segments.append(CurveSegment(s, SegmentGroup.III, "ap", s - l))
    return segments


def _check_curve_class(k: int, l: int) -> None:
    if k < 0 or l < 0 or (k == 0 and l == 0):
        raise NonPositive(
            f"homology class ({k},{l}) is not a positive class", details={"k": k, "l": l}
        )
    if math.gcd(k, l) != 1:
        raise NotCoprime(
            f"class ({k},{l}) is divisible by {math.gcd(k, l)}",
            details={"k": k, "l": l},
        )


def simple_curve_word(k: int, l: int, start: int = 1) -> FreeWord:
    """Positive word of the simple transversal curve in class k[a'] + l[b'].

    Segments are linked right end to the next left end and read from segment
    ``start``. When k < l the roles of a' and b' are swapped.
    """
    _check_curve_class(k, l)
    if k < l:
        swapped = simple_curve_word(l, k, start)
        return FreeWord(
            [("bp" if g == "ap" else "ap", e) for g, e in swapped.letters], RANK2
        )
    segments = {seg.index: seg for seg in simple_curve_segments(k, l)}
    if start not in segments:
        raise InstanceFormatError(
            f"start segment {start} out of range 1..{k + l}", invariant="curve.start"
        )
    letters: List[Letter] = []
    visited = set()
    s = start
    while s not in visited:
        visited.add(s)
        letters.append((segments[s].letter, 1))
        s = segments[s].successor
    if len(visited) != k + l or s != start:
        raise InvariantViolation(
            "segment linkage is not a single cycle", details={"k": k, "l": l}
        )
    return FreeWord._trusted(tuple(letters), RANK2)


def random_matrix_word(rng, max_factors: int = 6, max_power: int = 3) -> MatrixWord:
    """Random non-empty matrix word; ``rng`` is a ``random.Random``."""
    count = rng.randint(1, max_factors)
    gens = [Generator.T1, Generator.T2]
    return MatrixWord(
        tuple((rng.choice(gens), rng.randint(1, max_power)) for _ in range(count))
    )
