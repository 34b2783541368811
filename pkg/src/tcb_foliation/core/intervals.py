"""Open intervals, interval unions and piecewise translations over Scalars."""

from dataclasses import dataclass
from functools import cmp_to_key
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from ..errors import Degenerate, InvariantViolation
from .exact_field import Scalar


@dataclass(frozen=True)
class Interval:
    """Open interval (lo, hi) with lo < hi."""

    lo: Scalar
    hi: Scalar

    def __post_init__(self):
        if not self.lo < self.hi:
            raise InvariantViolation(f"empty interval ({self.lo}, {self.hi})")

    @property
    def length(self) -> Scalar:
        return self.hi - self.lo

    def midpoint(self) -> Scalar:
        return (self.lo + self.hi) / 2

    def contains(self, x: Scalar) -> bool:
        return self.lo < x < self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def intersect(self, other: "Interval") -> Optional["Interval"]:
        lo = self.lo if self.lo >= other.lo else other.lo
        hi = self.hi if self.hi <= other.hi else other.hi
        if lo < hi:
            return Interval(lo, hi)
        return None

    def shift(self, amount: Scalar) -> "Interval":
        return Interval(self.lo + amount, self.hi + amount)

    def __str__(self) -> str:
        return f"({self.lo}, {self.hi})"


class IntervalUnion:
    """Sorted disjoint union of open intervals; touching pieces are merged."""

    __slots__ = ("_pieces",)

    def __init__(self, pieces: Iterable[Interval] = ()):
        self._pieces: Tuple[Interval, ...] = self._normalize(pieces)

    @staticmethod
    def _normalize(pieces: Iterable[Interval]) -> Tuple[Interval, ...]:
        ordered = sorted(pieces, key=_BY_LO)
        merged: List[Interval] = []
        for piece in ordered:
            if merged and piece.lo <= merged[-1].hi:
                last = merged[-1]
                hi = piece.hi if piece.hi > last.hi else last.hi
                merged[-1] = Interval(last.lo, hi)
            else:
                merged.append(piece)
        return tuple(merged)

    @property
    def pieces(self) -> Tuple[Interval, ...]:
        return self._pieces

    def __iter__(self) -> Iterator[Interval]:
        return iter(self._pieces)

    def __len__(self) -> int:
        return len(self._pieces)

    def __bool__(self) -> bool:
        return bool(self._pieces)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntervalUnion):
            return NotImplemented
        return self._pieces == other._pieces

    def __hash__(self) -> int:
        return hash(self._pieces)

    def is_empty(self) -> bool:
        return not self._pieces

    def is_interval(self) -> bool:
        return len(self._pieces) == 1

    def measure(self, zero: Scalar) -> Scalar:
        total = zero
        for piece in self._pieces:
            total = total + piece.length
        return total

    def contains(self, x: Scalar) -> bool:
        return any(piece.contains(x) for piece in self._pieces)

    def intersect(self, other: "IntervalUnion") -> "IntervalUnion":
        out = []
        for left in self._pieces:
            for right in other._pieces:
                common = left.intersect(right)
                if common is not None:
                    out.append(common)
        return IntervalUnion(out)

    def intersect_interval(self, interval: Interval) -> "IntervalUnion":
        return self.intersect(IntervalUnion([interval]))

    def shift(self, amount: Scalar) -> "IntervalUnion":
        return IntervalUnion(piece.shift(amount) for piece in self._pieces)

    def is_subset(self, other: "IntervalUnion") -> bool:
        return all(
            any(outer.contains_interval(piece) for outer in other._pieces)
            for piece in self._pieces
        )

    def __str__(self) -> str:
        if not self._pieces:
            return "{}"
        return " u ".join(str(piece) for piece in self._pieces)

    def __repr__(self) -> str:
        return f"IntervalUnion({self})"


@dataclass(frozen=True)
class TranslationPiece:
    """One branch of a piecewise translation: domain and shift."""

    domain: Interval
    shift: Scalar

    @property
    def image(self) -> Interval:
        return self.domain.shift(self.shift)


class PiecewiseTranslation:
    """Orientation-preserving map that translates each domain piece.

    Pieces are kept sorted by domain. Maps are defined away from the piece
    endpoints; evaluating at an endpoint is a separatrix hit.
    """

    __slots__ = ("_pieces",)

    def __init__(self, pieces: Sequence[TranslationPiece], merge: bool = True):
        ordered = sorted(pieces, key=_BY_DOMAIN)
        for left, right in zip(ordered, ordered[1:]):
            if right.domain.lo < left.domain.hi:
                raise InvariantViolation("overlapping translation domains")
        if merge:
            ordered = _merge_pieces(ordered)
        self._pieces: Tuple[TranslationPiece, ...] = tuple(ordered)

    @classmethod
    def from_blocks(
        cls, domains: Sequence[Interval], shifts: Sequence[Scalar], merge: bool = True
    ) -> "PiecewiseTranslation":
        return cls(
            [TranslationPiece(dom, s) for dom, s in zip(domains, shifts)], merge=merge
        )

    @property
    def pieces(self) -> Tuple[TranslationPiece, ...]:
        return self._pieces

    @property
    def domains(self) -> Tuple[Interval, ...]:
        return tuple(p.domain for p in self._pieces)

    @property
    def shifts(self) -> Tuple[Scalar, ...]:
        return tuple(p.shift for p in self._pieces)

    @property
    def images(self) -> Tuple[Interval, ...]:
        return tuple(p.image for p in self._pieces)

    def __len__(self) -> int:
        return len(self._pieces)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PiecewiseTranslation):
            return NotImplemented
        return self._pieces == other._pieces

    def __hash__(self) -> int:
        return hash(self._pieces)

    def piece_index(self, x: Scalar) -> int:
        """Index of the piece whose open domain contains x."""
        for index, piece in enumerate(self._pieces):
            if piece.domain.contains(x):
                return index
        raise Degenerate(
            f"point {x} is not interior to any piece",
            details={"point": x.format()},
        )

    def apply(self, x: Scalar) -> Scalar:
        return x + self._pieces[self.piece_index(x)].shift

    def __call__(self, x: Scalar) -> Scalar:
        return self.apply(x)

    def inverse(self) -> "PiecewiseTranslation":
        return PiecewiseTranslation(
            [TranslationPiece(p.image, -p.shift) for p in self._pieces]
        )

    def then(self, other: "PiecewiseTranslation") -> "PiecewiseTranslation":
        """Map x to other(self(x))."""
        out = []
        for first in self._pieces:
            for second in other._pieces:
                common = first.image.intersect(second.domain)
                if common is not None:
                    out.append(
                        TranslationPiece(
                            common.shift(-first.shift), first.shift + second.shift
                        )
                    )
        return PiecewiseTranslation(out)

    def image(self, region: IntervalUnion) -> IntervalUnion:
        out = []
        for piece in self._pieces:
            for part in region:
                common = part.intersect(piece.domain)
                if common is not None:
                    out.append(common.shift(piece.shift))
        return IntervalUnion(out)

    def pullback(self, region: IntervalUnion) -> IntervalUnion:
        """Points whose image lies in region."""
        return self.inverse().image(region)

    def image_union(self) -> IntervalUnion:
        return IntervalUnion(self.images)

    def domain_union(self) -> IntervalUnion:
        return IntervalUnion(self.domains)

    def break_points(self) -> List[Scalar]:
        return [p.domain.lo for p in self._pieces[1:]]

    def __repr__(self) -> str:
        body = ", ".join(f"{p.domain}+{p.shift}" for p in self._pieces)
        return f"PiecewiseTranslation([{body}])"


def _merge_pieces(pieces: List[TranslationPiece]) -> List[TranslationPiece]:
    merged: List[TranslationPiece] = []
    for piece in pieces:
        if (
            merged
            and merged[-1].shift == piece.shift
            and merged[-1].domain.hi == piece.domain.lo
        ):
            last = merged[-1]
            merged[-1] = TranslationPiece(
                Interval(last.domain.lo, piece.domain.hi), piece.shift
            )
        else:
            merged.append(piece)
    return merged


_BY_LO = cmp_to_key(lambda x, y: (x.lo - y.lo).sign())
_BY_DOMAIN = cmp_to_key(lambda x, y: (x.domain.lo - y.domain.lo).sign())
