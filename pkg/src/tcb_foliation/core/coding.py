"""Coding semigroup of the broken isometry: word supports, enumeration and
representations into the fundamental group and homology.

A word R_{q1}...R_{qN} is read right to left in time: the rightmost symbol
names the interval the trajectory starts in.
"""

import re
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from ..errors import CapExceeded, ClosedUp, InstanceFormatError, InvariantViolation, ZeroWord
from ..utils.logging import get_logger
from .exact_field import Scalar
from .genus2_glue import (
    BrokenIsometry,
    FivePartition,
    GluedSurface,
    Label,
    PhiTable,
    phi_table,
)
from .intervals import Interval, IntervalUnion
from .word_algebra import RANK4, FreeWord

logger = get_logger(__name__)

DEFAULT_MAX_DEPTH = 12
DEFAULT_MAX_WORDS = 250_000

_SYMBOL = re.compile(r"R([1-5])")


@dataclass(frozen=True)
class CodeWord:
    """Word in R1..R5 with its support, measure and endpoint shift."""

    symbols: Tuple[int, ...]
    labels: Tuple[Label, ...]
    support: IntervalUnion
    measure: Scalar
    shift: Scalar

    def is_zero(self) -> bool:
        return self.measure.is_zero()

    def __len__(self) -> int:
        return len(self.symbols)

    def format(self) -> str:
        return "".join(f"R{q}" for q in self.symbols)

    def __str__(self) -> str:
        return self.format()


def parse_symbols(text: str) -> Tuple[int, ...]:
    """Parse ``R1R4R2`` (spaces allowed) into symbol indices."""
    compact = "".join(text.split())
    symbols = tuple(int(q) for q in _SYMBOL.findall(compact))
    if not symbols or "".join(f"R{q}" for q in symbols) != compact:
        raise InstanceFormatError(
            f"cannot parse code word {text!r}", invariant="code.symbols"
        )
    return symbols


def orbit_word(time_ordered: Sequence[int]) -> Tuple[int, ...]:
    """Semigroup word of a trajectory given its symbols in time order."""
    return tuple(reversed(time_ordered))


class CodingSemigroup:
    """Supports and products of code words for one broken isometry."""

    def __init__(self, bi: BrokenIsometry, fp: FivePartition):
        if tuple(bi.domains) != tuple(fp.domains) or tuple(bi.shifts) != tuple(
            fp.shifts
        ):
            raise InvariantViolation(
                "broken isometry pieces differ from the five partition"
            )
        self.domains: Tuple[Interval, ...] = fp.domains
        self.shifts: Tuple[Scalar, ...] = fp.shifts
        self.labels: Tuple[Label, ...] = fp.labels
        self.zero: Scalar = self.shifts[0] * 0
        self.m: Scalar = self.domains[-1].hi
        self.segment = IntervalUnion([Interval(self.zero, self.m)])

    def _check(self, symbols: Sequence[int]) -> Tuple[int, ...]:
        symbols = tuple(symbols)
        if not symbols:
            raise InstanceFormatError("empty code word", invariant="code.nonempty")
        for q in symbols:
            if q not in (1, 2, 3, 4, 5):
                raise InstanceFormatError(
                    f"symbol R{q} outside R1..R5", invariant="code.symbols"
                )
        return symbols

    def _word(self, symbols: Tuple[int, ...], image: IntervalUnion, shift: Scalar) -> CodeWord:
        support = image.shift(-shift)
        return CodeWord(
            symbols=symbols,
            labels=tuple(self.labels[q - 1] for q in symbols),
            support=support,
            measure=support.measure(self.zero),
            shift=shift,
        )

    def _step(self, image: IntervalUnion, q: int) -> IntervalUnion:
        return image.intersect_interval(self.domains[q - 1]).shift(self.shifts[q - 1])

    def support(self, symbols: Sequence[int]) -> CodeWord:
        symbols = self._check(symbols)
        image = self.segment
        shift = self.zero
        for q in reversed(symbols):
            image = self._step(image, q)
            shift = shift + self.shifts[q - 1]
        return self._word(symbols, image, shift)

    def compose(self, u: CodeWord, v: CodeWord) -> CodeWord:
        """Support of the concatenation uv from the supports of u and v."""
        support = v.support.intersect(u.support.shift(-v.shift))
        return CodeWord(
            symbols=u.symbols + v.symbols,
            labels=u.labels + v.labels,
            support=support,
            measure=support.measure(self.zero),
            shift=u.shift + v.shift,
        )

    def nonzero_words(
        self,
        n: int,
        max_depth: int = DEFAULT_MAX_DEPTH,
        max_words: int = DEFAULT_MAX_WORDS,
    ) -> List[CodeWord]:
        """All nonzero words of length n, sorted by symbols."""
        if n < 1:
            raise InstanceFormatError("word length must be at least 1", invariant="code.length")
        if n > max_depth:
            raise CapExceeded(
                f"length {n} exceeds the enumeration cap {max_depth}",
                details={"requested": n, "cap": max_depth},
            )
        found: List[CodeWord] = []
        # each frame: symbols so far (written order), image of support, shift
        stack: List[Tuple[Tuple[int, ...], IntervalUnion, Scalar]] = [
            ((), self.segment, self.zero)
        ]
        while stack:
            symbols, image, shift = stack.pop()
            if len(symbols) == n:
                found.append(self._word(symbols, image, shift))
                if len(found) > max_words:
                    raise CapExceeded(
                        f"more than {max_words} nonzero words of length {n}",
                        details={"cap": max_words},
                    )
                continue
            for q in (5, 4, 3, 2, 1):
                nxt = self._step(image, q)
                if nxt:
                    stack.append(((q,) + symbols, nxt, shift + self.shifts[q - 1]))
        found.sort(key=lambda w: w.symbols)
        logger.debug("length %d: %d nonzero words", n, len(found))
        return found


def word_support(bi: BrokenIsometry, fp: FivePartition, symbols: Sequence[int]) -> CodeWord:
    return CodingSemigroup(bi, fp).support(symbols)


def nonzero_words(
    bi: BrokenIsometry,
    fp: FivePartition,
    n: int,
    max_depth: int = DEFAULT_MAX_DEPTH,
    max_words: int = DEFAULT_MAX_WORDS,
) -> List[CodeWord]:
    return CodingSemigroup(bi, fp).nonzero_words(n, max_depth, max_words)


def represent_pi1(word: CodeWord, table: Optional[PhiTable] = None) -> FreeWord:
    """Product of the pass words of the symbols, in written order.

    The pass words are the same on every surface, so ``table`` only needs
    to be given to reuse one already built.
    """
    if word.is_zero():
        raise ZeroWord(f"word {word} has measure zero", details={"word": word.format()})
    if table is None:
        table = phi_table()
    out = FreeWord((), RANK4)
    for label in word.labels:
        out = out * table[label]
    return out


def represent_homology(word: CodeWord, table: Optional[PhiTable] = None) -> Tuple[int, ...]:
    """Exponent sums over (a1, b1, a2, b2)."""
    return represent_pi1(word, table).abelianize()


@dataclass(frozen=True)
class ClosedCurve:
    word: FreeWord
    measure: Scalar
    orientation: int
    shift: Scalar


def closed_curve_of_word(word: CodeWord, table: Optional[PhiTable] = None) -> ClosedCurve:
    """Closed transversal curve of a nonzero word; positive when the shift is negative."""
    homotopy = represent_pi1(word, table)
    sign = word.shift.sign()
    if sign == 0:
        raise ClosedUp(
            f"word {word} has zero endpoint shift", details={"word": word.format()}
        )
    if sign < 0:
        return ClosedCurve(homotopy, -word.shift, 1, word.shift)
    return ClosedCurve(homotopy.inverse(), word.shift, -1, word.shift)


def homology_of_translates(
    gs: GluedSurface, translate: Sequence[int]
) -> Tuple[int, int, int, int]:
    """Exponent sums over (a1, b1, a2, b2) of lattice bookkeeping (p1, q1, p2, q2).

    Torus-2 street coordinates fill the first pair with a sign flip and
    torus-1 coordinates fill the second pair, which matches the pass table.
    """
    p1, q1, p2, q2 = translate
    x1, y1 = gs.streets1.coordinates(p1, q1)
    x2, y2 = gs.streets2.coordinates(p2, q2)
    return (-x2, -y2, x1, y1)


def sum_vectors(vectors: Sequence[Sequence[int]], size: int = 4) -> Tuple[int, ...]:
    total = [0] * size
    for vec in vectors:
        for i, value in enumerate(vec):
            total[i] += value
    return tuple(total)

