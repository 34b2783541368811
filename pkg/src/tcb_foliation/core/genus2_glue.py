"""Genus-2 surface glued from two tori along their obstacles.

The jump map of each torus is its first return against the flow; the broken
isometry is the composition torus 1 then torus 2. Its five pieces, their
labels (torus-1 street, torus-2 street) and the permutation of the pieces
determine one of six topological types.
"""

from dataclasses import dataclass, field
from enum import Enum
from functools import cmp_to_key
from typing import Dict, List, Optional, Tuple

from ..errors import Degenerate, InvariantViolation, MeasureMismatch
from ..utils.logging import get_logger
from .exact_field import Scalar
from .intervals import Interval, PiecewiseTranslation
from .torus_flow import (
    DEFAULT_WALK_STEPS,
    FlowTorus,
    StreetOrder,
    StreetSet,
    street_set,
)
from .word_algebra import RANK4, FreeWord, commutator

logger = get_logger(__name__)

Label = Tuple[int, int]  # (torus-1 street, torus-2 street)

STREETS_IN_GLUE_ORDER = (1, 0, 2)


def format_label(label: Label) -> str:
    return f"{label[0]}{label[1]}'"


def parse_label(text: str) -> Label:
    text = text.strip().rstrip("'")
    return int(text[0]), int(text[1])


class TopologyType(str, Enum):
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"
    V = "V"
    VI = "VI"


# Orderings of the image-side points, keyed by type.
TYPE_ORDERINGS: Dict[TopologyType, Tuple[str, str, str, str]] = {
    TopologyType.I: ("1'", "2'", "3*", "0*"),
    TopologyType.II: ("1'", "3*", "2'", "0*"),
    TopologyType.III: ("1'", "3*", "0*", "2'"),
    TopologyType.IV: ("3*", "1'", "2'", "0*"),
    TopologyType.V: ("3*", "1'", "0*", "2'"),
    TopologyType.VI: ("3*", "0*", "1'", "2'"),
}

SIGMA_DERIVED: Dict[TopologyType, str] = {
    TopologyType.I: "32541",
    TopologyType.II: "24153",
    TopologyType.III: "41352",
    TopologyType.IV: "25314",
    TopologyType.V: "31524",
    TopologyType.VI: "52143",
}

# Permutations as originally tabulated. Types III and VI disagree with
# SIGMA_DERIVED (41523 against 41352, 52134 against 52143): no surface of
# those types orders the images of eta21 after eta12 as tabulated. The
# derived rows follow the composition order and are the ones five_partition
# enforces; the tabulated rows only come back through table_corrections.
SIGMA_PUBLISHED: Dict[TopologyType, str] = {
    TopologyType.I: "32541",
    TopologyType.II: "24153",
    TopologyType.III: "41523",
    TopologyType.IV: "25314",
    TopologyType.V: "31524",
    TopologyType.VI: "52134",
}

LABELS_DERIVED: Dict[TopologyType, Tuple[str, ...]] = {
    TopologyType.I: ("12'", "02'", "21'", "20'", "22'"),
    TopologyType.II: ("12'", "00'", "02'", "21'", "20'"),
    TopologyType.III: ("10'", "12'", "00'", "21'", "20'"),
    TopologyType.IV: ("12'", "01'", "00'", "02'", "21'"),
    TopologyType.V: ("10'", "12'", "01'", "00'", "21'"),
    TopologyType.VI: ("11'", "10'", "12'", "01'", "21'"),
}

LABELS_PUBLISHED: Dict[TopologyType, Tuple[str, ...]] = {
    TopologyType.I: ("12'", "02'", "21'", "20'", "22'"),
    TopologyType.II: ("12'", "01'", "02'", "21'", "20'"),
    TopologyType.III: ("10'", "12'", "00'", "21'", "20'"),
    TopologyType.IV: ("12'", "01'", "00'", "02'", "21'"),
    TopologyType.V: ("10'", "21'", "01'", "00'", "21'"),
    TopologyType.VI: ("11'", "10'", "12'", "01'", "02'"),
}

# Two-street passes of zero measure per type, as published:
# first list for forward passes, second for passes against the shift.
PASSES_EXCLUDED_PUBLISHED: Dict[TopologyType, Tuple[Tuple[str, ...], Tuple[str, ...]]] = {
    TopologyType.I: ((), ("11'", "10'", "01'", "00'")),
    TopologyType.II: (("22'",), ("11'", "10'", "01'")),
    TopologyType.III: (("22'", "02'"), ("11'", "01'")),
    TopologyType.IV: (("20'", "22'"), ("11'", "10'")),
    TopologyType.V: (("22'", "20'", "02'"), ("11'",)),
    TopologyType.VI: (("20'", "22'", "00'", "02'"), ()),
}


def table_corrections(type_id: TopologyType) -> Dict[str, Dict[str, str]]:
    """Published entries that disagree with the computed ones."""
    out: Dict[str, Dict[str, str]] = {}
    if SIGMA_PUBLISHED[type_id] != SIGMA_DERIVED[type_id]:
        out["sigma"] = {
            "published": SIGMA_PUBLISHED[type_id],
            "derived": SIGMA_DERIVED[type_id],
        }
    if LABELS_PUBLISHED[type_id] != LABELS_DERIVED[type_id]:
        out["labels"] = {
            "published": " ".join(LABELS_PUBLISHED[type_id]),
            "derived": " ".join(LABELS_DERIVED[type_id]),
        }
    return out


@dataclass(frozen=True)
class GluedSurface:
    """Two tori glued along obstacles of equal measure."""

    torus1: FlowTorus
    torus2: FlowTorus
    streets1: StreetSet
    streets2: StreetSet

    @property
    def m(self) -> Scalar:
        return self.torus1.m

    def division_points(self) -> Dict[str, Scalar]:
        """Image-side points 3*, 0* of torus 1 and domain points 1', 2' of torus 2."""
        p0_1, p1_1, p2_1 = self.streets1.widths
        p0_2, p1_2, p2_2 = self.streets2.widths
        return {
            "3*": p2_1,
            "0*": self.m - p1_1,
            "1'": p1_2,
            "2'": p1_2 + p0_2,
        }

    def eta12(self) -> PiecewiseTranslation:
        return self.streets1.glue_map()

    def eta21(self) -> PiecewiseTranslation:
        return self.streets2.glue_map()


def glue(
    t1: FlowTorus, t2: FlowTorus, max_steps: int = DEFAULT_WALK_STEPS
) -> GluedSurface:
    """Glue two generic tori with equal obstacle measure."""
    if t1.m != t2.m:
        raise MeasureMismatch(
            f"obstacle measures differ: {t1.m} and {t2.m}",
            details={"m1": t1.m.format(), "m2": t2.m.format()},
        )
    surface = GluedSurface(
        torus1=t1,
        torus2=t2,
        streets1=street_set(t1, max_steps),
        streets2=street_set(t2, max_steps),
    )
    points = surface.division_points()
    names = list(points)
    for i, left in enumerate(names):
        for right in names[i + 1 :]:
            if points[left] == points[right]:
                raise Degenerate(
                    f"division points {left} and {right} coincide",
                    details={"points": [left, right], "value": points[left].format()},
                )
    return surface


@dataclass(frozen=True)
class FivePartition:
    """Five sub-segments of the obstacle in domain order."""

    type_id: TopologyType
    sigma: Tuple[int, ...]
    tau: Tuple[Scalar, ...]
    labels: Tuple[Label, ...]
    domains: Tuple[Interval, ...]
    shifts: Tuple[Scalar, ...]
    image_points: Tuple[Tuple[str, Scalar], ...]
    metadata: Dict[str, Dict[str, str]] = field(default_factory=dict, compare=False)

    @property
    def sigma_text(self) -> str:
        return "".join(str(q) for q in self.sigma)

    @property
    def label_text(self) -> Tuple[str, ...]:
        return tuple(format_label(label) for label in self.labels)

    def measure_matrix(self, zero: Scalar) -> Dict[Label, Scalar]:
        """p_{alpha beta} for all nine labels (zero when absent)."""
        out = {(a, b): zero for a in (1, 0, 2) for b in (1, 0, 2)}
        for label, width in zip(self.labels, self.tau):
            out[label] = out[label] + width
        return out

    def symbol_of(self, x: Scalar) -> int:
        """1-based index of the piece whose interior contains x."""
        for q, domain in enumerate(self.domains, start=1):
            if domain.contains(x):
                return q
        raise Degenerate(f"point {x} lies on a piece boundary", details={"x": str(x)})


def detect_type(points: Dict[str, Scalar]) -> TopologyType:
    """Type from the order of 1', 2', 3*, 0* along the obstacle."""
    for type_id, ordering in TYPE_ORDERINGS.items():
        if all(points[a] < points[b] for a, b in zip(ordering, ordering[1:])):
            return type_id
    raise Degenerate(
        "division points do not match any type",
        details={name: value.format() for name, value in points.items()},
    )


def five_partition(gs: GluedSurface) -> FivePartition:
    """Refine the torus-1 street domains by the preimages of 1' and 2'."""
    points = gs.division_points()
    type_id = detect_type(points)

    dom1 = gs.streets1.domains(StreetOrder.GLUE)
    dom2 = gs.streets2.domains(StreetOrder.GLUE)
    shift1 = dict(zip(STREETS_IN_GLUE_ORDER, gs.eta12().shifts))
    shift2 = dict(zip(STREETS_IN_GLUE_ORDER, gs.eta21().shifts))

    pieces: List[Tuple[Interval, Label, Scalar]] = []
    for alpha in STREETS_IN_GLUE_ORDER:
        image = dom1[alpha].shift(shift1[alpha])
        for beta in STREETS_IN_GLUE_ORDER:
            common = image.intersect(dom2[beta])
            if common is not None:
                pieces.append(
                    (
                        common.shift(-shift1[alpha]),
                        (alpha, beta),
                        shift1[alpha] + shift2[beta],
                    )
                )
    if len(pieces) != 5:
        raise InvariantViolation(
            f"expected five sub-segments, found {len(pieces)}",
            details={"type": type_id.value},
        )
    # pieces arrive in domain order
    images = [dom.shift(s) for dom, _, s in pieces]
    order = sorted(
        range(5), key=cmp_to_key(lambda i, j: (images[i].lo - images[j].lo).sign())
    )
    ranks = [0] * 5
    for position, i in enumerate(order, start=1):
        ranks[i] = position
    for i, j in zip(order, order[1:]):
        if not images[i].hi <= images[j].lo:
            raise InvariantViolation("image pieces overlap")

    partition = FivePartition(
        type_id=type_id,
        sigma=tuple(ranks),
        tau=tuple(dom.length for dom, _, _ in pieces),
        labels=tuple(label for _, label, _ in pieces),
        domains=tuple(dom for dom, _, _ in pieces),
        shifts=tuple(s for _, _, s in pieces),
        image_points=tuple(
            (name, points[name]) for name in TYPE_ORDERINGS[type_id]
        ),
        metadata={"corrections": table_corrections(type_id)},
    )
    if partition.sigma_text != SIGMA_DERIVED[type_id]:
        raise InvariantViolation(
            f"permutation {partition.sigma_text} disagrees with type {type_id.value}",
            details={"sigma": partition.sigma_text},
        )
    if partition.label_text != LABELS_DERIVED[type_id]:
        raise InvariantViolation(
            f"labels {partition.label_text} disagree with type {type_id.value}"
        )
    if partition.metadata["corrections"]:
        logger.warning(
            "type %s: published table corrected (%s)",
            type_id.value,
            ", ".join(partition.metadata["corrections"]),
        )
    logger.debug("five partition type %s sigma %s", type_id.value, partition.sigma_text)
    return partition


def check_marginals(gs: GluedSurface, fp: FivePartition) -> List[str]:
    """Names of failed marginal laws (empty when both hold)."""
    zero = gs.torus1.zero()
    matrix = fp.measure_matrix(zero)
    failures = []
    widths1 = dict(zip((0, 1, 2), gs.streets1.widths))
    widths2 = dict(zip((0, 1, 2), gs.streets2.widths))
    for alpha in (1, 0, 2):
        row = sum((matrix[(alpha, beta)] for beta in (1, 0, 2)), zero)
        if row != widths1[alpha]:
            failures.append(f"row {alpha}")
    for beta in (1, 0, 2):
        col = sum((matrix[(alpha, beta)] for alpha in (1, 0, 2)), zero)
        if col != widths2[beta]:
            failures.append(f"column {beta}'")
    total = sum(fp.tau, zero)
    if total != gs.m:
        failures.append("total")
    return failures


@dataclass(frozen=True)
class BrokenIsometry:
    """Five-piece translation of the obstacle onto itself."""

    translation: PiecewiseTranslation

    @property
    def domains(self) -> Tuple[Interval, ...]:
        return self.translation.domains

    @property
    def shifts(self) -> Tuple[Scalar, ...]:
        return self.translation.shifts

    @property
    def images(self) -> Tuple[Interval, ...]:
        return self.translation.images

    def __len__(self) -> int:
        return len(self.translation)

    def apply(self, x: Scalar) -> Scalar:
        return self.translation.apply(x)

    def inverse(self) -> "BrokenIsometry":
        return BrokenIsometry(self.translation.inverse())


def broken_isometry_map(gs: GluedSurface) -> BrokenIsometry:
    """Composition of the torus-1 jump map with the torus-2 jump map."""
    composed = gs.eta12().then(gs.eta21())
    if len(composed) != 5:
        raise Degenerate(
            f"composition has {len(composed)} pieces instead of five",
            details={"pieces": len(composed)},
        )
    return BrokenIsometry(composed)


def _w(text: str) -> FreeWord:
    return FreeWord.parse(text, RANK4)


KAPPA = commutator(_w("a1"), _w("b1"))


def _phi_words() -> Dict[Label, FreeWord]:
    a1, b1, a2, b2 = _w("a1"), _w("b1"), _w("a2"), _w("b2")
    k = KAPPA
    ia2, ib2 = a2.inverse(), b2.inverse()
    return {
        (1, 1): a1 * k.inverse() * ia2,
        (1, 0): a1 * b1 * ia2,
        (1, 2): b1 * ia2,
        (0, 1): a1 * ib2 * ia2,
        (0, 0): a1 * b1 * k * ib2 * ia2,
        (0, 2): b1 * k * ib2 * ia2,
        (2, 1): a1 * ib2,
        (2, 0): a1 * b1 * k * ib2,
        (2, 2): b1 * k * ib2,
    }


PHI_WORDS: Dict[Label, FreeWord] = _phi_words()


@dataclass(frozen=True)
class PhiTable:
    """Homotopy classes of the two-street passes."""

    entries: Dict[Label, FreeWord]
    type_id: Optional[TopologyType]
    nonzero: Tuple[Label, ...]
    passes_excluded: Tuple[Tuple[str, ...], Tuple[str, ...]] = ((), ())

    def __getitem__(self, label: Label) -> FreeWord:
        return self.entries[label]

    def is_nonzero(self, label: Label) -> bool:
        return label in self.nonzero


def phi_table(gs: Optional[GluedSurface] = None) -> PhiTable:
    """The nine pass words; with a surface, also which have nonzero measure."""
    if gs is None:
        return PhiTable(entries=dict(PHI_WORDS), type_id=None, nonzero=())
    fp = five_partition(gs)
    return PhiTable(
        entries=dict(PHI_WORDS),
        type_id=fp.type_id,
        nonzero=fp.labels,
        passes_excluded=PASSES_EXCLUDED_PUBLISHED[fp.type_id],
    )
