"""Per-torus arithmetic: minimal translates, the three streets, the
m-dependent basis and the m-cut Euclidean algorithm."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Tuple

from ..errors import Degenerate, InstanceFormatError, InvariantViolation, NonTerminating
from ..utils.logging import get_logger
from .exact_field import Scalar, parse_scalar
from .intervals import Interval, PiecewiseTranslation

logger = get_logger(__name__)

IntPair = Tuple[int, int]

DEFAULT_WALK_STEPS = 100_000
DEFAULT_EUCLID_ITERATIONS = 10_000


@dataclass(frozen=True)
class FlowTorus:
    """Torus with one obstacle: cycle measures |a|, |b| and obstacle measure m."""

    a_measure: Scalar
    b_measure: Scalar
    m: Scalar

    def __post_init__(self):
        self.a_measure + self.b_measure + self.m  # mixed radicands raise here
        if self.a_measure.sign() <= 0 or self.b_measure.sign() <= 0:
            raise InstanceFormatError(
                "cycle measures must be positive",
                invariant="torus.positive_measures",
                details={"a": str(self.a_measure), "b": str(self.b_measure)},
            )
        if self.m.sign() <= 0 or not self.m < self.a_measure + self.b_measure:
            raise InstanceFormatError(
                "obstacle measure must satisfy 0 < m < |a|+|b|",
                invariant="torus.obstacle_bound",
                details={"m": str(self.m)},
            )

    @property
    def d(self) -> int:
        return self.a_measure.d

    @classmethod
    def from_text(cls, a: str, b: str, m: str, d: int = 0) -> "FlowTorus":
        return cls(parse_scalar(a, d), parse_scalar(b, d), parse_scalar(m, d))

    def zero(self) -> Scalar:
        return self.m * 0

    def measure_of(self, p: int, q: int) -> Scalar:
        """Transversal measure of the class p[a] + q[b]."""
        return self.a_measure * p - self.b_measure * q

    def with_m(self, m: Scalar) -> "FlowTorus":
        return FlowTorus(self.a_measure, self.b_measure, m)


class StreetOrder(str, Enum):
    """Arrangement of the street domains along the obstacle."""

    UPWARD = "upward"  # domains of the upward first return: 2, 0, 1
    GLUE = "glue"  # domains in the glued picture: 1, 0, 2


@dataclass(frozen=True)
class StreetSet:
    """The three streets of a torus with obstacle."""

    torus: FlowTorus
    pairs: Tuple[IntPair, IntPair]
    a_star: Scalar
    b_star: Scalar
    widths: Tuple[Scalar, Scalar, Scalar]
    classes: Tuple[IntPair, IntPair, IntPair]
    metadata: Dict[str, str] = field(default_factory=dict, compare=False)

    @property
    def m(self) -> Scalar:
        return self.torus.m

    @property
    def basis_measures(self) -> Tuple[Scalar, Scalar]:
        return self.a_star, self.b_star

    @property
    def translates(self) -> Tuple[IntPair, IntPair, IntPair]:
        """Lattice translates of the upward flow along streets 0, 1, 2."""
        (u, v), (w, y) = self.pairs
        return (u + w, v + y), (u, v), (w, y)

    @property
    def matrix(self) -> Tuple[IntPair, IntPair]:
        """Rows are the translates of streets 1 and 2; determinant one."""
        return self.pairs

    def coordinates(self, p: int, q: int) -> IntPair:
        """Express the translate (p, q) over the street translates (u,v), (w,y)."""
        (u, v), (w, y) = self.pairs
        det = u * y - v * w
        alpha, rem_a = divmod(p * y - q * w, det)
        beta, rem_b = divmod(q * u - p * v, det)
        if rem_a or rem_b:
            raise InvariantViolation(f"translate ({p},{q}) is off the street lattice")
        return alpha, beta

    def domains(self, order: StreetOrder = StreetOrder.GLUE) -> Dict[int, Interval]:
        """Street index -> domain on the obstacle (0, m)."""
        p0, p1, p2 = self.widths
        zero = self.torus.zero()
        m = self.m
        if StreetOrder(order) is StreetOrder.UPWARD:
            return {
                2: Interval(zero, p2),
                0: Interval(p2, p2 + p0),
                1: Interval(p2 + p0, m),
            }
        return {
            1: Interval(zero, p1),
            0: Interval(p1, p1 + p0),
            2: Interval(p1 + p0, m),
        }

    def upward_return(self) -> PiecewiseTranslation:
        """First return to the obstacle following the flow."""
        dom = self.domains(StreetOrder.UPWARD)
        shifts = {0: self.b_star - self.a_star, 1: -self.a_star, 2: self.b_star}
        return PiecewiseTranslation.from_blocks(
            [dom[k] for k in (2, 0, 1)], [shifts[k] for k in (2, 0, 1)], merge=False
        )

    def glue_map(self) -> PiecewiseTranslation:
        """First return against the flow, the jump map of the glued picture."""
        dom = self.domains(StreetOrder.GLUE)
        shifts = {1: self.a_star, 0: self.a_star - self.b_star, 2: -self.b_star}
        return PiecewiseTranslation.from_blocks(
            [dom[k] for k in (1, 0, 2)], [shifts[k] for k in (1, 0, 2)], merge=False
        )


def _lower_pair(x: Scalar, y: Scalar, m: Scalar, max_steps: int) -> IntPair:
    """Least (u, v), u > 0 then v >= 0, with 0 < u*x - v*y < m.

    Walks the Stern-Brocot tree toward x/y; the left bounds visited are the
    best lower approximations, so the first one with remainder below m
    gives the least u.
    """
    lp, lq = 0, 1
    rp, rq = 1, 0
    remainder = x
    steps = 0
    while True:
        if remainder == m:
            raise Degenerate(
                f"translate ({lq},{lp}) lands exactly on the obstacle end",
                details={"u": lq, "v": lp},
            )
        if remainder < m:
            break
        steps += 1
        if steps > max_steps:
            raise NonTerminating(
                f"Stern-Brocot walk exceeded {max_steps} steps",
                details={"steps": max_steps},
            )
        mp_, mq = lp + rp, lq + rq
        cmp = (x * mq - y * mp_).sign()
        if cmp == 0:
            raise Degenerate(
                "ratio of cycle measures is rational",
                details={"ratio": f"{mp_}/{mq}"},
            )
        if cmp > 0:
            lp, lq = mp_, mq
            remainder = x * lq - y * lp
        else:
            rp, rq = mp_, mq

    # every v in [p - J, p] keeps the remainder inside (0, m)
    slack = (m - remainder) / y
    if slack == slack.floor():
        raise Degenerate(
            "a translate lands exactly on the obstacle end",
            details={"u": lq},
        )
    jump = slack.floor()
    return lq, max(0, lp - jump)


def minimal_pairs(
    t: FlowTorus, max_steps: int = DEFAULT_WALK_STEPS
) -> Tuple[IntPair, IntPair]:
    """Minimal non-negative pairs ((u, v), (w, y)) of a torus."""
    u, v = _lower_pair(t.a_measure, t.b_measure, t.m, max_steps)
    y, w = _lower_pair(t.b_measure, t.a_measure, t.m, max_steps)
    logger.debug("minimal pairs (%d,%d) (%d,%d)", u, v, w, y)
    return (u, v), (w, y)


def street_set(t: FlowTorus, max_steps: int = DEFAULT_WALK_STEPS) -> StreetSet:
    """Widths, basis measures and homology classes of the three streets."""
    (u, v), (w, y) = minimal_pairs(t, max_steps)
    a_star = t.measure_of(u, v)
    b_star = -t.measure_of(w, y)
    p0 = a_star + b_star - t.m
    p1 = t.m - a_star
    p2 = t.m - b_star
    for index, width in enumerate((p0, p1, p2)):
        if width.sign() <= 0:
            raise InvariantViolation(
                f"street {index} has non-positive width {width}",
                details={"street": index, "width": str(width)},
            )
    if u * y - v * w != 1:
        raise InvariantViolation(
            "street translates do not form a lattice basis",
            details={"pairs": [[u, v], [w, y]]},
        )
    h1 = (u, v)
    h2 = (-w, -y)
    h0 = (h1[0] + h2[0], h1[1] + h2[1])
    return StreetSet(
        torus=t,
        pairs=((u, v), (w, y)),
        a_star=a_star,
        b_star=b_star,
        widths=(p0, p1, p2),
        classes=(h0, h1, h2),
    )


@dataclass(frozen=True)
class EuclidResult:
    """Output of the m-cut Euclidean algorithm."""

    l_sequence: Tuple[int, ...]
    base: Tuple[Scalar, Scalar]
    swapped: bool

    @property
    def matrix(self) -> Tuple[IntPair, IntPair]:
        """Product T1^l1 T2^l2 ... mapping the base to the input pair."""
        a, b, c, d = 1, 0, 0, 1
        for index, power in enumerate(self.l_sequence):
            if index % 2 == 0:
                # right-multiply by [[1, power], [0, 1]]
                b, d = b + a * power, d + c * power
            else:
                # right-multiply by [[1, 0], [power, 1]]
                a, c = a + b * power, c + d * power
        return (a, b), (c, d)

    def reconstruct(self) -> Tuple[Scalar, Scalar]:
        (a, b), (c, d) = self.matrix
        x, y = self.base
        return x * a + y * b, x * c + y * d


def m_cut_euclid(
    A: Scalar, B: Scalar, m: Scalar, max_iterations: int = DEFAULT_EUCLID_ITERATIONS
) -> EuclidResult:
    """Truncated Euclidean descent of (A, B) relative to the obstacle measure m."""
    if A.sign() <= 0 or B.sign() <= 0 or m.sign() <= 0:
        raise InstanceFormatError("A, B and m must be positive", invariant="euclid.positive")
    if not A + B > m:
        raise InstanceFormatError("A + B must exceed m", invariant="euclid.bound")
    if A == B:
        raise Degenerate("A equals B", details={"A": str(A)})
    swapped = A < B
    if swapped:
        A, B = B, A

    def stopped(x: Scalar, y: Scalar) -> bool:
        if x + y == m or x == m or y == m:
            raise Degenerate("measure coincides with m", details={"A": str(x), "B": str(y)})
        return x + y > m and x < m and y < m

    powers: List[int] = []
    big, small = A, B
    for _ in range(max_iterations):
        if stopped(big, small):
            break
        bound = m if m > small else small
        ratio = (big - bound) / small
        if ratio.is_rational() and ratio.floor() == ratio:
            raise Degenerate(
                "exact boundary hit in the m-cut descent",
                details={"step": len(powers) + 1},
            )
        power = max(0, ratio.floor() + 1)
        reduced = big - small * power
        if reduced.is_zero():
            raise Degenerate("zero remainder: ratio is rational")
        powers.append(power)
        logger.debug("euclid step %d: l=%d", len(powers), power)
        big, small = small, reduced
    else:
        raise NonTerminating(
            f"m-cut descent did not stop within {max_iterations} steps",
            details={"iterations": max_iterations},
        )

    # big/small alternate between the A and B sides
    if len(powers) % 2 == 0:
        base = (big, small)
    else:
        base = (small, big)
    return EuclidResult(l_sequence=tuple(powers), base=base, swapped=swapped)


def continued_fraction(
    x: Scalar, y: Scalar, depth: int, require_generic: bool = False
) -> List[int]:
    """First ``depth`` partial quotients of x/y."""
    if depth < 1:
        raise InstanceFormatError("depth must be at least 1", invariant="cf.depth")
    if x.sign() <= 0 or y.sign() <= 0:
        raise InstanceFormatError("x and y must be positive", invariant="cf.positive")
    out: List[int] = []
    while len(out) < depth:
        q = (x / y).floor()
        out.append(q)
        r = x - y * q
        if r.is_zero():
            if require_generic and len(out) < depth:
                raise Degenerate(
                    "continued fraction terminated early",
                    details={"quotients": out},
                )
            break
        x, y = y, r
    return out


def cut_index_agrees(result: EuclidResult, quotients: List[int]) -> bool:
    """True when the m-cut powers match the continued fraction except the last."""
    l = list(result.l_sequence)
    if not l:
        return True
    if len(quotients) < len(l):
        return False
    return l[:-1] == quotients[: len(l) - 1] and l[-1] <= quotients[len(l) - 1]

