"""Brute-force geometric tracer on the universal cover.

The plane carries the vertical flow and the lattice spanned by
e1 = (|a|, 1) and e2 = (-|b|, 1). The obstacle is a horizontal segment of
length m at a placement offset, so the transversal measure is dx and a
translate (p, q) is reached after time p + q. Nothing here uses the
continued-fraction machinery of ``torus_flow``; the two are cross-checked.
"""

from dataclasses import dataclass
from functools import cmp_to_key
from typing import List, Optional, Tuple

from ..errors import (
    Degenerate,
    InstanceFormatError,
    InvariantViolation,
    MeasureMismatch,
    UnexpectedStreetCount,
    WindowExhausted,
)
from ..utils.logging import get_logger
from .exact_field import Scalar
from .genus2_glue import BrokenIsometry, GluedSurface
from .intervals import Interval, PiecewiseTranslation
from .torus_flow import FlowTorus, StreetSet

logger = get_logger(__name__)

IntPair = Tuple[int, int]
Representative = Tuple[IntPair, IntPair]

DEFAULT_INITIAL_WINDOW = 8
DEFAULT_WINDOW_CAP = 2**14

IDENTITY: Representative = ((1, 0), (0, 1))

_BY_VALUE = cmp_to_key(lambda x, y: (x - y).sign())


def _bezout(h1: int, h2: int) -> IntPair:
    """Integers (s, t) with s*h1 + t*h2 = gcd(h1, h2)."""
    old_r, r = h1, h2
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        k = old_r // r
        old_r, r = r, old_r - k * r
        old_s, s = s, old_s - k * s
        old_t, t = t, old_t - k * t
    if old_r < 0:
        return -old_s, -old_t
    return old_s, old_t


@dataclass(frozen=True)
class PlanarScene:
    """Lattice, flow and one obstacle copy in the plane.

    ``representative`` expresses the lattice basis (f1, f2) in terms of
    e1 = (|a|, 1) and e2 = (-|b|, 1): row i holds the coefficients of f_i.
    The obstacle's left end sits at ``offset``; translates are reported in
    (e1, e2) coordinates whatever the representative.
    """

    torus: FlowTorus
    offset: Tuple[Scalar, Scalar]
    representative: Representative = IDENTITY

    def __post_init__(self):
        (m00, m01), (m10, m11) = self.representative
        if abs(m00 * m11 - m01 * m10) != 1:
            raise InstanceFormatError(
                "lattice representative must be unimodular",
                invariant="oracle.representative",
                details={"representative": [list(row) for row in self.representative]},
            )

    @classmethod
    def of(
        cls,
        torus: FlowTorus,
        offset: Optional[Tuple[Scalar, Scalar]] = None,
        representative: Representative = IDENTITY,
    ) -> "PlanarScene":
        zero = torus.zero()
        return cls(torus, offset if offset is not None else (zero, zero), representative)

    @property
    def m(self) -> Scalar:
        return self.torus.m

    @property
    def basis(self) -> Tuple[Tuple[Scalar, int], Tuple[Scalar, int]]:
        """The vectors f1, f2 as (x, height)."""
        a, b = self.torus.a_measure, self.torus.b_measure
        (m00, m01), (m10, m11) = self.representative
        return (a * m00 - b * m01, m00 + m01), (a * m10 - b * m11, m10 + m11)

    def canonical(self, p: int, q: int) -> IntPair:
        """(e1, e2) coordinates of p*f1 + q*f2."""
        (m00, m01), (m10, m11) = self.representative
        return p * m00 + q * m10, p * m01 + q * m11

    def copy_origin(self, p: int, q: int) -> Tuple[Scalar, Scalar]:
        """Absolute left end of the obstacle copy translated by p*f1 + q*f2."""
        (x1, h1), (x2, h2) = self.basis
        ox, oy = self.offset
        return ox + x1 * p + x2 * q, oy + h1 * p + h2 * q

    def copies_at(self, height: int, lo: Scalar, hi: Scalar) -> List[Tuple[IntPair, Scalar]]:
        """Copies ``height`` levels above the obstacle whose left end lies in [lo, hi).

        Returns (translate in f coordinates, absolute x of the left end),
        left to right.
        """
        (x1, h1), (x2, h2) = self.basis
        s, t = _bezout(h1, h2)
        p0, q0 = s * height, t * height
        # (p0 + k*h2, q0 - k*h1) runs over every copy at this height
        step = x1 * h2 - x2 * h1
        period = step if step.sign() > 0 else -step
        direction = 1 if step.sign() > 0 else -1
        base = self.copy_origin(p0, q0)[0]
        j = ((lo - base) / period).floor()
        out: List[Tuple[IntPair, Scalar]] = []
        start = base + period * j
        while start < hi:
            if start >= lo:
                k = direction * j
                out.append(((p0 + k * h2, q0 - k * h1), start))
            j += 1
            start = start + period
        return out


@dataclass(frozen=True)
class FirstHit:
    translate: IntPair
    landing: Scalar
    time: int


def _hit_at_height(scene: PlanarScene, x: Scalar, height: int) -> Optional[FirstHit]:
    ox, oy = scene.offset
    target = ox + x
    m = scene.m
    for (p, q), start in scene.copies_at(height, target - m, target + m):
        landing = target - start
        translate = scene.canonical(p, q)
        if landing.is_zero() or landing == m:
            raise Degenerate(
                f"trajectory from {x} hits an obstacle end",
                invariant="oracle.separatrix",
                details={"x": x.format(), "translate": list(translate)},
            )
        if landing.sign() > 0 and landing < m:
            rise = scene.copy_origin(p, q)[1] - oy
            return FirstHit(translate, landing, abs(rise.floor()))
    return None


def first_hit(
    scene: PlanarScene,
    x: Scalar,
    reverse: bool = False,
    initial_window: int = DEFAULT_INITIAL_WINDOW,
    window_cap: int = DEFAULT_WINDOW_CAP,
) -> FirstHit:
    """First obstacle copy met by the trajectory leaving the obstacle at x."""
    if not (x.sign() > 0 and x < scene.m):
        raise InstanceFormatError(
            f"start point {x} is not inside the obstacle", invariant="oracle.inside"
        )
    direction = -1 if reverse else 1
    window = initial_window
    height = 0
    while True:
        height += 1
        if height > window:
            if window >= window_cap:
                raise WindowExhausted(
                    f"no obstacle copy within {window_cap} steps",
                    details={"x": x.format(), "cap": window_cap},
                )
            window = min(2 * window, window_cap)
            logger.debug("first hit window doubled to %d", window)
        hit = _hit_at_height(scene, x, direction * height)
        if hit is not None:
            return hit


def _break_candidates(scene: PlanarScene, horizon: int, reverse: bool) -> List[Scalar]:
    """Ends of all copies up to the horizon, as seen from the obstacle."""
    m = scene.m
    ox = scene.offset[0]
    zero = scene.torus.zero()
    out: List[Scalar] = []
    direction = -1 if reverse else 1
    for h in range(1, horizon + 1):
        for _, start in scene.copies_at(direction * h, ox - m, ox + m):
            start = start - ox
            for point in (start, start + m):
                if zero < point < m and point not in out:
                    out.append(point)
    out.sort(key=_BY_VALUE)
    return out


@dataclass(frozen=True)
class TracedPiece:
    domain: Interval
    hit: FirstHit

    @property
    def shift(self) -> Scalar:
        return self.hit.landing - self.domain.midpoint()


def _constancy_pieces(
    scene: PlanarScene,
    reverse: bool,
    initial_window: int,
    window_cap: int,
) -> List[TracedPiece]:
    zero, m = scene.torus.zero(), scene.m

    def trace(x: Scalar) -> FirstHit:
        return first_hit(scene, x, reverse, initial_window, window_cap)

    horizon = trace(m / 2).time
    while True:
        cuts = [zero] + _break_candidates(scene, horizon, reverse) + [m]
        pieces = []
        for lo, hi in zip(cuts, cuts[1:]):
            domain = Interval(lo, hi)
            pieces.append(TracedPiece(domain, trace(domain.midpoint())))
        top = max(piece.hit.time for piece in pieces)
        if top <= horizon:
            break
        logger.debug("tracing horizon raised from %d to %d", horizon, top)
        horizon = top

    merged: List[TracedPiece] = []
    for piece in pieces:
        if merged and merged[-1].hit.translate == piece.hit.translate:
            last = merged[-1]
            domain = Interval(last.domain.lo, piece.domain.hi)
            merged[-1] = TracedPiece(domain, trace(domain.midpoint()))
        else:
            merged.append(piece)
    return merged


def first_return_by_tracing(
    scene: PlanarScene,
    reverse: bool = False,
    initial_window: int = DEFAULT_INITIAL_WINDOW,
    window_cap: int = DEFAULT_WINDOW_CAP,
) -> PiecewiseTranslation:
    """First return to the obstacle, with or against the flow."""
    pieces = _constancy_pieces(scene, reverse, initial_window, window_cap)
    return PiecewiseTranslation.from_blocks(
        [piece.domain for piece in pieces],
        [piece.shift for piece in pieces],
        merge=False,
    )


def streets_by_tracing(
    scene: PlanarScene,
    initial_window: int = DEFAULT_INITIAL_WINDOW,
    window_cap: int = DEFAULT_WINDOW_CAP,
) -> StreetSet:
    """The streets of a torus read off from traced first hits."""
    pieces = _constancy_pieces(scene, False, initial_window, window_cap)
    if len(pieces) != 3:
        raise UnexpectedStreetCount(
            f"traced {len(pieces)} streets instead of three",
            details={"streets": len(pieces)},
        )
    for piece in pieces:
        if piece.shift.is_zero():
            raise Degenerate(
                f"street with translate {piece.hit.translate} is a closed leaf",
                details={"translate": list(piece.hit.translate)},
            )
    # longest return first, then the positive-measure translate
    by_time = sorted(pieces, key=lambda piece: -piece.hit.time)
    street0 = by_time[0]
    rest = by_time[1:]
    street1 = [piece for piece in rest if piece.shift.sign() < 0]
    street2 = [piece for piece in rest if piece.shift.sign() > 0]
    if len(street1) != 1 or len(street2) != 1:
        raise InvariantViolation("traced streets do not split into both directions")
    s1, s2 = street1[0], street2[0]
    if [piece.domain for piece in pieces] != [s2.domain, street0.domain, s1.domain]:
        raise InvariantViolation("traced streets are not in the order 2, 0, 1")
    (u, v), (w, y) = s1.hit.translate, s2.hit.translate
    if street0.hit.translate != (u + w, v + y):
        raise InvariantViolation("street 0 translate is not the sum of the others")
    if u * y - v * w != 1:
        raise InvariantViolation("traced translates do not form a lattice basis")
    h1, h2 = (u, v), (-w, -y)
    return StreetSet(
        torus=scene.torus,
        pairs=((u, v), (w, y)),
        a_star=-s1.shift,
        b_star=s2.shift,
        widths=(street0.domain.length, s1.domain.length, s2.domain.length),
        classes=((h1[0] + h2[0], h1[1] + h2[1]), h1, h2),
        metadata={"source": "tracing"},
    )


def exhaustive_minimal_pairs(torus: FlowTorus, bound: int) -> Tuple[IntPair, IntPair]:
    """Minimal pairs by box search: least u then least v, least y then least w."""

    def search(x: Scalar, z: Scalar) -> IntPair:
        for first in range(1, bound + 1):
            for second in range(0, bound + 1):
                value = x * first - z * second
                if value.is_zero() or value == torus.m:
                    raise Degenerate(
                        "a translate lands exactly on the obstacle end",
                        details={"pair": [first, second]},
                    )
                if value.sign() > 0 and value < torus.m:
                    return first, second
        raise WindowExhausted(
            f"no minimal pair within the box of size {bound}",
            details={"bound": bound},
        )

    u, v = search(torus.a_measure, torus.b_measure)
    y, w = search(torus.b_measure, torus.a_measure)
    return (u, v), (w, y)


@dataclass(frozen=True)
class GluedScene:
    scene1: PlanarScene
    scene2: PlanarScene

    @classmethod
    def of(cls, gs: GluedSurface) -> "GluedScene":
        return cls(PlanarScene.of(gs.torus1), PlanarScene.of(gs.torus2))


def induced_map_by_tracing(
    scene1: PlanarScene,
    scene2: PlanarScene,
    initial_window: int = DEFAULT_INITIAL_WINDOW,
    window_cap: int = DEFAULT_WINDOW_CAP,
) -> BrokenIsometry:
    """Trace against the flow through torus 1, then torus 2."""
    if scene1.m != scene2.m:
        raise MeasureMismatch(
            f"obstacle measures differ: {scene1.m} and {scene2.m}",
            details={"m1": scene1.m.format(), "m2": scene2.m.format()},
        )
    eta12 = first_return_by_tracing(scene1, True, initial_window, window_cap)
    eta21 = first_return_by_tracing(scene2, True, initial_window, window_cap)
    composed = eta12.then(eta21)
    if len(composed) != 5:
        raise Degenerate(
            f"traced composition has {len(composed)} pieces",
            details={"pieces": len(composed)},
        )
    return BrokenIsometry(composed)


@dataclass(frozen=True)
class Trajectory:
    """Symbols in time order, per-step translates (torus 1 then torus 2) and points."""

    symbols: Tuple[int, ...]
    translates: Tuple[Tuple[int, int, int, int], ...]
    points: Tuple[Scalar, ...]


def trace_trajectory(
    scene: GluedScene,
    x: Scalar,
    steps: int,
    initial_window: int = DEFAULT_INITIAL_WINDOW,
    window_cap: int = DEFAULT_WINDOW_CAP,
) -> Trajectory:
    """Follow the glued flow for ``steps`` returns to the obstacle."""
    if steps < 1:
        raise InstanceFormatError("steps must be at least 1", invariant="oracle.steps")
    pieces = induced_map_by_tracing(
        scene.scene1, scene.scene2, initial_window, window_cap
    ).translation
    symbols: List[int] = []
    translates: List[Tuple[int, int, int, int]] = []
    points = [x]
    for _ in range(steps):
        symbols.append(pieces.piece_index(x) + 1)
        hit1 = first_hit(scene.scene1, x, True, initial_window, window_cap)
        hit2 = first_hit(scene.scene2, hit1.landing, True, initial_window, window_cap)
        if hit2.landing != pieces.apply(x):
            raise InvariantViolation("traced step disagrees with the induced map")
        translates.append(hit1.translate + hit2.translate)
        x = hit2.landing
        points.append(x)
    return Trajectory(tuple(symbols), tuple(translates), tuple(points))
