"""Fixture tori and random generic instances shared by the test modules."""

import random
from fractions import Fraction
from typing import Callable, Dict, Optional, Tuple

from tcb_foliation.core.exact_field import QuadraticField
from tcb_foliation.core.genus2_glue import GluedSurface, TopologyType, glue
from tcb_foliation.core.torus_flow import FlowTorus
from tcb_foliation.errors import Degenerate

Q5 = QuadraticField(5)
Q2 = QuadraticField(2)


def golden_torus() -> FlowTorus:
    """(1, (sqrt5 - 1)/2, 9/10)."""
    return FlowTorus(Q5("1"), Q5("-1/2+1/2*sqrt(5)"), Q5("9/10"))


def second_torus() -> FlowTorus:
    """(1, sqrt5 - 2, 9/10)."""
    return FlowTorus(Q5("1"), Q5("-2+sqrt(5)"), Q5("9/10"))


def swapped_golden_torus() -> FlowTorus:
    """Golden torus with the cycle measures exchanged."""
    return FlowTorus(Q5("-1/2+1/2*sqrt(5)"), Q5("1"), Q5("9/10"))


def small_obstacle_torus() -> FlowTorus:
    """(1, sqrt2/2, 1/5)."""
    return FlowTorus(Q2("1"), Q2("1/2*sqrt(2)"), Q2("1/5"))


def wide_obstacle_torus() -> FlowTorus:
    """(1, sqrt2, 6/5)."""
    return FlowTorus(Q2("1"), Q2("sqrt(2)"), Q2("6/5"))


def obstacle_fraction(rng: random.Random) -> Fraction:
    """Non-integer rational obstacle measure in (0, 2)."""
    while True:
        value = Fraction(rng.randint(1, 39), 20)
        if value.denominator != 1:
            return value


def random_generic_torus(
    rng: random.Random, d: int, m: Optional[Fraction] = None
) -> FlowTorus:
    """Random torus over Q(sqrt d) with an irrational ratio of cycle measures."""
    field = QuadraticField(d)
    while True:
        a = field(rng.randint(1, 4))
        b = field(rng.randint(-3, 3), rng.randint(1, 3)) / rng.randint(1, 4)
        if b.sign() <= 0:
            continue
        if m is None:
            obstacle = (a + b) * rng.randint(1, 19) / 20
        else:
            obstacle = field(m)
        if obstacle < a + b:
            return FlowTorus(a, b, obstacle)


def random_glued(rng: random.Random, d: int = 5) -> GluedSurface:
    """Random generic glued surface; coincident division points are redrawn."""
    while True:
        m = obstacle_fraction(rng)
        try:
            return glue(random_generic_torus(rng, d, m), random_generic_torus(rng, d, m))
        except Degenerate:
            continue


# rows are f1, f2 in terms of e1, e2; all unimodular
REPRESENTATIVES = (
    ((1, 0), (0, 1)),
    ((1, 0), (1, 1)),
    ((1, 1), (0, 1)),
    ((2, 1), (1, 1)),
    ((0, 1), (1, 0)),
    ((1, -1), (0, 1)),
    ((3, 1), (-1, 0)),
)


def random_placement(rng: random.Random, d: int):
    """Random obstacle offset in the plane and lattice representative."""
    field = QuadraticField(d)
    x = field(Fraction(rng.randint(-60, 60), rng.randint(1, 13)), Fraction(rng.randint(-4, 4), 7))
    y = field(Fraction(rng.randint(-60, 60), rng.randint(1, 13)), Fraction(rng.randint(-4, 4), 5))
    return (x, y), rng.choice(REPRESENTATIVES)


def _simple_torus(a: str, b: str) -> FlowTorus:
    # both cycles shorter than the obstacle: a* = |a|, b* = |b|
    return FlowTorus(Q5(a), Q5(b), Q5("9/10"))


# one exact instance per type; points 3* = m - |b1|, 0* = |a1|, 1' = m - |a2|, 2' = |b2|
TYPE_TORI: Dict[TopologyType, Tuple[Callable[[], FlowTorus], Callable[[], FlowTorus]]] = {
    TopologyType.I: (golden_torus, second_torus),
    TopologyType.II: (
        lambda: _simple_torus("4/5", "1/4*sqrt(5)"),
        lambda: _simple_torus("1/3*sqrt(5)", "1/2"),
    ),
    TopologyType.III: (
        lambda: _simple_torus("1/2", "1/4*sqrt(5)"),
        lambda: _simple_torus("3/4", "1/3*sqrt(5)"),
    ),
    TopologyType.IV: (
        lambda: _simple_torus("4/5", "1/3*sqrt(5)"),
        lambda: _simple_torus("1/4*sqrt(5)", "1/2"),
    ),
    TopologyType.V: (
        lambda: _simple_torus("1/2", "1/3*sqrt(5)"),
        lambda: _simple_torus("1/4*sqrt(5)", "3/4"),
    ),
    TopologyType.VI: (golden_torus, golden_torus),
}


def typed_surface(type_id: TopologyType) -> GluedSurface:
    """Glued surface of the given type over Q(sqrt5) with m = 9/10."""
    first, second = TYPE_TORI[TopologyType(type_id)]
    return glue(first(), second())
