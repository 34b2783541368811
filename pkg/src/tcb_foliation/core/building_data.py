"""Building data of a genus-g foliation: a Morse tree on the sphere, the
one-point branches glued to the tori, and the torus data.

Validation is report-valued: every failed invariant is listed with its name.
"""

from collections import defaultdict, deque
from dataclasses import dataclass, field
from enum import Enum
from functools import cmp_to_key
from typing import Dict, List, Optional, Sequence, Set, Tuple

from pydantic import BaseModel, Field

from ..errors import ConservationViolated, GenusTooSmall, InvalidCensus
from ..utils.logging import get_logger
from .exact_field import Scalar
from .torus_flow import FlowTorus

logger = get_logger(__name__)

Edge = Tuple[str, str]


def edge_key(u: str, v: str) -> Edge:
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class MorseTree:
    """Tree of critical levels; ``values`` maps vertex id to h(Q)."""

    values: Dict[str, Scalar]
    edges: Tuple[Edge, ...]

    def adjacency(self) -> Dict[str, List[str]]:
        adj: Dict[str, List[str]] = {v: [] for v in self.values}
        for u, v in self.edges:
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
        return adj

    def degree(self, v: str) -> int:
        return len(self.adjacency().get(v, []))

    def leaves(self) -> List[str]:
        adj = self.adjacency()
        return sorted(v for v, ns in adj.items() if len(ns) == 1)

    def inner(self) -> List[str]:
        adj = self.adjacency()
        return sorted(v for v, ns in adj.items() if len(ns) == 3)

    def has_edge(self, u: str, v: str) -> bool:
        return edge_key(u, v) in {edge_key(a, b) for a, b in self.edges}


@dataclass(frozen=True)
class Branch:
    """One-point branch: a monotone tree path and the levels it spans."""

    path: Tuple[str, ...]
    start_level: Scalar
    end_level: Scalar

    @property
    def measure(self) -> Scalar:
        return self.end_level - self.start_level

    def edges(self) -> List[Edge]:
        return [edge_key(u, v) for u, v in zip(self.path, self.path[1:])]


@dataclass(frozen=True)
class TorusData:
    """Torus recipe (|a|, |b|, m) before validation."""

    a_measure: Scalar
    b_measure: Scalar
    m: Scalar

    def to_flow_torus(self) -> FlowTorus:
        return FlowTorus(self.a_measure, self.b_measure, self.m)


@dataclass(frozen=True)
class SegmentSystem:
    branches: Tuple[Branch, ...]
    # edge -> branch indices in cyclic order near the inner endpoint
    cyclic_orders: Dict[Edge, Tuple[int, ...]] = field(default_factory=dict)


@dataclass(frozen=True)
class BuildingData:
    genus: int
    tree: MorseTree
    segments: SegmentSystem
    tori: Tuple[TorusData, ...]
    cycle_type: Optional[Tuple[int, ...]] = None


class ReportStatus(str, Enum):
    VALID = "valid"
    INVALID = "invalid"


class Violation(BaseModel):
    """A failed building-data invariant."""

    invariant: str = Field(description="Machine name of the invariant")
    message: str = Field(description="Human readable explanation")
    subject: Optional[str] = Field(default=None, description="Vertex, edge or branch")


class BuildingReport(BaseModel):
    """Result of validating building data."""

    status: ReportStatus
    violations: List[Violation] = Field(default_factory=list)
    leaves: int = 0
    inner_vertices: int = 0

    @property
    def valid(self) -> bool:
        return self.status is ReportStatus.VALID

    def invariants(self) -> Set[str]:
        return {v.invariant for v in self.violations}


@dataclass(frozen=True)
class LevelRecord:
    """Branches present on an edge between two consecutive critical levels."""

    edge: Edge
    lo: Scalar
    hi: Scalar
    branches: Tuple[int, ...]


def _by_value(values: Dict[str, Scalar]):
    return cmp_to_key(lambda x, y: (values[x] - values[y]).sign())


def _oriented(tree: MorseTree, u: str, v: str) -> Tuple[str, str]:
    return (u, v) if tree.values[u] < tree.values[v] else (v, u)


def psi_profile(bd: BuildingData) -> List[LevelRecord]:
    """Discrete record of the set-valued profile along every edge."""
    tree = bd.tree
    records: List[LevelRecord] = []
    for u, v in tree.edges:
        if u not in tree.values or v not in tree.values:
            continue
        lo_v, hi_v = _oriented(tree, u, v)
        lo, hi = tree.values[lo_v], tree.values[hi_v]
        on_edge = [
            (j, b)
            for j, b in enumerate(bd.segments.branches)
            if edge_key(u, v) in b.edges()
        ]
        cuts = [lo, hi]
        for _, b in on_edge:
            for level in (b.start_level, b.end_level):
                if lo < level < hi and level not in cuts:
                    cuts.append(level)
        cuts.sort(key=cmp_to_key(lambda x, y: (x - y).sign()))
        for a, z in zip(cuts, cuts[1:]):
            present = tuple(
                j for j, b in on_edge if b.start_level <= a and z <= b.end_level
            )
            records.append(LevelRecord(edge_key(u, v), a, z, present))
    return records


def _check_tree(tree: MorseTree, out: List[Violation]) -> None:
    adj = tree.adjacency()
    for u, v in tree.edges:
        for w in (u, v):
            if w not in tree.values:
                out.append(
                    Violation(
                        invariant="tree.vertex",
                        message=f"edge endpoint {w} has no value",
                        subject=w,
                    )
                )
    if not tree.values:
        out.append(Violation(invariant="tree.connected", message="tree is empty"))
        return
    start = next(iter(tree.values))
    seen = {start}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for nxt in adj.get(cur, []):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    if seen != set(adj):
        out.append(
            Violation(
                invariant="tree.connected",
                message=f"{len(set(adj) - seen)} vertices unreachable",
            )
        )
    if len({edge_key(u, v) for u, v in tree.edges}) != len(adj) - 1:
        out.append(
            Violation(
                invariant="tree.acyclic",
                message=f"{len(tree.edges)} edges for {len(adj)} vertices",
            )
        )
    for vertex, neighbours in sorted(adj.items()):
        if len(neighbours) not in (1, 3):
            out.append(
                Violation(
                    invariant="tree.trivalent",
                    message=f"vertex {vertex} has degree {len(neighbours)}",
                    subject=vertex,
                )
            )
    names = sorted(tree.values)
    for i, a in enumerate(names):
        for b in names[i + 1 :]:
            if tree.values[a] == tree.values[b]:
                out.append(
                    Violation(
                        invariant="tree.distinct_values",
                        message=f"vertices {a} and {b} share value {tree.values[a]}",
                        subject=f"{a},{b}",
                    )
                )
    for vertex, neighbours in sorted(adj.items()):
        if len(neighbours) != 3 or vertex not in tree.values:
            continue
        levels = [tree.values[n] for n in neighbours if n in tree.values]
        h = tree.values[vertex]
        if not (any(x < h for x in levels) and any(x > h for x in levels)):
            out.append(
                Violation(
                    invariant="tree.inner_between",
                    message=f"inner vertex {vertex} is not between its neighbours",
                    subject=vertex,
                )
            )


def _check_branches(bd: BuildingData, out: List[Violation]) -> None:
    tree = bd.tree
    for j, branch in enumerate(bd.segments.branches):
        subject = f"branch {j + 1}"
        if branch.measure.sign() <= 0:
            out.append(
                Violation(
                    invariant="branch.positive_measure",
                    message=f"m_{j + 1} = {branch.measure} is not positive",
                    subject=subject,
                )
            )
        if len(branch.path) < 2 or any(v not in tree.values for v in branch.path):
            out.append(
                Violation(
                    invariant="branch.path",
                    message="path needs at least two known vertices",
                    subject=subject,
                )
            )
            continue
        if not all(tree.has_edge(u, v) for u, v in zip(branch.path, branch.path[1:])):
            out.append(
                Violation(
                    invariant="branch.path",
                    message="consecutive path vertices are not adjacent",
                    subject=subject,
                )
            )
        hs = [tree.values[v] for v in branch.path]
        if not all(a < b for a, b in zip(hs, hs[1:])):
            out.append(
                Violation(
                    invariant="branch.monotone",
                    message="path is not increasing in h",
                    subject=subject,
                )
            )
            continue
        if not (hs[0] <= branch.start_level < hs[1]) or not (
            hs[-2] < branch.end_level <= hs[-1]
        ):
            out.append(
                Violation(
                    invariant="branch.levels",
                    message="end levels lie outside the first or last edge",
                    subject=subject,
                )
            )


def _check_endpoints(bd: BuildingData, out: List[Violation]) -> None:
    tree = bd.tree
    leaves = set(tree.leaves())
    at_leaf: Dict[str, int] = defaultdict(int)
    free_levels: List[Tuple[Scalar, str]] = []
    for j, branch in enumerate(bd.segments.branches):
        if len(branch.path) < 2 or any(v not in tree.values for v in branch.path):
            continue
        for vertex, level in (
            (branch.path[0], branch.start_level),
            (branch.path[-1], branch.end_level),
        ):
            if vertex in leaves and level == tree.values[vertex]:
                at_leaf[vertex] += 1
            else:
                free_levels.append((level, f"branch {j + 1}"))
    for leaf in sorted(leaves):
        if at_leaf[leaf] != 2:
            out.append(
                Violation(
                    invariant="psi.leaf_endpoints",
                    message=f"leaf {leaf} carries {at_leaf[leaf]} branch ends, needs 2",
                    subject=leaf,
                )
            )
    vertex_levels = set(tree.values.values())
    for i, (level, who) in enumerate(free_levels):
        if level in vertex_levels:
            out.append(
                Violation(
                    invariant="psi.generic_endpoints",
                    message=f"{who} ends at a critical level {level}",
                    subject=who,
                )
            )
        for other, other_who in free_levels[i + 1 :]:
            if level == other:
                out.append(
                    Violation(
                        invariant="psi.generic_endpoints",
                        message=f"{who} and {other_who} end at the same level {level}",
                        subject=f"{who},{other_who}",
                    )
                )


def _check_profile(bd: BuildingData, out: List[Violation]) -> None:
    for record in psi_profile(bd):
        if not record.branches:
            out.append(
                Violation(
                    invariant="psi.nonempty",
                    message=f"no branch on edge {record.edge} between "
                    f"{record.lo} and {record.hi}",
                    subject="-".join(record.edge),
                )
            )


def _arc_count(order: Sequence[int], side: Dict[int, int]) -> int:
    marks = [side[j] for j in order if j in side]
    if not marks:
        return 0
    changes = sum(1 for a, b in zip(marks, marks[1:] + marks[:1]) if a != b)
    return max(changes, 1)


def _check_cyclic_orders(bd: BuildingData, out: List[Violation]) -> None:
    tree = bd.tree
    orders = bd.segments.cyclic_orders
    if not orders:
        return
    adj = tree.adjacency()
    for vertex in tree.inner():
        if vertex not in tree.values:
            continue
        h = tree.values[vertex]
        below = [n for n in adj[vertex] if n in tree.values and tree.values[n] < h]
        above = [n for n in adj[vertex] if n in tree.values and tree.values[n] > h]
        if len(below) == 1 and len(above) == 2:
            stem, forks = below[0], above
        elif len(above) == 1 and len(below) == 2:
            stem, forks = above[0], below
        else:
            continue
        key = edge_key(stem, vertex)
        if key not in orders:
            continue
        side: Dict[int, int] = {}
        for j, branch in enumerate(bd.segments.branches):
            path = branch.path
            if vertex not in path[1:-1]:
                continue
            i = path.index(vertex)
            for k, fork in enumerate(forks):
                if fork in (path[i - 1], path[i + 1]):
                    side[j] = k
        if _arc_count(orders[key], side) > 2:
            out.append(
                Violation(
                    invariant="psi.cyclic_order",
                    message=f"branches through {vertex} do not split into two arcs",
                    subject=vertex,
                )
            )


def _check_tori(bd: BuildingData, out: List[Violation]) -> None:
    branches = bd.segments.branches
    if not (len(branches) == bd.genus == len(bd.tori)):
        out.append(
            Violation(
                invariant="segments.count",
                message=f"genus {bd.genus}, {len(branches)} branches, "
                f"{len(bd.tori)} tori",
            )
        )
    for k, torus in enumerate(bd.tori):
        subject = f"torus {k + 1}"
        if not torus.a_measure + torus.b_measure > torus.m:
            out.append(
                Violation(
                    invariant="torus.obstacle_bound",
                    message="|a_k| + |b_k| must exceed m_k",
                    subject=subject,
                )
            )
        if torus.a_measure.sign() <= 0 or torus.b_measure.sign() <= 0:
            out.append(
                Violation(
                    invariant="torus.positive_measures",
                    message="cycle measures must be positive",
                    subject=subject,
                )
            )
        if k < len(branches) and torus.m != branches[k].measure:
            out.append(
                Violation(
                    invariant="torus.measure_match",
                    message=f"m_{k + 1} = {torus.m} differs from the branch "
                    f"measure {branches[k].measure}",
                    subject=subject,
                )
            )


def validate_building_data(bd: BuildingData) -> BuildingReport:
    """Check every building-data invariant and report all failures."""
    violations: List[Violation] = []
    _check_tree(bd.tree, violations)
    _check_branches(bd, violations)
    _check_endpoints(bd, violations)
    if not any(v.invariant.startswith("tree.") for v in violations):
        _check_profile(bd, violations)
        _check_cyclic_orders(bd, violations)
    _check_tori(bd, violations)
    logger.debug("building data: %d violations", len(violations))
    return BuildingReport(
        status=ReportStatus.INVALID if violations else ReportStatus.VALID,
        violations=violations,
        leaves=len(bd.tree.leaves()),
        inner_vertices=len(bd.tree.inner()),
    )


class FoliationClass(str, Enum):
    SIMPLE = "simple"
    RANK = "rank"
    MAXIMAL = "maximal"


class Classification(BaseModel):
    """Saddle census and class of a foliation."""

    genus: int
    t: int = Field(description="Leaves of the tree")
    r: int = Field(description="Inner vertices of the tree")
    boundary_saddles: int = Field(description="2g - 2t saddles of boundary type")
    foliation_class: FoliationClass
    minimal: bool = False
    cycle_type: Optional[List[int]] = None


def maximal_cycle_types(g: int) -> List[Tuple[int, ...]]:
    """Partitions of g/2: cycle structures of paired boundary saddles."""
    if g < 4 or g % 2:
        return []

    def partitions(n: int, largest: int) -> List[Tuple[int, ...]]:
        if n == 0:
            return [()]
        out = []
        for part in range(min(n, largest), 0, -1):
            out.extend((part,) + rest for rest in partitions(n - part, part))
        return out

    return partitions(g // 2, g // 2)


def classify_foliation(bd: BuildingData) -> Classification:
    """Census of saddles and the resulting foliation class."""
    g = bd.genus
    t = len(bd.tree.leaves())
    r = len(bd.tree.inner())
    if t - r != 2:
        raise InvalidCensus(
            f"tree has t={t} leaves and r={r} inner vertices; t - r must be 2",
            invariant="census.tree_identity",
            details={"t": t, "r": r},
        )
    boundary = 2 * g - 2 * t
    if boundary < 0 or r > g - 2:
        raise InvalidCensus(
            f"t={t}, r={r} cannot occur in genus {g}",
            details={"t": t, "r": r, "genus": g},
        )
    if r + t + boundary != 2 * g - 2:
        raise InvalidCensus("saddle count differs from 2g - 2", details={"genus": g})

    if t == 2 and r == 0:
        return Classification(
            genus=g,
            t=t,
            r=r,
            boundary_saddles=boundary,
            foliation_class=FoliationClass.SIMPLE,
            minimal=True,
        )
    if t == g and r == g - 2:
        if g % 2:
            raise InvalidCensus(
                f"maximal foliations exist only in even genus, got {g}",
                invariant="census.even_genus",
                details={"genus": g},
            )
        cycles = tuple(bd.cycle_type or ())
        if cycles not in maximal_cycle_types(g):
            raise InvalidCensus(
                f"cycle type {list(cycles)} is not a partition of {g // 2}",
                invariant="census.cycle_type",
                details={"cycle_type": list(cycles)},
            )
        return Classification(
            genus=g,
            t=t,
            r=r,
            boundary_saddles=boundary,
            foliation_class=FoliationClass.MAXIMAL,
            cycle_type=list(cycles),
        )
    return Classification(
        genus=g, t=t, r=r, boundary_saddles=boundary, foliation_class=FoliationClass.RANK
    )


class DiagramType(BaseModel):
    """Plane-diagram configuration of a minimal foliation."""

    name: str
    description: str
    cycles: List[int] = Field(description="Sizes of the linked groups of squares")
    disjoint_segments: int
    min_genus: int


def minimal_diagram_types(g: int) -> List[DiagramType]:
    """Admissible configurations of the plane diagram in genus g."""
    if g < 2:
        raise GenusTooSmall(f"genus {g} is below 2", details={"genus": g})
    out = [
        DiagramType(
            name="a",
            description="one 2-cycle and disjoint segments",
            cycles=[2],
            disjoint_segments=g - 2,
            min_genus=2,
        )
    ]
    if g >= 4:
        out.append(
            DiagramType(
                name="b",
                description="two pairs and disjoint segments",
                cycles=[2, 2],
                disjoint_segments=g - 4,
                min_genus=4,
            )
        )
    if g >= 3:
        out.append(
            DiagramType(
                name="c",
                description="one 3-chain and disjoint segments",
                cycles=[3],
                disjoint_segments=g - 3,
                min_genus=3,
            )
        )
    out.sort(key=lambda d: d.name)
    return out


@dataclass(frozen=True)
class TransitionMatrix:
    """Transition measures m_kl between the four squares of a maximal g=4 foliation.

    North transitions are m12, m14, m32, m34; south are m21, m23, m41, m43.
    """

    m12: Scalar
    m14: Scalar
    m32: Scalar
    m34: Scalar
    m21: Scalar
    m23: Scalar
    m41: Scalar
    m43: Scalar
    A: Tuple[Scalar, Scalar, Scalar, Scalar]

    @classmethod
    def from_free(
        cls, m12: Scalar, m23: Scalar, m34: Scalar, m41: Scalar, flux: Scalar
    ) -> "TransitionMatrix":
        """Solve the conservation identities from four free entries and the flux."""
        m21, m32, m43, m14 = m12 - flux, m23 - flux, m34 - flux, m41 - flux
        return cls(
            m12=m12,
            m14=m14,
            m32=m32,
            m34=m34,
            m21=m21,
            m23=m23,
            m41=m41,
            m43=m43,
            A=(m12 + m14, m12 + m32, m32 + m34, m14 + m34),
        )

    def entries(self) -> Dict[str, Scalar]:
        return {
            "m12": self.m12,
            "m14": self.m14,
            "m32": self.m32,
            "m34": self.m34,
            "m21": self.m21,
            "m23": self.m23,
            "m41": self.m41,
            "m43": self.m43,
        }


class RotationDirection(str, Enum):
    CLOCKWISE = "clockwise"
    CONTRCLOCKWISE = "contrclockwise"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class ConservationResult:
    flux: Scalar
    direction: RotationDirection


def check_conservation(tm: TransitionMatrix) -> ConservationResult:
    """Verify the conservation identities and return the flux."""
    a1, a2, a3, a4 = tm.A
    checks = {
        "A1 = m12 + m14": a1 == tm.m12 + tm.m14,
        "A1 = m21 + m41": a1 == tm.m21 + tm.m41,
        "A2 = m12 + m32": a2 == tm.m12 + tm.m32,
        "A2 = m21 + m23": a2 == tm.m21 + tm.m23,
        "A3 = m32 + m34": a3 == tm.m32 + tm.m34,
        "A3 = m23 + m43": a3 == tm.m23 + tm.m43,
        "A4 = m14 + m34": a4 == tm.m14 + tm.m34,
        "A4 = m41 + m43": a4 == tm.m41 + tm.m43,
        "A1 - A2 + A3 - A4 = 0": (a1 - a2 + a3 - a4).is_zero(),
    }
    flux = tm.m12 - tm.m21
    for name, value in (
        ("m23 - m32", tm.m23 - tm.m32),
        ("m34 - m43", tm.m34 - tm.m43),
        ("m41 - m14", tm.m41 - tm.m14),
    ):
        checks[f"flux m12 - m21 = {name}"] = value == flux
    for name, value in tm.entries().items():
        checks[f"{name} >= 0"] = value.sign() >= 0
    failing = [name for name, ok in checks.items() if not ok]
    if failing:
        raise ConservationViolated(
            f"{len(failing)} conservation identities fail",
            details={"failing": failing},
        )
    sign = flux.sign()
    if sign > 0:
        direction = RotationDirection.CLOCKWISE
    elif sign < 0:
        direction = RotationDirection.CONTRCLOCKWISE
    else:
        direction = RotationDirection.DEGENERATE
    return ConservationResult(flux=flux, direction=direction)


def genus2_building_data(t1: FlowTorus, t2: FlowTorus) -> BuildingData:
    """Minimal genus-2 data: one edge 0 - inf carrying both branches."""
    zero = t1.zero()
    m = t1.m
    tree = MorseTree(values={"0": zero, "inf": m}, edges=(("0", "inf"),))
    branches = (
        Branch(path=("0", "inf"), start_level=zero, end_level=m),
        Branch(path=("0", "inf"), start_level=zero, end_level=t2.m),
    )
    return BuildingData(
        genus=2,
        tree=tree,
        segments=SegmentSystem(branches=branches),
        tori=(
            TorusData(t1.a_measure, t1.b_measure, t1.m),
            TorusData(t2.a_measure, t2.b_measure, t2.m),
        ),
    )
