"""JSON instance files and result encoding.

Scalars are emitted as ``{"exact": "<scalar>", "approx": <float>}``; the
exact string is the contract, the float is advisory.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, Field, ValidationError

from ..core.building_data import (
    Branch,
    BuildingData,
    MorseTree,
    SegmentSystem,
    TorusData,
    TransitionMatrix,
    edge_key,
)
from ..core.coding import ClosedCurve, CodeWord
from ..core.exact_field import Scalar, parse_scalar
from ..core.genus2_glue import BrokenIsometry, FivePartition, PhiTable, format_label
from ..core.intervals import Interval, IntervalUnion
from ..core.torus_flow import EuclidResult, FlowTorus, StreetSet
from ..errors import InstanceFormatError


class TorusSpec(BaseModel):
    """One torus: cycle measures and, unless shared, the obstacle measure."""

    a: str = Field(description="Measure |a| as a scalar string")
    b: str = Field(description="Measure |b| as a scalar string")
    m: Optional[str] = Field(default=None, description="Obstacle measure")


class TorusInstance(BaseModel):
    d: int = Field(default=0, description="Radicand of the field Q(sqrt d)")
    torus: TorusSpec


class GluedInstance(BaseModel):
    d: int = Field(default=0, description="Radicand of the field Q(sqrt d)")
    m: str = Field(description="Shared obstacle measure")
    torus1: TorusSpec
    torus2: TorusSpec


class BranchSpec(BaseModel):
    path: List[str] = Field(description="Tree vertices, increasing in h")
    start: str
    end: str


class TreeSpec(BaseModel):
    vertices: Dict[str, str] = Field(description="Vertex id to h value")
    edges: List[List[str]]


class BuildingInstance(BaseModel):
    d: int = 0
    genus: int
    tree: TreeSpec
    branches: List[BranchSpec]
    tori: List[TorusSpec]
    cyclic_orders: Dict[str, List[int]] = Field(
        default_factory=dict,
        description="'u-v' edge to 1-based branch numbers in cyclic order",
    )
    cycle_type: Optional[List[int]] = None


class TransitionInstance(BaseModel):
    """Either all eight measures with A, or four free entries and the flux."""

    d: int = 0
    entries: Optional[Dict[str, str]] = None
    A: Optional[List[str]] = None
    free: Optional[Dict[str, str]] = None


def _read(path: Union[str, Path]) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InstanceFormatError(f"cannot read instance {path}: {e}") from e


def _validate(model: type, text: str) -> Any:
    try:
        return model.model_validate_json(text)
    except ValidationError as e:
        raise InstanceFormatError(
            f"malformed {model.__name__}",
            invariant="instance.schema",
            details={"errors": [err["msg"] for err in e.errors()]},
        ) from e


def _torus(spec: TorusSpec, d: int, m: Optional[str] = None) -> FlowTorus:
    obstacle = spec.m if spec.m is not None else m
    if obstacle is None:
        raise InstanceFormatError("torus has no obstacle measure", invariant="instance.m")
    return FlowTorus.from_text(spec.a, spec.b, obstacle, d)


def load_torus(path: Union[str, Path]) -> FlowTorus:
    instance = _validate(TorusInstance, _read(path))
    return _torus(instance.torus, instance.d)


def load_glued(path: Union[str, Path]) -> Tuple[FlowTorus, FlowTorus]:
    instance = _validate(GluedInstance, _read(path))
    return (
        _torus(instance.torus1, instance.d, instance.m),
        _torus(instance.torus2, instance.d, instance.m),
    )


def load_building_data(path: Union[str, Path]) -> BuildingData:
    instance = _validate(BuildingInstance, _read(path))
    d = instance.d

    def s(text: str) -> Scalar:
        return parse_scalar(text, d)

    for edge in instance.tree.edges:
        if len(edge) != 2:
            raise InstanceFormatError(f"edge {edge} needs two vertices")
    tree = MorseTree(
        values={name: s(value) for name, value in instance.tree.vertices.items()},
        edges=tuple((u, v) for u, v in instance.tree.edges),
    )
    orders = {}
    for key, order in instance.cyclic_orders.items():
        u, _, v = key.partition("-")
        orders[edge_key(u, v)] = tuple(j - 1 for j in order)
    branches = tuple(
        Branch(path=tuple(b.path), start_level=s(b.start), end_level=s(b.end))
        for b in instance.branches
    )
    tori = []
    for spec in instance.tori:
        if spec.m is None:
            raise InstanceFormatError("every torus needs its own m", invariant="instance.m")
        tori.append(TorusData(s(spec.a), s(spec.b), s(spec.m)))
    return BuildingData(
        genus=instance.genus,
        tree=tree,
        segments=SegmentSystem(branches=branches, cyclic_orders=orders),
        tori=tuple(tori),
        cycle_type=tuple(instance.cycle_type) if instance.cycle_type else None,
    )


TRANSITION_KEYS = ("m12", "m14", "m32", "m34", "m21", "m23", "m41", "m43")
FREE_KEYS = ("m12", "m23", "m34", "m41", "flux")


def load_transition_matrix(path: Union[str, Path]) -> TransitionMatrix:
    instance = _validate(TransitionInstance, _read(path))

    def s(text: str) -> Scalar:
        return parse_scalar(text, instance.d)

    if instance.free is not None:
        missing = [k for k in FREE_KEYS if k not in instance.free]
        if missing:
            raise InstanceFormatError(f"free entries missing: {missing}")
        return TransitionMatrix.from_free(*(s(instance.free[k]) for k in FREE_KEYS))
    if instance.entries is None or instance.A is None or len(instance.A) != 4:
        raise InstanceFormatError(
            "need 'free' or both 'entries' and four 'A' values",
            invariant="instance.schema",
        )
    missing = [k for k in TRANSITION_KEYS if k not in instance.entries]
    if missing:
        raise InstanceFormatError(f"transition entries missing: {missing}")
    return TransitionMatrix(
        **{k: s(instance.entries[k]) for k in TRANSITION_KEYS},
        A=tuple(s(a) for a in instance.A),
    )


def scalar(x: Scalar) -> Dict[str, Any]:
    return {"exact": x.format(), "approx": float(x)}


def scalars(xs: Sequence[Scalar]) -> List[Dict[str, Any]]:
    return [scalar(x) for x in xs]


def interval(iv: Interval) -> Dict[str, Any]:
    return {"lo": scalar(iv.lo), "hi": scalar(iv.hi)}


def interval_union(u: IntervalUnion) -> List[Dict[str, Any]]:
    return [interval(iv) for iv in u]


def encode_torus(t: FlowTorus) -> Dict[str, Any]:
    return {"d": t.d, "a": scalar(t.a_measure), "b": scalar(t.b_measure), "m": scalar(t.m)}


def encode_street_set(ss: StreetSet) -> Dict[str, Any]:
    p0, p1, p2 = ss.widths
    return {
        "torus": encode_torus(ss.torus),
        "widths": {"p0": scalar(p0), "p1": scalar(p1), "p2": scalar(p2)},
        "pairs": [list(pair) for pair in ss.pairs],
        "a_star": scalar(ss.a_star),
        "b_star": scalar(ss.b_star),
        "classes": {f"h{k}": list(c) for k, c in enumerate(ss.classes)},
        "translates": [list(t) for t in ss.translates],
    }


def encode_euclid(result: EuclidResult) -> Dict[str, Any]:
    return {
        "l": list(result.l_sequence),
        "base": scalars(result.base),
        "matrix": [list(row) for row in result.matrix],
        "swapped": result.swapped,
        "reconstructed": scalars(result.reconstruct()),
    }


def encode_partition(fp: FivePartition) -> Dict[str, Any]:
    return {
        "type": fp.type_id.value,
        "sigma": fp.sigma_text,
        "tau": scalars(fp.tau),
        "labels": list(fp.label_text),
        "domains": [interval(iv) for iv in fp.domains],
        "shifts": scalars(fp.shifts),
        "points": {name: scalar(value) for name, value in fp.image_points},
        "corrections": fp.metadata.get("corrections", {}),
    }


def encode_isometry(bi: BrokenIsometry) -> Dict[str, Any]:
    return {
        "pieces": [
            {"domain": interval(dom), "shift": scalar(shift), "image": interval(img)}
            for dom, shift, img in zip(bi.domains, bi.shifts, bi.images)
        ]
    }


def encode_phi_table(table: PhiTable) -> Dict[str, Any]:
    return {
        "type": table.type_id.value if table.type_id else None,
        "entries": {format_label(k): w.format() for k, w in sorted(table.entries.items())},
        "abelianized": {
            format_label(k): list(w.abelianize()) for k, w in sorted(table.entries.items())
        },
        "nonzero": [format_label(k) for k in table.nonzero],
        "passes_excluded": {
            "phi": list(table.passes_excluded[0]),
            "phi_star": list(table.passes_excluded[1]),
        },
    }


def encode_code_word(word: CodeWord) -> Dict[str, Any]:
    return {
        "word": word.format(),
        "labels": [format_label(label) for label in word.labels],
        "support": interval_union(word.support),
        "measure": scalar(word.measure),
        "shift": scalar(word.shift),
    }


def encode_closed_curve(curve: ClosedCurve) -> Dict[str, Any]:
    return {
        "word": curve.word.format(),
        "measure": scalar(curve.measure),
        "orientation": curve.orientation,
        "shift": scalar(curve.shift),
    }


def dumps(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=False, ensure_ascii=False)
