"""Command-line interface for the foliation toolkit."""

import functools
import random
import sys
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Tuple

import click

from . import __version__
from .core import building_data as bd_mod
from .core.coding import (
    CodingSemigroup,
    closed_curve_of_word,
    homology_of_translates,
    orbit_word,
    parse_symbols,
    represent_homology,
    represent_pi1,
    sum_vectors,
)
from .core.exact_field import Scalar, parse_scalar
from .core.genus2_glue import (
    broken_isometry_map,
    check_marginals,
    five_partition,
    glue,
    phi_table,
)
from .core.oracle import (
    GluedScene,
    PlanarScene,
    exhaustive_minimal_pairs,
    induced_map_by_tracing,
    streets_by_tracing,
    trace_trajectory,
)
from .core.torus_flow import (
    FlowTorus,
    continued_fraction,
    cut_index_agrees,
    m_cut_euclid,
    minimal_pairs,
    street_set,
)
from .core.word_algebra import (
    KAPPA_RANK2,
    MatrixWord,
    TcbPair,
    conjugate_orbit,
    lift_T,
    random_matrix_word,
    simple_curve_word,
)
from .errors import FoliationError
from .interface import serialize as ser
from .interface.display import display
from .interface.render import RenderKind, render
from .utils.config import config_manager
from .utils.logging import get_logger, setup_logging

logger = get_logger(__name__)


class ScalarParam(click.ParamType):
    """Scalar text such as ``-1/2+1/2*sqrt(5)``; bad syntax is a usage error."""

    name = "scalar"

    def convert(self, value, param, ctx):
        if isinstance(value, Scalar):
            return value
        try:
            return parse_scalar(value)
        except FoliationError as e:
            self.fail(f"{value!r}: {e.message}", param, ctx)


SCALAR = ScalarParam()


def _in_field(d: int, *values: Scalar) -> Tuple[Scalar, ...]:
    """Move radical-free values into Q(sqrt d); mixed radicands raise."""
    if not d:
        d = next((v.d for v in values if not v.is_rational()), 0)
    out = []
    for value in values:
        if value.is_rational() and value.d != d:
            value = value.with_radicand(d)
        out.append(value)
    if out:
        functools.reduce(lambda x, y: x + y, out)
    return tuple(out)


def _primed(text: str) -> str:
    return text.replace("ap", "a'").replace("bp", "b'")


def _emit(payload: Dict[str, Any], pretty: Optional[Callable[[], None]] = None) -> None:
    ctx = click.get_current_context()
    opts = ctx.find_root().obj
    if opts["output"]:
        Path(opts["output"]).write_text(ser.dumps(payload) + "\n", encoding="utf-8")
        return
    if opts["pretty"]:
        if pretty is not None:
            pretty()
        else:
            display.print_tree(payload, title=ctx.info_name)
        return
    click.echo(ser.dumps(payload))


def domain_command(func: Callable) -> Callable:
    """Map domain errors to exit status 1 with the error JSON on stdout."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except FoliationError as e:
            logger.debug("domain error %s", e.invariant)
            click.echo(ser.dumps(e.to_dict()))
            if click.get_current_context().find_root().obj.get("pretty"):
                display.print_error(e.message, f"invariant: {e.invariant}")
            sys.exit(1)

    return wrapper


def torus_options(func: Callable) -> Callable:
    options = [
        click.option("--instance", "-i", type=click.Path(exists=True, dir_okay=False),
                     help="JSON torus instance"),
        click.option("-d", "d", type=int, default=0, show_default=True,
                     help="Radicand of Q(sqrt d)"),
        click.option("--a", "a", type=SCALAR, help="Measure |a|"),
        click.option("--b", "b", type=SCALAR, help="Measure |b|"),
        click.option("--m", "m", type=SCALAR, help="Obstacle measure m"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _torus(instance, d, a, b, m) -> FlowTorus:
    if instance:
        return ser.load_torus(instance)
    if a is None or b is None or m is None:
        raise click.UsageError("give --instance or all of --a, --b, --m")
    return FlowTorus(*_in_field(d, a, b, m))


def glued_options(func: Callable) -> Callable:
    options = [
        click.option("--instance", "-i", type=click.Path(exists=True, dir_okay=False),
                     help="JSON glued instance"),
        click.option("-d", "d", type=int, default=0, show_default=True,
                     help="Radicand of Q(sqrt d)"),
        click.option("--m", "m", type=SCALAR, help="Shared obstacle measure"),
        click.option("--a1", type=SCALAR, help="|a| of torus 1"),
        click.option("--b1", type=SCALAR, help="|b| of torus 1"),
        click.option("--a2", type=SCALAR, help="|a| of torus 2"),
        click.option("--b2", type=SCALAR, help="|b| of torus 2"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _tori(glued: Dict[str, Any]) -> Tuple[FlowTorus, FlowTorus]:
    if glued.get("instance"):
        return ser.load_glued(glued["instance"])
    names = ("m", "a1", "b1", "a2", "b2")
    if any(glued.get(name) is None for name in names):
        raise click.UsageError("give --instance or all of --m, --a1, --b1, --a2, --b2")
    m, a1, b1, a2, b2 = _in_field(glued.get("d") or 0, *(glued[name] for name in names))
    return FlowTorus(a1, b1, m), FlowTorus(a2, b2, m)


def _glued(glued: Dict[str, Any]):
    t1, t2 = _tori(glued)
    return glue(t1, t2, config_manager.config.euclid.stern_brocot_steps)


@click.group()
@click.version_option(version=__version__)
@click.option("--verbose", "-v", is_flag=True, help="Enable debug logging")
@click.option("--pretty", is_flag=True, help="Rich tables instead of JSON")
@click.option("--output", "-o", type=click.Path(dir_okay=False), help="Write JSON to a file")
@click.pass_context
def cli(ctx, verbose, pretty, output):
    """Foliations glued from tori with an obstacle."""
    config = config_manager.config
    setup_logging("DEBUG" if verbose or config.verbose else config.log_level)
    ctx.obj = {"pretty": pretty, "output": output}


@cli.command()
@torus_options
@click.option("--oracle", is_flag=True, help="Trace the streets geometrically")
@domain_command
def streets(instance, d, a, b, m, oracle):
    """Widths, translates and classes of the three streets."""
    torus = _torus(instance, d, a, b, m)
    if oracle:
        window = config_manager.config.oracle
        ss = streets_by_tracing(PlanarScene.of(torus), window.initial_window, window.window_cap)
    else:
        ss = street_set(torus, config_manager.config.euclid.stern_brocot_steps)
    _emit(ser.encode_street_set(ss), lambda: display.print_street_set(ss))


@cli.command()
@torus_options
@click.option("--exhaustive", type=int, default=0, help="Also box-search pairs up to this bound")
@domain_command
def basis(instance, d, a, b, m, exhaustive):
    """Minimal pairs and the m-dependent basis (a*, b*)."""
    torus = _torus(instance, d, a, b, m)
    pairs = minimal_pairs(torus, config_manager.config.euclid.stern_brocot_steps)
    (u, v), (w, y) = pairs
    payload: Dict[str, Any] = {
        "pairs": [[u, v], [w, y]],
        "a_star": ser.scalar(torus.measure_of(u, v)),
        "b_star": ser.scalar(-torus.measure_of(w, y)),
        "determinant": u * y - v * w,
    }
    if exhaustive:
        box = exhaustive_minimal_pairs(torus, exhaustive)
        payload["exhaustive"] = [list(p) for p in box]
        payload["agree"] = box == pairs
    _emit(payload)


@cli.command()
@click.option("-d", "d", type=int, default=0, show_default=True, help="Radicand of Q(sqrt d)")
@click.option("--A", "A", type=SCALAR, required=True, help="First measure")
@click.option("--B", "B", type=SCALAR, required=True, help="Second measure")
@click.option("--m", "m", type=SCALAR, required=True, help="Obstacle measure")
@domain_command
def euclid(d, A, B, m):
    """m-cut Euclidean descent of (A, B)."""
    A, B, m = _in_field(d, A, B, m)
    result = m_cut_euclid(A, B, m, config_manager.config.euclid.max_iterations)
    payload = ser.encode_euclid(result)
    payload["word"] = MatrixWord(
        tuple(
            ("T1" if i % 2 == 0 else "T2", power)
            for i, power in enumerate(result.l_sequence)
            if power
        )
    ).format()
    big, small = (A, B) if A > B else (B, A)
    quotients = continued_fraction(big, small, len(result.l_sequence) + 1)
    payload["continued_fraction"] = quotients
    payload["cut_index_agrees"] = cut_index_agrees(result, quotients)
    _emit(payload)


@cli.command()
@click.option("-d", "d", type=int, default=0, show_default=True, help="Radicand of Q(sqrt d)")
@click.option("--x", "x", type=SCALAR, required=True)
@click.option("--y", "y", type=SCALAR, required=True)
@click.option("--depth", type=click.IntRange(min=1), default=10, show_default=True)
@domain_command
def cf(d, x, y, depth):
    """Partial quotients of x/y."""
    x, y = _in_field(d, x, y)
    _emit({"quotients": continued_fraction(x, y, depth)})


@cli.command(name="glue")
@glued_options
@domain_command
def glue_command(**glued):
    """Glue two tori and report both street sets and the division points."""
    gs = _glued(glued)
    _emit(
        {
            "m": ser.scalar(gs.m),
            "streets1": ser.encode_street_set(gs.streets1),
            "streets2": ser.encode_street_set(gs.streets2),
            "points": {k: ser.scalar(v) for k, v in gs.division_points().items()},
        }
    )


@cli.command()
@glued_options
@domain_command
def partition(**glued):
    """Five-interval partition, type, permutation and labels."""
    gs = _glued(glued)
    fp = five_partition(gs)
    payload = ser.encode_partition(fp)
    payload["marginal_failures"] = check_marginals(gs, fp)
    _emit(payload, lambda: display.print_partition(fp))


@cli.command()
@glued_options
@click.option("--oracle", is_flag=True, help="Also trace the map and compare")
@domain_command
def isometry(oracle, **glued):
    """The broken isometry as five translation pieces."""
    gs = _glued(glued)
    bi = broken_isometry_map(gs)
    payload = ser.encode_isometry(bi)
    if oracle:
        window = config_manager.config.oracle
        scene = GluedScene.of(gs)
        traced = induced_map_by_tracing(
            scene.scene1, scene.scene2, window.initial_window, window.window_cap
        )
        payload["oracle_agrees"] = traced == bi
    _emit(payload)


@cli.command()
@glued_options
@domain_command
def phi(**glued):
    """Homotopy words of the nine two-street passes."""
    given = glued["instance"] or any(glued[k] is not None for k in ("m", "a1", "b1", "a2", "b2"))
    gs = _glued(glued) if given else None
    _emit(ser.encode_phi_table(phi_table(gs)))


@cli.command()
@glued_options
@click.option("--depth", type=click.IntRange(min=1), default=4, show_default=True,
              help="Check the measure partition for lengths 1..depth")
@click.option("--word", help="Code word such as R1R4R2")
@domain_command
def code(depth, word, **glued):
    """Coding semigroup: partition ledger and, optionally, one word."""
    gs = _glued(glued)
    fp = five_partition(gs)
    semigroup = CodingSemigroup(broken_isometry_map(gs), fp)
    caps = config_manager.config.enumeration
    ledger = []
    for n in range(1, depth + 1):
        words = semigroup.nonzero_words(n, caps.max_depth, caps.max_words)
        total = sum((w.measure for w in words), gs.m * 0)
        ledger.append(
            {"length": n, "nonzero": len(words), "total": ser.scalar(total), "exact": total == gs.m}
        )
    payload: Dict[str, Any] = {"type": fp.type_id.value, "ledger": ledger}
    if word:
        cw = semigroup.support(parse_symbols(word))
        detail = ser.encode_code_word(cw)
        if not cw.is_zero():
            table = phi_table(gs)
            detail["pi1"] = represent_pi1(cw, table).format()
            detail["homology"] = list(represent_homology(cw, table))
            if not cw.shift.is_zero():
                detail["closed_curve"] = ser.encode_closed_curve(closed_curve_of_word(cw, table))
        payload["word"] = detail
    _emit(payload)


@cli.command()
@glued_options
@click.option("--len", "length", type=click.IntRange(min=1), required=True)
@domain_command
def words(length, **glued):
    """All nonzero code words of one length."""
    gs = _glued(glued)
    semigroup = CodingSemigroup(broken_isometry_map(gs), five_partition(gs))
    caps = config_manager.config.enumeration
    found = semigroup.nonzero_words(length, caps.max_depth, caps.max_words)
    _emit({"length": length, "count": len(found), "words": [ser.encode_code_word(w) for w in found]})


@cli.command(name="simple-curve")
@click.argument("k", type=int)
@click.argument("l", type=int)
@domain_command
def simple_curve(k, l):
    """Word of the simple transversal curve in class k[a'] + l[b']."""
    w = simple_curve_word(k, l)
    _emit(
        {
            "class": [k, l],
            "word": _primed(w.format()),
            "rotations": [_primed(r.format()) for r in w.rotations()],
            "abelianized": list(w.abelianize()),
        }
    )


@cli.command()
@click.option("--word", "word_text", required=True, help="Matrix word such as T1,T2^3")
@click.option("--orbit", is_flag=True, help="Also list the conjugation orbit")
@domain_command
def tcb(word_text, orbit):
    """Lift a T1/T2 word to a transversal canonical base pair."""
    mw = MatrixWord.parse(word_text)
    pair = lift_T(mw)
    payload: Dict[str, Any] = {
        "matrix": [list(row) for row in mw.matrix],
        "A": _primed(pair.A.format()),
        "B": _primed(pair.B.format()),
        "commutator_fixed": pair.commutator() == KAPPA_RANK2,
    }
    if orbit:
        chain = conjugate_orbit(pair)
        payload["orbit"] = {
            "reduced": [_primed(s) for s in chain.reduced.format()],
            "steps_to_reduce": chain.steps_to_reduce,
            "size": len(chain),
            "expected_size": chain.expected_size(),
            "members": [[_primed(s) for s in member.format()] for member in chain],
        }
    _emit(payload)


@cli.command()
@click.option("--pair", nargs=2, required=True, help="Words A and B, letters separated by spaces")
@domain_command
def orbit(pair):
    """Reduce a pair and list its conjugation orbit."""
    chain = conjugate_orbit(TcbPair.parse(*pair))
    _emit(
        {
            "reduced": [_primed(s) for s in chain.reduced.format()],
            "steps_to_reduce": chain.steps_to_reduce,
            "size": len(chain),
            "expected_size": chain.expected_size(),
            "determinant": chain.reduced.determinant,
        }
    )


@cli.group()
def building():
    """Building data: validation, census, diagram types, conservation."""


@building.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@domain_command
def validate(path):
    """Report every violated building-data invariant."""
    report = bd_mod.validate_building_data(ser.load_building_data(path))
    _emit(report.model_dump(mode="json"), lambda: display.print_report(report))
    if not report.valid:
        sys.exit(1)


@building.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@domain_command
def classify(path):
    """Saddle census and foliation class."""
    result = bd_mod.classify_foliation(ser.load_building_data(path))
    _emit(result.model_dump(mode="json"), lambda: display.print_classification(result))


@building.command(name="minimal-types")
@click.argument("genus", type=int)
@domain_command
def minimal_types(genus):
    """Plane-diagram configurations of minimal foliations."""
    types = bd_mod.minimal_diagram_types(genus)
    _emit({"genus": genus, "types": [t.model_dump() for t in types]})


@building.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@domain_command
def conservation(path):
    """Check the four-square conservation law and report the flux."""
    result = bd_mod.check_conservation(ser.load_transition_matrix(path))
    _emit({"flux": ser.scalar(result.flux), "direction": result.direction.value})


@cli.command()
@glued_options
@click.option("--steps", type=click.IntRange(min=1), default=10, show_default=True)
@click.option("--x", "x", type=SCALAR, required=True, help="Start point on the obstacle")
@domain_command
def trace(steps, x, **glued):
    """Trace a trajectory of the glued flow geometrically."""
    gs = _glued(glued)
    (x,) = _in_field(gs.torus1.d, x)
    window = config_manager.config.oracle
    traj = trace_trajectory(GluedScene.of(gs), x, steps, window.initial_window, window.window_cap)
    symbols = orbit_word(traj.symbols)
    _emit(
        {
            "symbols": [f"R{q}" for q in traj.symbols],
            "word": "".join(f"R{q}" for q in symbols),
            "translates": [list(t) for t in traj.translates],
            "homology": list(
                sum_vectors([homology_of_translates(gs, t) for t in traj.translates])
            ),
            "points": ser.scalars(traj.points),
        }
    )


@cli.command(name="render")
@click.option("--kind", type=click.Choice([k.value for k in RenderKind]), required=True)
@click.option("--out", "out", type=click.Path(dir_okay=False), required=True, help="SVG file")
@click.option("--instance", "-i", type=click.Path(exists=True, dir_okay=False),
              help="Torus instance for streets, glued instance for partition")
@click.option("-d", "d", type=int, default=0, show_default=True)
@click.option("--m", "m", type=SCALAR)
@click.option("--a1", type=SCALAR)
@click.option("--b1", type=SCALAR)
@click.option("--a2", type=SCALAR)
@click.option("--b2", type=SCALAR)
@click.option("--genus", type=click.IntRange(min=1), help="Genus for plane diagrams")
@click.option("--cycles", help="Comma-separated cycle type for plane diagrams")
@domain_command
def render_command(kind, out, instance, d, m, a1, b1, a2, b2, genus, cycles):
    """Write an SVG diagram."""
    kind = RenderKind(kind)
    payload: Dict[str, Any]
    if kind is RenderKind.STREETS:
        torus = _torus(instance, d, a1, b1, m)
        payload = {"streets": street_set(torus, config_manager.config.euclid.stern_brocot_steps)}
    elif kind is RenderKind.PARTITION:
        gs = _glued(dict(instance=instance, d=d, m=m, a1=a1, b1=b1, a2=a2, b2=b2))
        payload = {"partition": five_partition(gs), "m": gs.m}
    else:
        if genus is None:
            raise click.UsageError("--genus is required for plane diagrams")
        parts = tuple(int(c) for c in cycles.split(",")) if cycles else ()
        payload = {"genus": genus, "cycles": parts}
    svg = render(kind, payload, config_manager.config.render)
    Path(out).write_text(svg, encoding="utf-8")
    _emit({"kind": kind.value, "out": str(out), "bytes": len(svg.encode("utf-8"))})


@cli.group(name="config")
def config_group():
    """Show or change configuration."""


@config_group.command(name="show")
def config_show():
    """Show current configuration."""
    display.print_header("Current Configuration")
    display.print_tree(config_manager.config.model_dump())


@config_group.command(name="set")
@click.argument("key")
@click.argument("value")
def config_set(key, value):
    """Set a configuration value, e.g. ``oracle.window_cap 4096``."""
    try:
        config_manager.set_value(key, value)
    except (KeyError, ValueError) as e:
        display.print_error(f"Failed to set configuration: {e}")
        sys.exit(2)
    display.print_success(f"Set {key} = {value}")


@cli.command()
@click.option("--count", type=click.IntRange(min=1), default=5, show_default=True)
@click.option("--seed", type=int, help="Seed; defaults to the configured seed")
@domain_command
def sample(count, seed):
    """Random T1/T2 words with their lifts, for quick checks."""
    used = config_manager.config.seed if seed is None else seed
    rng = random.Random(used)
    rows = []
    for _ in range(count):
        mw = random_matrix_word(rng)
        pair = lift_T(mw)
        rows.append(
            {
                "word": mw.format(),
                "A": _primed(pair.A.format()),
                "B": _primed(pair.B.format()),
                "commutator_fixed": pair.commutator() == KAPPA_RANK2,
            }
        )
    _emit({"seed": used, "samples": rows})


def main():
    """Main entry point."""
    cli()


if __name__ == "__main__":
    main()
