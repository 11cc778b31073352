"""Command line front end: JSON files in, JSON-lines records out."""

import argparse
import asyncio
import json
import logging
import sys
import time

from dataclasses import dataclass, field
from typing import Callable, Iterator

from pytoricoda import OdaProbe
from pytoricoda._version import __version__ as VERSION
from pytoricoda.const import (
    DEFAULT_JOBS,
    DEFAULT_MAX_COEFF,
    DEFAULT_NORMALITY_DEPTH,
    DEFAULT_SEED,
    PROP_PIECES,
    PROP_POINTS,
    PROP_RAYS,
    PROP_TARGET,
)
from pytoricoda.coverage import covers, minkowski_weyl_check, quasi_cover_report, residual_cells, vertex_fit_cover
from pytoricoda.families import ScanRecord, parse_family_spec
from pytoricoda.lattice import ToricOdaError, as_int_vector, as_rat_vector, parse_rational
from pytoricoda.oda import local_oda_check, order_relations, phi_cokernel, projective_normality_probe, psi_check
from pytoricoda.polytope import (
    Cone,
    RationalPolytope,
    edges,
    lattice_points,
    minkowski_difference,
    minkowski_sum,
    parse_polyhedron,
    parse_polytope,
)
from pytoricoda.render import Scene, write_svg
from pytoricoda.surface import classify_translation_vector, contact_points, sfhn_verify
from pytoricoda.toric import (
    blowup,
    hilbert_basis,
    is_complete,
    is_smooth,
    parse_bundle,
    parse_fan,
    section5_bounds,
)

_LOGGER = logging.getLogger(__name__)

__all__ = ["InputError", "JobSpec", "ScanRecord", "run", "main"]


class InputError(ToricOdaError, ValueError):
    """Unreadable or malformed JSON input."""

    def __init__(self, path: str, offset: int | None, reason: str) -> None:
        where = path if offset is None else f"{path} at byte {offset}"
        super().__init__(f"Cannot read {where}: {reason}")
        self.path = path
        self.offset = offset


@dataclass(frozen=True)
class JobSpec:
    """One CLI invocation."""

    command: str
    inputs: tuple[str, ...] = ()
    families: tuple[str, ...] = ()
    max_coeff: int = DEFAULT_MAX_COEFF
    seed: int = DEFAULT_SEED
    jobs: int = DEFAULT_JOBS
    output: str | None = None
    svg: str | None = None
    sort: bool = False
    options: dict = field(default_factory=dict)


def load_json(path: str):
    try:
        with open(path, "r", encoding="utf8") as handle:
            text = handle.read()
    except OSError as err:
        raise InputError(path, None, err.strerror or str(err)) from err
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise InputError(path, err.pos, err.msg) from err


def _vector(text: str) -> tuple:
    return as_rat_vector(parse_rational(part) for part in text.split(","))


def _svg(job: JobSpec, target: RationalPolytope, pieces: list, witness) -> None:
    if job.svg is None:
        return
    if target.ambient != 2:
        _LOGGER.warning("Skipping SVG output for a %d-dimensional scene", target.ambient)
        return
    residual = tuple(residual_cells(target, pieces)) if witness is not None else ()
    write_svg(Scene((target,), tuple(pieces), residual, witness=witness), job.svg)


def _polytopes(job: JobSpec, count: int) -> list[RationalPolytope]:
    if len(job.inputs) != count:
        raise InputError(" ".join(job.inputs) or "<none>", None, f"{job.command} needs {count} input files")
    return [parse_polytope(load_json(path)) for path in job.inputs]


def _fan_check(job: JobSpec) -> dict:
    fan = parse_fan(load_json(job.inputs[0]))
    return {
        **fan.as_dict(),
        "complete": is_complete(fan),
        "smooth": is_smooth(fan),
        "picard_number": fan.picard_number,
        "walls": [w.as_dict() for w in fan.walls],
    }


def _fan_blowup(job: JobSpec) -> dict:
    return blowup(parse_fan(load_json(job.inputs[0])), job.options.get("cone", 0)).as_dict()


def _fan_bounds(job: JobSpec) -> dict:
    fan = parse_fan(load_json(job.inputs[0]))
    bundle = None
    if job.options.get("bundle"):
        bundle = parse_bundle(load_json(job.options["bundle"]), fan)
    return section5_bounds(fan, bundle, job.options.get("rho")).as_dict()


def _fan_hilbert(job: JobSpec) -> dict:
    return {"basis": [list(b.coeffs) for b in hilbert_basis(parse_fan(load_json(job.inputs[0])))]}


def _poly_sum(job: JobSpec) -> dict:
    return minkowski_sum(*_polytopes(job, 2)).as_dict()


def _poly_diff(job: JobSpec) -> dict:
    result = minkowski_difference(*_polytopes(job, 2))
    return {"empty": True} if result is None else result.as_dict()


def _poly_points(job: JobSpec) -> dict:
    (polytope,) = _polytopes(job, 1)
    points = sorted(lattice_points(polytope))
    return {"count": len(points), PROP_POINTS: [list(p) for p in points]}


def _poly_edges(job: JobSpec) -> dict:
    (polytope,) = _polytopes(job, 1)
    return {"edges": [e.as_dict() for e in edges(polytope)]}


def _cover_job(job: JobSpec) -> tuple[RationalPolytope, list[RationalPolytope]]:
    data = load_json(job.inputs[0])
    if not isinstance(data, dict):
        raise InputError(job.inputs[0], None, "cover job must be a JSON object")
    for key in (PROP_TARGET, PROP_PIECES):
        if key not in data:
            raise InputError(job.inputs[0], None, f"cover job needs a {key!r} entry")
    return parse_polytope(data[PROP_TARGET]), [parse_polytope(p) for p in data[PROP_PIECES]]


def _cover_run(job: JobSpec) -> dict:
    target, pieces = _cover_job(job)
    report = covers(target, pieces)
    _svg(job, target, pieces, report.witness)
    return report.as_dict()


def _cover_vertexfit(job: JobSpec) -> dict:
    (polytope,) = _polytopes(job, 1)
    return vertex_fit_cover(polytope, parse_rational(job.options.get("c", "1"))).as_dict()


def _cover_quasi(job: JobSpec) -> dict:
    return quasi_cover_report(*_cover_job(job)).as_dict()


def _cover_mw(job: JobSpec) -> dict:
    return minkowski_weyl_check(parse_polyhedron(load_json(job.inputs[0]))).as_dict()


def _oda_phi(job: JobSpec) -> dict:
    return phi_cokernel(*_polytopes(job, 2)).as_dict()


def _oda_psi(job: JobSpec) -> dict:
    small, large = _polytopes(job, 2)
    report = psi_check(small, large)
    _svg(job, large, [small.translate(m) for m in report.translates], report.inner.witness)
    return report.as_dict()


def _oda_local(job: JobSpec) -> dict:
    small, large = _polytopes(job, 2)
    if not job.options.get("cone"):
        raise InputError("<none>", None, "oda local needs --cone")
    data = load_json(job.options["cone"])
    cone = Cone.create(data.get(PROP_RAYS, []), small.ambient)
    return local_oda_check(small, large, cone, job.options.get("depth", DEFAULT_NORMALITY_DEPTH)).as_dict()


def _oda_normality(job: JobSpec) -> dict:
    bundle = parse_bundle(load_json(job.inputs[0]))
    reports = projective_normality_probe(bundle, job.options.get("depth", DEFAULT_NORMALITY_DEPTH))
    return {"reports": [r.as_dict() for r in reports]}


def _oda_order(job: JobSpec) -> dict:
    first = parse_bundle(load_json(job.inputs[0]))
    second = parse_bundle(load_json(job.inputs[1]), first.fan)
    return order_relations(first, second).as_dict()


def _surface_sfhn(job: JobSpec) -> dict:
    small, large = _polytopes(job, 2)
    report = sfhn_verify(small, large, with_certificate=job.options.get("certificate", False))
    _svg(job, large, [small.translate(m) for m in report.translates], report.inner.witness)
    return report.as_dict()


def _surface_contacts(job: JobSpec) -> dict:
    (polygon,) = _polytopes(job, 1)
    return contact_points(polygon, as_int_vector(job.options["direction"])).as_dict()


def _surface_classify(job: JobSpec) -> dict:
    (polygon,) = _polytopes(job, 1)
    return classify_translation_vector(
        polygon, as_int_vector(job.options["direction"]), job.options["first"], job.options["second"]
    ).as_dict()


COMMANDS: dict[str, Callable[[JobSpec], dict]] = {
    "fan check": _fan_check,
    "fan blowup": _fan_blowup,
    "fan bounds": _fan_bounds,
    "fan hilbert": _fan_hilbert,
    "poly sum": _poly_sum,
    "poly diff": _poly_diff,
    "poly points": _poly_points,
    "poly edges": _poly_edges,
    "cover run": _cover_run,
    "cover vertexfit": _cover_vertexfit,
    "cover quasi": _cover_quasi,
    "cover mw": _cover_mw,
    "oda phi": _oda_phi,
    "oda psi": _oda_psi,
    "oda local": _oda_local,
    "oda normality": _oda_normality,
    "oda order": _oda_order,
    "surface sfhn": _surface_sfhn,
    "surface contacts": _surface_contacts,
    "surface classify": _surface_classify,
}


def _scan(job: JobSpec) -> list[ScanRecord]:
    params, enabled = {}, []
    for text in job.families:
        family_id, family_params = parse_family_spec(text)
        enabled.append(family_id)
        params[family_id] = family_params
    probe = OdaProbe.create(
        enabled_families=enabled or None, max_coeff=job.max_coeff, seed=job.seed, jobs=job.jobs, params=params
    )
    return asyncio.run(probe.scan(sort=job.sort))


def run(job: JobSpec) -> Iterator[ScanRecord]:
    """Records for one job; errors become records instead of exceptions."""
    if job.command == "oda scan":
        try:
            yield from _scan(job)
        except ToricOdaError as err:
            yield ScanRecord(job.command, "", {"families": list(job.families)}, None, 0, f"{type(err).__name__}: {err}")
        return
    handler = COMMANDS[job.command]
    descriptor = {"inputs": list(job.inputs)}
    start = time.perf_counter_ns()
    try:
        payload, error = handler(job), None
    except (ToricOdaError, AssertionError) as err:
        _LOGGER.warning("%s failed: %s", job.command, err)
        payload, error = None, f"{type(err).__name__}: {err}"
    micros = (time.perf_counter_ns() - start) // 1000
    yield ScanRecord(job.command, "", descriptor, payload, micros, error)


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pytoricoda", description="Exact Oda multiplication-map checks.")
    parser.add_argument("--version", action="version", version=VERSION)
    parser.add_argument("-v", "--verbose", action="count", default=0)
    parser.add_argument("-o", "--output", help="write JSON-lines here instead of stdout")
    groups = parser.add_subparsers(dest="group", required=True)

    def command(group, name: str, files: int | str):
        sub = group.add_parser(name)
        sub.add_argument("inputs", nargs=files, metavar="FILE")
        return sub

    fan = groups.add_parser("fan").add_subparsers(dest="action", required=True)
    command(fan, "check", 1)
    command(fan, "blowup", 1).add_argument("--cone", type=int, default=0)
    bounds = command(fan, "bounds", 1)
    bounds.add_argument("--bundle")
    bounds.add_argument("--rho", help="ray as x,y[,z]")
    command(fan, "hilbert", 1)

    poly = groups.add_parser("poly").add_subparsers(dest="action", required=True)
    for name, files in (("sum", 2), ("diff", 2), ("points", 1), ("edges", 1)):
        command(poly, name, files)

    cover = groups.add_parser("cover").add_subparsers(dest="action", required=True)
    command(cover, "run", 1).add_argument("--svg")
    command(cover, "vertexfit", 1).add_argument("--c", default="1")
    command(cover, "quasi", 1)
    command(cover, "mw", 1)

    oda = groups.add_parser("oda").add_subparsers(dest="action", required=True)
    command(oda, "phi", 2)
    command(oda, "psi", 2).add_argument("--svg")
    local = command(oda, "local", 2)
    local.add_argument("--cone", required=True)
    local.add_argument("--depth", type=int, default=DEFAULT_NORMALITY_DEPTH)
    command(oda, "normality", 1).add_argument("--depth", type=int, default=DEFAULT_NORMALITY_DEPTH)
    command(oda, "order", 2)
    scan = oda.add_parser("scan")
    scan.set_defaults(inputs=[])
    scan.add_argument("--family", action="append", default=[], help="id or id:key=value,...")
    scan.add_argument("--max-coeff", type=int, default=DEFAULT_MAX_COEFF)
    scan.add_argument("--seed", type=int, default=DEFAULT_SEED)
    scan.add_argument("--jobs", type=int, default=DEFAULT_JOBS)
    scan.add_argument("--sorted", action="store_true")

    surface = groups.add_parser("surface").add_subparsers(dest="action", required=True)
    sfhn = command(surface, "sfhn", 2)
    sfhn.add_argument("--certificate", action="store_true")
    sfhn.add_argument("--svg")
    command(surface, "contacts", 1).add_argument("--direction", required=True)
    classify = command(surface, "classify", 1)
    classify.add_argument("--direction", required=True)
    classify.add_argument("--first", required=True, help="edge endpoint A0 as x,y")
    classify.add_argument("--second", required=True, help="edge endpoint A0' as x,y")
    return parser


def job_from_args(args: argparse.Namespace) -> JobSpec:
    command = f"{args.group} {args.action}"
    options = {}
    for key in ("cone", "bundle", "depth", "c", "certificate"):
        if getattr(args, key, None) is not None:
            options[key] = getattr(args, key)
    if getattr(args, "direction", None):
        options["direction"] = _vector(args.direction)
    for key in ("rho", "first", "second"):
        if getattr(args, key, None):
            options[key] = _vector(getattr(args, key))
    return JobSpec(
        command=command,
        inputs=tuple(args.inputs),
        families=tuple(getattr(args, "family", ())),
        max_coeff=getattr(args, "max_coeff", DEFAULT_MAX_COEFF),
        seed=getattr(args, "seed", DEFAULT_SEED),
        jobs=getattr(args, "jobs", DEFAULT_JOBS),
        output=args.output,
        svg=getattr(args, "svg", None),
        sort=getattr(args, "sorted", False),
        options=options,
    )


def dumps(record: ScanRecord) -> str:
    return json.dumps(record.as_dict(), sort_keys=True)


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(
        level=[logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)],
        format="%(asctime)s %(name)s %(levelname)s: %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )
    try:
        job = job_from_args(args)
    except ToricOdaError as err:
        _LOGGER.error("%s", err)
        return 2
    failed = False
    handle = sys.stdout if job.output is None else open(job.output, "w", encoding="utf8")
    try:
        for record in run(job):
            failed = failed or record.error is not None
            handle.write(dumps(record) + "\n")
            handle.flush()
    finally:
        if handle is not sys.stdout:
            handle.close()
    return 1 if failed else 0
