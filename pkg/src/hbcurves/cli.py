"""Command-line front end.

Exit codes: 0 success, 2 parse error, 3 precondition violation, 4 internal
invariant failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import covers as cov
from .complexgraph import ResourceGuardError, enumerate_curves, graph_slice
from .curves import (
    CurveDiagram,
    CurveError,
    TwistWord,
    algebraic_intersection,
    apply_twist_word,
    curve,
    geometric_intersection,
    homology_class,
    is_essential,
    normalize,
    self_intersection,
)
from .freegroup import format_word
from .handlebody import (
    HandlebodyError,
    HandlebodyStructure,
    check_disk_path,
    disk_exchange_path,
    find_wave,
    handlebody_word,
    is_meridian,
    standard_handlebody,
)
from .polysurface import PolySurface, SurfaceError, standard_surface, validate
from .scenarios import SCENARIOS, ScenarioFailure, run

EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_INTERNAL = 0, 2, 3, 4


class ParseError(Exception):
    """Input that could not be read."""


# -- input ----------------------------------------------------------------------------


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None


def load_surface(spec: str | None) -> PolySurface:
    """``genus:N`` (or ``gN``) for the standard surface, otherwise a surface file."""
    if spec is None:
        spec = "genus:2"
    for prefix in ("genus:", "g"):
        rest = spec[len(prefix):]
        if spec.startswith(prefix) and rest.isdigit():
            return standard_surface(int(rest))
    try:
        return PolySurface.from_dict(_read_json(spec))
    except (KeyError, TypeError, SurfaceError) as exc:
        raise ParseError(f"{spec}: {exc}") from None


def load_curve(surface: PolySurface, spec: str) -> CurveDiagram:
    """A curve file (``{"crossings": [...]}``) or an inline word such as ``"a1 -b2"``."""
    try:
        if os.path.exists(spec):
            data = _read_json(spec)
            records = data["crossings"] if isinstance(data, dict) else data
            return CurveDiagram.from_records(surface, records)
        return curve(surface, spec)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"curve {spec!r}: {exc}") from None


def load_multicurve(surface: PolySurface, spec: str) -> list[CurveDiagram]:
    """A file with ``{"curves": [...]}`` or inline words separated by ``;``."""
    if os.path.exists(spec):
        data = _read_json(spec)
        try:
            return [CurveDiagram.from_records(surface, r) for r in data["curves"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"{spec}: {exc}") from None
    return [load_curve(surface, part.strip()) for part in spec.split(";") if part.strip()]


def load_handlebody(surface: PolySurface, spec: str | None) -> HandlebodyStructure:
    if spec is None or spec == "standard":
        return standard_handlebody(surface.genus(), surface)
    if os.path.exists(spec):
        with open(spec) as fh:
            text = fh.read()
        try:
            return HandlebodyStructure.from_json(surface, text)
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise ParseError(f"{spec}: {exc}") from None
    return HandlebodyStructure(surface, tuple(load_multicurve(surface, spec))).check()


def load_cover(path: str) -> cov.FiniteCover:
    data = _read_json(path)
    try:
        base = PolySurface.from_dict(data["surface"])
        rep = cov.FiniteGroupRep.from_dict(base, data)
    except (KeyError, TypeError, ValueError, SurfaceError) as exc:
        raise ParseError(f"{path}: {exc}") from None
    return cov.build_cover(base, rep)


# -- output ---------------------------------------------------------------------------


def emit(args, record: dict, text: str | None = None) -> None:
    if args.format == "json":
        print(json.dumps(record, indent=1, sort_keys=True))
    else:
        print(text if text is not None else "\n".join(f"{k}: {v}" for k, v in record.items()))


def _word(c: CurveDiagram) -> str:
    return " ".join(c.names())


# -- commands ---------------------------------------------------------------------------


def cmd_surface(args) -> int:
    if args.action == "validate":
        s = load_surface(args.file)
        problems = validate(s)
        emit(args, {"valid": not problems, "problems": problems}, "valid" if not problems else "\n".join(problems))
        return EXIT_OK if not problems else EXIT_PRECONDITION
    s = load_surface(args.file or args.surface)
    rec = {
        "genus": s.genus(),
        "euler_characteristic": s.euler_characteristic(),
        "vertices": s.num_vertices,
        "edges": s.num_edges,
        "faces": len(s.faces),
    }
    emit(args, rec)
    return EXIT_OK


def cmd_curve(args) -> int:
    s = load_surface(args.surface)
    c = load_curve(s, args.curve)
    if args.action == "normalize":
        n = normalize(c)
        rec = {"word": _word(n), "crossings": n.to_records(), "self_intersection": self_intersection(n)}
        emit(args, rec, f"{_word(n)}\n{n.to_json()}\nself_intersection: {rec['self_intersection']}")
    elif args.action == "word":
        H = load_handlebody(s, args.handlebody)
        w = handlebody_word(H, c)
        emit(args, {"word": list(w)}, format_word(w))
    else:
        H = load_handlebody(s, args.handlebody)
        simple = self_intersection(c) == 0
        rec = {"simple": simple, "essential": simple and is_essential(c), "meridian": simple and is_meridian(H, c)}
        emit(args, rec)
    return EXIT_OK


def cmd_intersect(args) -> int:
    s = load_surface(args.surface)
    a, b = load_curve(s, args.a), load_curve(s, args.b)
    gi, ai = geometric_intersection(a, b), algebraic_intersection(a, b)
    emit(args, {"geometric": gi, "algebraic": ai}, f"geometric {gi}, algebraic {ai}")
    return EXIT_OK


def cmd_twist(args) -> int:
    s = load_surface(args.surface)
    target, twister = load_curve(s, args.target), load_curve(s, args.twister)
    out = apply_twist_word(TwistWord(((twister, args.power),)), target)
    emit(args, {"word": _word(out), "crossings": out.to_records()}, f"{_word(out)}\n{out.to_json()}")
    return EXIT_OK


def cmd_wave(args) -> int:
    s = load_surface(args.surface)
    H = load_handlebody(s, args.handlebody)
    A, B = load_multicurve(s, args.a), load_multicurve(s, args.b)
    w = find_wave(A, B, H)
    if w is None:
        emit(args, {"wave": None}, "disjoint: no wave needed")
    else:
        d = w.to_dict()
        emit(args, {"wave": d}, f"wave on component {w.host} hitting {w.hit_component} ({w.side}); surgery {_word(w.surgery)}")
    return EXIT_OK


def cmd_diskpath(args) -> int:
    s = load_surface(args.surface)
    H = load_handlebody(s, args.handlebody)
    C, C2 = load_multicurve(s, args.start), load_multicurve(s, args.target)
    path = disk_exchange_path(H, C, C2, args.bound)
    problems = check_disk_path(H, path) if path.found else []
    if problems:
        raise AssertionError("; ".join(problems))
    systems = [[_word(c) for c in system] for system in path.systems]
    emit(args, {"found": path.found, "bound": args.bound, "systems": systems},
         "\n".join(" | ".join(system) for system in systems) if path.found else "no path within bound")
    return EXIT_OK if path.found else EXIT_PRECONDITION


def cmd_cover(args) -> int:
    if args.action == "build":
        s = load_surface(args.surface)
        if args.alpha is None or args.modulus is None:
            raise ParseError("cover build needs --alpha and --modulus")
        rep = cov.hom_from_intersection(s, load_curve(s, args.alpha), args.modulus)
        c = cov.build_cover(s, rep)
        if args.format != "json":
            print(f"degree {c.degree}, total genus {c.total.genus()}, normal {c.normal}", file=sys.stderr)
        print(c.to_json())
        return EXIT_OK
    c = load_cover(args.cover)
    s = c.base
    if args.action == "quotient":
        sheets = [int(x) for x in args.items]
        q = cov.quotient_cover(c, sheets)
        if args.format != "json":
            print(f"degree {q.degree}", file=sys.stderr)
        print(q.to_json())
        return EXIT_OK
    if args.action == "extends":
        H = load_handlebody(s, args.handlebody)
        r = cov.extends_to_handlebody_cover(c, H)
        text = "extends" if r.extends else f"does not extend: disk {r.witness} ({_word(H.disk_system[r.witness])}) lifts with degree {cov.lift_degree(c, H.disk_system[r.witness])}"
        emit(args, r.to_dict(), text)
        return EXIT_OK
    if not args.items:
        raise ParseError(f"cover {args.action} needs a curve")
    x = load_curve(s, args.items[0])
    if args.action == "degree":
        rec = {"lift_degree": cov.lift_degree(c, x), "degrees": cov.lift_degrees(c, x)}
        emit(args, rec)
    else:
        els = cov.elevate(c, x)
        emit(args, {"elevations": [e.to_dict() for e in els]},
             "\n".join(f"degree {e.degree}: {_word(e.curve)}" for e in els))
    return EXIT_OK


def cmd_flexcert(args) -> int:
    c = load_cover(args.cover)
    H = load_handlebody(c.base, args.handlebody)
    ms = [load_curve(c.base, m) for m in args.meridians]
    cert = cov.flexibility_certificate(c, H, ms)
    if cert is None:
        emit(args, {"certificate": None}, "inconclusive: no odd intersections among elevations")
        return EXIT_OK
    if cov.certificate_problems(cert, H):
        raise AssertionError("certificate failed to re-validate")
    emit(args, {"certificate": cert.to_dict()},
         f"OBSTRUCTED: elevations meet {cert.odd_count} time(s)\n"
         f"x: {_word(cert.elevation_x.curve)}\ny: {_word(cert.elevation_y.curve)}")
    return EXIT_OK


def cmd_degree1(args) -> int:
    if args.modulus is None:
        raise ParseError("degree1 needs --modulus")
    r = cov.degree_one_search(args.residues, args.modulus)
    check = tuple(x % args.modulus for x in args.residues)
    for m in r.moves:
        check = cov.apply_move(check, m, args.modulus)
    if check != r.residues or check[r.zero_index - 1] != 0:
        raise AssertionError("move sequence does not re-validate")
    rec = {"moves": [list(m) for m in r.moves], "residues": list(r.residues), "zero_index": r.zero_index}
    text = "\n".join(" ".join(str(x) for x in m) for m in r.moves) + ("\n" if r.moves else "")
    emit(args, rec, text + f"zero at coordinate {r.zero_index}: {list(r.residues)}")
    return EXIT_OK


def cmd_slice(args) -> int:
    s = load_surface(args.surface)
    H = load_handlebody(s, args.handlebody) if args.flavor == "disk" else None
    keys = enumerate_curves(s, args.bound)
    sl = graph_slice(s, keys, H, args.flavor, args.bound)
    if args.format == "json":
        print(json.dumps({"flavor": sl.flavor, "bound": sl.bound,
                          "vertices": [sl.label(v) for v in range(len(sl))],
                          "edges": sorted(list(e) for e in sl.edges)}, indent=1))
    elif args.format == "dot":
        sys.stdout.write(sl.to_dot())
    else:
        sys.stdout.write(sl.matrix_text())
    return EXIT_OK


def cmd_scenario(args) -> int:
    result = run(args.name)
    print(result.to_json() if args.format == "json" else result.to_text(), end="" if args.format != "json" else "\n")
    return EXIT_OK


# -- parser -----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--surface", help="surface file, or genus:N for the standard surface (default genus:2)")
    common.add_argument("--handlebody", help="handlebody file, ';'-separated disk words, or 'standard'")
    common.add_argument("--bound", type=int, default=6, help="crossing bound for enumerations")
    common.add_argument("--modulus", type=int, help="modulus for cyclic covers and residue searches")
    common.add_argument("--format", choices=("text", "json", "dot"), default="text")

    p = argparse.ArgumentParser(prog="hbcurves", description="Curves, handlebodies and finite covers of surfaces.")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("surface", parents=[common], help="validate or describe a surface")
    q.add_argument("action", choices=("validate", "info"))
    q.add_argument("file", nargs="?")
    q.set_defaults(func=cmd_surface)

    q = sub.add_parser("curve", parents=[common], help="normalize a curve, its handlebody word, meridian test")
    q.add_argument("action", choices=("normalize", "word", "meridian"))
    q.add_argument("curve")
    q.set_defaults(func=cmd_curve)

    q = sub.add_parser("intersect", parents=[common], help="geometric and algebraic intersection")
    q.add_argument("a")
    q.add_argument("b")
    q.set_defaults(func=cmd_intersect)

    q = sub.add_parser("twist", parents=[common], help="Dehn twist of TARGET about TWISTER")
    q.add_argument("target")
    q.add_argument("twister")
    q.add_argument("-n", "--power", type=int, default=1)
    q.set_defaults(func=cmd_twist)

    q = sub.add_parser("wave", parents=[common], help="find a wave of multicurve A with respect to B")
    q.add_argument("a")
    q.add_argument("b")
    q.set_defaults(func=cmd_wave)

    q = sub.add_parser("diskpath", parents=[common], help="disk-exchange path between reduced systems")
    q.add_argument("start")
    q.add_argument("target")
    q.set_defaults(func=cmd_diskpath)

    q = sub.add_parser("cover", parents=[common], help="build and query finite covers")
    q.add_argument("action", choices=("build", "elevate", "degree", "extends", "quotient"))
    q.add_argument("cover", nargs="?", help="cover file (all actions but build)")
    q.add_argument("items", nargs="*", help="curve (elevate, degree) or subgroup sheets (quotient)")
    q.add_argument("--alpha", help="curve defining the cyclic cover (build)")
    q.set_defaults(func=cmd_cover)

    q = sub.add_parser("flexcert", parents=[common], help="odd-intersection certificate for meridian elevations")
    q.add_argument("cover")
    q.add_argument("meridians", nargs="+")
    q.set_defaults(func=cmd_flexcert)

    q = sub.add_parser("degree1", parents=[common], help="residue moves reaching a zero coordinate")
    q.add_argument("residues", nargs="+", type=int)
    q.set_defaults(func=cmd_degree1)

    q = sub.add_parser("slice", parents=[common], help="export a finite graph slice")
    q.add_argument("action", choices=("export",))
    q.add_argument("--flavor", choices=("curve", "disk", "multicurve"), default="curve")
    q.set_defaults(func=cmd_slice)

    q = sub.add_parser("scenario", parents=[common], help="run a built-in construction")
    q.add_argument("name", choices=SCENARIOS)
    q.set_defaults(func=cmd_scenario)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ScenarioFailure, AssertionError) as exc:
        print(f"internal invariant failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except ResourceGuardError as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (CurveError, SurfaceError, HandlebodyError, cov.CoverError, ValueError) as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
