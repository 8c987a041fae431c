"""End-to-end constructions run from the shipped data files."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

from .covers import (
    build_cover,
    certificate_problems,
    crossing_components,
    elevation_intersections,
    extends_to_handlebody_cover,
    flexibility_certificate,
    hom_from_intersection,
    lift_degree,
    recur_meridian,
    wave_violation,
)
from .curves import CurveDiagram, algebraic_intersection, curve, geometric_intersection, self_intersection
from .handlebody import (
    check_disk_path,
    disk_exchange_path,
    is_meridian,
    is_reduced_disk_system,
    standard_handlebody,
)
from .polysurface import PolySurface, standard_surface

SCENARIOS = ("fig1", "recur", "covergate", "diskpath")


class ScenarioFailure(AssertionError):
    """An invariant the scenario relies on did not hold."""


@dataclass
class ScenarioResult:
    name: str
    status: str
    inputs: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"scenario": self.name, "status": self.status, "inputs": self.inputs, "results": self.results}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"scenario {self.name}: {self.status}"]
        for k in sorted(self.results):
            lines.append(f"  {k}: {json.dumps(self.results[k], sort_keys=True)}")
        return "\n".join(lines) + "\n"


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ScenarioFailure(message)


def load_data(name: str) -> tuple[PolySurface, dict, dict[str, CurveDiagram]]:
    text = resources.files("hbcurves").joinpath("data", f"{name}.json").read_text()
    data = json.loads(text)
    surface = PolySurface.from_dict(data["surface"])
    curves = {k: CurveDiagram.from_records(surface, v) for k, v in data["curves"].items()}
    return surface, data, curves


def _words(curves: dict[str, CurveDiagram]) -> dict[str, str]:
    return {k: " ".join(c.names()) for k, c in curves.items()}


def fig1() -> ScenarioResult:
    """Genus 2, mod-3 cover defined by alpha: elevations of two meridians meet oddly."""
    S, data, cv = load_data("fig1")
    H = standard_handlebody(S.genus(), S)
    d0, alpha, d1, d2 = cv["delta0"], cv["alpha"], cv["delta1"], cv["delta2"]
    pattern = {
        "i(delta0,alpha)": geometric_intersection(d0, alpha),
        "i(delta1,alpha)": geometric_intersection(d1, alpha),
        "i(delta1,delta2)": geometric_intersection(d1, d2),
        "alg(delta2,alpha)": algebraic_intersection(d2, alpha),
    }
    _require(pattern == {"i(delta0,alpha)": 1, "i(delta1,alpha)": 0, "i(delta1,delta2)": 2, "alg(delta2,alpha)": 0},
             f"data files do not have the required intersection pattern: {pattern}")
    for name in ("delta0", "delta1", "delta2"):
        _require(is_meridian(H, cv[name]), f"{name} is not a meridian")
    cover = build_cover(S, hom_from_intersection(S, alpha, data["modulus"]))
    chi = cover.total.euler_characteristic()
    _require(chi == cover.degree * S.euler_characteristic(), "euler characteristic is not multiplicative")
    els, m = elevation_intersections(cover, [d1, d2])
    n1 = [el for i, el in els if i == 0]
    n2 = [el for i, el in els if i == 1]
    _require(all(el.degree == 1 for _, el in els), "an elevation has degree above 1")
    odd = [(a, b - len(n1), m[a][b]) for a in range(len(n1)) for b in range(len(n1), len(els)) if m[a][b] % 2]
    meets = [sorted(b for a2, b, _ in odd if a2 == a) for a in range(len(n1))]
    cert = flexibility_certificate(cover, H, [d1, d2])
    _require(cert is not None and not certificate_problems(cert, H), "no valid certificate")
    results = {
        "pattern": pattern,
        "cover_degree": cover.degree,
        "cover_genus": cover.total.genus(),
        "cover_euler_characteristic": chi,
        "lift_degree": {k: lift_degree(cover, cv[k]) for k in ("delta0", "delta1", "delta2")},
        "elevations": {"delta1": len(n1), "delta2": len(n2)},
        "odd_pairs": [list(p) for p in odd],
        "delta2_met_by_each_delta1_elevation": meets,
        "certificate": cert.to_dict(),
    }
    return ScenarioResult("fig1", "OBSTRUCTED", {"modulus": data["modulus"], "curves": _words(cv)}, results)


def _is_power(cover, beta: CurveDiagram, alpha: CurveDiagram) -> bool:
    from .covers import compose, identity

    pa = cover.rep.word_perm(alpha.crossings)
    pb = cover.rep.word_perm(beta.crossings)
    p = identity(cover.degree)
    for _ in range(cover.degree + 1):
        if p == pb:
            return True
        p = compose(p, pa)
    return False


def recur() -> ScenarioResult:
    """Genus 3: the commutator-shaped meridian whose elevations have no wave."""
    S, data, cv = load_data("recur")
    H = standard_handlebody(S.genus(), S)
    alpha, beta, alpha2, rho = cv["alpha"], cv["beta"], cv["alpha_prime"], cv["rho"]
    delta = recur_meridian(H, alpha, beta, rho, alpha2)
    _require(self_intersection(delta) == 0 and is_meridian(H, delta), "delta is not a simple meridian")
    per_modulus = {}
    for n in data["moduli"]:
        cover = build_cover(S, hom_from_intersection(S, cv["cover_curve"], n))
        _require(not _is_power(cover, beta, alpha), f"mod {n}: the image of beta is a power of the image of alpha")
        pattern = crossing_components(cover, delta, [alpha, alpha2])
        repeats = any(len(p) > 1 and any(p[k][1] == p[(k + 1) % len(p)][1] for k in range(len(p))) for p in pattern)
        violation = wave_violation(cover, delta, [alpha, alpha2])
        _require(violation and not repeats, f"mod {n}: an elevation of delta has a wave")
        per_modulus[str(n)] = {"degree": cover.degree, "wave_violation": violation, "crossings": pattern}
    results = {
        "delta": " ".join(delta.names()),
        "self_intersection": self_intersection(delta),
        "is_meridian": is_meridian(H, delta),
        "covers": per_modulus,
    }
    return ScenarioResult("recur", "VIOLATION", {"curves": _words(cv), "moduli": data["moduli"]}, results)


def covergate() -> ScenarioResult:
    """The extension test on one cover that extends and one that does not."""
    S, data, cv = load_data("fig1")
    H = standard_handlebody(S.genus(), S)
    good = build_cover(S, hom_from_intersection(S, cv["delta0"], data["modulus"]))
    bad = build_cover(S, hom_from_intersection(S, cv["alpha"], data["modulus"]))
    rg, rb = extends_to_handlebody_cover(good, H), extends_to_handlebody_cover(bad, H)
    _require(rg.extends and not rb.extends, "extension verdicts are wrong")
    witness = H.disk_system[rb.witness]
    _require(lift_degree(bad, witness) > 1, "witness lifts with degree 1")
    results = {
        "pass_case": {"alpha": " ".join(cv["delta0"].names()), "degree": good.degree, **rg.to_dict()},
        "fail_case": {
            "alpha": " ".join(cv["alpha"].names()),
            "degree": bad.degree,
            **rb.to_dict(),
            "witness_meridian": " ".join(witness.names()),
            "witness_lift_degree": lift_degree(bad, witness),
        },
    }
    return ScenarioResult("covergate", "OK", {"modulus": data["modulus"]}, results)


def diskpath(bound: int = 6) -> ScenarioResult:
    """A disk-exchange path from the standard system to one sharing no curve with it."""
    S = standard_surface(2)
    H = standard_handlebody(2, S)
    start = list(H.disk_system)
    target = [curve(S, "a1 a2"), curve(S, "a1 -b1 a2 b1 a2")]
    _require(is_reduced_disk_system(H, target), "target is not a reduced disk system")
    path = disk_exchange_path(H, start, target, bound)
    _require(path.found and not check_disk_path(H, path), "no valid path")
    same = disk_exchange_path(H, start, start, bound)
    _require(same.found and len(same) == 1, "identical endpoints should give a path of length 1")
    results = {
        "path": [[" ".join(c.names()) for c in system] for system in path.systems],
        "length": len(path),
        "identical_endpoints_length": len(same),
    }
    return ScenarioResult("diskpath", "OK", {"bound": bound}, results)


def run(name: str) -> ScenarioResult:
    funcs = {"fig1": fig1, "recur": recur, "covergate": covergate, "diskpath": diskpath}
    if name not in funcs:
        raise ValueError(f"unknown scenario {name!r}")
    return funcs[name]()
