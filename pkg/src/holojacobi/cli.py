"""Command-line front end.

    holojacobi check <name> <files...> [--format text|json] [--seed N]
    holojacobi examples <dir>
    holojacobi list-checks

Exit status: 0 when every requested check passes, 1 when one fails, 2 on
usage or parse errors.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from .algebroid import (
    AlgebroidData,
    check_axioms,
    cotangent_algebroid,
    difference_report,
    holomorphic_cotangent_real_imaginary,
    jet_algebroid,
)
from .complexgeom import (
    check_hP_equivalences,
    check_homogeneous_equivalences,
    is_complex_structure,
    is_holomorphic,
)
from .correspondences import (
    HEISENBERG_CONSTANTS,
    SL2_CONSTANTS,
    check_holomorphic_jacobi_equivalences,
    darboux_example,
    lie_poisson,
    poissonize,
    restrict_homogeneous,
)
from .errors import ChartMismatchError, GeometryError, ParseError, ValidationError
from .fixtures import StructureFile, dumps, load
from .genstruct import GenBlockMap, is_generalized_complex, is_generalized_contact
from .jacobi import (
    EndoDL,
    MultiDerivation,
    contact_relations,
    contact_to_jacobi,
    is_jacobi_nijenhuis,
    jacobi_report,
    schouten_jacobi,
)
from .randgen import random_multiderivation
from .report import Report
from .tensor import DiffForm, Multivector, Tensor11, lie_derivative, schouten_nijenhuis, wedge


class UsageError(GeometryError):
    pass


def _pick(doc: StructureFile, cls, names=(), *, degree=None, what="object"):
    found = {k: v for k, v in doc.of_kind(cls).items()
             if degree is None or getattr(v, "degree", None) == degree}
    for n in names:
        if n in found:
            return n, found[n]
    if len(found) == 1:
        return next(iter(found.items()))
    if not found:
        raise UsageError(f"no {what} in file")
    raise UsageError(f"several candidates for the {what} ({', '.join(found)}); "
                     f"name one of them {' or '.join(names) or 'uniquely'}")


def _complex_for(doc: StructureFile, name: str):
    return doc.complex_chart(doc.object_charts[name])


def _bivector(doc, names=("pi", "Pi")):
    return _pick(doc, Multivector, names, degree=2, what="bivector")


def _multiderivation(doc):
    return _pick(doc, MultiDerivation, ("J",), degree=2, what="bi-derivation")


# ----------------------------------------------------------------------------
# checks


def _is_poisson(doc, rng):
    name, pi = _bivector(doc)
    rep = Report(f"is-poisson {name}")
    names = pi.chart.coords
    for key, v in schouten_nijenhuis(pi, pi).items():
        rep.fail("[pi, pi] = 0", ",".join(names[i] for i in key), v)
    return rep


def _is_jacobi(doc, rng):
    _, J = _multiderivation(doc)
    return jacobi_report(J)


def _is_complex(doc, rng):
    found = doc.of_kind(Tensor11)
    if found:
        _, j = _pick(doc, Tensor11, ("j",), what="(1,1) tensor")
        return is_complex_structure(j)
    return is_complex_structure(doc.complex_chart().j)


def _is_holomorphic(doc, rng):
    objs = [(k, v) for k, v in doc.of_kind(Multivector).items() if v.degree > 0]
    if not objs:
        raise UsageError("no multivector in file")
    rep = Report("is-holomorphic")
    for name, T in objs:
        child = is_holomorphic(T, _complex_for(doc, name))
        child.check = f"{child.check} {name}"
        rep.add(child)
    return rep


def _hp(doc, rng):
    name, pi = _bivector(doc)
    return check_hP_equivalences(pi, _complex_for(doc, name))


def _homogeneous(doc, rng):
    name, pi = _bivector(doc)
    _, eta = _pick(doc, Multivector, ("eta", "H"), degree=1, what="vector field")
    return check_homogeneous_equivalences(pi, _complex_for(doc, name), eta)


def _hj(doc, rng):
    name, J = _multiderivation(doc)
    return check_holomorphic_jacobi_equivalences(J, _complex_for(doc, name))


def _jacobi_nijenhuis(doc, rng):
    _, J = _multiderivation(doc)
    _, phi = _pick(doc, EndoDL, ("phi",), what="endomorphism of DL")
    return is_jacobi_nijenhuis(J, phi)


def _gc(doc, rng):
    found = {k: v for k, v in doc.of_kind(GenBlockMap).items() if v.kind == "tangent"}
    if len(found) != 1:
        raise UsageError("need exactly one tangent genblock")
    return is_generalized_complex(next(iter(found.values())))


def _gcontact(doc, rng):
    found = {k: v for k, v in doc.of_kind(GenBlockMap).items() if v.kind == "omni"}
    if len(found) != 1:
        raise UsageError("need exactly one omni genblock")
    return is_generalized_contact(next(iter(found.values())))


def _homogeneous_poisson(doc, rng):
    name, pi = _bivector(doc, ("Pi", "pi"))
    vname, eta = _pick(doc, Multivector, ("H", "eta"), degree=1, what="vector field")
    rep = Report("homogeneous-poisson")
    names = pi.chart.coords
    for key, v in schouten_nijenhuis(pi, pi).items():
        rep.fail("[pi, pi] = 0", ",".join(names[i] for i in key), v)
    if doc.object_charts[name] in doc.complex:
        cx = _complex_for(doc, name)
        for label, T in ((name, pi), (vname, eta)):
            if not T.im().is_zero():
                child = is_holomorphic(T, cx)
                child.check = f"{child.check} {label}"
                rep.add(child)
    for key, v in (lie_derivative(eta, pi) + pi).items():
        rep.fail("L_eta pi = -pi", ",".join(names[i] for i in key), v)
    return rep


def _algebroid(doc, rng):
    found = doc.of_kind(AlgebroidData)
    rep = Report("lie-algebroid")
    if found:
        for name, A in found.items():
            child = check_axioms(A)
            child.check = f"{child.check} {name}"
            rep.add(child)
        return rep
    bivs = {k: v for k, v in doc.of_kind(Multivector).items() if v.degree == 2}
    mds = {k: v for k, v in doc.of_kind(MultiDerivation).items() if v.degree == 2}
    if not bivs and not mds:
        raise UsageError("no algebroid, bivector or bi-derivation in file")
    for name, pi in bivs.items():
        child = check_axioms(cotangent_algebroid(pi))
        child.check = f"cotangent-algebroid {name}"
        rep.add(child)
    for name, J in mds.items():
        child = check_axioms(jet_algebroid(J))
        child.check = f"jet-algebroid {name}"
        rep.add(child)
    return rep


def _real_cotangent(doc, rng):
    name, Pi = _bivector(doc, ("Pi", "pi"))
    cx = _complex_for(doc, name)
    real, imag = holomorphic_cotangent_real_imaginary(Pi, cx)
    rep = Report("holomorphic-cotangent-real-imaginary")
    a = difference_report(real, cotangent_algebroid(Pi.re() * 4))
    a.check = "real algebroid = (T*M)_{4 Re Pi}"
    b = difference_report(imag, cotangent_algebroid(Pi.im() * 4))
    b.check = "imaginary algebroid = (T*M)_{4 Im Pi}"
    rep.add(a)
    rep.add(b)
    return rep


def _roundtrip(doc, rng):
    _, J = _multiderivation(doc)
    rep = Report("poissonization-roundtrip")
    hp = poissonize(J)
    back, flag = restrict_homogeneous(hp.pi, hp.fiber[0])
    diff = back - J
    if not diff.is_zero():
        rep.fail("restrict(poissonize(J)) = J", "", repr(diff))
    if flag != schouten_nijenhuis(hp.pi, hp.pi).is_zero():
        rep.fail("J Jacobi iff its Poissonization is Poisson")
    return rep


def _contact(doc, rng):
    _, theta = _pick(doc, DiffForm, ("theta",), what="contact form")
    J = contact_to_jacobi(theta)
    rep = Report("contact")
    rep.add(contact_relations(theta, J))
    rep.add(jacobi_report(J))
    return rep


def _sj_properties(doc, rng):
    """Graded skew-symmetry of the Schouten-Jacobi bracket on random pairs."""
    chart = doc.charts["main"]
    rep = Report("schouten-jacobi-skew")
    for trial in range(5):
        k1, k2 = rng.randint(1, 2), rng.randint(1, 2)
        D1 = random_multiderivation(chart, k1, rng)
        D2 = random_multiderivation(chart, k2, rng)
        a = schouten_jacobi(D1, D2)
        b = schouten_jacobi(D2, D1)
        sign = -1 if (k1 - 1) * (k2 - 1) % 2 == 0 else 1
        v = a - b * sign
        if not v.is_zero():
            rep.fail("[D1, D2] = -(-1)^{(k1-1)(k2-1)} [D2, D1]", f"trial {trial}", repr(v))
    return rep


@dataclass(frozen=True)
class CheckSpec:
    name: str
    needs: str
    run: object


CHECKS = {c.name: c for c in [
    CheckSpec("is-poisson", "bivector", _is_poisson),
    CheckSpec("is-jacobi", "bi-derivation J", _is_jacobi),
    CheckSpec("is-complex-structure", "tensor11 j or a complex main chart", _is_complex),
    CheckSpec("is-holomorphic", "multivectors on a complex chart", _is_holomorphic),
    CheckSpec("hP-equivalences", "bivector pi on a complex chart", _hp),
    CheckSpec("homogeneous-equivalences", "bivector pi and vector eta on a complex chart", _homogeneous),
    CheckSpec("hJ-equivalences", "bi-derivation J on a complex chart", _hj),
    CheckSpec("jacobi-nijenhuis", "bi-derivation J and endo-dl phi", _jacobi_nijenhuis),
    CheckSpec("generalized-complex", "tangent genblock", _gc),
    CheckSpec("generalized-contact", "omni genblock", _gcontact),
    CheckSpec("homogeneous-poisson", "bivector pi and vector eta", _homogeneous_poisson),
    CheckSpec("lie-algebroid", "algebroids, or bivectors / bi-derivations", _algebroid),
    CheckSpec("real-cotangent", "holomorphic Poisson bivector on a complex chart", _real_cotangent),
    CheckSpec("poissonization-roundtrip", "bi-derivation J", _roundtrip),
    CheckSpec("contact", "contact 1-form theta", _contact),
    CheckSpec("sj-skew", "main chart (random multiderivations, uses --seed)", _sj_properties),
]}


def run_check(name: str, path, seed: int = 0):
    """Load ``path`` and run check ``name``; return (report, seconds)."""
    if name not in CHECKS:
        raise UsageError(f"unknown check {name!r}; see list-checks")
    doc = load(path)
    rng = random.Random(seed)
    t0 = time.perf_counter()
    try:
        rep = CHECKS[name].run(doc, rng)
    except ValidationError as exc:
        rep = Report(name)
        rep.fail("precondition", "", str(exc))
        if exc.report is not None:
            rep.add(exc.report)
    return rep, time.perf_counter() - t0


# ----------------------------------------------------------------------------
# example gallery


def _darboux_file() -> str:
    ex = darboux_example(1)
    cx = ex.cx
    hol = cx.holomorphic_chart
    charts = {"main": cx.chart, "holomorphic": hol, "circle": ex.circle_chart, "symplectic": ex.omega_chart}
    objects = {
        "theta_holomorphic": ex.theta_holomorphic,
        "J_holomorphic": ex.J_holomorphic,
        "theta": ex.theta,
        "J": ex.J,
        "theta_r": ex.theta_r,
        "theta_s": ex.theta_s,
        "vartheta": ex.vartheta,
        "vartheta_j": ex.vartheta_j,
        "Omega": ex.Omega,
        "H": ex.H,
        "eta": ex.eta,
    }
    where = {"theta_holomorphic": "holomorphic", "J_holomorphic": "holomorphic",
             "theta_r": "circle", "theta_s": "circle", "vartheta": "circle", "vartheta_j": "circle",
             "Omega": "symplectic", "H": "symplectic", "eta": "symplectic"}
    for key, text in sorted(ex.texts.items()):
        objects[f"text_{key}"] = text
    return dumps(charts, objects, where, {"main": cx.pairs},
                 header="complex contact Darboux chart, n = 1: theta = dt - P dz\n"
                        "check with: hJ-equivalences, is-jacobi")


def _lie_poisson_file(constants, names) -> str:
    lp = lie_poisson(constants, names)
    return dumps({"main": lp.cx.chart}, {"Pi": lp.Pi, "H": lp.H, "pi": lp.pi, "eta": lp.eta},
                 complex_pairs={"main": lp.cx.pairs},
                 header="Lie-Poisson structure on the dual of a complex Lie algebra\n"
                        "check with: homogeneous-poisson, hP-equivalences")


def _contact_file() -> str:
    from .expr import Chart
    from .tensor import coordinate_form
    c = Chart(("t", "p", "q"))
    theta = coordinate_form(c, "t") - coordinate_form(c, "q") * c.var("p")
    return dumps({"main": c}, {"theta": theta, "J": contact_to_jacobi(theta)},
                 header="contact form dt - p dq on R^3 and its Jacobi pair\ncheck with: is-jacobi, contact")


def _nonjacobi_file() -> str:
    from .expr import Chart
    from .tensor import coordinate_vector
    c = Chart(("x", "y", "z"))
    J = MultiDerivation(wedge(coordinate_vector(c, "x"), coordinate_vector(c, "y")), coordinate_vector(c, "z"))
    return dumps({"main": c}, {"J": J}, header="a bi-derivation that is not Jacobi\ncheck with: is-jacobi")


def _zero_pi_file() -> str:
    from .complexgeom import ComplexChart
    cx = ComplexChart.from_names("z", "p")
    return dumps({"main": cx.chart}, {"pi": Multivector.zero(cx.chart, 2)}, complex_pairs={"main": cx.pairs},
                 header="zero bivector on C^2\ncheck with: hP-equivalences")


def _cotangent_file() -> str:
    from .complexgeom import ComplexChart
    cx = ComplexChart.from_names("z", "p")
    Pi = wedge(cx.d_dz("z"), cx.d_dz("p"))
    return dumps({"main": cx.chart}, {"Pi": Pi, "pi": Pi.im()},
                 complex_pairs={"main": cx.pairs},
                 header="canonical holomorphic Poisson structure d/dz ^ d/dp on C^2\n"
                        "check with: hP-equivalences, real-cotangent, lie-algebroid")


GALLERY = {
    "darboux_n1.toml": _darboux_file,
    "sl2_lie_poisson.toml": lambda: _lie_poisson_file(SL2_CONSTANTS, ["h", "e", "f"]),
    "heisenberg_lie_poisson.toml": lambda: _lie_poisson_file(HEISENBERG_CONSTANTS, ["x", "y", "z"]),
    "contact_r3.toml": _contact_file,
    "nonjacobi_r3.toml": _nonjacobi_file,
    "zero_pi.toml": _zero_pi_file,
    "cotangent_c2.toml": _cotangent_file,
}


def emit_examples(directory) -> list[Path]:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, make in GALLERY.items():
        p = out / name
        p.write_text(make(), encoding="utf-8")
        written.append(p)
    return written


# ----------------------------------------------------------------------------
# entry point


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="holojacobi", description="Validators for Jacobi-type structures.")
    sub = ap.add_subparsers(dest="command", required=True)
    c = sub.add_parser("check", help="run a check on structure files")
    c.add_argument("name")
    c.add_argument("files", nargs="+")
    c.add_argument("--format", choices=("text", "json"), default="text")
    c.add_argument("--seed", type=int, default=0)
    e = sub.add_parser("examples", help="write the example gallery")
    e.add_argument("dir")
    sub.add_parser("list-checks", help="list registered checks")
    return ap


def main(argv=None) -> int:
    ap = _parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "list-checks":
        for spec in CHECKS.values():
            print(f"{spec.name:28s} {spec.needs}")
        return 0
    if args.command == "examples":
        try:
            for p in emit_examples(args.dir):
                print(p)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        return 0
    results = []
    status = 0
    for path in args.files:
        try:
            rep, secs = run_check(args.name, path, args.seed)
        except (ParseError, UsageError, ChartMismatchError, OSError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        results.append((path, rep, secs))
        if not rep.passed:
            status = 1
    if args.format == "json":
        doc = {"check": args.name, "seed": args.seed,
               "results": [{"file": str(p), "passed": r.passed, "report": r.to_dict()} for p, r, _ in results]}
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        for path, rep, secs in results:
            print(f"== {path} ({secs:.2f} s)")
            print("\n".join(rep.lines()))
        print(f"{sum(r.passed for _, r, _ in results)}/{len(results)} passed")
    return status


if __name__ == "__main__":
    sys.exit(main())
