"""Poissonization, its inverse, the circle-bundle construction and example data.

Real Poissonization adds a fiber coordinate ``s > 0`` with Euler field
``s d/ds``; a section ``f`` lifts to ``s f`` and

    pi~ = s^-1 Lambda + E ^ d/ds,   so that  {s f, s g} = s J(f, g).

Holomorphic Poissonization adds ``w = rho (cos psi + i sin psi)``; ``psi`` is a
half-angle coordinate and ``H = w d/dw = (rho d/drho - i d/dpsi)/2``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .complexgeom import (
    ComplexChart,
    is_holomorphic,
)
from .errors import CompatibilityError, ExtractionError, ValidationError
from .expr import Chart, ScalarExpr
from .genstruct import GenBlockMap, is_generalized_contact
from .jacobi import (
    EndoDL,
    MultiDerivation,
    apply,
    contact_to_jacobi,
    extract_pair,
    is_jacobi,
    is_jacobi_nijenhuis,
    j_phi,
    jacobi_report,
)
from .report import EquivalenceReport, Report
from .tensor import (
    DiffForm,
    Multivector,
    Tensor11,
    coordinate_form,
    coordinate_vector,
    d,
    lie_derivative,
    nijenhuis_torsion,
    pn_compatible,
    schouten_nijenhuis,
    wedge,
)


@dataclass
class HomogeneousPoisson:
    """Bivector ``pi`` with ``L_eta pi = -pi`` on a chart extended by fiber coordinates."""

    chart: Chart
    pi: Multivector
    eta: Multivector
    fiber: tuple[str, ...]
    j: Tensor11 | None = None
    H: Multivector | None = None

    def __post_init__(self):
        if not (lie_derivative(self.eta, self.pi) + self.pi).is_zero():
            raise ValidationError("L_eta pi != -pi")


def _fresh(chart: Chart, name: str) -> str:
    if name not in chart.coords:
        return name
    k = 1
    while f"{name}{k}" in chart.coords:
        k += 1
    return f"{name}{k}"


def _test_sections(chart: Chart) -> list[ScalarExpr]:
    xs = chart.vars()
    out = [chart.one] + xs
    if len(xs) >= 2:
        out.append(xs[0] * xs[1])
    elif xs:
        out.append(xs[0] * xs[0])
    return out


def poissonize(J: MultiDerivation, fiber: str = "s") -> HomogeneousPoisson:
    if J.degree != 2:
        raise ValidationError("poissonize needs a bi-derivation")
    base = J.chart
    s_name = _fresh(base, fiber)
    chart = base.extend(s_name)
    s = chart.var(s_name)
    ds = coordinate_vector(chart, s_name)
    pi = J.Lambda.on(chart) * (1 / s) + wedge(J.E.on(chart), ds)
    secs = _test_sections(base)
    for f, g in combinations(secs, 2):
        lhs = pi.evaluate(d(s * f.on(chart)), d(s * g.on(chart)))
        rhs = s * apply(J, f, g).on(chart)
        if not (lhs - rhs).is_zero():
            raise ValidationError(f"Poissonization identity fails on ({f}, {g})")
    return HomogeneousPoisson(chart, pi, ds * s, (s_name,))


def restrict_homogeneous(pi_N: Multivector, fiber: str = "s") -> tuple[MultiDerivation, bool]:
    """The bi-derivation J(f, g) = s^-1 pi_N(d(s f), d(s g)) on the base chart, and is_jacobi(J)."""
    chart = pi_N.chart
    s = chart.var(fiber)
    eta = coordinate_vector(chart, fiber) * s
    if not (lie_derivative(eta, pi_N) + pi_N).is_zero():
        raise ValidationError("pi_N is not homogeneous: L_{s d/ds} pi_N != -pi_N")
    base = chart.drop(fiber)
    inv = 1 / s

    def ev(f, g):
        return pi_N.evaluate(d(s * f), d(s * g)) * inv

    try:
        J = extract_pair(ev, base, 2, value_chart=chart)
    except ExtractionError as exc:
        raise ValidationError(f"restriction depends on the fiber coordinate: {exc}") from None
    return J, is_jacobi(J)


def lift_derivation(D: MultiDerivation, chart: Chart, fiber: str) -> Multivector:
    """(X, f) -> X + f s d/ds."""
    s = chart.var(fiber)
    return D.symbol.on(chart) + coordinate_vector(chart, fiber) * (s * D.scalar.on(chart))


def poissonize_endo(phi: EndoDL, fiber: str = "s", chart: Chart | None = None) -> Tensor11:
    """The (1,1) tensor phi~ with phi~(lift D) = lift(phi D) and L_{s d/ds} phi~ = 0."""
    base = phi.chart
    chart = chart or base.extend(_fresh(base, fiber))
    fiber = chart.coords[-1] if fiber not in chart.coords else fiber
    s = chart.var(fiber)
    n = chart.dim
    si = chart.index(fiber)
    pos = {c: chart.index(c) for c in base.coords}
    rows = [[chart.zero] * n for _ in range(n)]
    for a, ca in enumerate(base.coords):
        for b, cb in enumerate(base.coords):
            rows[pos[ca]][pos[cb]] = phi.N.m[a][b].on(chart)
        rows[pos[ca]][si] = phi.Y[(a,)].on(chart) / s
        rows[si][pos[ca]] = phi.gamma[(a,)].on(chart) * s
    rows[si][si] = phi.g.on(chart)
    T = Tensor11(chart, rows)
    from .jacobi import dl_frame
    for D in dl_frame(base):
        lhs = T.apply(lift_derivation(D, chart, fiber))
        rhs = lift_derivation(phi.apply(D), chart, fiber)
        if not (lhs - rhs).is_zero():
            raise ValidationError("lifted endomorphism does not intertwine the lift")
    eta = coordinate_vector(chart, fiber) * s
    if not T.lie_derivative(eta).is_zero():
        raise ValidationError("lifted endomorphism is not homogeneous")
    return T


def restrict_endo(T: Tensor11, fiber: str = "s") -> EndoDL:
    """Inverse of :func:`poissonize_endo`; entries must be fiber-independent."""
    chart = T.chart
    base = chart.drop(fiber)
    s = chart.var(fiber)
    si = chart.index(fiber)
    idx = [chart.index(c) for c in base.coords]

    def r(e):
        try:
            return e.restrict(base)
        except Exception:
            raise ValidationError(f"entry {e} depends on {fiber}") from None

    N = Tensor11(base, [[r(T.m[a][b]) for b in idx] for a in idx])
    Y = Multivector(base, 1, {(k,): r(T.m[a][si] * s) for k, a in enumerate(idx)})
    gamma = DiffForm(base, 1, {(k,): r(T.m[si][a] / s) for k, a in enumerate(idx)})
    return EndoDL(N, Y, gamma, r(T.m[si][si]))


def homogeneous_pn_report(pi: Multivector, phi: Tensor11, eta: Multivector) -> Report:
    rep = Report("homogeneous-poisson-nijenhuis")
    names = pi.chart.coords
    for key, v in schouten_nijenhuis(pi, pi).items():
        rep.fail("[pi, pi] = 0", ",".join(names[i] for i in key), v)
    for (a, b), t in nijenhuis_torsion(phi).nonzero_entries():
        rep.fail("N_phi = 0", f"({names[a]},{names[b]})", repr(t))
    pn = pn_compatible(pi, phi)
    rep.add(pn)
    rep.structural = pn.structural
    for key, v in (lie_derivative(eta, pi) + pi).items():
        rep.fail("L_eta pi = -pi", ",".join(names[i] for i in key), v)
    if not phi.lie_derivative(eta).is_zero():
        rep.fail("L_eta phi = 0", "", repr(phi.lie_derivative(eta)))
    return rep


# ----------------------------------------------------------------------------
# holomorphic Poissonization


def _polar(chart: Chart, rho: str, psi: str):
    r = chart.var(rho)
    c, s = chart.cos(psi), chart.sin(psi)
    i = chart.i
    return r * (c + s * i), (c - s * i) / r


def lifted_complex_structure(j: Tensor11, chart: Chart, rho: str = "rho", psi: str = "psi") -> Tensor11:
    """j on the base, d/drho -> rho^-1 d/dpsi, d/dpsi -> -rho d/drho."""
    T = j.on(chart)
    rows = [list(r) for r in T.m]
    a, b = chart.index(rho), chart.index(psi)
    r = chart.var(rho)
    rows[b][a] = 1 / r
    rows[a][b] = -r
    return Tensor11(chart, rows)


def _holomorphic_lift(J: MultiDerivation, cx: ComplexChart, rho="rho", psi="psi"):
    base = cx.chart
    if J.chart != base:
        raise ValidationError("J must live on the real chart of the complex chart")
    chart = base.extend(rho, psi, angles=(psi,))
    w, winv = _polar(chart, rho, psi)
    jt = lifted_complex_structure(cx.j, chart, rho, psi)
    half = chart.const(1) / 2
    H = (coordinate_vector(chart, rho) * chart.var(rho)
         - coordinate_vector(chart, psi) * chart.i) * half
    Pi = (J.Lambda.on(chart) + wedge(J.E.on(chart), H)) * winv
    return chart, w, jt, H, Pi


def holomorphic_poissonize(J: MultiDerivation, cx: ComplexChart, *, rho="rho", psi="psi") -> HomogeneousPoisson:
    """Homogeneous holomorphic Poisson (Pi, H) on chart x (rho, psi) with Pi = w^-1 (Lambda + E ^ H)."""
    rep = holomorphic_jacobi_type_report(J, cx)
    if not rep:
        raise ValidationError("J is not a holomorphic bi-derivation", rep)
    chart, w, jt, H, Pi = _holomorphic_lift(J, cx, rho, psi)
    for lam in _holomorphic_sections(cx):
        f, g = lam
        lhs = Pi.evaluate(d(w * f.on(chart)), d(w * g.on(chart)))
        rhs = w * apply(J, f, g).on(chart)
        if not (lhs - rhs).is_zero():
            raise ValidationError(f"holomorphic Poissonization identity fails on ({f}, {g})")
    if not is_holomorphic(Pi, jt):
        raise ValidationError("Pi is not holomorphic")
    eta = coordinate_vector(chart, rho) * chart.var(rho)
    out = HomogeneousPoisson(chart, Pi, eta, (rho, psi), jt, H)
    if not (lie_derivative(H, Pi) + Pi).is_zero():
        raise ValidationError("L_H Pi != -Pi")
    return out


def _holomorphic_sections(cx: ComplexChart):
    zs = [cx.z(z) for z in cx.pairs]
    secs = [cx.chart.one] + zs
    secs.append(zs[0] * zs[-1])
    return list(combinations(secs, 2))


def formal_poissonize(J: MultiDerivation, w: str = "w") -> Multivector:
    """Pi = w^-1 Lambda + E ^ d/dw, treating the chart coordinates as holomorphic ones."""
    chart = J.chart.extend(_fresh(J.chart, w))
    wv = chart.var(chart.coords[-1])
    return J.Lambda.on(chart) * (1 / wv) + wedge(J.E.on(chart), coordinate_vector(chart, chart.coords[-1]))


def holomorphic_jacobi_type_report(J: MultiDerivation, cx: ComplexChart) -> Report:
    rep = Report("holomorphic-bi-derivation")
    lam = is_holomorphic(J.Lambda, cx)
    lam.check = "Lambda holomorphic of type (2,0)"
    E = is_holomorphic(J.E, cx)
    E.check = "E holomorphic of type (1,0)"
    rep.add(lam).add(E)
    rep.structural = lam.structural or E.structural
    return rep


# ----------------------------------------------------------------------------
# circle bundle


@dataclass
class CircleBundle:
    """Real data on chart x S^1 obtained from a complex bi-derivation."""

    chart: Chart
    J_hat: MultiDerivation
    J_hat_prime: MultiDerivation
    j_hat: EndoDL
    poisson: HomogeneousPoisson | None = None
    notes: list[str] = field(default_factory=list)

    def j_hat_one(self) -> MultiDerivation:
        return self.j_hat.apply(MultiDerivation.identity(self.chart))


def circle_bundle_structures(J: MultiDerivation, cx: ComplexChart, *, rho="rho", psi="psi",
                             validate: bool = True) -> CircleBundle:
    """(J^, J^', j^) from Im Pi, Re Pi and the lifted complex structure.

    With ``validate`` J must be holomorphic; otherwise the construction is
    carried out formally for any complex bi-derivation.
    """
    if validate:
        hp = holomorphic_poissonize(J, cx, rho=rho, psi=psi)
        chart, Pi, jt = hp.chart, hp.pi, hp.j
    else:
        chart, _, jt, H, Pi = _holomorphic_lift(J, cx, rho, psi)
        hp = None
    Jh, _ = restrict_homogeneous(Pi.im(), rho)
    Jhp, _ = restrict_homogeneous(Pi.re(), rho)
    jh = restrict_endo(jt, rho)
    return CircleBundle(chart.drop(rho), Jh, Jhp, jh, hp)


def check_holomorphic_jacobi_equivalences(J: MultiDerivation, cx: ComplexChart) -> EquivalenceReport:
    """Holomorphic Jacobi vs Jacobi-Nijenhuis vs generalized contact on the circle bundle."""
    c1 = Report("holomorphic-jacobi")
    tr = holomorphic_jacobi_type_report(J, cx)
    c1.add(tr)
    c1.structural = tr.structural
    c1.add(jacobi_report(J))

    cb = circle_bundle_structures(J, cx, validate=False)

    def prime_report(name):
        rep = Report(name)
        try:
            Jp = j_phi(cb.J_hat, cb.j_hat)
        except CompatibilityError as exc:
            rep.fail("J^_j^ defined", "", str(exc))
            rep.structural = True
            return rep
        diff = cb.J_hat_prime - Jp
        if not diff.is_zero():
            rep.fail("J^' = J^_j^", "", repr(diff))
        return rep

    c2 = Report("jacobi-nijenhuis")
    c2.add(is_jacobi_nijenhuis(cb.J_hat, cb.j_hat))
    c2.add(prime_report("J^' = J^_j^"))
    c3 = Report("generalized-contact")
    c3.add(is_generalized_contact(GenBlockMap.contact(cb.j_hat, cb.J_hat)))
    c3.add(prime_report("J^' = J^_j^"))
    return EquivalenceReport("hJ-equivalences", {"holomorphic-jacobi": c1,
                                                 "jacobi-nijenhuis": c2,
                                                 "generalized-contact": c3})


# ----------------------------------------------------------------------------
# Lie-Poisson structures


SL2_CONSTANTS = {("h", "e"): {"e": 2}, ("h", "f"): {"f": -2}, ("e", "f"): {"h": 1}}
HEISENBERG_CONSTANTS = {("x", "y"): {"z": 1}}


def _structure_table(names, constants):
    n = len(names)
    idx = {c: k for k, c in enumerate(names)}
    c = [[[0] * n for _ in range(n)] for _ in range(n)]
    for (a, b), out in constants.items():
        for k, v in out.items():
            if a == b:
                raise ValidationError(f"[{a},{a}] must vanish")
            c[idx[a]][idx[b]][idx[k]] += v
            c[idx[b]][idx[a]][idx[k]] -= v
    return c


def check_structure_constants(names, constants) -> Report:
    """Antisymmetry is built in; the Jacobi identity is checked on all basis triples."""
    rep = Report("lie-algebra")
    c = _structure_table(names, constants)
    n = len(names)
    for i, j, k in combinations(range(n), 3):
        for l in range(n):
            tot = sum(c[i][j][m] * c[m][k][l] + c[j][k][m] * c[m][i][l] + c[k][i][m] * c[m][j][l]
                      for m in range(n))
            if tot:
                rep.fail("Jacobi identity", f"({names[i]},{names[j]},{names[k]}) -> {names[l]}", tot)
    return rep


@dataclass
class LiePoisson:
    cx: ComplexChart
    Pi: Multivector
    H: Multivector
    Pi_holomorphic: Multivector
    H_holomorphic: Multivector

    @property
    def pi(self) -> Multivector:
        return self.Pi.im()

    @property
    def eta(self) -> Multivector:
        return self.H.re() * 2


def lie_poisson(constants, names=None) -> LiePoisson:
    """Pi = sum_{i<j} c^k_ij xi_k d_i ^ d_j and the Euler field on the complex dual."""
    if names is None:
        seen = []
        for (a, b), out in constants.items():
            for c in (a, b, *out):
                if c not in seen:
                    seen.append(c)
        names = seen
    names = list(names)
    rep = check_structure_constants(names, constants)
    if not rep:
        raise ValidationError("structure constants fail the Jacobi identity", rep)
    c = _structure_table(names, constants)
    cx = ComplexChart.from_names(*names)
    hc = cx.holomorphic_chart
    xs = hc.vars()
    n = len(names)
    comps = {}
    for i, j in combinations(range(n), 2):
        v = sum((xs[k] * c[i][j][k] for k in range(n) if c[i][j][k]), hc.zero)
        if not v.is_zero():
            comps[(i, j)] = v
    Pi_h = Multivector(hc, 2, comps)
    H_h = Multivector(hc, 1, {(k,): xs[k] for k in range(n)})
    return LiePoisson(cx, cx.realify(Pi_h), cx.realify(H_h), Pi_h, H_h)


def lie_poisson_report(lp: LiePoisson) -> Report:
    rep = Report("lie-poisson")
    rep.add(is_holomorphic(lp.Pi, lp.cx))
    rep.add(is_holomorphic(lp.H, lp.cx))
    names = lp.cx.chart.coords
    for key, v in schouten_nijenhuis(lp.Pi, lp.Pi).items():
        rep.fail("[Pi, Pi] = 0", ",".join(names[i] for i in key), v)
    for key, v in (lie_derivative(lp.H, lp.Pi) + lp.Pi).items():
        rep.fail("L_H Pi = -Pi", ",".join(names[i] for i in key), v)
    return rep


# ----------------------------------------------------------------------------
# complex contact Darboux chart


@dataclass
class DarbouxExample:
    """Canonical complex contact form dt - P_k dz^k and its derived data."""

    n: int
    cx: ComplexChart
    theta_holomorphic: DiffForm
    J_holomorphic: MultiDerivation
    theta: DiffForm
    J: MultiDerivation
    omega_chart: Chart
    Omega: DiffForm
    H: Multivector
    eta: Multivector
    circle_chart: Chart
    theta_r: DiffForm
    theta_s: DiffForm
    vartheta: DiffForm
    vartheta_j: DiffForm
    texts: dict = field(default_factory=dict)


def _darboux_names(n):
    if n == 1:
        return ["z"], ["P"], [("x", "y")], [("m", "q")]
    zs = [f"z{k}" for k in range(1, n + 1)]
    Ps = [f"P{k}" for k in range(1, n + 1)]
    return zs, Ps, [(f"x{k}", f"y{k}") for k in range(1, n + 1)], [(f"m{k}", f"q{k}") for k in range(1, n + 1)]


def _form_from_text(chart: Chart, entries: dict) -> DiffForm:
    return DiffForm(chart, 1, {(chart.index(k),): chart.parse(v) for k, v in entries.items()})


def darboux_example(n: int) -> DarbouxExample:
    if n < 0:
        raise ValueError("n must be non-negative")
    zs, Ps, xy, mq = _darboux_names(n)
    pairs = {"t": ("r", "s")}
    coords = ["r", "s"]
    for z, P, (x, y), (m, q) in zip(zs, Ps, xy, mq):
        pairs[z] = (x, y)
        coords += [x, y]
    for P, (m, q) in zip(Ps, mq):
        pairs[P] = (m, q)
        coords += [m, q]
    cx = ComplexChart(Chart(tuple(coords)), pairs)
    hc = cx.holomorphic_chart
    theta_h = coordinate_form(hc, "t")
    for z, P in zip(zs, Ps):
        theta_h = theta_h - coordinate_form(hc, z) * hc.var(P)
    J_h = contact_to_jacobi(theta_h)
    J = MultiDerivation(cx.realify(J_h.Lambda), cx.realify(J_h.E))
    theta = cx.realify(theta_h)

    oc = cx.chart.extend("u", "v")
    w = oc.var("u") + oc.var("v") * oc.i
    dw = coordinate_form(oc, "u") + coordinate_form(oc, "v") * oc.i
    th = theta.on(oc)
    Omega = wedge(dw, th)
    for z, P in zip(zs, Ps):
        Omega = Omega - wedge(cx.dz(P).on(oc), cx.dz(z).on(oc)) * w
    half = oc.const(1) / 2
    H = (coordinate_vector(oc, "u") - coordinate_vector(oc, "v") * oc.i) * (w * half)
    eta = coordinate_vector(oc, "u") * oc.var("u") + coordinate_vector(oc, "v") * oc.var("v")

    cc = cx.chart.extend("psi", angles=("psi",))
    tr = {"r": "1"}
    ts = {"s": "1"}
    for (x, y), (m, q) in zip(xy, mq):
        tr[x] = f"-{m}"
        tr[y] = q
        ts[y] = f"-{m}"
        ts[x] = f"-{q}"
    theta_r = _form_from_text(cc, tr)
    theta_s = _form_from_text(cc, ts)
    c, s = cc.cos("psi"), cc.sin("psi")
    vartheta = theta_r * c - theta_s * s
    vartheta_j = -(theta_r * s) - theta_s * c
    texts = {
        "theta_r": " + ".join(f"({v})*d{k}" for k, v in tr.items()),
        "theta_s": " + ".join(f"({v})*d{k}" for k, v in ts.items()),
        "vartheta": "cos(psi)*theta_r - sin(psi)*theta_s",
        "vartheta_j": "-sin(psi)*theta_r - cos(psi)*theta_s",
    }
    return DarbouxExample(n, cx, theta_h, J_h, theta, J, oc, Omega, H, eta, cc,
                          theta_r, theta_s, vartheta, vartheta_j, texts)


def rotated_contact_forms(ex: DarbouxExample) -> tuple[DiffForm, DiffForm]:
    """(Re(e^{i psi} theta), -Im(e^{i psi} theta)) on chart x S^1, computed from theta."""
    cc = ex.circle_chart
    e = cc.cos("psi") + cc.sin("psi") * cc.i
    wt = ex.theta.on(cc) * e
    return wt.re(), -wt.im()


def proportionality(a: DiffForm, b: DiffForm):
    """The function f with a = f b, or None."""
    f = None
    for key, v in b.items():
        f = a[key] / v
        break
    if f is None:
        return None if not a.is_zero() else a.chart.zero
    return f if (a - b * f).is_zero() else None
