"""Complex structures, type decomposition and holomorphy.

Complex objects live on the underlying real chart with complex coefficients.
``ComplexChart`` pairs real coordinates ``(x, y)`` into holomorphic ones
``z = x + i y`` and carries the standard structure ``j d/dx = d/dy``.
"""
from __future__ import annotations

from itertools import combinations

from .errors import CompatibilityError, DegreeError, ValidationError
from .expr import Chart, ScalarExpr, as_scalar
from .genstruct import GenBlockMap, is_generalized_complex
from .report import EquivalenceReport, Report
from .tensor import (
    DiffForm,
    Multivector,
    Tensor11,
    coordinate_form,
    coordinate_vector,
    lie_derivative,
    nijenhuis_torsion,
    pi_phi,
    pn_compatible,
    schouten_nijenhuis,
    wedge,
)


def standard_j(chart: Chart, pairs) -> Tensor11:
    """j d/dx = d/dy, j d/dy = -d/dx for each (x, y) in ``pairs``."""
    n = chart.dim
    rows = [[0] * n for _ in range(n)]
    seen = set()
    for x, y in pairs:
        a, b = chart.index(x), chart.index(y)
        rows[b][a] = 1
        rows[a][b] = -1
        seen.update((a, b))
    if len(seen) != n:
        raise ValidationError("every coordinate must belong to exactly one (x, y) pair")
    return Tensor11(chart, rows)


def is_complex_structure(j: Tensor11) -> Report:
    chart = j.chart
    if chart.dim % 2:
        raise DegreeError("complex structures need an even-dimensional chart")
    rep = Report("complex-structure")
    sq = j @ j
    names = chart.coords
    for a in range(chart.dim):
        for b in range(chart.dim):
            v = sq.m[a][b] + (1 if a == b else 0)
            if not v.is_zero():
                rep.fail("j^2 = -1", f"({names[a]},{names[b]})", v)
    if rep.failures:
        return rep
    for (a, b), t in nijenhuis_torsion(j).nonzero_entries():
        rep.fail("N_j = 0", f"(d/d{names[a]}, d/d{names[b]})", repr(t))
    return rep


class ComplexChart:
    """A real chart with holomorphic coordinates ``z = x + i y``.

    ``pairs`` maps each holomorphic name to its ``(x, y)`` real coordinates.
    """

    def __init__(self, chart: Chart, pairs: dict, j: Tensor11 | None = None):
        self.chart = chart
        self.pairs = dict(pairs)
        std = standard_j(chart, self.pairs.values())
        if j is not None and not (j == std):
            raise ValidationError("j is not the standard structure of the declared frame")
        self.j = std
        rep = is_complex_structure(self.j)
        if not rep:
            raise ValidationError("not a complex structure", rep)
        self.holomorphic_chart = Chart(tuple(self.pairs))

    @classmethod
    def from_names(cls, *names: str, suffixes=("_x", "_y")):
        """Real chart with coordinates ``z_x, z_y`` for each holomorphic ``z``."""
        coords = []
        pairs = {}
        for z in names:
            x, y = z + suffixes[0], z + suffixes[1]
            coords += [x, y]
            pairs[z] = (x, y)
        return cls(Chart(tuple(coords)), pairs)

    def z(self, name: str) -> ScalarExpr:
        x, y = self.pairs[name]
        return self.chart.var(x) + self.chart.var(y) * self.chart.i

    def dz(self, name: str) -> DiffForm:
        x, y = self.pairs[name]
        return coordinate_form(self.chart, x) + coordinate_form(self.chart, y) * self.chart.i

    def d_dz(self, name: str) -> Multivector:
        """d/dz = (d/dx - i d/dy) / 2."""
        x, y = self.pairs[name]
        c = self.chart
        return (coordinate_vector(c, x) - coordinate_vector(c, y) * c.i) * (c.const(1) / 2)

    def d_dzbar(self, name: str) -> Multivector:
        x, y = self.pairs[name]
        c = self.chart
        return (coordinate_vector(c, x) + coordinate_vector(c, y) * c.i) * (c.const(1) / 2)

    def holomorphic(self, e) -> ScalarExpr:
        """Realify an expression written in the holomorphic coordinates."""
        e = as_scalar(e, self.holomorphic_chart)
        return e.substitute({z: self.z(z) for z in self.pairs}, self.chart)

    def realify(self, T):
        """Realify a multivector or form written in holomorphic coordinates.

        ``d/dz`` becomes ``(d/dx - i d/dy)/2`` and ``dz`` becomes ``dx + i dy``.
        """
        if isinstance(T, (ScalarExpr, str, int)):
            return self.holomorphic(T)
        hc = self.holomorphic_chart
        if T.chart != hc:
            raise ValidationError("object must live on the holomorphic chart")
        names = hc.coords
        if isinstance(T, Multivector):
            basis = [self.d_dz(z) for z in names]
            out = Multivector.zero(self.chart, T.degree)
        elif isinstance(T, DiffForm):
            basis = [self.dz(z) for z in names]
            out = DiffForm.zero(self.chart, T.degree)
        else:
            raise TypeError(f"cannot realify {type(T).__name__}")
        for key, v in T.items():
            c = self.holomorphic(v)
            if not key:
                term = type(out)(self.chart, 0, {(): c})
            else:
                term = wedge(*[basis[i] for i in key]) * c
            out = out + term
        return out

    def __repr__(self):
        return f"ComplexChart({self.chart}, {self.pairs})"


def _j_of(j) -> Tensor11:
    return j.j if isinstance(j, ComplexChart) else j


def projectors(j) -> tuple[Tensor11, Tensor11]:
    """(p10, p01) = ((1 - i j)/2, (1 + i j)/2)."""
    j = _j_of(j)
    chart = j.chart
    one = Tensor11.identity(chart)
    half = chart.const(1) / 2
    ij = j * chart.i
    return (one - ij) * half, (one + ij) * half


def _check_type(T, pq):
    p, q = pq
    if p < 0 or q < 0 or p + q != T.degree:
        raise DegreeError(f"type {pq} does not match degree {T.degree}")


def type_project(T: Multivector, j, pq: tuple[int, int]) -> Multivector:
    """Component of T in wedge^p T^{1,0} (x) wedge^q T^{0,1}."""
    _check_type(T, pq)
    p10, p01 = projectors(j)
    k = T.degree
    chart = T.chart
    if k == 0:
        return T
    cols10, cols01 = {}, {}

    def col(P, cache, i):
        if i not in cache:
            cache[i] = P.apply(coordinate_vector(chart, i))
        return cache[i]

    out = Multivector.zero(chart, k)
    for key, v in T.items():
        for S in combinations(range(k), pq[0]):
            vecs = [col(p10, cols10, key[m]) if m in S else col(p01, cols01, key[m]) for m in range(k)]
            out = out + wedge(*vecs) * v
    return out


def type_project_form(w: DiffForm, j, pq: tuple[int, int]) -> DiffForm:
    """Component of a form of type (p, q), via the dual projectors."""
    _check_type(w, pq)
    p10, p01 = projectors(j)
    k = w.degree
    chart = w.chart
    if k == 0:
        return w
    rows10 = [p10.dual(coordinate_form(chart, i)) for i in range(chart.dim)]
    rows01 = [p01.dual(coordinate_form(chart, i)) for i in range(chart.dim)]
    out = DiffForm.zero(chart, k)
    for key, v in w.items():
        for S in combinations(range(k), pq[0]):
            fs = [rows10[key[m]] if m in S else rows01[key[m]] for m in range(k)]
            out = out + wedge(*fs) * v
    return out


def is_of_type(T: Multivector, j, pq) -> bool:
    return (type_project(T, j, pq) - T).is_zero()


def _loc(key, names):
    return ",".join(names[i] for i in key) or "scalar"


def holomorphic_report(T, j) -> Report:
    """Frame-free holomorphy: T of type (k,0) and [Z, T]^{(k,0)} = 0 for Z in T^{0,1}.

    The second condition is linear over functions in Z, so the frame
    ``p01(d/dx_c)`` of T^{0,1} suffices.
    """
    jt = _j_of(j)
    chart = jt.chart
    rep = Report("holomorphic")
    if isinstance(T, ScalarExpr):
        T = Multivector(chart, 0, {(): T})
    k = T.degree
    names = chart.coords
    rest = T - type_project(T, jt, (k, 0)) if k else Multivector.zero(chart, 0)
    for key, v in rest.items():
        rep.fail(f"type ({k},0)", _loc(key, names), v)
    if rep.failures:
        rep.structural = True
        return rep
    _, p01 = projectors(jt)
    for c in range(chart.dim):
        Z = p01.apply(coordinate_vector(chart, c))
        br = schouten_nijenhuis(Z, T)
        if isinstance(br, ScalarExpr):
            br = Multivector(chart, 0, {(): br})
        elif k:
            br = type_project(br, jt, (k, 0))
        for key, v in br.items():
            rep.fail("dbar T = 0", f"direction d/d{names[c]}, component {_loc(key, names)}", v)
            break
    return rep


def cauchy_riemann_report(T, cx: ComplexChart) -> Report:
    """Holomorphy in the declared frame: components T(dz^A) are annihilated by d/dx + i d/dy."""
    chart = cx.chart
    rep = Report("cauchy-riemann")
    if isinstance(T, ScalarExpr):
        T = Multivector(chart, 0, {(): T})
    k = T.degree
    rest = T - type_project(T, cx.j, (k, 0)) if k else Multivector.zero(chart, 0)
    if not rest.is_zero():
        rep.fail(f"type ({k},0)", "", repr(rest))
        rep.structural = True
        return rep
    zs = list(cx.pairs)
    dzs = [cx.dz(z) for z in zs]
    for A in combinations(range(len(zs)), k):
        comp = T.evaluate(*[dzs[a] for a in A]) if k else T[()]
        for z in zs:
            x, y = cx.pairs[z]
            v = comp.diff(x) + comp.diff(y) * chart.i
            if not v.is_zero():
                rep.fail("(d/dx + i d/dy) T(dz^A) = 0", f"A=({','.join(zs[a] for a in A)}), z={z}", v)
    return rep


def is_holomorphic(T, j) -> Report:
    """Holomorphy of a complex multivector (or function).

    With a ``ComplexChart`` both the frame-free and the declared-frame checks
    run; a disagreement between them is reported as a failure.
    """
    rep = holomorphic_report(T, j)
    if isinstance(j, ComplexChart):
        cr = cauchy_riemann_report(T, j)
        out = Report("is-holomorphic", children=[rep, cr])
        if rep.passed != cr.passed:
            out.fail("frame-free and Cauchy-Riemann checks agree", "", f"{rep.passed} vs {cr.passed}")
        out.structural = rep.structural
        return out
    rep.check = "is-holomorphic"
    return rep


def holomorphic_vector_from_real(eta: Multivector, j) -> Multivector:
    """H = (eta - i j eta) / 2."""
    jt = _j_of(j)
    c = eta.chart
    return (eta - jt.apply(eta) * c.i) * (c.const(1) / 2)


# ----------------------------------------------------------------------------
# equivalence checkers


def _is_zero_report(rep: Report, identity: str, T, names):
    for key, v in T.items():
        rep.fail(identity, _loc(key, names), v)


def _holomorphic_poisson(pi: Multivector, j, name="holomorphic-poisson"):
    """Report for Pi = pi_j + i pi being holomorphic Poisson; also returns Pi (or None)."""
    jt = _j_of(j)
    chart = pi.chart
    rep = Report(name)
    try:
        pij = pi_phi(pi, jt)
    except CompatibilityError as exc:
        rep.fail("pi_j defined (pi# j* = j pi#)", "", str(exc))
        rep.structural = True
        return rep, None
    Pi = pij + pi * chart.i
    rep.add(is_holomorphic(Pi, j))
    _is_zero_report(rep, "[Pi, Pi] = 0", schouten_nijenhuis(Pi, Pi), chart.coords)
    return rep, Pi


def _poisson_nijenhuis(pi: Multivector, jt: Tensor11, name="poisson-nijenhuis") -> Report:
    rep = Report(name)
    _is_zero_report(rep, "[pi, pi] = 0", schouten_nijenhuis(pi, pi), pi.chart.coords)
    for (a, b), t in nijenhuis_torsion(jt).nonzero_entries():
        rep.fail("N_j = 0", f"({a},{b})", repr(t))
    pn = pn_compatible(pi, jt)
    rep.add(pn)
    rep.structural = pn.structural
    return rep


def check_hP_equivalences(pi: Multivector, j) -> EquivalenceReport:
    """Holomorphic Poisson vs Poisson-Nijenhuis vs generalized complex, each evaluated on its own."""
    jt = _j_of(j)
    if not is_complex_structure(jt):
        raise ValidationError("j is not a complex structure")
    c1, _ = _holomorphic_poisson(pi, j)
    c2 = _poisson_nijenhuis(pi, jt)
    c3 = is_generalized_complex(GenBlockMap.tangent(jt, pi))
    return EquivalenceReport("hP-equivalences", {"holomorphic-poisson": c1,
                                                 "poisson-nijenhuis": c2,
                                                 "generalized-complex": c3})


def check_homogeneous_equivalences(pi: Multivector, j, eta: Multivector) -> EquivalenceReport:
    """Homogeneous versions with H = (eta - i j eta)/2."""
    jt = _j_of(j)
    if not is_complex_structure(jt):
        raise ValidationError("j is not a complex structure")
    chart = pi.chart
    names = chart.coords
    H = holomorphic_vector_from_real(eta, jt)

    c1, Pi = _holomorphic_poisson(pi, j, "homogeneous-holomorphic-poisson")
    c1.add(is_holomorphic(H, j))
    if Pi is not None:
        _is_zero_report(c1, "L_H Pi = -Pi", lie_derivative(H, Pi) + Pi, names)
        if c1.passed:
            pij = Pi.re()
            jeta = jt.apply(eta)
            extra = Report("bi-hamiltonian identities")
            _is_zero_report(extra, "L_{j eta} pi_j = pi", lie_derivative(jeta, pij) - pi, names)
            _is_zero_report(extra, "L_{j eta} pi = -pi_j", lie_derivative(jeta, pi) + pij, names)
            c1.add(extra)

    c2 = _poisson_nijenhuis(pi, jt, "homogeneous-poisson-nijenhuis")
    _is_zero_report(c2, "L_eta pi = -pi", lie_derivative(eta, pi) + pi, names)
    Lj = lie_derivative(eta, jt)
    if not Lj.is_zero():
        c2.fail("L_eta j = 0", "", repr(Lj))

    from .genstruct import is_homogeneous_gc
    c3 = is_homogeneous_gc(GenBlockMap.tangent(jt, pi), eta)
    return EquivalenceReport("homogeneous-equivalences", {
        "homogeneous-holomorphic-poisson": c1,
        "homogeneous-poisson-nijenhuis": c2,
        "homogeneous-generalized-complex": c3,
    })
