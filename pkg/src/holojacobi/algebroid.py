"""Lie algebroids on explicit frames.

A section is a list of coefficient functions on the frame.  The bracket of
frame elements is ``[e_a, e_b] = sum_k c[a, b][k] e_k`` and extends to all
sections by the Leibniz rule, so the axioms only need checking on the frame.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .complexgeom import ComplexChart, is_holomorphic
from .errors import ValidationError
from .expr import Chart, ScalarExpr
from .jacobi import (
    JetSection,
    MultiDerivation,
    dl_bracket,
    is_jacobi,
    jet,
    jet_bracket,
    jet_biderivation,
    j_sharp,
)
from .report import Report
from .tensor import (
    Multivector,
    coordinate_form,
    coordinate_vector,
    d,
    form_bracket_pi,
    interior,
    lie_derivative,
    schouten_nijenhuis,
    sharp,
)


@dataclass
class AlgebroidData:
    chart: Chart
    anchor: list[Multivector]
    structure: dict  # (a, b) with a < b -> list of r coefficients
    labels: list[str] = field(default_factory=list)

    def __post_init__(self):
        r = len(self.anchor)
        if not self.labels:
            self.labels = [f"e{k}" for k in range(r)]
        z = self.chart.zero
        table = {}
        for (a, b), coeffs in self.structure.items():
            if a == b:
                raise ValidationError("structure functions must be antisymmetric")
            coeffs = list(coeffs)
            if a > b:
                a, b = b, a
                coeffs = [-c for c in coeffs]
            table[(a, b)] = coeffs
        for a, b in combinations(range(r), 2):
            table.setdefault((a, b), [z] * r)
        self.structure = table

    @property
    def rank(self) -> int:
        return len(self.anchor)

    def c(self, a: int, b: int) -> list[ScalarExpr]:
        z = self.chart.zero
        if a == b:
            return [z] * self.rank
        if a < b:
            return self.structure[(a, b)]
        return [-v for v in self.structure[(b, a)]]

    def frame(self, a: int) -> list[ScalarExpr]:
        return [self.chart.one if k == a else self.chart.zero for k in range(self.rank)]

    def anchor_of(self, sec) -> Multivector:
        out = Multivector.zero(self.chart, 1)
        for f, X in zip(sec, self.anchor):
            if not f.is_zero():
                out = out + X * f
        return out

    def bracket(self, s1, s2) -> list[ScalarExpr]:
        """Leibniz extension of the frame bracket."""
        r = self.rank
        out = [self.chart.zero] * r
        rho1 = self.anchor_of(s1)
        rho2 = self.anchor_of(s2)
        for b in range(r):
            out[b] = out[b] + rho1(s2[b]) - rho2(s1[b])
        for a in range(r):
            if s1[a].is_zero():
                continue
            for b in range(r):
                if a == b or s2[b].is_zero():
                    continue
                fg = s1[a] * s2[b]
                for k, c in enumerate(self.c(a, b)):
                    if not c.is_zero():
                        out[k] = out[k] + fg * c
        return out

    def __eq__(self, other):
        if not isinstance(other, AlgebroidData):
            return NotImplemented
        return not difference_report(self, other).failures

    __hash__ = None


def difference_report(A: AlgebroidData, B: AlgebroidData) -> Report:
    rep = Report("algebroid-equality")
    if A.chart != B.chart or A.rank != B.rank:
        rep.fail("same chart and rank")
        return rep
    for a in range(A.rank):
        v = A.anchor[a] - B.anchor[a]
        if not v.is_zero():
            rep.fail("anchor", A.labels[a], repr(v))
    for a, b in combinations(range(A.rank), 2):
        for k, (x, y) in enumerate(zip(A.c(a, b), B.c(a, b))):
            if not (x - y).is_zero():
                rep.fail("structure function", f"c[{A.labels[a]},{A.labels[b]}]^{A.labels[k]}", x - y)
    return rep


def check_axioms(A: AlgebroidData) -> Report:
    """Anchor is a bracket morphism and the Jacobiator vanishes on frame triples."""
    rep = Report("lie-algebroid")
    r = A.rank
    for a, b in combinations(range(r), 2):
        lhs = A.anchor_of(A.c(a, b))
        rhs = schouten_nijenhuis(A.anchor[a], A.anchor[b])
        diff = lhs - rhs
        if not diff.is_zero():
            rep.fail("rho[a, b] = [rho a, rho b]", f"({A.labels[a]}, {A.labels[b]})", repr(diff))
    for a, b, c in combinations(range(r), 3):
        ea, eb, ec = A.frame(a), A.frame(b), A.frame(c)
        t1 = A.bracket(A.bracket(ea, eb), ec)
        t2 = A.bracket(A.bracket(eb, ec), ea)
        t3 = A.bracket(A.bracket(ec, ea), eb)
        for k in range(r):
            v = t1[k] + t2[k] + t3[k]
            if not v.is_zero():
                rep.fail("Jacobi identity", f"({A.labels[a]}, {A.labels[b]}, {A.labels[c]}) component {A.labels[k]}", v)
                break
    return rep


def tangent_algebroid(chart: Chart) -> AlgebroidData:
    return AlgebroidData(chart, [coordinate_vector(chart, i) for i in range(chart.dim)], {},
                         [f"d/d{c}" for c in chart.coords])


def deformed_algebroid(A: AlgebroidData, phi) -> AlgebroidData:
    """Anchor rho o phi and bracket [phi a, b] + [a, phi b] - phi[a, b].

    ``phi`` is an r x r matrix with ``phi(e_b) = sum_a phi[a][b] e_a``.
    """
    r = A.rank
    M = [[v if isinstance(v, ScalarExpr) else A.chart.const(v) for v in row] for row in phi]

    def apply(sec):
        return [sum((M[a][b] * sec[b] for b in range(r) if not sec[b].is_zero()), A.chart.zero)
                for a in range(r)]

    anchor = [A.anchor_of([M[a][b] for a in range(r)]) for b in range(r)]
    table = {}
    for a, b in combinations(range(r), 2):
        ea, eb = A.frame(a), A.frame(b)
        x = A.bracket(apply(ea), eb)
        y = A.bracket(ea, apply(eb))
        z = apply(A.bracket(ea, eb))
        table[(a, b)] = [x[k] + y[k] - z[k] for k in range(r)]
    return AlgebroidData(A.chart, anchor, table, list(A.labels))


def cotangent_algebroid(pi: Multivector) -> AlgebroidData:
    """Frame dx^i, anchor pi#, bracket [a, b]_pi."""
    chart = pi.chart
    forms = [coordinate_form(chart, i) for i in range(chart.dim)]
    anchor = [sharp(pi, f) for f in forms]
    table = {}
    for a, b in combinations(range(chart.dim), 2):
        br = form_bracket_pi(pi, forms[a], forms[b])
        table[(a, b)] = br.covector()
    return AlgebroidData(chart, anchor, table, [f"d{c}" for c in chart.coords])


def _jet_coeffs(theta: JetSection) -> list[ScalarExpr]:
    # frame (j1 1, (dx^i, 0)); j1 1 = (0, 1)
    return [theta.u] + theta.alpha.covector()


def jet_algebroid(J: MultiDerivation) -> AlgebroidData:
    """Frame (j1 1, (dx^i, 0)), anchor sigma o J#, bracket [-, -]_J."""
    chart = J.chart
    frame = [jet(chart.one)] + [JetSection(coordinate_form(chart, i), 0) for i in range(chart.dim)]
    anchor = [j_sharp(J, t).symbol for t in frame]
    table = {}
    for a, b in combinations(range(len(frame)), 2):
        table[(a, b)] = _jet_coeffs(jet_bracket(J, frame[a], frame[b]))
    return AlgebroidData(chart, anchor, table, ["j1(1)"] + [f"(d{c},0)" for c in chart.coords])


def _j_of(j):
    return j.j if isinstance(j, ComplexChart) else j


def holomorphic_cotangent_real_imaginary(Pi: Multivector, j) -> tuple[AlgebroidData, AlgebroidData]:
    """Real and imaginary algebroids of the holomorphic cotangent algebroid of Pi.

    A real form w is identified with the (1,0)-form w - i j* w; the anchor is
    ``2 Re Pi#(w - i j* w)`` and the bracket of frame forms is the real part of
    the holomorphic bracket of their (holomorphic) lifts.  The imaginary
    algebroid is the deformation by the complex structure j* of the fibers.
    """
    jt = _j_of(j)
    rep = is_holomorphic(Pi, j)
    names = Pi.chart.coords
    for key, v in schouten_nijenhuis(Pi, Pi).items():
        rep.fail("[Pi, Pi] = 0", ",".join(names[i] for i in key), v)
    if not rep:
        raise ValidationError("Pi is not holomorphic Poisson", rep)
    chart = Pi.chart
    i = chart.i
    n = chart.dim
    forms = [coordinate_form(chart, k) for k in range(n)]
    lifts = [f - jt.dual(f) * i for f in forms]
    anchor = [sharp(Pi, w).re() * 2 for w in lifts]
    table = {}
    for a, b in combinations(range(n), 2):
        br = (lie_derivative(anchor[a], lifts[b]) - lie_derivative(anchor[b], lifts[a])
              - d(interior(anchor[a], lifts[b])))
        table[(a, b)] = br.re().covector()
    labels = [f"d{c}" for c in names]
    real = AlgebroidData(chart, anchor, table, labels)
    # j*(dx^b) = sum_a j[b][a] dx^a
    phi = [[jt.m[b][a] for b in range(n)] for a in range(n)]
    return real, deformed_algebroid(real, phi)


# ----------------------------------------------------------------------------
# flat connection of a holomorphic Jacobi structure


def jacobi_flat_connection(J: MultiDerivation, j, theta: JetSection) -> MultiDerivation:
    """nabla_theta = (2 Re sigma(J# theta), scalar part of J# theta).

    The (1,0) derivation J# theta is turned into a complex-linear derivation
    with real symbol; on holomorphic sections both act the same way.
    """
    D = j_sharp(J, theta)
    return MultiDerivation(D.symbol.re() * 2, D.scalar)


def flat_connection_report(J: MultiDerivation, cx: ComplexChart, sections, tests) -> Report:
    """Symbol identity and flatness of nabla on jets of holomorphic ``sections``.

    ``tests`` are holomorphic functions on which the curvature must vanish.
    """
    from .correspondences import holomorphic_jacobi_type_report

    pre = holomorphic_jacobi_type_report(J, cx)
    if not pre or not is_jacobi(J):
        raise ValidationError("J is not a holomorphic Jacobi structure", pre)
    rep = Report("flat-connection")
    chart = J.chart
    jets = [jet(s) for s in sections]
    nab = [jacobi_flat_connection(J, cx, t) for t in jets]
    for k, (t, D) in enumerate(zip(jets, nab)):
        for f in tests:
            lhs = D.symbol(f)
            rhs = jet_biderivation(J, t, jet(f)) - f * jet_biderivation(J, t, jet(chart.one))
            if not (lhs - rhs).is_zero():
                rep.fail("symbol of nabla = rho", f"section {k}, test {f}", lhs - rhs)
    for a, b in combinations(range(len(jets)), 2):
        curv = dl_bracket(nab[a], nab[b]) - jacobi_flat_connection(J, cx, jet_bracket(J, jets[a], jets[b]))
        for f in tests:
            v = curv.symbol(f) + curv.scalar * f
            if not v.is_zero():
                rep.fail("[nabla_a, nabla_b] = nabla_[a,b]", f"sections ({a},{b}), test {f}", v)
    return rep
