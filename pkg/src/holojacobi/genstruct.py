"""Generalized tangent bundle and omni-Lie algebroid.

Sections of TM + T*M are ``TangentSection(X, alpha)``; sections of
DL + J^1 L are ``OmniSection(D, theta)`` with ``D`` a derivation and ``theta``
a jet.  Both bundles carry the split pairing ``<<(a, r), (b, s)>> = s(a) + r(b)``
(no factor 1/2) and a Dorfman-type bracket.

Endomorphisms are stored as matrices on the coordinate frame: ``(d/dx_i, dx^i)``
for the tangent case and ``((d/dx_i, 0), (1, 0), ((dx^i, 0)), (0, 1))`` for the
omni case.  In both frames the pairing matrix is ``[[0, I], [I, 0]]``.
"""
from __future__ import annotations

from .errors import ChartMismatchError, DegreeError
from .expr import Chart, ScalarExpr
from .jacobi import (
    EndoDL,
    JetSection,
    MultiDerivation,
    adjoint,
    dl_bracket,
    dl_frame,
    jet,
    jet_frame,
    jet_pairing,
    j_sharp,
    lie_derivative_jet,
)
from .report import Report
from .tensor import (
    DiffForm,
    Multivector,
    Tensor11,
    _matmul,
    coordinate_form,
    coordinate_vector,
    d,
    interior,
    lie_derivative,
    schouten_nijenhuis,
)


def _check(a, b):
    if a.chart != b.chart:
        raise ChartMismatchError(f"chart mismatch: {a.chart} vs {b.chart}")


class _Section:
    __slots__ = ("chart", "a", "b")

    def __add__(self, other):
        _check(self, other)
        return type(self)(self.a + other.a, self.b + other.b)

    def __neg__(self):
        return type(self)(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, f):
        if isinstance(f, _Section):
            return NotImplemented
        return type(self)(self.a * f, self.b * f)

    __rmul__ = __mul__

    def is_zero(self):
        return self.a.is_zero() and self.b.is_zero()

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.chart == other.chart and (self - other).is_zero()

    __hash__ = None


class TangentSection(_Section):
    """(X, alpha) in TM + T*M."""

    def __init__(self, X: Multivector, alpha: DiffForm):
        if X.degree != 1 or alpha.degree != 1:
            raise DegreeError("tangent sections pair a vector field with a 1-form")
        _check(X, alpha)
        self.chart = X.chart
        self.a = X
        self.b = alpha

    X = property(lambda self: self.a)
    alpha = property(lambda self: self.b)

    def coords(self) -> list[ScalarExpr]:
        n = self.chart.dim
        return [self.a[(i,)] for i in range(n)] + [self.b[(i,)] for i in range(n)]

    @classmethod
    def from_coords(cls, chart: Chart, v) -> "TangentSection":
        n = chart.dim
        return cls(Multivector(chart, 1, {(i,): v[i] for i in range(n)}),
                   DiffForm(chart, 1, {(i,): v[n + i] for i in range(n)}))

    def __repr__(self):
        return f"TangentSection({self.a!r}, {self.b!r})"


class OmniSection(_Section):
    """(D, theta) in DL + J^1 L."""

    def __init__(self, D: MultiDerivation, theta: JetSection):
        if D.degree != 1:
            raise DegreeError("omni sections pair a derivation with a jet")
        _check(D, theta)
        self.chart = D.chart
        self.a = D
        self.b = theta

    D = property(lambda self: self.a)
    theta = property(lambda self: self.b)

    def coords(self) -> list[ScalarExpr]:
        n = self.chart.dim
        D, t = self.a, self.b
        return ([D.symbol[(i,)] for i in range(n)] + [D.scalar]
                + [t.alpha[(i,)] for i in range(n)] + [t.u])

    @classmethod
    def from_coords(cls, chart: Chart, v) -> "OmniSection":
        n = chart.dim
        D = MultiDerivation(Multivector(chart, 1, {(i,): v[i] for i in range(n)}), v[n])
        t = JetSection(DiffForm(chart, 1, {(i,): v[n + 1 + i] for i in range(n)}), v[2 * n + 1])
        return cls(D, t)

    def __repr__(self):
        return f"OmniSection({self.a!r}, {self.b!r})"


def pairing(e1, e2) -> ScalarExpr:
    _check(e1, e2)
    if isinstance(e1, TangentSection) and isinstance(e2, TangentSection):
        return interior(e1.X, e2.alpha) + interior(e2.X, e1.alpha)
    if isinstance(e1, OmniSection) and isinstance(e2, OmniSection):
        return jet_pairing(e2.theta, e1.D) + jet_pairing(e1.theta, e2.D)
    raise TypeError("pairing needs two sections of the same kind")


def dorfman(e1: TangentSection, e2: TangentSection) -> TangentSection:
    """([X, Y], L_X beta - L_Y alpha + d(alpha(Y)))."""
    _check(e1, e2)
    X, a = e1.X, e1.alpha
    Y, b = e2.X, e2.alpha
    form = lie_derivative(X, b) - lie_derivative(Y, a) + d(interior(Y, a))
    return TangentSection(schouten_nijenhuis(X, Y), form)


def dorfman_jacobi(e1: OmniSection, e2: OmniSection) -> OmniSection:
    """([D, N], L_D s - L_N r + j1 <r, N>)."""
    _check(e1, e2)
    D, r = e1.D, e1.theta
    N, s = e2.D, e2.theta
    t = lie_derivative_jet(D, s) - lie_derivative_jet(N, r) + jet(jet_pairing(r, N))
    return OmniSection(dl_bracket(D, N), t)


def bracket(e1, e2):
    if isinstance(e1, TangentSection):
        return dorfman(e1, e2)
    return dorfman_jacobi(e1, e2)


def tangent_generators(chart: Chart) -> list[TangentSection]:
    zv, zf = Multivector.zero(chart, 1), DiffForm.zero(chart, 1)
    return ([TangentSection(coordinate_vector(chart, i), zf) for i in range(chart.dim)]
            + [TangentSection(zv, coordinate_form(chart, i)) for i in range(chart.dim)])


def omni_generators(chart: Chart) -> list[OmniSection]:
    """The frame ((d_i, 0), (1, 0), ((dx^i, 0)), (0, j1 1)) of DL + J^1 L."""
    zD = MultiDerivation(Multivector.zero(chart, 1), chart.zero)
    zt = JetSection.zero(chart)
    return ([OmniSection(D, zt) for D in dl_frame(chart)]
            + [OmniSection(zD, t) for t in jet_frame(chart)])


def jet_coordinate_generators(chart: Chart) -> list[OmniSection]:
    """((d_i, 0), (1, 0), (0, j1 x^i), (0, j1 1)) - the same module, jets of functions."""
    zD = MultiDerivation(Multivector.zero(chart, 1), chart.zero)
    gens = [OmniSection(D, JetSection.zero(chart)) for D in dl_frame(chart)]
    gens += [OmniSection(zD, jet(x)) for x in chart.vars()]
    gens.append(OmniSection(zD, jet(chart.one)))
    return gens


# ----------------------------------------------------------------------------
# block maps


class GenBlockMap:
    """Endomorphism of TM + T*M (``kind='tangent'``) or DL + J^1 L (``kind='omni'``)."""

    def __init__(self, chart: Chart, matrix, kind: str = "tangent"):
        if kind not in ("tangent", "omni"):
            raise ValueError(f"unknown kind {kind!r}")
        r = chart.dim + (1 if kind == "omni" else 0)
        M = [[c if isinstance(c, ScalarExpr) else chart.const(c) for c in row] for row in matrix]
        if len(M) != 2 * r or any(len(row) != 2 * r for row in M):
            raise DegreeError(f"block map needs a {2 * r}x{2 * r} matrix")
        self.chart = chart
        self.kind = kind
        self.rank = r
        self.matrix = M

    @classmethod
    def from_blocks(cls, chart, A, B, C, D, kind="tangent"):
        """Assemble [[A, B], [C, D]] from four square matrices."""
        rows = [list(a) + list(b) for a, b in zip(A, B)] + [list(c) + list(e) for c, e in zip(C, D)]
        return cls(chart, rows, kind)

    @classmethod
    def tangent(cls, phi: Tensor11, pi: Multivector | None = None, omega: DiffForm | None = None):
        """The map (phi, pi#; omega_flat, -phi*)."""
        chart = phi.chart
        n = chart.dim
        z = chart.zero
        A = [[phi.m[i][j] for j in range(n)] for i in range(n)]
        # (pi# alpha)^j = sum_i alpha_i pi^{ij}
        B = [[pi[(i, j)] if pi is not None else z for i in range(n)] for j in range(n)]
        # (omega_flat X)_b = sum_a X^a omega_{ab}
        C = [[omega[(a, b)] if omega is not None else z for a in range(n)] for b in range(n)]
        D = [[-phi.m[i][j] for i in range(n)] for j in range(n)]
        return cls.from_blocks(chart, A, B, C, D, "tangent")

    @classmethod
    def contact(cls, phi: EndoDL, J: MultiDerivation, omega=None):
        """The map (phi, J#; omega_flat, -phi^dagger).

        ``omega`` is an (n+1)x(n+1) skew table on the frame (d_1..d_n, 1) with
        ``omega_flat(e_b) = sum_a omega[b][a] e^a``.
        """
        chart = phi.chart
        r = chart.dim + 1
        A = phi.matrix()
        frame = jet_frame(chart)
        cols = [OmniSection(j_sharp(J, t), JetSection.zero(chart)).coords()[:r] for t in frame]
        B = [[cols[c][row] for c in range(r)] for row in range(r)]
        z = chart.zero
        C = [[(omega[b][a] if omega is not None else z) for b in range(r)] for a in range(r)]
        C = [[chart.const(v) if not isinstance(v, ScalarExpr) else v for v in row] for row in C]
        Pd = adjoint(phi).matrix()
        D = [[-v for v in row] for row in Pd]
        return cls.from_blocks(chart, A, B, C, D, "omni")

    def block(self, which: str):
        r = self.rank
        rs, cs = {"A": (0, 0), "B": (0, r), "C": (r, 0), "D": (r, r)}[which]
        return [row[cs:cs + r] for row in self.matrix[rs:rs + r]]

    # tangent block decoding
    @property
    def phi(self) -> Tensor11:
        return Tensor11(self.chart, self.block("A"))

    @property
    def pi(self) -> Multivector:
        B = self.block("B")
        n = self.chart.dim
        return Multivector(self.chart, 2, {(i, j): B[j][i] for i in range(n) for j in range(i + 1, n)})

    @property
    def omega(self) -> DiffForm:
        C = self.block("C")
        n = self.chart.dim
        return DiffForm(self.chart, 2, {(a, b): C[b][a] for a in range(n) for b in range(a + 1, n)})

    def apply(self, e):
        v = e.coords()
        out = [_dot(row, v, self.chart) for row in self.matrix]
        return type(e).from_coords(self.chart, out)

    __call__ = apply

    def square(self):
        return _matmul(self.matrix, self.matrix, self.chart)

    def __repr__(self):
        return f"GenBlockMap(kind={self.kind!r}, rank={self.rank})"


def _dot(row, v, chart):
    total = chart.zero
    for a, b in zip(row, v):
        if not a.is_zero() and not b.is_zero():
            total = total + a * b
    return total


def _labels(chart: Chart, kind: str) -> list[str]:
    names = chart.coords
    if kind == "tangent":
        return [f"d/d{c}" for c in names] + [f"d{c}" for c in names]
    return ([f"(d/d{c},0)" for c in names] + ["(1,0)"]
            + [f"(0,d{c})" for c in names] + ["(0,j1 1)"])


def _structure_report(J: GenBlockMap, name: str, *, exhaustive: bool = False) -> Report:
    chart = J.chart
    rep = Report(name)
    labels = _labels(chart, J.kind)
    M = J.matrix
    size = len(M)
    r = J.rank
    sq = J.square()
    ok_sq = True
    for a in range(size):
        for b in range(size):
            v = sq[a][b] + (1 if a == b else 0)
            if not v.is_zero():
                rep.fail("square = -1", f"entry ({labels[a]}, {labels[b]})", v)
                ok_sq = False
                if not exhaustive:
                    break
        if not ok_sq and not exhaustive:
            break
    # skewness: M^T G + G M = 0 with G = [[0, I], [I, 0]], i.e. <<M e_a, e_b>> + <<e_a, M e_b>> = 0
    ok_skew = True
    for a in range(size):
        for b in range(a, size):
            pa = b + r if b < r else b - r
            pb = a + r if a < r else a - r
            v = M[pa][a] + M[pb][b]
            if not v.is_zero():
                rep.fail("<<I a, b>> + <<a, I b>> = 0", f"({labels[a]}, {labels[b]})", v)
                ok_skew = False
                if not exhaustive:
                    break
        if not ok_skew and not exhaustive:
            break
    if not (ok_sq and ok_skew):
        rep.notes.append("integrability not evaluated: the torsion is tensorial only for "
                         "orthogonal maps squaring to -1")
        return rep
    gens = tangent_generators(chart) if J.kind == "tangent" else omni_generators(chart)
    img = [J.apply(g) for g in gens]
    # the torsion is skew once the first two conditions hold, so pairs a < b suffice
    for a in range(size):
        for b in range(a + 1, size):
            t = bracket(img[a], img[b])
            t = t - J.apply(bracket(img[a], gens[b]) + bracket(gens[a], img[b]))
            t = t - bracket(gens[a], gens[b])  # I^2 = -1
            if not t.is_zero():
                rep.fail("Nijenhuis torsion = 0", f"({labels[a]}, {labels[b]})", repr(t))
                if not exhaustive:
                    return rep
    return rep


def is_generalized_complex(J: GenBlockMap, *, exhaustive: bool = False) -> Report:
    if J.kind != "tangent":
        raise ValueError("is_generalized_complex needs a tangent block map")
    return _structure_report(J, "generalized-complex", exhaustive=exhaustive)


def is_generalized_contact(I: GenBlockMap, *, exhaustive: bool = False) -> Report:
    if I.kind != "omni":
        raise ValueError("is_generalized_contact needs an omni block map")
    return _structure_report(I, "generalized-contact", exhaustive=exhaustive)


def is_homogeneous_gc(J: GenBlockMap, eta: Multivector, *, check_gc: bool = True) -> Report:
    """L_eta pi = -pi, L_eta phi = 0, L_eta omega = omega for the blocks of J."""
    rep = Report("homogeneous-generalized-complex")
    if check_gc:
        rep.add(is_generalized_complex(J))
    pi, phi, omega = J.pi, J.phi, J.omega
    names = J.chart.coords
    for key, v in (lie_derivative(eta, pi) + pi).items():
        rep.fail("L_eta pi = -pi", ",".join(names[i] for i in key), v)
    Lphi = lie_derivative(eta, phi)
    for i in range(J.chart.dim):
        for k in range(J.chart.dim):
            v = Lphi.m[i][k]
            if not v.is_zero():
                rep.fail("L_eta phi = 0", f"({names[i]},{names[k]})", v)
    for key, v in (lie_derivative(eta, omega) - omega).items():
        rep.fail("L_eta omega = omega", ",".join(names[i] for i in key), v)
    return rep
