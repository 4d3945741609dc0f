"""First-order multidifferential calculus on a trivialized line bundle.

Sections of the line bundle are functions on the chart.  A degree-k
multiderivation is stored as a pair ``(Lambda, E)`` of a k-vector and a
(k-1)-vector acting by::

    D(f1, ..., fk) = Lambda(df1, ..., dfk)
                     + sum_i (-1)^(k-i) f_i E(df1, ..., dfi^, ..., dfk)

(slots numbered from 1, hat = omitted).  For k = 1 this is ``D(f) = X(f) + g f``
with ``(X, g) = (Lambda, E)``, so derivations and pairs ``(X, g)`` coincide
and the identity derivation is ``(0, 1)``.  For k = 2,
``J(f, g) = Lambda(df, dg) - f E(g) + g E(f)``.

Jets are pairs ``(alpha, u)``, ``j1(u) = (du, u)``, paired with derivations
by ``<(alpha, u), (X, g)> = alpha(X) + u g``.
"""
from __future__ import annotations

from itertools import combinations

from .errors import ChartMismatchError, CompatibilityError, DegeneracyError, DegreeError, ExtractionError
from .expr import Chart, ScalarExpr, as_scalar
from .report import Report
from .tensor import (
    DiffForm,
    Multivector,
    Tensor11,
    _det_eval,
    coordinate_form,
    coordinate_vector,
    d,
    interior,
    lie_derivative,
    scalar_multivector,
    schouten_nijenhuis,
    sharp,
    sort_sign,
)


def _check(a, b):
    if a.chart != b.chart:
        raise ChartMismatchError(f"chart mismatch: {a.chart} vs {b.chart}")


class MultiDerivation:
    """Degree-k first-order multidifferential operator, stored as (Lambda, E)."""

    __slots__ = ("chart", "degree", "Lambda", "E")

    def __init__(self, Lambda: Multivector, E=None):
        chart = Lambda.chart
        k = Lambda.degree
        if k < 1:
            raise DegreeError("multiderivations have degree >= 1")
        if E is None:
            E = Multivector.zero(chart, k - 1)
        elif isinstance(E, ScalarExpr) or not isinstance(E, Multivector):
            E = scalar_multivector(as_scalar(E, chart))
        if E.degree != k - 1:
            raise DegreeError(f"E must have degree {k - 1}, got {E.degree}")
        _check(Lambda, E)
        self.chart = chart
        self.degree = k
        self.Lambda = Lambda
        self.E = E

    @classmethod
    def zero(cls, chart: Chart, k: int):
        return cls(Multivector.zero(chart, k), Multivector.zero(chart, k - 1))

    @classmethod
    def identity(cls, chart: Chart):
        """The identity derivation (0, 1)."""
        return cls(Multivector.zero(chart, 1), chart.one)

    @classmethod
    def derivation(cls, X: Multivector, f=0):
        return cls(X, as_scalar(f, X.chart))

    # degree-1 accessors
    @property
    def symbol(self) -> Multivector:
        if self.degree != 1:
            raise DegreeError("symbol is defined for derivations")
        return self.Lambda

    @property
    def scalar(self) -> ScalarExpr:
        if self.degree != 1:
            raise DegreeError("scalar part is defined for derivations")
        return self.E.scalar

    def __call__(self, *fs):
        return apply(self, *fs)

    def _same(self, other):
        if not isinstance(other, MultiDerivation):
            raise TypeError("expected a MultiDerivation")
        _check(self, other)
        if other.degree != self.degree:
            raise DegreeError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other):
        self._same(other)
        return MultiDerivation(self.Lambda + other.Lambda, self.E + other.E)

    def __neg__(self):
        return MultiDerivation(-self.Lambda, -self.E)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, f):
        if isinstance(f, MultiDerivation):
            return NotImplemented
        return MultiDerivation(self.Lambda * f, self.E * f)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.Lambda.is_zero() and self.E.is_zero()

    def __eq__(self, other):
        if not isinstance(other, MultiDerivation):
            return NotImplemented
        return (other.chart == self.chart and other.degree == self.degree
                and self.Lambda == other.Lambda and self.E == other.E)

    __hash__ = None

    def conj(self):
        return MultiDerivation(self.Lambda.conj(), self.E.conj())

    def re(self):
        return MultiDerivation(self.Lambda.re(), self.E.re())

    def im(self):
        return MultiDerivation(self.Lambda.im(), self.E.im())

    def on(self, chart: Chart):
        return MultiDerivation(self.Lambda.on(chart), self.E.on(chart))

    def is_real(self) -> bool:
        return all(v.is_real() for _, v in self.Lambda.items()) and all(
            v.is_real() for _, v in self.E.items())

    def __repr__(self):
        return f"MultiDerivation(Lambda={self.Lambda!r}, E={self.E!r})"


def _grad_rows(fs, chart):
    return [[f.diff(i) for i in range(chart.dim)] for f in fs]


def apply(D: MultiDerivation, *fs) -> ScalarExpr:
    """Evaluate D on k functions using the pair formula."""
    k = D.degree
    if len(fs) != k:
        raise DegreeError(f"degree-{k} multiderivation needs {k} arguments, got {len(fs)}")
    chart = D.chart
    fs = [as_scalar(f, chart) for f in fs]
    rows = _grad_rows(fs, chart)
    total = _det_eval(D.Lambda._c, rows) or chart.zero
    if not D.E.is_zero():
        for i in range(k):
            if fs[i].is_zero():
                continue
            rest = rows[:i] + rows[i + 1:]
            val = D.E._c.get((), chart.zero) if k == 1 else (_det_eval(D.E._c, rest) or chart.zero)
            term = fs[i] * val
            total = total + term if (k - 1 - i) % 2 == 0 else total - term
    return total


def _restrict(e: ScalarExpr, chart: Chart, where: str) -> ScalarExpr:
    if e.chart == chart:
        return e
    for c in e.chart.coords:
        if c not in chart.coords and e.depends_on(c):
            raise ExtractionError(f"{where} depends on {c}: {e}")
    return restrict_scalar(e, chart)


def restrict_scalar(e: ScalarExpr, chart: Chart) -> ScalarExpr:
    try:
        return e.restrict(chart)
    except ChartMismatchError as exc:
        raise ExtractionError(str(exc)) from None


def extract_pair(evaluator, chart: Chart, k: int, *, value_chart: Chart | None = None,
                 validate: bool = True) -> MultiDerivation:
    """Recover (Lambda, E) on ``chart`` from a k-ary operator.

    ``evaluator`` takes k functions on ``value_chart`` (default ``chart``) and
    returns a function there.  Results must not depend on coordinates outside
    ``chart``.  With ``validate`` the recovered pair is compared with the
    evaluator on products of coordinates and on swapped arguments.
    """
    vchart = value_chart or chart
    n = chart.dim
    xs = [vchart.var(c) for c in chart.coords]
    one = vchart.one
    Ecomps = {}
    for J in combinations(range(n), k - 1):
        val = evaluator(*[xs[j] for j in J], one)
        Ecomps[J] = _restrict(val, chart, f"E component {J}")
    Lcomps = {}
    for I in combinations(range(n), k):
        val = evaluator(*[xs[i] for i in I])
        val = _restrict(val, chart, f"Lambda component {I}")
        cx = chart.vars()
        for m in range(k):
            rest = I[:m] + I[m + 1:]
            e = Ecomps.get(rest)
            if e is None or e.is_zero():
                continue
            term = cx[I[m]] * e
            val = val - term if (k - 1 - m) % 2 == 0 else val + term
        Lcomps[I] = val
    D = MultiDerivation(Multivector(chart, k, Lcomps), Multivector(chart, k - 1, Ecomps))
    if validate:
        _validate_extraction(evaluator, D, chart, vchart)
    return D


def _validation_tuples(chart: Chart, k: int):
    n = chart.dim
    out = []
    for a in range(n):
        b = (a + 1) % n
        prod = [a, b]
        rest = [(a + 2 + t) % n for t in range(k - 1)]
        out.append((prod, rest))
    return out


def _validate_extraction(evaluator, D, chart, vchart):
    k = D.degree
    xs = [vchart.var(c) for c in chart.coords]
    for prod, rest in _validation_tuples(chart, k):
        args = [xs[prod[0]] * (xs[prod[1]] + xs[prod[0]]) + 1] + [xs[r] for r in rest]
        got = _restrict(evaluator(*args), chart, "validation value")
        want = apply(D, *[restrict_scalar(a, chart) if a.chart != chart else a for a in args])
        if not (got - want).is_zero():
            raise ExtractionError(
                f"not a first-order multiderivation: mismatch {got - want} on product arguments")
        if k >= 2:
            swapped = [args[1], args[0]] + args[2:]
            got2 = _restrict(evaluator(*swapped), chart, "validation value")
            if not (got2 + got).is_zero():
                raise ExtractionError("not a first-order multiderivation: not skew-symmetric")


def _unshuffles(n: int, a: int):
    """Pairs (first, rest, sign) over (a, n-a)-unshuffles."""
    for first in combinations(range(n), a):
        rest = tuple(i for i in range(n) if i not in first)
        sign, _ = sort_sign(first + rest)
        yield first, rest, sign


def compose(D1: MultiDerivation, D2: MultiDerivation):
    """The Gerstenhaber composition D1 o D2 as an evaluator (callable)."""
    _check(D1, D2)
    k1, k2 = D1.degree - 1, D2.degree - 1
    n = k1 + k2 + 1

    def evaluator(*fs):
        if len(fs) != n:
            raise DegreeError(f"composition needs {n} arguments")
        total = None
        for first, rest, sign in _unshuffles(n, k2 + 1):
            inner = apply(D2, *[fs[i] for i in first])
            val = apply(D1, inner, *[fs[i] for i in rest])
            val = val if sign == 1 else -val
            total = val if total is None else total + val
        return total

    return evaluator


def gerstenhaber_evaluator(D1: MultiDerivation, D2: MultiDerivation):
    """Evaluator of (-1)^(k1 k2) D1 o D2 - D2 o D1 with shifted degrees k = deg - 1."""
    k1, k2 = D1.degree - 1, D2.degree - 1
    c12 = compose(D1, D2)
    c21 = compose(D2, D1)
    sign = -1 if (k1 * k2) % 2 else 1

    def evaluator(*fs):
        a = c12(*fs)
        b = c21(*fs)
        return (a if sign == 1 else -a) - b

    return evaluator


def schouten_jacobi(D1: MultiDerivation, D2: MultiDerivation, *, validate: bool = True) -> MultiDerivation:
    """Schouten-Jacobi bracket via the Gerstenhaber formula and extraction."""
    _check(D1, D2)
    k = D1.degree + D2.degree - 1
    if k == 0:
        raise DegreeError("bracket of degree-0 objects is not defined")
    if k > D1.chart.dim + 1:
        return MultiDerivation.zero(D1.chart, k)
    ev = gerstenhaber_evaluator(D1, D2)
    return extract_pair(ev, D1.chart, k, validate=validate)


def is_jacobi(J: MultiDerivation) -> bool:
    if J.degree != 2:
        raise DegreeError("is_jacobi needs a bi-derivation")
    return schouten_jacobi(J, J).is_zero()


def jacobi_report(J: MultiDerivation) -> Report:
    rep = Report("is-jacobi")
    if J.degree != 2:
        raise DegreeError("is_jacobi needs a bi-derivation")
    br = schouten_jacobi(J, J)
    names = J.chart.coords
    for key, v in br.Lambda.items():
        rep.fail("[J,J] Lambda-part = 0", ",".join(names[i] for i in key), v)
    for key, v in br.E.items():
        rep.fail("[J,J] E-part = 0", ",".join(names[i] for i in key), v)
    return rep


def bi_hamiltonian_check(J: MultiDerivation, J2: MultiDerivation) -> bool:
    _check(J, J2)
    return is_jacobi(J) and is_jacobi(J2) and is_jacobi(J + J2)


def dl_bracket(D1: MultiDerivation, D2: MultiDerivation) -> MultiDerivation:
    """Commutator of derivations: ([X,Y], X(g) - Y(f))."""
    _check(D1, D2)
    if D1.degree != 1 or D2.degree != 1:
        raise DegreeError("dl_bracket needs derivations")
    X, f = D1.symbol, D1.scalar
    Y, g = D2.symbol, D2.scalar
    return MultiDerivation(schouten_nijenhuis(X, Y), X(g) - Y(f))


# ----------------------------------------------------------------------------
# jets


class JetSection:
    """Section (alpha, u) of the first jet bundle of the trivial line bundle."""

    __slots__ = ("chart", "alpha", "u")

    def __init__(self, alpha: DiffForm, u=0):
        if alpha.degree != 1:
            raise DegreeError("jet sections have a 1-form part")
        self.chart = alpha.chart
        self.alpha = alpha
        self.u = as_scalar(u, alpha.chart)

    @classmethod
    def zero(cls, chart: Chart):
        return cls(DiffForm.zero(chart, 1), chart.zero)

    def __add__(self, other):
        _check(self, other)
        return JetSection(self.alpha + other.alpha, self.u + other.u)

    def __neg__(self):
        return JetSection(-self.alpha, -self.u)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, f):
        if isinstance(f, JetSection):
            return NotImplemented
        f = as_scalar(f, self.chart)
        return JetSection(self.alpha * f, self.u * f)

    __rmul__ = __mul__

    def is_zero(self):
        return self.alpha.is_zero() and self.u.is_zero()

    def __eq__(self, other):
        if not isinstance(other, JetSection):
            return NotImplemented
        return self.chart == other.chart and (self - other).is_zero()

    __hash__ = None

    def __repr__(self):
        return f"JetSection({self.alpha!r}, {self.u})"


def jet(u) -> JetSection:
    """First jet prolongation j1(u) = (du, u)."""
    return JetSection(d(u), u)


def jet_pairing(theta: JetSection, D: MultiDerivation) -> ScalarExpr:
    """<(alpha, u), (X, f)> = alpha(X) + u f."""
    _check(theta, D)
    if D.degree != 1:
        raise DegreeError("jets pair with derivations")
    return interior(D.symbol, theta.alpha) + theta.u * D.scalar


def j_sharp(J: MultiDerivation, theta: JetSection) -> MultiDerivation:
    """J#(alpha, u) = (Lambda# alpha - u E, alpha(E)), so <j1 v, J# j1 u> = J(u, v)."""
    _check(J, theta)
    if J.degree != 2:
        raise DegreeError("j_sharp needs a bi-derivation")
    E = J.E
    X = sharp(J.Lambda, theta.alpha) - E * theta.u
    return MultiDerivation(X, interior(E, theta.alpha))


def jet_biderivation(J: MultiDerivation, t1: JetSection, t2: JetSection) -> ScalarExpr:
    """J evaluated on jets: <t2, J# t1>."""
    return jet_pairing(t2, j_sharp(J, t1))


def lie_derivative_jet(D: MultiDerivation, theta: JetSection) -> JetSection:
    """L_D (alpha, u) = (L_X alpha + f alpha + u df, X(u) + f u) for D = (X, f)."""
    _check(D, theta)
    X, f = D.symbol, D.scalar
    alpha = lie_derivative(X, theta.alpha) + theta.alpha * f + d(f) * theta.u
    return JetSection(alpha, X(theta.u) + f * theta.u)


def jet_bracket(J: MultiDerivation, t1: JetSection, t2: JetSection) -> JetSection:
    """[t1, t2]_J = L_{J# t1} t2 - L_{J# t2} t1 - j1 J(t1, t2)."""
    a = lie_derivative_jet(j_sharp(J, t1), t2)
    b = lie_derivative_jet(j_sharp(J, t2), t1)
    return a - b - jet(jet_biderivation(J, t1, t2))


def jet_frame(chart: Chart) -> list[JetSection]:
    """(dx^i, 0) for each coordinate, then j1(1) = (0, 1)."""
    out = [JetSection(coordinate_form(chart, i), 0) for i in range(chart.dim)]
    out.append(JetSection(DiffForm.zero(chart, 1), 1))
    return out


def jet_generators(chart: Chart) -> list[JetSection]:
    """j1(x^i) for each coordinate, then j1(1)."""
    return [jet(chart.var(c)) for c in chart.coords] + [jet(chart.one)]


def dl_frame(chart: Chart) -> list[MultiDerivation]:
    """(d/dx_i, 0) for each coordinate, then the identity derivation."""
    out = [MultiDerivation(coordinate_vector(chart, i), chart.zero) for i in range(chart.dim)]
    out.append(MultiDerivation.identity(chart))
    return out


# ----------------------------------------------------------------------------
# endomorphisms of DL


class EndoDL:
    """(X, f) -> (N X + f Y, gamma(X) + g f)."""

    __slots__ = ("chart", "N", "Y", "gamma", "g")

    def __init__(self, N: Tensor11, Y: Multivector | None = None, gamma: DiffForm | None = None, g=0):
        chart = N.chart
        self.chart = chart
        self.N = N
        self.Y = Y if Y is not None else Multivector.zero(chart, 1)
        self.gamma = gamma if gamma is not None else DiffForm.zero(chart, 1)
        self.g = as_scalar(g, chart)
        _check(N, self.Y)
        _check(N, self.gamma)

    @classmethod
    def identity(cls, chart: Chart):
        return cls(Tensor11.identity(chart), g=1)

    @classmethod
    def from_matrix(cls, chart: Chart, M):
        """From the (n+1)x(n+1) matrix on the frame (d/dx_1..d/dx_n, 1)."""
        n = chart.dim
        N = Tensor11(chart, [[M[i][j] for j in range(n)] for i in range(n)])
        Y = Multivector(chart, 1, {(i,): M[i][n] for i in range(n)})
        gamma = DiffForm(chart, 1, {(j,): M[n][j] for j in range(n)})
        return cls(N, Y, gamma, M[n][n])

    def matrix(self) -> list[list[ScalarExpr]]:
        n = self.chart.dim
        rows = [[self.N.m[i][j] for j in range(n)] + [self.Y[(i,)]] for i in range(n)]
        rows.append([self.gamma[(j,)] for j in range(n)] + [self.g])
        return rows

    def apply(self, D: MultiDerivation) -> MultiDerivation:
        _check(self, D)
        X, f = D.symbol, D.scalar
        return MultiDerivation(self.N.apply(X) + self.Y * f, interior(X, self.gamma) + self.g * f)

    __call__ = apply

    def adjoint_apply(self, theta: JetSection) -> JetSection:
        """phi^dagger (alpha, u) = (N* alpha + u gamma, alpha(Y) + g u)."""
        _check(self, theta)
        return JetSection(self.N.dual(theta.alpha) + self.gamma * theta.u,
                          interior(self.Y, theta.alpha) + self.g * theta.u)

    def compose(self, other: "EndoDL") -> "EndoDL":
        _check(self, other)
        from .tensor import _matmul
        return EndoDL.from_matrix(self.chart, _matmul(self.matrix(), other.matrix(), self.chart))

    def __matmul__(self, other):
        return self.compose(other)

    def __add__(self, other):
        _check(self, other)
        return EndoDL(self.N + other.N, self.Y + other.Y, self.gamma + other.gamma, self.g + other.g)

    def __neg__(self):
        return EndoDL(-self.N, -self.Y, -self.gamma, -self.g)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, f):
        if isinstance(f, EndoDL):
            return NotImplemented
        return EndoDL(self.N * f, self.Y * f, self.gamma * f, self.g * f)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, EndoDL):
            return NotImplemented
        return (self.N == other.N and self.Y == other.Y and self.gamma == other.gamma
                and self.g == other.g)

    __hash__ = None

    def is_zero(self):
        return self.N.is_zero() and self.Y.is_zero() and self.gamma.is_zero() and self.g.is_zero()

    def on(self, chart: Chart) -> "EndoDL":
        return EndoDL(self.N.on(chart), self.Y.on(chart), self.gamma.on(chart), self.g.on(chart))

    def __repr__(self):
        return f"EndoDL(N={self.N!r}, Y={self.Y!r}, gamma={self.gamma!r}, g={self.g})"


class JetEndomorphism:
    """Adjoint of an EndoDL acting on jet sections."""

    def __init__(self, phi: EndoDL):
        self.phi = phi
        self.chart = phi.chart

    def __call__(self, theta: JetSection) -> JetSection:
        return self.phi.adjoint_apply(theta)

    def matrix(self):
        """Matrix on the jet frame ((dx^i, 0), (0, 1)): the transpose of phi's."""
        M = self.phi.matrix()
        n = len(M)
        return [[M[j][i] for j in range(n)] for i in range(n)]


def adjoint(phi: EndoDL) -> JetEndomorphism:
    return JetEndomorphism(phi)


def dl_torsion(phi: EndoDL) -> dict:
    """Nijenhuis torsion of phi for the commutator bracket, on the frame (d_i, 1)."""
    frame = dl_frame(phi.chart)
    img = [phi.apply(e) for e in frame]
    out = {}
    for a in range(len(frame)):
        for b in range(a + 1, len(frame)):
            t = dl_bracket(img[a], img[b])
            t = t - phi.apply(dl_bracket(img[a], frame[b]))
            t = t - phi.apply(dl_bracket(frame[a], img[b]))
            t = t + phi.apply(phi.apply(dl_bracket(frame[a], frame[b])))
            if not t.is_zero():
                out[(a, b)] = t
    return out


def _frame_label(chart: Chart, a: int) -> str:
    return f"d/d{chart.coords[a]}" if a < chart.dim else "1"


def _jet_label(chart: Chart, a: int) -> str:
    return f"j1({chart.coords[a]})" if a < chart.dim else "j1(1)"


def sharp_compatibility(J: MultiDerivation, phi: EndoDL):
    """First jet generator where J# phi^dagger != phi J#, or None."""
    _check(J, phi)
    for a, theta in enumerate(jet_generators(J.chart)):
        lhs = j_sharp(J, phi.adjoint_apply(theta))
        rhs = phi.apply(j_sharp(J, theta))
        diff = lhs - rhs
        if not diff.is_zero():
            return a, diff
    return None


def j_phi(J: MultiDerivation, phi: EndoDL) -> MultiDerivation:
    """J_phi = J(phi -, -) on jets, defined when J# phi^dagger = phi J#."""
    bad = sharp_compatibility(J, phi)
    if bad is not None:
        a, diff = bad
        raise CompatibilityError(
            f"J# phi^dagger != phi J# on {_jet_label(J.chart, a)}: {diff!r}", entry=a, value=diff)

    def ev(u, v):
        return jet_biderivation(J, phi.adjoint_apply(jet(u)), jet(v))

    return extract_pair(ev, J.chart, 2)


def is_jacobi_nijenhuis(J: MultiDerivation, phi: EndoDL, *, exhaustive: bool = False) -> Report:
    """Jacobi, sharp-compatibility, concomitant and torsion conditions."""
    rep = Report("jacobi-nijenhuis")
    if J.degree != 2:
        raise DegreeError("is_jacobi_nijenhuis needs a bi-derivation")
    rep.add(jacobi_report(J))
    chart = J.chart
    bad = sharp_compatibility(J, phi)
    if bad is not None:
        a, diff = bad
        rep.fail("(a) J# phi^dagger = phi J#", _jet_label(chart, a), repr(diff))
        rep.structural = True
        rep.notes.append("J_phi is undefined because condition (a) fails")
    else:
        Jp = j_phi(J, phi)
        gens = jet_generators(chart)
        dual = [phi.adjoint_apply(t) for t in gens]
        stop = False
        for a in range(len(gens)):
            for b in range(a + 1, len(gens)):
                lhs = phi.adjoint_apply(jet_bracket(J, gens[a], gens[b]))
                rhs = (jet_bracket(J, dual[a], gens[b]) + jet_bracket(J, gens[a], dual[b])
                       - jet_bracket(Jp, gens[a], gens[b]))
                diff = lhs - rhs
                if not diff.is_zero():
                    rep.fail("(b) phi^dagger[r,s]_J = [phi^dagger r,s]_J + [r,phi^dagger s]_J - [r,s]_J_phi",
                             f"({_jet_label(chart, a)}, {_jet_label(chart, b)})", repr(diff))
                    if not exhaustive:
                        stop = True
                        break
            if stop:
                break
    tors = dl_torsion(phi)
    for (a, b), t in sorted(tors.items()):
        rep.fail("(c) torsion of phi on DL = 0", f"({_frame_label(chart, a)}, {_frame_label(chart, b)})", repr(t))
        if not exhaustive:
            break
    return rep


# ----------------------------------------------------------------------------
# gauge complex structure of a holomorphic line bundle


def gauge_complex_structure(j: Tensor11, A: DiffForm):
    """j_DE for the trivial complex line bundle with dbar = dbar_0 + A^{0,1}.

    Returns ``(j_DE, report)`` where ``j_DE = (j, 0, -2i A^{0,1}, i)`` acts on
    complex-linear derivations (X, f) with X real and f complex.
    """
    from .complexgeom import type_project_form

    chart = j.chart
    A01 = type_project_form(A, j, (0, 1))
    rep = Report("gauge-complex-structure")
    if not (A01 - A).is_zero():
        rep.notes.append("connection coefficient replaced by its (0,1)-part")
    i = chart.i
    phi = EndoDL(j, None, A01 * (-2 * i), i)
    frame = dl_frame(chart) + [MultiDerivation(Multivector.zero(chart, 1), i)]
    labels = [_frame_label(chart, a) for a in range(chart.dim + 1)] + ["i"]
    for lab, e in zip(labels, frame):
        sq = phi.apply(phi.apply(e)) + e
        if not sq.is_zero():
            rep.fail("j_DE^2 = -1", lab, repr(sq))
        sym = phi.apply(e).symbol - j.apply(e.symbol)
        if not sym.is_zero():
            rep.fail("(4b) symbol intertwines j_DE and j", lab, repr(sym))
    for lab, c in (("1", chart.one), ("i", i)):
        e = MultiDerivation(Multivector.zero(chart, 1), c)
        img = phi.apply(e)
        if not (img.symbol.is_zero() and (img.scalar - i * c).is_zero()):
            rep.fail("(4c) j_DE acts on endomorphisms as multiplication by i", lab, repr(img))
    img = [phi.apply(e) for e in frame]
    for a in range(len(frame)):
        for b in range(a + 1, len(frame)):
            t = dl_bracket(img[a], img[b])
            t = t - phi.apply(dl_bracket(img[a], frame[b]))
            t = t - phi.apply(dl_bracket(frame[a], img[b]))
            t = t + phi.apply(phi.apply(dl_bracket(frame[a], frame[b])))
            if not t.is_zero():
                rep.fail("torsion of j_DE = 0", f"({labels[a]}, {labels[b]})", repr(t))
    return phi, rep


# ----------------------------------------------------------------------------
# contact forms


def _solve(M, rhs, chart):
    """Solve M x = rhs by Gaussian elimination over rational functions."""
    n = len(M)
    A = [list(M[r]) + [rhs[r]] for r in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not A[r][col].is_zero()), None)
        if piv is None:
            raise DegeneracyError("singular linear system")
        A[col], A[piv] = A[piv], A[col]
        p = A[col][col]
        A[col] = [v / p for v in A[col]]
        for r in range(n):
            if r != col and not A[r][col].is_zero():
                f = A[r][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    return [A[r][n] for r in range(n)]


def contact_volume(theta: DiffForm) -> DiffForm:
    """theta ^ (d theta)^n on a (2n+1)-dimensional chart."""
    chart = theta.chart
    n = (chart.dim - 1) // 2
    out = theta
    dt = d(theta)
    for _ in range(n):
        out = out.wedge(dt)
    return out


def _flat_matrix(theta: DiffForm):
    chart = theta.chart
    m = chart.dim
    dt = d(theta)
    t = theta.covector()
    # flat(X)_a = sum_b X^b (dtheta_{ba} + theta_a theta_b)
    return [[dt[(b, a)] + t[a] * t[b] for b in range(m)] for a in range(m)]


def contact_to_jacobi(theta: DiffForm) -> MultiDerivation:
    """Jacobi pair (Lambda, E) of a contact form: E is the Reeb field.

    ``Lambda# a = c * flat^-1(a - a(E) theta)`` with ``flat(X) = i_X dtheta +
    theta(X) theta``; the sign ``c`` is the one making the result Jacobi.
    """
    chart = theta.chart
    m = chart.dim
    if m % 2 == 0:
        raise DegreeError("contact forms live on odd-dimensional charts")
    if theta.degree != 1:
        raise DegreeError("contact_to_jacobi needs a 1-form")
    if contact_volume(theta).is_zero():
        raise DegeneracyError("theta ^ (d theta)^n vanishes identically")
    B = _flat_matrix(theta)
    E = Multivector(chart, 1, {(i,): v for i, v in enumerate(_solve(B, theta.covector(), chart))})
    cols = []
    for a in range(m):
        alpha = coordinate_form(chart, a)
        rhs = (alpha - theta * interior(E, alpha)).covector()
        cols.append(_solve(B, rhs, chart))
    # cols[a][b] = (flat^-1 of dx^a - ...)^b = Lambda^{ab} up to the sign c
    base = Multivector(chart, 2, {(a, b): cols[a][b] for a in range(m) for b in range(a + 1, m)})
    for c in (1, -1):
        J = MultiDerivation(base * c, E)
        if is_jacobi(J):
            return J
    raise DegeneracyError("no sign makes the contact pair Jacobi")


def contact_relations(theta: DiffForm, J: MultiDerivation) -> Report:
    """Reeb and inverse relations tying a Jacobi pair to a contact form."""
    rep = Report("contact-relations")
    E = J.E
    rep.expect_zero("theta(E) = 1", "", interior(E, theta) - 1)
    iE = interior(E, d(theta))
    if not iE.is_zero():
        rep.fail("i_E dtheta = 0", "", repr(iE))
    chart = theta.chart
    dt = d(theta)
    for a in range(chart.dim):
        alpha = coordinate_form(chart, a)
        X = sharp(J.Lambda, alpha)
        img = interior(X, theta)
        if not img.is_zero():
            rep.fail("theta(Lambda# a) = 0", f"d{chart.coords[a]}", img)
        # i_{Lambda# a} dtheta = +-(a - a(E) theta)
        lhs = interior(X, dt) if not X.is_zero() else DiffForm.zero(chart, 1)
        target = alpha - theta * interior(E, alpha)
        if not ((lhs - target).is_zero() or (lhs + target).is_zero()):
            rep.fail("i_{Lambda# a} dtheta = +-(a - a(E) theta)", f"d{chart.coords[a]}", repr(lhs))
    return rep


def jacobi_to_contact(J: MultiDerivation) -> DiffForm:
    """The 1-form theta with Lambda# theta = 0 and theta(E) = 1."""
    chart = J.chart
    m = chart.dim
    # unknowns theta_i; equations sum_i theta_i Lambda^{ij} = 0 for all j, sum_i theta_i E^i = 1
    rows = [[J.Lambda[(i, jj)] for i in range(m)] for jj in range(m)]
    rows.append([J.E[(i,)] for i in range(m)])
    rhs = [chart.zero] * m + [chart.one]
    # least-squares style elimination: pick m independent rows
    sol = _solve_overdetermined(rows, rhs, chart)
    return DiffForm(chart, 1, {(i,): v for i, v in enumerate(sol)})


def _solve_overdetermined(rows, rhs, chart):
    n = len(rows[0])
    A = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((k for k in range(r, len(A)) if not A[k][col].is_zero()), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        p = A[r][col]
        A[r] = [v / p for v in A[r]]
        for k in range(len(A)):
            if k != r and not A[k][col].is_zero():
                f = A[k][col]
                A[k] = [a - f * b for a, b in zip(A[k], A[r])]
        pivots.append(col)
        r += 1
    if len(pivots) < n:
        raise DegeneracyError("bi-derivation does not determine a contact form")
    for k in range(r, len(A)):
        if not A[k][n].is_zero():
            raise DegeneracyError("inconsistent system: not a contact Jacobi structure")
    return [A[i][n] for i in range(n)]
