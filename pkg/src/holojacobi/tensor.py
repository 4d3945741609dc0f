"""Multivectors, differential forms and (1,1)-tensors on a chart.

Components live on coordinate frames.  A degree-k object is a table
``{(i1, ..., ik): coefficient}`` over strictly increasing index tuples, so
``{(0, 1): f}`` is ``f d/dx0 ^ d/dx1`` (or ``f dx0 ^ dx1`` for forms).
Evaluation uses the determinant convention, e.g. ``(X ^ Y)(a, b) =
a(X) b(Y) - a(Y) b(X)``.

For a bivector ``pi`` the map ``pi#`` is ``a -> pi(a, -)``.  A Tensor11 is
stored as a matrix ``m`` with ``phi(d/dx_j) = sum_i m[i][j] d/dx_i``; its
dual ``phi*`` acts on forms by ``(phi* a)_j = sum_i a_i m[i][j]``.
"""
from __future__ import annotations

from .errors import ChartMismatchError, CompatibilityError, DegreeError
from .expr import Chart, ScalarExpr, as_scalar
from .report import Report


def sort_sign(idx) -> tuple[int, tuple]:
    """Sign of the permutation sorting ``idx``; 0 if an index repeats."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return 0, ()
    sign = 1
    for a in range(len(idx)):
        for b in range(len(idx) - 1 - a):
            if idx[b] > idx[b + 1]:
                idx[b], idx[b + 1] = idx[b + 1], idx[b]
                sign = -sign
    return sign, tuple(idx)


def _merge(a: tuple, b: tuple) -> tuple[int, tuple]:
    if set(a) & set(b):
        return 0, ()
    # sign = (-1)^(number of pairs (x in a, y in b) with x > y)
    inv = sum(1 for x in a for y in b if x > y)
    return (-1 if inv % 2 else 1), tuple(sorted(a + b))


def _check_chart(a, b):
    if a.chart != b.chart:
        raise ChartMismatchError(f"chart mismatch: {a.chart} vs {b.chart}")


class _Alternating:
    __slots__ = ("chart", "degree", "_c")
    kind = ""

    def __init__(self, chart: Chart, degree: int, comps=None):
        if degree < 0:
            raise DegreeError("degree must be nonnegative")
        self.chart = chart
        self.degree = degree
        table: dict = {}
        for key, value in (comps or {}).items():
            if not isinstance(key, tuple):
                key = (key,)
            key = tuple(chart.index(k) if isinstance(k, str) else k for k in key)
            if len(key) != degree:
                raise DegreeError(f"index {key} does not match degree {degree}")
            if any(not 0 <= k < chart.dim for k in key):
                raise DegreeError(f"index {key} out of range")
            sign, skey = sort_sign(key)
            if sign == 0:
                continue
            v = as_scalar(value, chart)
            table[skey] = table[skey] + sign * v if skey in table else (v if sign == 1 else -v)
        self._c = {k: v for k, v in table.items() if not v.is_zero()}

    @classmethod
    def _new(cls, chart, degree, table):
        obj = cls.__new__(cls)
        obj.chart = chart
        obj.degree = degree
        obj._c = {k: v for k, v in table.items() if not v.is_zero()}
        return obj

    @classmethod
    def zero(cls, chart: Chart, degree: int):
        return cls._new(chart, degree, {})

    # access -----------------------------------------------------------------
    def __getitem__(self, key) -> ScalarExpr:
        if not isinstance(key, tuple):
            key = (key,)
        key = tuple(self.chart.index(k) if isinstance(k, str) else k for k in key)
        sign, skey = sort_sign(key)
        if sign == 0 or skey not in self._c:
            return self.chart.zero
        v = self._c[skey]
        return v if sign == 1 else -v

    def items(self):
        return sorted(self._c.items())

    def components(self) -> dict:
        return dict(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self):
        return not self.is_zero()

    # linear structure -----------------------------------------------------------
    def _same(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        _check_chart(self, other)
        if other.degree != self.degree:
            raise DegreeError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._same(other)
        out = dict(self._c)
        for k, v in other._c.items():
            out[k] = out[k] + v if k in out else v
        return type(self)._new(self.chart, self.degree, out)

    __radd__ = __add__

    def __neg__(self):
        return type(self)._new(self.chart, self.degree, {k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, f):
        if isinstance(f, _Alternating):
            return NotImplemented
        f = as_scalar(f, self.chart)
        if f.is_zero():
            return type(self).zero(self.chart, self.degree)
        return type(self)._new(self.chart, self.degree, {k: v * f for k, v in self._c.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, _Alternating):
            return NotImplemented
        if type(other) is not type(self) or other.chart != self.chart or other.degree != self.degree:
            return False
        return (self - other).is_zero()

    __hash__ = None

    def map(self, fn):
        return type(self)._new(self.chart, self.degree, {k: fn(v) for k, v in self._c.items()})

    def conj(self):
        return self.map(lambda v: v.conj())

    def re(self):
        return self.map(lambda v: v.re())

    def im(self):
        return self.map(lambda v: v.im())

    def on(self, chart: Chart):
        """Re-embed on a larger chart."""
        pos = [chart.index(c) for c in self.chart.coords]
        out = {}
        for k, v in self._c.items():
            sign, sk = sort_sign(tuple(pos[i] for i in k))
            out[sk] = v.on(chart) if sign == 1 else -v.on(chart)
        return type(self)._new(chart, self.degree, out)

    def wedge(self, other):
        self_t = type(self)
        if type(other) is not self_t:
            raise TypeError("wedge needs two objects of the same kind")
        _check_chart(self, other)
        out: dict = {}
        for a, va in self._c.items():
            for b, vb in other._c.items():
                sign, key = _merge(a, b)
                if sign == 0:
                    continue
                term = va * vb if sign == 1 else -(va * vb)
                out[key] = out[key] + term if key in out else term
        return self_t._new(self.chart, self.degree + other.degree, out)

    def __repr__(self):
        names = self.chart.coords
        sym = "d/d" if self.kind == "vector" else "d"
        if not self._c:
            return f"{type(self).__name__}({self.degree}, 0)"
        body = ", ".join(
            f"{'^'.join(sym + names[i] for i in k) or '1'}: {v}" for k, v in self.items()
        )
        return f"{type(self).__name__}({self.degree}, {{{body}}})"

    def to_table(self) -> dict[str, str]:
        """Canonical text table keyed by comma-joined coordinate names."""
        names = self.chart.coords
        return {",".join(names[i] for i in k): str(v) for k, v in self.items()}


def _det_eval(table, rows):
    """sum_I table[I] * det[rows[a][I_b]] for a list of component rows."""
    k = len(rows)
    if k == 0:
        return table.get(())
    total = None
    for key, coeff in table.items():
        det = _det([[rows[a][key[b]] for b in range(k)] for a in range(k)])
        if det is None:
            continue
        term = coeff * det
        total = term if total is None else total + term
    return total


def _det(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = None
    for c in range(n):
        if m[0][c].is_zero():
            continue
        minor = _det([row[:c] + row[c + 1:] for row in m[1:]])
        term = m[0][c] * minor
        if c % 2:
            term = -term
        total = term if total is None else total + term
    return total if total is not None else m[0][0].chart.zero


class Multivector(_Alternating):
    """Antisymmetric contravariant tensor field; degree 1 is a vector field."""

    __slots__ = ()
    kind = "vector"

    def vector(self) -> list[ScalarExpr]:
        if self.degree != 1:
            raise DegreeError("not a vector field")
        return [self[(i,)] for i in range(self.chart.dim)]

    def __call__(self, *args):
        """A vector field acting on a function, or a k-vector on k one-forms."""
        if self.degree == 1 and len(args) == 1 and isinstance(args[0], ScalarExpr):
            f = args[0]
            out = self.chart.zero
            for (i,), v in self._c.items():
                out = out + v * f.diff(i)
            return out
        return self.evaluate(*args)

    def evaluate(self, *forms) -> ScalarExpr:
        if len(forms) != self.degree:
            raise DegreeError(f"{self.degree}-vector needs {self.degree} forms")
        if self.degree == 0:
            return self._c.get((), self.chart.zero)
        rows = []
        for a in forms:
            if not isinstance(a, DiffForm) or a.degree != 1:
                raise DegreeError("arguments must be 1-forms")
            _check_chart(self, a)
            rows.append(a.covector())
        out = _det_eval(self._c, rows)
        return out if out is not None else self.chart.zero

    @property
    def scalar(self) -> ScalarExpr:
        if self.degree != 0:
            raise DegreeError("not a degree-0 multivector")
        return self._c.get((), self.chart.zero)


class DiffForm(_Alternating):
    """Differential form on a chart."""

    __slots__ = ()
    kind = "form"

    def covector(self) -> list[ScalarExpr]:
        if self.degree != 1:
            raise DegreeError("not a 1-form")
        return [self[(i,)] for i in range(self.chart.dim)]

    def __call__(self, *vectors) -> ScalarExpr:
        return self.evaluate(*vectors)

    def evaluate(self, *vectors) -> ScalarExpr:
        if len(vectors) != self.degree:
            raise DegreeError(f"{self.degree}-form needs {self.degree} vectors")
        if self.degree == 0:
            return self._c.get((), self.chart.zero)
        rows = []
        for X in vectors:
            if not isinstance(X, Multivector) or X.degree != 1:
                raise DegreeError("arguments must be vector fields")
            _check_chart(self, X)
            rows.append(X.vector())
        out = _det_eval(self._c, rows)
        return out if out is not None else self.chart.zero


# ----------------------------------------------------------------------------
# constructors


def scalar_multivector(f: ScalarExpr) -> Multivector:
    return Multivector._new(f.chart, 0, {(): f})


def vector_field(chart: Chart, comps) -> Multivector:
    """Vector field from ``{name_or_index: coefficient}`` or a full list."""
    if isinstance(comps, (list, tuple)):
        comps = {i: c for i, c in enumerate(comps)}
    return Multivector(chart, 1, {(k,): v for k, v in comps.items()})


def one_form(chart: Chart, comps) -> DiffForm:
    if isinstance(comps, (list, tuple)):
        comps = {i: c for i, c in enumerate(comps)}
    return DiffForm(chart, 1, {(k,): v for k, v in comps.items()})


def coordinate_vector(chart: Chart, name) -> Multivector:
    return vector_field(chart, {name: 1})


def coordinate_form(chart: Chart, name) -> DiffForm:
    return one_form(chart, {name: 1})


def wedge(*items):
    out = items[0]
    for x in items[1:]:
        out = out.wedge(x)
    return out


# ----------------------------------------------------------------------------
# Cartan calculus


def d(obj):
    """Exterior derivative of a function or a form."""
    if isinstance(obj, ScalarExpr):
        chart = obj.chart
        return DiffForm._new(chart, 1, {(i,): obj.diff(i) for i in range(chart.dim)})
    if not isinstance(obj, DiffForm):
        raise TypeError("d applies to functions and forms")
    chart = obj.chart
    out: dict = {}
    for key, v in obj._c.items():
        for i in range(chart.dim):
            if i in key:
                continue
            dv = v.diff(i)
            if dv.is_zero():
                continue
            sign, skey = _merge((i,), key)
            term = dv if sign == 1 else -dv
            out[skey] = out[skey] + term if skey in out else term
    return DiffForm._new(chart, obj.degree + 1, out)


def interior(X: Multivector, omega):
    """i_X omega, inserting X into the first slot."""
    if not isinstance(X, Multivector) or X.degree != 1:
        raise DegreeError("interior product needs a vector field")
    if isinstance(omega, ScalarExpr):
        return omega.chart.zero
    _check_chart(X, omega)
    if omega.degree == 0:
        return omega.chart.zero
    out: dict = {}
    for key, v in omega._c.items():
        for pos, i in enumerate(key):
            xi = X[(i,)]
            if xi.is_zero():
                continue
            rest = key[:pos] + key[pos + 1:]
            term = xi * v
            if pos % 2:
                term = -term
            out[rest] = out[rest] + term if rest in out else term
    if omega.degree == 1:
        return out.get((), omega.chart.zero)
    return DiffForm._new(omega.chart, omega.degree - 1, out)


def pair(alpha: DiffForm, X: Multivector) -> ScalarExpr:
    return interior(X, alpha) if alpha.degree == 1 else alpha.evaluate(X)


def lie_derivative(X: Multivector, obj):
    """Lie derivative along a vector field of a function, form, multivector or Tensor11."""
    if isinstance(obj, ScalarExpr):
        return X(obj)
    if isinstance(obj, DiffForm):
        _check_chart(X, obj)
        if obj.degree == 0:
            return DiffForm._new(obj.chart, 0, {(): X(obj[()])})
        return interior(X, d(obj)) + d(interior(X, obj))
    if isinstance(obj, Multivector):
        return schouten_nijenhuis(X, obj)
    if isinstance(obj, Tensor11):
        return obj.lie_derivative(X)
    raise TypeError(f"cannot take a Lie derivative of {type(obj).__name__}")


def schouten_nijenhuis(P, Q):
    """Schouten-Nijenhuis bracket; functions are degree-0 multivectors."""
    back_to_scalar = False
    if isinstance(P, ScalarExpr):
        P = scalar_multivector(P)
    if isinstance(Q, ScalarExpr):
        Q = scalar_multivector(Q)
    if not isinstance(P, Multivector) or not isinstance(Q, Multivector):
        raise TypeError("Schouten-Nijenhuis bracket needs multivectors")
    _check_chart(P, Q)
    p, q = P.degree, Q.degree
    if p + q - 1 < 0:
        return P.chart.zero
    back_to_scalar = p + q - 1 == 0
    chart = P.chart
    out: dict = {}

    def accumulate(A, B, sign0):
        # sum over i of (right d/dtheta_i of A) * (d/dx_i of B)
        k = A.degree
        dB: dict = {}
        for I, a in A._c.items():
            for pos, i in enumerate(I):
                if i not in dB:
                    dB[i] = {J: b.diff(i) for J, b in B._c.items()}
                rest = I[:pos] + I[pos + 1:]
                rsign = -1 if (k - 1 - pos) % 2 else 1
                for J, db in dB[i].items():
                    if db.is_zero():
                        continue
                    sign, key = _merge(rest, J)
                    if sign == 0:
                        continue
                    term = a * db
                    if sign * rsign * sign0 < 0:
                        term = -term
                    out[key] = out[key] + term if key in out else term

    accumulate(P, Q, 1)
    accumulate(Q, P, 1 if ((p - 1) * (q - 1)) % 2 else -1)
    result = Multivector._new(chart, p + q - 1, out)
    if back_to_scalar:
        return result.scalar
    return result


def is_poisson(pi: Multivector) -> bool:
    return schouten_nijenhuis(pi, pi).is_zero()


def sharp(pi: Multivector, alpha: DiffForm) -> Multivector:
    """pi#(alpha) = pi(alpha, -)."""
    if pi.degree != 2 or alpha.degree != 1:
        raise DegreeError("sharp needs a bivector and a 1-form")
    _check_chart(pi, alpha)
    n = pi.chart.dim
    a = alpha.covector()
    comps = {}
    for j in range(n):
        total = pi.chart.zero
        for i in range(n):
            if not a[i].is_zero():
                total = total + a[i] * pi[(i, j)]
        comps[(j,)] = total
    return Multivector._new(pi.chart, 1, comps)


def bivector_matrix(pi: Multivector) -> list[list[ScalarExpr]]:
    """Matrix S with S[j][i] = pi^{ij}, so pi#(alpha)^j = sum_i S[j][i] alpha_i."""
    n = pi.chart.dim
    return [[pi[(i, j)] for i in range(n)] for j in range(n)]


def bivector_from_matrix(chart: Chart, P) -> Multivector:
    """Bivector with pi^{ij} = P[i][j] (upper triangle used)."""
    n = chart.dim
    return Multivector(chart, 2, {(i, j): P[i][j] for i in range(n) for j in range(i + 1, n)})


# ----------------------------------------------------------------------------
# (1,1)-tensors


class Tensor11:
    """Endomorphism of the tangent bundle, ``m[i][j]`` = d/dx_i part of phi(d/dx_j)."""

    __slots__ = ("chart", "m")

    def __init__(self, chart: Chart, rows):
        n = chart.dim
        if len(rows) != n or any(len(r) != n for r in rows):
            raise DegreeError(f"Tensor11 on a {n}-dimensional chart needs an {n}x{n} matrix")
        self.chart = chart
        self.m = tuple(tuple(as_scalar(v, chart) for v in r) for r in rows)

    @classmethod
    def identity(cls, chart: Chart):
        n = chart.dim
        return cls(chart, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, chart: Chart):
        n = chart.dim
        return cls(chart, [[0] * n for _ in range(n)])

    @classmethod
    def from_entries(cls, chart: Chart, entries: dict):
        """From ``{(i, j): value}`` with names or indices; other entries zero."""
        n = chart.dim
        rows = [[chart.zero] * n for _ in range(n)]
        for (i, j), v in entries.items():
            i = chart.index(i) if isinstance(i, str) else i
            j = chart.index(j) if isinstance(j, str) else j
            rows[i][j] = as_scalar(v, chart)
        return cls(chart, rows)

    @property
    def dim(self):
        return self.chart.dim

    def __getitem__(self, ij):
        i, j = ij
        return self.m[i][j]

    def apply(self, X: Multivector) -> Multivector:
        if X.degree != 1:
            raise DegreeError("Tensor11 acts on vector fields")
        _check_chart(self, X)
        x = X.vector()
        n = self.dim
        comps = {}
        for i in range(n):
            tot = self.chart.zero
            for j in range(n):
                if not x[j].is_zero() and not self.m[i][j].is_zero():
                    tot = tot + self.m[i][j] * x[j]
            comps[(i,)] = tot
        return Multivector._new(self.chart, 1, comps)

    __call__ = apply

    def dual(self, alpha: DiffForm) -> DiffForm:
        """phi* alpha = alpha o phi."""
        if alpha.degree != 1:
            raise DegreeError("phi* acts on 1-forms")
        _check_chart(self, alpha)
        a = alpha.covector()
        n = self.dim
        comps = {}
        for j in range(n):
            tot = self.chart.zero
            for i in range(n):
                if not a[i].is_zero() and not self.m[i][j].is_zero():
                    tot = tot + a[i] * self.m[i][j]
            comps[(j,)] = tot
        return DiffForm._new(self.chart, 1, comps)

    def transpose(self) -> "Tensor11":
        n = self.dim
        return Tensor11(self.chart, [[self.m[j][i] for j in range(n)] for i in range(n)])

    def __matmul__(self, other: "Tensor11") -> "Tensor11":
        _check_chart(self, other)
        return Tensor11(self.chart, _matmul(self.m, other.m, self.chart))

    def __add__(self, other):
        _check_chart(self, other)
        n = self.dim
        return Tensor11(self.chart, [[self.m[i][j] + other.m[i][j] for j in range(n)] for i in range(n)])

    def __neg__(self):
        return Tensor11(self.chart, [[-v for v in r] for r in self.m])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, f):
        if isinstance(f, Tensor11):
            return NotImplemented
        f = as_scalar(f, self.chart)
        return Tensor11(self.chart, [[v * f for v in r] for r in self.m])

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(v.is_zero() for r in self.m for v in r)

    def __eq__(self, other):
        if not isinstance(other, Tensor11):
            return NotImplemented
        return other.chart == self.chart and (self - other).is_zero()

    __hash__ = None

    def map(self, fn):
        return Tensor11(self.chart, [[fn(v) for v in r] for r in self.m])

    def conj(self):
        return self.map(lambda v: v.conj())

    def on(self, chart: Chart) -> "Tensor11":
        """Extend to a larger chart, acting by zero on the new directions."""
        pos = [chart.index(c) for c in self.chart.coords]
        n = chart.dim
        rows = [[chart.zero] * n for _ in range(n)]
        for i, pi in enumerate(pos):
            for j, pj in enumerate(pos):
                rows[pi][pj] = self.m[i][j].on(chart)
        return Tensor11(chart, rows)

    def lie_derivative(self, X: Multivector) -> "Tensor11":
        _check_chart(self, X)
        n = self.dim
        x = X.vector()
        dx = [[x[i].diff(k) for k in range(n)] for i in range(n)]  # dx[i][k] = d_k X^i
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                tot = X(self.m[i][j])
                for k in range(n):
                    if not dx[i][k].is_zero():
                        tot = tot - self.m[k][j] * dx[i][k]
                    if not dx[k][j].is_zero():
                        tot = tot + self.m[i][k] * dx[k][j]
                row.append(tot)
            rows.append(row)
        return Tensor11(self.chart, rows)

    def __repr__(self):
        return "Tensor11(" + "; ".join(", ".join(str(v) for v in r) for r in self.m) + ")"


def _matmul(a, b, chart):
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(len(b[0])):
            tot = chart.zero
            for k in range(len(b)):
                if not a[i][k].is_zero() and not b[k][j].is_zero():
                    tot = tot + a[i][k] * b[k][j]
            row.append(tot)
        out.append(row)
    return out


def lie_bracket(X: Multivector, Y: Multivector) -> Multivector:
    return schouten_nijenhuis(X, Y)


class VectorValuedForm:
    """Skew table ``{(a, b): vector field}`` of a vector-valued 2-form on coordinate frames."""

    def __init__(self, chart: Chart, table: dict):
        self.chart = chart
        self.table = {k: v for k, v in table.items() if not v.is_zero()}

    def __getitem__(self, ab):
        a, b = ab
        if a == b:
            return Multivector.zero(self.chart, 1)
        if a > b:
            return -self.table.get((b, a), Multivector.zero(self.chart, 1))
        return self.table.get((a, b), Multivector.zero(self.chart, 1))

    def is_zero(self) -> bool:
        return not self.table

    def nonzero_entries(self):
        return sorted(self.table.items())

    def __repr__(self):
        names = self.chart.coords
        body = ", ".join(f"({names[a]},{names[b]}): {v!r}" for (a, b), v in self.nonzero_entries())
        return f"VectorValuedForm({{{body}}})"


def nijenhuis_torsion(phi: Tensor11) -> VectorValuedForm:
    """N_phi(d_a, d_b) = [phi d_a, phi d_b] - phi[phi d_a, d_b] - phi[d_a, phi d_b]."""
    chart = phi.chart
    n = chart.dim
    frame = [coordinate_vector(chart, i) for i in range(n)]
    images = [phi.apply(e) for e in frame]
    table = {}
    for a in range(n):
        for b in range(a + 1, n):
            t = schouten_nijenhuis(images[a], images[b])
            t = t - phi.apply(schouten_nijenhuis(images[a], frame[b]))
            t = t - phi.apply(schouten_nijenhuis(frame[a], images[b]))
            table[(a, b)] = t
    return VectorValuedForm(chart, table)


# ----------------------------------------------------------------------------
# Poisson-level constructions


def _compat_mismatch(pi: Multivector, phi: Tensor11):
    """First (entry, value) where pi# phi* != phi pi#, or None."""
    _check_chart(pi, phi)
    S = bivector_matrix(pi)
    n = pi.chart.dim
    lhs = _matmul(S, phi.transpose().m, pi.chart)
    rhs = _matmul(phi.m, S, pi.chart)
    for i in range(n):
        for j in range(n):
            diff = lhs[i][j] - rhs[i][j]
            if not diff.is_zero():
                return (i, j), diff
    return None


def pi_phi(pi: Multivector, phi: Tensor11) -> Multivector:
    """pi_phi = pi(phi* -, -), defined when pi# phi* = phi pi#."""
    bad = _compat_mismatch(pi, phi)
    if bad is not None:
        (i, j), diff = bad
        names = pi.chart.coords
        raise CompatibilityError(
            f"pi# phi* != phi pi# at entry ({names[i]}, {names[j]}): difference {diff}",
            entry=(i, j), value=diff,
        )
    n = pi.chart.dim
    # pi_phi^{ij} = pi(phi* dx^i, dx^j) = sum_k phi[i][k] pi^{kj}
    P = [[sum((phi.m[i][k] * pi[(k, j)] for k in range(n)), pi.chart.zero) for j in range(n)]
         for i in range(n)]
    for i in range(n):
        for j in range(i, n):
            if not (P[i][j] + P[j][i]).is_zero():
                raise CompatibilityError("pi_phi is not skew-symmetric", entry=(i, j), value=P[i][j] + P[j][i])
    return bivector_from_matrix(pi.chart, P)


def form_bracket_pi(pi: Multivector, rho: DiffForm, sigma: DiffForm) -> DiffForm:
    """[rho, sigma]_pi = L_{pi# rho} sigma - L_{pi# sigma} rho - d pi(rho, sigma)."""
    _check_chart(pi, rho)
    _check_chart(pi, sigma)
    a = lie_derivative(sharp(pi, rho), sigma)
    b = lie_derivative(sharp(pi, sigma), rho)
    return a - b - d(pi.evaluate(rho, sigma))


def pn_compatible(pi: Multivector, phi: Tensor11) -> Report:
    """Poisson-Nijenhuis compatibility of (pi, phi) on the forms dx^i."""
    rep = Report("pn-compatible")
    bad = _compat_mismatch(pi, phi)
    if bad is not None:
        (i, j), diff = bad
        names = pi.chart.coords
        rep.fail("pi# phi* = phi pi#", f"entry ({names[i]},{names[j]})", diff)
        rep.structural = True
        return rep
    pphi = pi_phi(pi, phi)
    chart = pi.chart
    forms = [coordinate_form(chart, i) for i in range(chart.dim)]
    duals = [phi.dual(f) for f in forms]
    for i in range(chart.dim):
        for j in range(i + 1, chart.dim):
            lhs = phi.dual(form_bracket_pi(pi, forms[i], forms[j]))
            rhs = (form_bracket_pi(pi, duals[i], forms[j]) + form_bracket_pi(pi, forms[i], duals[j])
                   - form_bracket_pi(pphi, forms[i], forms[j]))
            diff = lhs - rhs
            if not diff.is_zero():
                rep.fail("phi*[r,s]_pi = [phi* r,s]_pi + [r,phi* s]_pi - [r,s]_pi_phi",
                         f"(d{chart.coords[i]}, d{chart.coords[j]})", repr(diff))
    return rep
