"""Structure-definition files.

A file is TOML.  ``[charts.<name>]`` tables declare charts; objects are the
remaining top-level tables and carry a ``kind``::

    [charts.main]
    coords = ["t", "p", "q"]
    angles = []                        # optional half-angle coordinates
    complex = { z = ["z_x", "z_y"] }   # optional holomorphic pairs

    [J]
    kind = "multiderivation"
    Lambda = { "t,p" = "-p", "p,q" = "1" }
    E = { "t" = "1" }

Components are keyed by comma-joined coordinate names and valued by
expression strings.  Objects live on ``charts.main`` unless they set
``chart = "<name>"``.  Kinds:

* ``multivector`` (``degree``, ``components``), ``form`` (same),
* ``multiderivation`` (``degree``, ``Lambda``, ``E``),
* ``tensor11`` (``components`` keyed ``"row,col"``: ``phi(d/d col)`` has
  coefficient ``row``),
* ``endo-dl`` (``N`` as tensor11 components, ``Y``, ``gamma``, ``g``),
* ``genblock`` (``type`` = tangent | omni, ``matrix`` = list of rows),
* ``algebroid`` (``labels``, ``anchor`` = list of vector components,
  ``structure`` = ``{"a,b" = [c^0, ..., c^{r-1}]}`` keyed by labels),
* ``text`` (``value``): free text carried along, not interpreted.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import tomli

from .complexgeom import ComplexChart
from .errors import ChartMismatchError, ParseError
from .expr import Chart, ScalarExpr
from .jacobi import EndoDL, MultiDerivation
from .genstruct import GenBlockMap
from .algebroid import AlgebroidData
from .tensor import DiffForm, Multivector, Tensor11

KINDS = ("multivector", "form", "multiderivation", "tensor11", "endo-dl", "genblock",
         "algebroid", "text")


@dataclass
class StructureFile:
    charts: dict = field(default_factory=dict)       # name -> Chart
    complex: dict = field(default_factory=dict)      # name -> ComplexChart
    objects: dict = field(default_factory=dict)      # name -> object
    object_charts: dict = field(default_factory=dict)

    def of_kind(self, *types) -> dict:
        return {k: v for k, v in self.objects.items() if isinstance(v, types)}

    def complex_chart(self, name: str = "main") -> ComplexChart:
        if name not in self.complex:
            raise ParseError(f"chart {name!r} declares no complex coordinates")
        return self.complex[name]


# ----------------------------------------------------------------------------
# reading


def _where(path, *keys):
    return f"{path}: [{'.'.join(keys)}]" if keys else str(path)


def _expr(chart: Chart, text, where: str) -> ScalarExpr:
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        text = str(text)
    if not isinstance(text, str):
        raise ParseError(f"{where}: expected an expression string, got {type(text).__name__}")
    try:
        return chart.parse(text)
    except ParseError as exc:
        raise ParseError(f"{where}: {exc.message}", exc.offset, text) from None


def _key(chart: Chart, key: str, where: str) -> tuple[int, ...]:
    names = [s.strip() for s in key.split(",")] if key.strip() else []
    try:
        return tuple(chart.index(n) for n in names)
    except (KeyError, ValueError):
        raise ParseError(f"{where}: unknown coordinate in {key!r}") from None


def _components(chart: Chart, table, where: str) -> dict:
    if not isinstance(table, dict):
        raise ParseError(f"{where}: expected a table of components")
    out = {}
    for key, val in table.items():
        out[_key(chart, key, f"{where}.{key}")] = _expr(chart, val, f"{where}.{key}")
    return out


def _graded(cls, chart, comps: dict, degree, where):
    degrees = {len(k) for k in comps}
    if degree is None:
        if len(degrees) != 1:
            raise ParseError(f"{where}: cannot infer degree, set 'degree'")
        degree = degrees.pop()
    elif degrees - {degree}:
        raise ParseError(f"{where}: component keys do not match degree {degree}")
    return cls(chart, degree, comps)


def _tensor(chart, table, where):
    comps = _components(chart, table, where)
    m = [[chart.zero] * chart.dim for _ in range(chart.dim)]
    for key, v in comps.items():
        if len(key) != 2:
            raise ParseError(f"{where}: tensor11 entries are keyed 'row,col'")
        m[key[0]][key[1]] = v
    return Tensor11(chart, m)


def _chart(name, table, path) -> tuple[Chart, ComplexChart | None]:
    where = _where(path, "charts", name)
    if not isinstance(table, dict) or "coords" not in table:
        raise ParseError(f"{where}: a chart needs 'coords'")
    try:
        chart = Chart(tuple(table["coords"]), tuple(table.get("angles", ())))
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{where}: {exc}") from None
    cx = None
    if table.get("complex"):
        pairs = {k: tuple(v) for k, v in table["complex"].items()}
        try:
            cx = ComplexChart(chart, pairs)
        except Exception as exc:
            raise ParseError(f"{where}: bad complex pairs: {exc}") from None
    return chart, cx


def _object(name, table, doc: StructureFile, path):
    where = _where(path, name)
    kind = table.get("kind")
    if kind not in KINDS:
        raise ParseError(f"{where}: unknown kind {kind!r} (expected one of {', '.join(KINDS)})")
    cname = table.get("chart", "main")
    if cname not in doc.charts:
        raise ParseError(f"{where}: unknown chart {cname!r}")
    chart = doc.charts[cname]
    doc.object_charts[name] = cname
    if kind == "text":
        return str(table.get("value", ""))
    if kind in ("multivector", "form"):
        cls = Multivector if kind == "multivector" else DiffForm
        comps = _components(chart, table.get("components", {}), f"{where}.components")
        return _graded(cls, chart, comps, table.get("degree"), where)
    if kind == "multiderivation":
        k = table.get("degree", 2)
        lam = _graded(Multivector, chart, _components(chart, table.get("Lambda", {}), f"{where}.Lambda"),
                      k, f"{where}.Lambda")
        E = _graded(Multivector, chart, _components(chart, table.get("E", {}), f"{where}.E"),
                    k - 1, f"{where}.E")
        return MultiDerivation(lam, E)
    if kind == "tensor11":
        return _tensor(chart, table.get("components", {}), f"{where}.components")
    if kind == "endo-dl":
        N = _tensor(chart, table.get("N", {}), f"{where}.N")
        Y = _graded(Multivector, chart, _components(chart, table.get("Y", {}), f"{where}.Y"), 1, f"{where}.Y")
        gamma = _graded(DiffForm, chart, _components(chart, table.get("gamma", {}), f"{where}.gamma"),
                        1, f"{where}.gamma")
        g = _expr(chart, table.get("g", "0"), f"{where}.g")
        return EndoDL(N, Y, gamma, g)
    if kind == "genblock":
        rows = table.get("matrix")
        if not isinstance(rows, list):
            raise ParseError(f"{where}: genblock needs 'matrix'")
        M = [[_expr(chart, v, f"{where}.matrix[{a}][{b}]") for b, v in enumerate(row)]
             for a, row in enumerate(rows)]
        try:
            return GenBlockMap(chart, M, table.get("type", "tangent"))
        except Exception as exc:
            raise ParseError(f"{where}: {exc}") from None
    # algebroid
    anchor_t = table.get("anchor", [])
    labels = list(table.get("labels", [f"e{k}" for k in range(len(anchor_t))]))
    if len(labels) != len(anchor_t):
        raise ParseError(f"{where}: one label per anchor column")
    anchor = [_graded(Multivector, chart, _components(chart, col, f"{where}.anchor[{k}]"), 1, where)
              for k, col in enumerate(anchor_t)]
    structure = {}
    for key, coeffs in table.get("structure", {}).items():
        parts = [s.strip() for s in key.split(",")]
        if len(parts) != 2 or any(p not in labels for p in parts):
            raise ParseError(f"{where}.structure: bad key {key!r}")
        if len(coeffs) != len(labels):
            raise ParseError(f"{where}.structure.{key}: need {len(labels)} coefficients")
        structure[(labels.index(parts[0]), labels.index(parts[1]))] = [
            _expr(chart, c, f"{where}.structure.{key}") for c in coeffs]
    return AlgebroidData(chart, anchor, structure, labels)


def loads(text: str, path="<string>") -> StructureFile:
    try:
        data = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from None
    doc = StructureFile()
    charts = data.pop("charts", None)
    if not isinstance(charts, dict) or "main" not in charts:
        raise ParseError(f"{path}: missing [charts.main]")
    for name, table in charts.items():
        doc.charts[name], cx = _chart(name, table, path)
        if cx is not None:
            doc.complex[name] = cx
    for name, table in data.items():
        if not isinstance(table, dict):
            raise ParseError(f"{_where(path, name)}: expected a table")
        doc.objects[name] = _object(name, table, doc, path)
    return doc


def load(path) -> StructureFile:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), path)


# ----------------------------------------------------------------------------
# writing


def _s(text) -> str:
    text = str(text)
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def _inline(chart: Chart, comps) -> str:
    items = sorted(comps, key=lambda kv: kv[0])
    body = ", ".join(f"{_s(','.join(chart.coords[i] for i in key))} = {_s(v)}" for key, v in items)
    return "{ " + body + " }" if body else "{}"


def _graded_items(T):
    return [(k, v) for k, v in T.items() if not v.is_zero()]


def _tensor_items(t: Tensor11):
    n = t.chart.dim
    return [((i, j), t.m[i][j]) for i in range(n) for j in range(n) if not t.m[i][j].is_zero()]


def _emit_object(name, obj, chart_name, doc_charts) -> list[str]:
    chart = doc_charts[chart_name]
    out = [f"[{_s(name) if not name.isidentifier() else name}]"]

    def kv(k, v):
        out.append(f"{k} = {v}")

    if isinstance(obj, str):
        kv("kind", _s("text"))
    elif isinstance(obj, (Multivector, DiffForm)):
        kv("kind", _s("multivector" if isinstance(obj, Multivector) else "form"))
        kv("degree", obj.degree)
    elif isinstance(obj, MultiDerivation):
        kv("kind", _s("multiderivation"))
        kv("degree", obj.degree)
    elif isinstance(obj, Tensor11):
        kv("kind", _s("tensor11"))
    elif isinstance(obj, EndoDL):
        kv("kind", _s("endo-dl"))
    elif isinstance(obj, GenBlockMap):
        kv("kind", _s("genblock"))
        kv("type", _s(obj.kind))
    elif isinstance(obj, AlgebroidData):
        kv("kind", _s("algebroid"))
    else:
        raise TypeError(f"cannot emit {type(obj).__name__}")
    if chart_name != "main":
        kv("chart", _s(chart_name))
    if isinstance(obj, str):
        kv("value", _s(obj))
    elif isinstance(obj, (Multivector, DiffForm)):
        kv("components", _inline(chart, _graded_items(obj)))
    elif isinstance(obj, MultiDerivation):
        kv("Lambda", _inline(chart, _graded_items(obj.Lambda)))
        kv("E", _inline(chart, _graded_items(obj.E)))
    elif isinstance(obj, Tensor11):
        kv("components", _inline(chart, _tensor_items(obj)))
    elif isinstance(obj, EndoDL):
        kv("N", _inline(chart, _tensor_items(obj.N)))
        kv("Y", _inline(chart, _graded_items(obj.Y)))
        kv("gamma", _inline(chart, _graded_items(obj.gamma)))
        kv("g", _s(obj.g))
    elif isinstance(obj, GenBlockMap):
        out.append("matrix = [")
        for row in obj.matrix:
            out.append("  [" + ", ".join(_s(v) for v in row) + "],")
        out.append("]")
    else:
        kv("labels", "[" + ", ".join(_s(lb) for lb in obj.labels) + "]")
        out.append("anchor = [")
        for X in obj.anchor:
            out.append("  " + _inline(chart, _graded_items(X)) + ",")
        out.append("]")
        rows = []
        for (a, b), coeffs in sorted(obj.structure.items()):
            if all(c.is_zero() for c in coeffs):
                continue
            rows.append(f"{_s(obj.labels[a] + ',' + obj.labels[b])} = ["
                        + ", ".join(_s(c) for c in coeffs) + "]")
        out.append("structure = { " + ", ".join(rows) + " }" if rows else "structure = {}")
    return out


def dumps(charts: dict, objects: dict, object_charts: dict | None = None,
          complex_pairs: dict | None = None, header: str = "") -> str:
    """Canonical text: charts in the given order, then objects in the given order.

    ``charts`` maps names to Chart; ``complex_pairs`` maps chart names to the
    holomorphic pairs; ``object_charts`` maps object names to chart names.
    """
    object_charts = object_charts or {}
    complex_pairs = complex_pairs or {}
    if "main" not in charts:
        raise ChartMismatchError("a 'main' chart is required")
    lines = []
    if header:
        lines += [f"# {h}" if h else "#" for h in header.splitlines()]
        lines.append("")
    for name, chart in charts.items():
        lines.append(f"[charts.{name}]")
        lines.append("coords = [" + ", ".join(_s(c) for c in chart.coords) + "]")
        if chart.angles:
            lines.append("angles = [" + ", ".join(_s(a) for a in chart.angles) + "]")
        pairs = complex_pairs.get(name)
        if pairs:
            body = ", ".join(f"{z} = [{_s(x)}, {_s(y)}]" for z, (x, y) in pairs.items())
            lines.append("complex = { " + body + " }")
        lines.append("")
    for name, obj in objects.items():
        cname = object_charts.get(name, "main")
        if not isinstance(obj, str) and obj.chart != charts[cname]:
            raise ChartMismatchError(f"object {name!r} does not live on chart {cname!r}")
        lines += _emit_object(name, obj, cname, charts)
        lines.append("")
    return "\n".join(lines).rstrip("\n") + "\n"
