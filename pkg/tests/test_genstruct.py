import random

from hypothesis import given, settings
from hypothesis import strategies as st

from holojacobi.complexgeom import standard_j
from holojacobi.expr import Chart
from holojacobi.genstruct import (
    GenBlockMap,
    OmniSection,
    TangentSection,
    dorfman,
    dorfman_jacobi,
    is_generalized_complex,
    is_generalized_contact,
    is_homogeneous_gc,
    pairing,
)
from holojacobi.jacobi import (
    EndoDL,
    JetSection,
    MultiDerivation,
    dl_bracket,
    is_jacobi_nijenhuis,
    jet,
)
from holojacobi.randgen import random_multiderivation, random_scalar
from holojacobi.tensor import (
    DiffForm,
    Multivector,
    Tensor11,
    coordinate_form,
    coordinate_vector,
    d,
    wedge,
)

R1 = Chart(("t",))
R2 = Chart(("x", "y"))
R3 = Chart(("x", "y", "z"))
R4 = Chart(("a", "b", "c", "e"))
seeds = st.integers(0, 10 ** 6)


def rand_tangent(chart, rng):
    X = Multivector(chart, 1, {(i,): random_scalar(chart, rng, 2, 2) for i in range(chart.dim)})
    a = DiffForm(chart, 1, {(i,): random_scalar(chart, rng, 2, 2) for i in range(chart.dim)})
    return TangentSection(X, a)


def rand_omni(chart, rng):
    D = random_multiderivation(chart, 1, rng, degree=2)
    a = DiffForm(chart, 1, {(i,): random_scalar(chart, rng, 2, 2) for i in range(chart.dim)})
    return OmniSection(D, JetSection(a, random_scalar(chart, rng, 2, 2)))


def zero_derivation(chart):
    return MultiDerivation(Multivector.zero(chart, 1), chart.zero)


def test_pairing_examples():
    D = MultiDerivation(coordinate_vector(R2, "x"), R2.var("y"))
    N = MultiDerivation(coordinate_vector(R2, "y"), 3)
    z = JetSection.zero(R2)
    assert pairing(OmniSection(D, z), OmniSection(N, z)).is_zero()
    one = OmniSection(MultiDerivation.identity(R2), z)
    j1 = OmniSection(zero_derivation(R2), jet(R2.one))
    assert pairing(one, j1) == R2.one


@given(seeds)
def test_pairing_symmetric_and_bilinear(seed):
    rng = random.Random(seed)
    for make in (rand_tangent, rand_omni):
        e1, e2, e3 = make(R2, rng), make(R2, rng), make(R2, rng)
        f = random_scalar(R2, rng)
        assert pairing(e1, e2) == pairing(e2, e1)
        assert pairing(e1 * f + e3, e2) == pairing(e1, e2) * f + pairing(e3, e2)


def test_bracket_on_pure_derivations():
    D = MultiDerivation(coordinate_vector(R2, "x") * R2.var("y"), R2.var("x"))
    N = MultiDerivation(coordinate_vector(R2, "y"), 1)
    z = JetSection.zero(R2)
    assert dorfman_jacobi(OmniSection(D, z), OmniSection(N, z)) == OmniSection(dl_bracket(D, N), z)


@given(seeds)
def test_symmetric_part_is_exact(seed):
    rng = random.Random(seed)
    e = rand_omni(R2, rng)
    half = R2.const(1) / 2
    assert dorfman_jacobi(e, e) == OmniSection(zero_derivation(R2), jet(pairing(e, e) * half))
    t = rand_tangent(R2, rng)
    assert dorfman(t, t) == TangentSection(Multivector.zero(R2, 1), d(pairing(t, t) * half))


@settings(max_examples=10)
@given(seeds)
def test_left_leibniz_identity(seed):
    rng = random.Random(seed)
    for make, br in ((rand_tangent, dorfman), (rand_omni, dorfman_jacobi)):
        chart = R3 if make is rand_tangent else R2
        e1, e2, e3 = make(chart, rng), make(chart, rng), make(chart, rng)
        assert br(e1, br(e2, e3)) == br(br(e1, e2), e3) + br(e2, br(e1, e3))


@given(seeds)
def test_anchor_and_module_rules(seed):
    # [[e1, f e2]] = f [[e1, e2]] + rho(e1)(f) e2
    # [[f e1, e2]] = f [[e1, e2]] - rho(e2)(f) e1 + <<e1, e2>> (df, 0)
    rng = random.Random(seed)
    e1 = OmniSection(random_multiderivation(R2, 1, rng, degree=1), jet(random_scalar(R2, rng, 1, 2)))
    e2 = OmniSection(random_multiderivation(R2, 1, rng, degree=1), jet(random_scalar(R2, rng, 1, 2)))
    f = random_scalar(R2, rng, 1, 2)
    br = dorfman_jacobi
    assert br(e1, e2 * f) == br(e1, e2) * f + e2 * e1.D.symbol(f)
    df = OmniSection(zero_derivation(R2), JetSection(d(f), 0))
    assert br(e1 * f, e2) == br(e1, e2) * f - e1 * e2.D.symbol(f) + df * pairing(e1, e2)


def test_generalized_complex_from_complex_structures():
    j = standard_j(R2, [("x", "y")])
    assert is_generalized_complex(GenBlockMap.tangent(j))
    e = R4.var("e")
    twisted = Tensor11(R4, [[0, -1, 0, 0], [1, 0, 0, 0], [e, 0, 0, -1], [0, -e, 1, 0]])
    rep = is_generalized_complex(GenBlockMap.tangent(twisted))
    assert not rep
    assert rep.failures[0].identity == "Nijenhuis torsion = 0"


def _symplectic_map(chart, omega):
    """(0, -omega^-1; omega_flat, 0) built on explicit matrices."""
    import sympy as sp
    n = chart.dim
    C = [[omega[(a, b)] for a in range(n)] for b in range(n)]
    Cs = sp.Matrix([[sp.sympify(str(C[i][k]).replace("^", "**")) for k in range(n)] for i in range(n)])
    Bs = -Cs.inv()
    B = [[chart.parse(str(sp.simplify(Bs[i, k])).replace("**", "^")) for k in range(n)] for i in range(n)]
    z = [[chart.zero] * n for _ in range(n)]
    return GenBlockMap.from_blocks(chart, z, B, C, z)


def test_symplectic_type_integrable_iff_closed():
    a = R4.var("a")
    da, db, dc, de = (coordinate_form(R4, i) for i in range(4))
    closed = wedge(da, db) + wedge(dc, de)
    assert is_generalized_complex(_symplectic_map(R4, closed))
    open_ = wedge(da, db) + wedge(dc, de) * (a + 1)
    assert not d(open_).is_zero()
    rep = is_generalized_complex(_symplectic_map(R4, open_))
    assert not rep
    assert rep.failures[0].identity == "Nijenhuis torsion = 0"


def test_non_skew_and_non_square_maps_fail():
    n = 2
    ident = [[1 if i == k else 0 for k in range(n)] for i in range(n)]
    zero = [[0] * n for _ in range(n)]
    j = standard_j(R2, [("x", "y")]).m
    minus_j = [[-v for v in row] for row in j]
    rep = is_generalized_complex(GenBlockMap.from_blocks(R2, j, zero, zero, minus_j))
    assert not rep
    assert any(f.identity.startswith("<<") for f in rep.failures)
    rep = is_generalized_complex(GenBlockMap.from_blocks(R2, ident, zero, zero, [[-1, 0], [0, -1]]))
    assert not rep and rep.failures[0].identity == "square = -1"


def test_homogeneous_gc_examples():
    from holojacobi.complexgeom import ComplexChart
    cx = ComplexChart.from_names("z", "p")
    Pi = wedge(cx.d_dz("z"), cx.d_dz("p"))
    eta = (cx.d_dz("p") * cx.z("p")).re() * 2
    from holojacobi.tensor import pi_phi
    pi = Pi.im()
    J = GenBlockMap.tangent(cx.j, pi)
    assert is_homogeneous_gc(J, eta)
    assert pi_phi(pi, cx.j) == Pi.re()
    assert not is_homogeneous_gc(J, Multivector.zero(cx.chart, 1))


def test_omega_block_scaling_condition():
    x, y = R2.vars()
    omega = wedge(coordinate_form(R2, "x"), coordinate_form(R2, "y"))
    J = GenBlockMap.tangent(Tensor11.zero(R2), None, omega)
    euler = coordinate_vector(R2, "x") * x + coordinate_vector(R2, "y") * y
    rep = is_homogeneous_gc(J, euler, check_gc=False)
    assert [f.identity for f in rep.failures] == ["L_eta omega = omega"]
    assert is_homogeneous_gc(J, euler * (R2.const(1) / 2), check_gc=False)


def _constant_dl_complex_structures(chart, rng):
    r = chart.dim + 1
    J0 = [[0] * r for _ in range(r)]
    for k in range(0, r, 2):
        J0[k + 1][k] = 1
        J0[k][k + 1] = -1
    A = [[1 if i == k else (rng.randint(-1, 1) if k > i else 0) for k in range(r)] for i in range(r)]
    import sympy as sp
    As = sp.Matrix(A)
    M = As * sp.Matrix(J0) * As.inv()
    return EndoDL.from_matrix(chart, [[chart.const(int(M[i, k])) for k in range(r)] for i in range(r)])


def test_square_failure_for_contact_maps():
    phi = EndoDL.identity(R1)
    I = GenBlockMap.contact(phi, MultiDerivation.zero(R1, 2))
    rep = is_generalized_contact(I)
    assert not rep and rep.failures[0].identity == "square = -1"


@settings(max_examples=12)
@given(seeds, st.sampled_from([R1, R3]), st.integers(0, 2))
def test_generalized_contact_agrees_with_jacobi_nijenhuis(seed, chart, kind):
    rng = random.Random(seed)
    phi = _constant_dl_complex_structures(chart, rng)
    if kind == 0:
        J = MultiDerivation.zero(chart, 2)
    elif kind == 1:
        J = random_multiderivation(chart, 2, rng, degree=1)
    else:
        # constant pairs stay compatible with a constant phi more often
        J = random_multiderivation(chart, 2, rng, degree=0, terms=1)
    gc = is_generalized_contact(GenBlockMap.contact(phi, J))
    jn = is_jacobi_nijenhuis(J, phi)
    assert gc.passed == jn.passed
    if kind == 0:
        assert gc.passed
