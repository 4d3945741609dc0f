import pytest
from hypothesis import given
from hypothesis import strategies as st

from holojacobi.complexgeom import (
    ComplexChart,
    check_homogeneous_equivalences,
    check_hP_equivalences,
    holomorphic_vector_from_real,
    is_complex_structure,
    is_holomorphic,
    is_of_type,
    projectors,
    standard_j,
    type_project,
)
from holojacobi.errors import DegreeError, ValidationError
from holojacobi.expr import Chart
from holojacobi.randgen import random_holomorphic, random_holomorphic_multivector
from holojacobi.tensor import Multivector, Tensor11, coordinate_vector, pi_phi, wedge

R2 = Chart(("x", "y"))
C1 = ComplexChart(R2, {"z": ("x", "y")})
C2 = ComplexChart.from_names("z", "p")
seeds = st.integers(0, 10 ** 6)


def test_standard_j_is_complex_structure():
    assert is_complex_structure(standard_j(R2, [("x", "y")]))
    assert not is_complex_structure(standard_j(R2, [("x", "y")]) * 2)
    with pytest.raises(DegreeError):
        is_complex_structure(Tensor11.identity(Chart(("x", "y", "t"))))


def test_twisted_structure_fails_integrability():
    c = Chart(("a", "b", "c", "e"))
    e = c.var("e")
    # A J0 A^-1 with A = 1 + e E_{ca}
    rows = [[0, -1, 0, 0], [1, 0, 0, 0], [e, 0, 0, -1], [0, -e, 1, 0]]
    jp = Tensor11(c, rows)
    assert (jp @ jp) == Tensor11.identity(c) * -1
    rep = is_complex_structure(jp)
    assert not rep
    assert all(f.identity == "N_j = 0" for f in rep.failures)


def test_complex_chart_rejects_foreign_structure():
    with pytest.raises(ValidationError):
        ComplexChart(R2, {"z": ("x", "y")}, standard_j(R2, [("y", "x")]))


def test_projector_of_coordinate_field():
    p10, _ = projectors(C1)
    dx = coordinate_vector(R2, "x")
    jdx = C1.j.apply(dx)
    assert p10.apply(dx) == (dx - jdx * R2.i) * (R2.const(1) / 2)
    assert p10.apply(dx) == C1.d_dz("z")


@given(st.integers(1, 3))
def test_projector_completeness(n):
    cx = ComplexChart.from_names(*[f"z{k}" for k in range(n)])
    p10, p01 = projectors(cx)
    assert p10 + p01 == Tensor11.identity(cx.chart)
    assert (p10 @ p01).is_zero() and (p01 @ p10).is_zero()
    assert p10 @ p10 == p10


def test_type_projection_examples():
    Pi = wedge(C2.d_dz("z"), C2.d_dz("p"))
    assert type_project(Pi, C2, (0, 2)).is_zero()
    assert type_project(Pi, C2, (1, 1)).is_zero()
    assert is_of_type(Pi, C2, (2, 0))
    with pytest.raises(DegreeError):
        type_project(Pi, C2, (2, 1))


def test_area_bivector_on_plane_has_no_2_0_part():
    # the only (2,0) bivector on a complex curve is zero
    pi = wedge(*[coordinate_vector(R2, n) for n in "xy"])
    assert type_project(pi, C1, (2, 0)).is_zero()
    assert type_project(pi, C1, (1, 1)) == pi


@given(seeds, st.integers(1, 2))
def test_type_projections_sum_to_identity(seed, k):
    T = random_holomorphic_multivector(C2, k, seed) + random_holomorphic_multivector(C2, k, seed + 1).conj()
    total = Multivector.zero(C2.chart, k)
    for p in range(k + 1):
        total = total + type_project(T, C2, (p, k - p))
    assert total == T


def test_holomorphy_examples():
    Pi = wedge(C2.d_dz("z"), C2.d_dz("p"))
    p = C2.z("p")
    assert is_holomorphic(Pi, C2)
    assert is_holomorphic(C2.d_dz("p") * p, C2)
    z = C2.z("z")
    rep = is_holomorphic(C2.d_dz("z") * z.conj(), C2)
    assert not rep and not rep.structural
    assert not is_holomorphic(C2.d_dzbar("z"), C2).passed


@given(seeds, st.integers(0, 2))
def test_random_holomorphic_fields_pass_and_conjugates_are_antiholomorphic(seed, k):
    T = random_holomorphic_multivector(C2, k, seed)
    assert is_holomorphic(T, C2)
    if not T.is_zero() and k:
        assert is_of_type(T.conj(), C2, (0, k))
        assert not is_holomorphic(T.conj(), C2)


@given(seeds)
def test_frame_free_and_cauchy_riemann_agree(seed):
    T = random_holomorphic_multivector(C2, 1, seed)
    bad = T + C2.d_dz("p") * random_holomorphic(C2, seed + 7).conj()
    for S in (T, bad):
        rep = is_holomorphic(S, C2)
        a, b = rep.children
        assert a.passed == b.passed


@given(seeds)
def test_real_part_of_2_0_bivector_is_pi_j(seed):
    Pi = random_holomorphic_multivector(C2, 2, seed, density=1.0)
    assert pi_phi(Pi.im(), C2.j) == Pi.re()


def test_hP_zero_and_canonical():
    zero = Multivector.zero(C2.chart, 2)
    assert check_hP_equivalences(zero, C2.j).passed
    Pi = wedge(C2.d_dz("z"), C2.d_dz("p"))
    rep = check_hP_equivalences(Pi.im(), C2)
    assert rep.agree and all(rep.verdicts.values())


def test_hP_plane_area_bivector_is_structural_failure():
    pi = wedge(*[coordinate_vector(R2, n) for n in "xy"])
    rep = check_hP_equivalences(pi, C1)
    assert rep.agree
    assert not any(rep.verdicts.values())


def test_hP_antiholomorphic_coefficient_fails_everywhere():
    z = C2.z("z")
    Pi = wedge(C2.d_dz("z"), C2.d_dz("p")) * z.conj()
    rep = check_hP_equivalences(Pi.im(), C2)
    assert rep.agree
    assert not any(rep.verdicts.values())
    for cond in rep.conditions.values():
        assert cond.all_failures()


@given(seeds)
def test_hP_agreement_on_random_structures(seed):
    Pi = random_holomorphic_multivector(C2, 2, seed, degree=2)
    if seed % 2:
        Pi = Pi + wedge(C2.d_dz("z"), C2.d_dz("p")) * C2.z("p").conj()
    rep = check_hP_equivalences(Pi.im(), C2)
    assert rep.agree
    assert rep.passed == (seed % 2 == 0)


def test_homogeneous_cotangent_example():
    Pi = wedge(C2.d_dz("z"), C2.d_dz("p"))
    H = C2.d_dz("p") * C2.z("p")
    eta = H.re() * 2
    assert holomorphic_vector_from_real(eta, C2) == H
    rep = check_homogeneous_equivalences(Pi.im(), C2, eta)
    assert rep.agree and rep.passed
    extra = [c for c in rep.conditions["homogeneous-holomorphic-poisson"].children
             if c.check == "bi-hamiltonian identities"]
    assert extra and extra[0].passed


def test_homogeneous_requires_nonzero_euler_field():
    Pi = wedge(C2.d_dz("z"), C2.d_dz("p"))
    rep = check_homogeneous_equivalences(Pi.im(), C2, Multivector.zero(C2.chart, 1))
    assert rep.agree
    assert not any(rep.verdicts.values())


def test_rejects_invalid_structure():
    with pytest.raises(ValidationError):
        check_hP_equivalences(Multivector.zero(R2, 2), standard_j(R2, [("x", "y")]) * 2)
