"""Seed-fixed input corpora for the theorem-level equivalence checks.

Each entry is ``(label, args, expected)`` where ``expected`` is the verdict
all three characterizations should share.
"""
import random

from holojacobi.complexgeom import ComplexChart
from holojacobi.correspondences import HEISENBERG_CONSTANTS, SL2_CONSTANTS, darboux_example, lie_poisson
from holojacobi.jacobi import MultiDerivation
from holojacobi.randgen import random_holomorphic, random_holomorphic_multivector
from holojacobi.tensor import Multivector, coordinate_vector, wedge

C1 = ComplexChart.from_names("z")
C2 = ComplexChart.from_names("z", "p")
C3 = ComplexChart.from_names("z", "p", "w")


def _dd(cx, a, b):
    return wedge(cx.d_dz(a), cx.d_dz(b))


def _real_11(cx, a, b):
    """A real bivector of type (1,1): Re(d/dz_a ^ d/dzbar_b)."""
    return wedge(cx.d_dz(a), cx.d_dzbar(b)).re()


def _euler(cx):
    H = Multivector.zero(cx.chart, 1)
    for n in list(cx.pairs):
        H = H + cx.d_dz(n) * cx.z(n)
    return H


def hP_corpus(seed=0):
    rng = random.Random(seed)
    out = []
    for k in range(6):
        Pi = random_holomorphic_multivector(C2, 2, rng, degree=2, density=1.0)
        out.append((f"holomorphic C2 #{k}", (Pi.im(), C2), True))
    out.append(("zero C2", (Multivector.zero(C2.chart, 2), C2), True))
    out.append(("canonical C3", (_dd(C3, "z", "p").im(), C3), True))
    z, p, w = (C3.z(n) for n in ("z", "p", "w"))
    lp = lie_poisson(SL2_CONSTANTS)
    out.append(("sl2 Lie-Poisson", (lp.pi, lp.cx), True))
    # Jacobi-broken: holomorphic (2,0) but [Pi, Pi] != 0
    out.append(("non-Poisson C3", ((_dd(C3, "z", "p") * z + _dd(C3, "p", "w") * p).im(), C3), False))
    out.append(("non-Poisson C3 linear", ((_dd(C3, "z", "p") * w + _dd(C3, "z", "w") * z).im(), C3), False))
    for k in range(4):
        Pi = random_holomorphic_multivector(C2, 2, rng, degree=2, density=1.0)
        bar = C2.z(rng.choice(["z", "p"])).conj()
        out.append((f"CR-broken C2 #{k}", ((Pi + _dd(C2, "z", "p") * bar).im(), C2), False))
    for k in range(4):
        Pi = random_holomorphic_multivector(C2, 2, rng, degree=1, density=1.0)
        out.append((f"type-broken C2 #{k}", (Pi.im() + _real_11(C2, "z", "p") * (k + 1), C2), False))
    x, y = C1.chart.vars()
    out.append(("area bivector C1", (wedge(*(coordinate_vector(C1.chart, n) for n in C1.chart.coords)) * (x * x + 1), C1), False))
    out.append(("type-broken C3", (_dd(C3, "z", "w").im() + _real_11(C3, "p", "w"), C3), False))
    return out


def homogeneous_corpus(seed=0):
    rng = random.Random(seed)
    out = []
    H2 = _euler(C2)
    eta2 = H2.re() * 2
    for k in range(5):
        Pi = _dd(C2, "z", "p") * _homogeneous_linear(C2, rng)
        out.append((f"linear C2 #{k}", (Pi.im(), C2, eta2), True))
    for consts, name in ((SL2_CONSTANTS, "sl2"), (HEISENBERG_CONSTANTS, "heisenberg")):
        lp = lie_poisson(consts)
        out.append((name, (lp.pi, lp.cx, lp.eta), True))
    out.append(("canonical, H = p d/dp", (_dd(C2, "z", "p").im(), C2, (C2.d_dz("p") * C2.z("p")).re() * 2), True))
    out.append(("zero Euler field", (_dd(C2, "z", "p").im(), C2, Multivector.zero(C2.chart, 1)), False))
    for k in range(4):
        Pi = _dd(C2, "z", "p") * (_quadratic(C2, rng))
        out.append((f"quadratic C2 #{k}", (Pi.im(), C2, eta2), False))
    for k in range(3):
        Pi = _dd(C2, "z", "p") * _homogeneous_linear(C2, rng)
        bar = C2.z(rng.choice(["z", "p"])).conj()
        out.append((f"CR-broken C2 #{k}", ((Pi + _dd(C2, "z", "p") * bar).im(), C2, eta2), False))
    for k in range(3):
        Pi = _dd(C2, "z", "p") * _homogeneous_linear(C2, rng)
        broken = Pi.im() + _real_11(C2, "z", "p") * C2.chart.vars()[k]
        out.append((f"type-broken C2 #{k}", (broken, C2, eta2), False))
    z, p, w = (C3.z(n) for n in ("z", "p", "w"))
    bad = _dd(C3, "z", "p") * z + _dd(C3, "p", "w") * p
    out.append(("non-Poisson linear C3", (bad.im(), C3, _euler(C3).re() * 2), False))
    return out


def _homogeneous_linear(cx, rng):
    out = cx.chart.zero
    while out.is_zero():
        for n in list(cx.pairs):
            out = out + cx.z(n) * rng.choice([-2, -1, 0, 1, 2])
    return out


def _quadratic(cx, rng):
    a, b = rng.sample(list(cx.pairs), 2) if len(list(cx.pairs)) > 1 else (list(cx.pairs)[0],) * 2
    return cx.z(a) * cx.z(b) * rng.choice([-1, 1, 2])


def hJ_corpus(seed=0):
    rng = random.Random(seed)
    out = []
    ex0, ex1 = darboux_example(0), darboux_example(1)
    out.append(("Darboux n=0", (ex0.J, ex0.cx), True))
    out.append(("Darboux n=1", (ex1.J, ex1.cx), True))
    out.append(("zero C1", (MultiDerivation.zero(C1.chart, 2), C1), True))
    for k in range(4):
        f = random_holomorphic(C1, rng, degree=2, terms=2)
        J = MultiDerivation(Multivector.zero(C1.chart, 2), C1.d_dz("z") * f)
        out.append((f"holomorphic line field #{k}", (J, C1), True))
    for k in range(3):
        c = rng.choice([1, -1, 2])
        J = MultiDerivation(_dd(C2, "z", "p") * c, Multivector.zero(C2.chart, 1))
        out.append((f"holomorphic Poisson C2 #{k}", (J, C2), True))
    z, p = C2.z("z"), C2.z("p")
    out.append(("[E, Lambda] != 0", (MultiDerivation(_dd(C2, "z", "p"), C2.d_dz("z") * z), C2), False))
    out.append(("[E, Lambda] != 0 (p)", (MultiDerivation(_dd(C2, "z", "p"), C2.d_dz("p") * p * 2), C2), False))
    w3 = C3.z("p")
    bad = MultiDerivation(_dd(C3, "z", "p") * C3.z("z") + _dd(C3, "p", "w") * w3, Multivector.zero(C3.chart, 1))
    out.append(("non-Poisson Lambda C3", (bad, C3), False))
    for k in range(4):
        f = random_holomorphic(C1, rng, degree=2, terms=2)
        J = MultiDerivation(Multivector.zero(C1.chart, 2), C1.d_dz("z") * (f + C1.z("z").conj() * (k + 1)))
        out.append((f"CR-broken line field #{k}", (J, C1), False))
    out.append(("CR-broken Darboux n=1",
                (MultiDerivation(ex1.J.Lambda, ex1.J.E + ex1.cx.d_dz("t") * ex1.cx.z("z").conj()), ex1.cx), False))
    for k in range(3):
        J = MultiDerivation(wedge(C2.d_dz("z"), C2.d_dzbar("p")) * (k + 1), Multivector.zero(C2.chart, 1))
        out.append((f"type-broken Lambda #{k}", (J, C2), False))
    out.append(("type-broken E", (MultiDerivation(Multivector.zero(C1.chart, 2), C1.d_dzbar("z")), C1), False))
    return out
