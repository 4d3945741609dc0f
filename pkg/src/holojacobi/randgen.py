"""Seeded random polynomial structures for property suites."""
from __future__ import annotations

import random
from itertools import combinations, combinations_with_replacement

from .complexgeom import ComplexChart
from .expr import Chart, ScalarExpr
from .jacobi import MultiDerivation
from .tensor import Multivector


def _rng(seed_or_rng) -> random.Random:
    if isinstance(seed_or_rng, random.Random):
        return seed_or_rng
    return random.Random(seed_or_rng)


def random_polynomial(variables, rng, degree: int = 2, terms: int = 3, coeffs=(-2, -1, 1, 2)):
    """Sum of ``terms`` random monomials of degree <= ``degree`` in ``variables``."""
    rng = _rng(rng)
    one = variables[0] ** 0 if variables else None
    monos = [one]
    for k in range(1, degree + 1):
        for combo in combinations_with_replacement(range(len(variables)), k):
            m = one
            for idx in combo:
                m = m * variables[idx]
            monos.append(m)
    out = one * 0
    for m in rng.sample(monos, min(terms, len(monos))):
        out = out + m * rng.choice(coeffs)
    return out


def random_scalar(chart: Chart, rng, degree: int = 2, terms: int = 3) -> ScalarExpr:
    return random_polynomial(chart.vars(), rng, degree, terms)


def random_multivector(chart: Chart, k: int, rng, degree: int = 2, terms: int = 2,
                       density: float = 0.6) -> Multivector:
    rng = _rng(rng)
    comps = {}
    for key in combinations(range(chart.dim), k):
        if k == 0 or rng.random() < density:
            comps[key] = random_scalar(chart, rng, degree, terms)
    return Multivector(chart, k, comps)


def random_multiderivation(chart: Chart, k: int, rng, degree: int = 2, terms: int = 2) -> MultiDerivation:
    rng = _rng(rng)
    lam = random_multivector(chart, k, rng, degree, terms)
    E = random_multivector(chart, k - 1, rng, degree, terms)
    return MultiDerivation(lam, E)


def random_holomorphic(cx: ComplexChart, rng, degree: int = 2, terms: int = 2) -> ScalarExpr:
    """Realification of a random polynomial in the holomorphic coordinates."""
    zs = [cx.z(z) for z in cx.pairs]
    return random_polynomial(zs, rng, degree, terms)


def random_holomorphic_multivector(cx: ComplexChart, k: int, rng, degree: int = 2, terms: int = 2,
                                   density: float = 0.6) -> Multivector:
    """sum f_I d/dz^I with holomorphic polynomial coefficients."""
    rng = _rng(rng)
    names = list(cx.pairs)
    chart = cx.chart
    out = Multivector.zero(chart, k)
    for key in combinations(range(len(names)), k):
        if k and rng.random() >= density:
            continue
        T = Multivector(chart, 0, {(): random_holomorphic(cx, rng, degree, terms)})
        for idx in key:
            T = T.wedge(cx.d_dz(names[idx]))
        out = out + T
    return out
