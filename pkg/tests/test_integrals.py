import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fuzzygame import (
    LUKASIEWICZ,
    MIN,
    PRODUCT,
    Density,
    FiniteFunction,
    FiniteSpace,
    NegativeValue,
    RangeError,
    are_comonotone,
    check_axioms,
    choquet,
    from_density,
    greatest,
    integral_functional,
    level_set,
    make_capacity,
    recover_capacity,
    sugeno,
    t_normed,
)
from fuzzygame.capacity import random_capacity, random_density
from fuzzygame.integrals import comonotone_pair

from oracles import RULES, choquet_grid, sugeno_grid, tnormed_grid

AB = FiniteSpace(("a", "b"))
NU = make_capacity(AB, [0, 0.5, 0.3, 1])
F = FiniteFunction(AB, [0.4, 0.9])


def spaces(n):
    return FiniteSpace(tuple("abcdef"[:n]))


def test_level_set_examples():
    assert level_set(F, 0.5) == AB.mask(["b"])
    assert level_set(F, 0.0) == AB.full
    assert level_set(F, 0.4) == AB.full


def test_function_validation():
    with pytest.raises(NegativeValue):
        FiniteFunction(AB, [-0.1, 0.2])
    with pytest.raises(ValueError):
        FiniteFunction(AB, [0.1])


def test_choquet_example():
    assert choquet(F, NU) == pytest.approx(0.55, abs=1e-15)
    assert choquet_grid(F.values, NU.values, 1e-5) == pytest.approx(0.55, abs=1e-4)


def test_sugeno_example():
    assert sugeno(F, NU) == 0.4
    assert sugeno_grid(F.values, NU.values) == pytest.approx(0.4, abs=1e-4)


def test_tnormed_examples():
    assert t_normed(F, NU, PRODUCT) == 0.4
    assert t_normed(F, NU, LUKASIEWICZ) == 0.4
    assert t_normed(F, NU, MIN) == sugeno(F, NU)


@pytest.mark.parametrize("c", [0.0, 0.25, 0.7, 1.0])
def test_constant_function(c):
    f = FiniteFunction.constant(AB, c)
    assert choquet(f, NU) == c
    assert sugeno(f, NU) == c
    assert t_normed(f, NU, PRODUCT) == c


def test_choquet_accepts_large_values():
    f = FiniteFunction(AB, [2.0, 3.0])
    assert choquet(f, NU) == pytest.approx(2.0 + 0.3)
    with pytest.raises(RangeError):
        sugeno(f, NU)


def test_point_mass_sugeno_reads_off_value():
    space = spaces(3)
    nu = from_density(Density(space, [1, 0, 0]))
    assert sugeno(FiniteFunction(space, [0.37, 0.9, 0.1]), nu) == 0.37


def test_comonotone_examples():
    f = FiniteFunction(AB, [0.1, 0.5])
    assert are_comonotone(f, FiniteFunction(AB, [0.2, 0.9]))
    assert not are_comonotone(f, FiniteFunction(AB, [0.9, 0.2]))
    assert are_comonotone(FiniteFunction.constant(AB, 0.3), FiniteFunction(AB, [0.9, 0.2]))


@pytest.mark.parametrize("seed", range(20))
def test_comonotone_level_sets_nested(seed):
    rng = np.random.default_rng(seed)
    space = spaces(5)
    f, g = comonotone_pair(rng, space)
    assert are_comonotone(f, g)
    for t in np.union1d(f.values, g.values):
        a, b = level_set(f, t), level_set(g, t)
        assert a & b in (a, b)


@pytest.mark.parametrize("seed", range(40))
def test_oracle_agreement(seed):
    rng = np.random.default_rng(1000 + seed)
    space = spaces(int(rng.integers(1, 7)))
    nu = random_capacity(rng, space, dyadic=bool(seed % 2))
    f = FiniteFunction(space, rng.random(space.size))
    assert choquet(f, nu) == pytest.approx(choquet_grid(f.values, nu.values), abs=1e-3)
    assert sugeno(f, nu) == pytest.approx(sugeno_grid(f.values, nu.values), abs=1e-3)
    for name, rule in RULES.items():
        assert t_normed(f, nu, name) == pytest.approx(tnormed_grid(f.values, nu.values, rule), abs=1e-3)


@given(st.integers(1, 6), st.integers(0, 2**32 - 1), st.sampled_from(["min", "product", "lukasiewicz"]))
@settings(max_examples=100, deadline=None)
def test_bounds(n, seed, t):
    rng = np.random.default_rng(seed)
    space = spaces(n)
    nu = random_capacity(rng, space)
    f = FiniteFunction(space, rng.random(n))
    lo, hi = float(f.values.min()), float(f.values.max())
    assert lo <= t_normed(f, nu, t) <= hi
    assert lo <= choquet(f, nu) <= hi


@given(st.integers(1, 5), st.integers(0, 2**32 - 1), st.sampled_from(["min", "product", "lukasiewicz"]))
@settings(max_examples=100, deadline=None)
def test_comonotone_maxitivity_on_dyadic_data(n, seed, t):
    rng = np.random.default_rng(seed)
    space = spaces(n)
    nu = random_capacity(rng, space, dyadic=True)
    h = rng.integers(0, 17, n)
    f = FiniteFunction(space, np.minimum(h, 12) / 16)
    g = FiniteFunction(space, np.maximum(h, 4) / 16)
    assert are_comonotone(f, g)
    assert t_normed(f | g, nu, t) == max(t_normed(f, nu, t), t_normed(g, nu, t))


@given(st.integers(1, 5), st.integers(0, 2**32 - 1), st.integers(0, 8), st.sampled_from(["min", "product"]))
@settings(max_examples=100, deadline=None)
def test_homogeneity_on_dyadic_data(n, seed, c8, t):
    rng = np.random.default_rng(seed)
    space = spaces(n)
    nu = random_capacity(rng, space, dyadic=True)
    c = c8 / 8
    phi = rng.integers(0, 9, n) / 8
    scaled = FiniteFunction(space, RULES[t](np.full(n, c), phi))
    assert t_normed(scaled, nu, t) == float(RULES[t](c, t_normed(FiniteFunction(space, phi), nu, t)))


@pytest.mark.parametrize("t", ["min", "product", "lukasiewicz"])
def test_check_axioms_clean_on_tnormed(t):
    rng = np.random.default_rng(7)
    for n in (1, 2, 3, 4):
        nu = random_capacity(rng, spaces(n))
        report = check_axioms(integral_functional(nu, "tnormed", t), spaces(n), t, samples=50, seed=n)
        assert report.ok, [str(v) for v in report.violations[:3]]
        assert all(report.checked[p] > 0 for p in (1, 2, 4))


def test_check_axioms_flags_constant_functional():
    report = check_axioms(lambda f: 0.5, AB, "min", samples=5, seed=0)
    assert not report.ok
    assert report.by_property(1)


def test_check_axioms_reports_choquet_maxitivity_witness():
    space = spaces(3)
    nu = make_capacity(space, [0, 0.2, 0.3, 0.5, 0.4, 0.6, 0.7, 1])
    report = check_axioms(integral_functional(nu, "choquet"), space, "min", samples=400, seed=3)
    witnesses = report.by_property(3)
    assert witnesses
    w = witnesses[0].witness
    f, g = FiniteFunction(space, w["phi"]), FiniteFunction(space, w["psi"])
    assert are_comonotone(f, g)
    assert choquet(f | g, nu) != pytest.approx(max(choquet(f, nu), choquet(g, nu)), abs=1e-12)


def test_recover_capacity_examples():
    nu0 = from_density(Density(AB, [1, 0.3]))
    assert recover_capacity(integral_functional(nu0, "sugeno"), AB) == nu0
    rng = np.random.default_rng(11)
    for n in (1, 2, 3, 4):
        nu = random_capacity(rng, spaces(n))
        assert recover_capacity(integral_functional(nu, "tnormed", PRODUCT), spaces(n)) == nu
    space = spaces(3)
    assert recover_capacity(lambda f: float(f.values.max()), space) == greatest(space)


def test_integral_functional_kinds():
    nu = from_density(random_density(np.random.default_rng(0), AB))
    assert integral_functional(nu, "choquet")(F) == choquet(F, nu)
    with pytest.raises(ValueError):
        integral_functional(nu, "lebesgue")
