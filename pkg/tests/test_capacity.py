import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fuzzygame import (
    Capacity,
    CapacityClass,
    Density,
    FiniteSpace,
    NotMonotone,
    NotNormalized,
    NotPossibility,
    SizeError,
    classify,
    density_of,
    dual,
    from_density,
    greatest,
    is_necessity,
    is_possibility,
    make_capacity,
    max_subsets,
    point_mass,
)
from fuzzygame.capacity import random_capacity, random_density

from oracles import max_extension, pairwise_necessity, pairwise_possibility

AB = FiniteSpace(("a", "b"))
ABC = FiniteSpace(("a", "b", "c"))


def spaces(n):
    return FiniteSpace(tuple("abcdefgh"[:n]))


# -- make_capacity -----------------------------------------------------------


def test_singleton_space_has_one_capacity():
    nu = make_capacity(FiniteSpace(("a",)), {0: 0, 1: 1})
    assert nu(["a"]) == 1.0


def test_two_point_capacity_accepted():
    nu = make_capacity(AB, [0, 0.5, 0.3, 1])
    assert nu(["a"]) == 0.5 and nu(["b"]) == 0.3 and nu(["a", "b"]) == 1.0


def test_monotonicity_witness():
    with pytest.raises(NotMonotone) as exc:
        make_capacity(AB, [0, 0.9, 0, 0.5])
    assert exc.value.witness == (AB.mask(["a"]), AB.mask(["a", "b"]))


def test_normalization_enforced():
    with pytest.raises(NotNormalized):
        make_capacity(AB, [0, 0.5, 0.3, 0.9])
    with pytest.raises(NotNormalized):
        make_capacity(AB, [0.1, 0.5, 0.3, 1])


def test_mapping_may_omit_empty_set_but_nothing_else():
    nu = make_capacity(AB, {1: 0.5, 2: 0.3, 3: 1})
    assert nu(0) == 0.0
    with pytest.raises(ValueError):
        make_capacity(AB, {1: 0.5, 3: 1})


def test_wrong_length_rejected():
    with pytest.raises(ValueError):
        make_capacity(AB, [0, 1, 1])


def test_capacity_is_read_only():
    nu = make_capacity(AB, [0, 0.5, 0.3, 1])
    with pytest.raises(ValueError):
        nu.values[1] = 0.2


def test_size_cap_from_environment(monkeypatch):
    monkeypatch.setenv("FUZZYGAME_MAX_SUBSETS", "8")
    assert max_subsets() == 8
    with pytest.raises(SizeError):
        make_capacity(spaces(4), [0] * 15 + [1])


def test_space_rejects_duplicates():
    with pytest.raises(ValueError):
        FiniteSpace(("a", "a"))


# -- densities ---------------------------------------------------------------


def test_from_density_two_points():
    nu = from_density(Density(AB, [1, 0.3]))
    assert nu.as_dict() == {"": 0.0, "a": 1.0, "b": 0.3, "a,b": 1.0}


def test_all_ones_density_is_greatest():
    nu = from_density(Density(ABC, [1, 1, 1]))
    assert all(nu(m) == 1.0 for m in range(1, 8))
    assert nu == greatest(ABC)


def test_from_density_max_of_members():
    nu = from_density(Density(ABC, [0.2, 1, 0.5]))
    assert nu(["a", "c"]) == 0.5


def test_density_max_snapped():
    d = Density(AB, [1 - 1e-13, 0.4])
    assert d.values[0] == 1.0
    with pytest.raises(ValueError):
        Density(AB, [0.9, 0.4])
    with pytest.raises(ValueError):
        Density(AB, [1.0, -0.1])


def test_density_of_round_trip():
    d = Density(AB, [1, 0.3])
    assert density_of(from_density(d)) == d


def test_density_of_rejects_additive():
    with pytest.raises(NotPossibility):
        density_of(make_capacity(AB, [0, 0.5, 0.5, 1]))


def test_density_of_greatest():
    assert density_of(greatest(ABC)).values.tolist() == [1.0, 1.0, 1.0]


@pytest.mark.parametrize("n", range(1, 9))
def test_from_density_matches_loop_extension(n):
    rng = np.random.default_rng(n)
    for _ in range(5):
        d = random_density(rng, spaces(n))
        assert from_density(d).values.tolist() == max_extension(d.values.tolist())


# -- classes -----------------------------------------------------------------


def test_is_possibility_examples():
    assert is_possibility(from_density(Density(AB, [1, 0.3])))
    assert not is_possibility(make_capacity(AB, [0, 0.5, 0.5, 1]))
    assert is_possibility(make_capacity(FiniteSpace(("a",)), [0, 1]))


def test_is_necessity_examples():
    nu = from_density(Density(AB, [1, 0.3]))
    assert is_necessity(dual(nu))
    assert not is_necessity(nu)
    assert not is_necessity(greatest(ABC))


def test_classify():
    assert classify(from_density(Density(AB, [1, 0.3]))) is CapacityClass.POSSIBILITY
    assert classify(dual(from_density(Density(AB, [1, 0.3])))) is CapacityClass.NECESSITY
    assert classify(make_capacity(ABC, [0, 0.2, 0.2, 0.5, 0.2, 0.5, 0.5, 1])) is CapacityClass.GENERAL


@pytest.mark.parametrize("n", range(1, 5))
def test_class_tests_agree_with_pairwise_oracle(n):
    rng = np.random.default_rng(10 + n)
    space = spaces(n)
    caps = [random_capacity(rng, space, dyadic=bool(j % 2)) for j in range(30)]
    caps += [from_density(random_density(rng, space)) for _ in range(10)]
    caps += [dual(c) for c in caps[-10:]]
    for nu in caps:
        assert is_possibility(nu) == pairwise_possibility(nu.values, n)
        assert is_necessity(nu) == pairwise_necessity(nu.values, n)


# -- dual --------------------------------------------------------------------


def test_dual_values():
    k = dual(from_density(Density(AB, [1, 0.3])))
    assert k(["a"]) == pytest.approx(0.7, abs=1e-15)
    assert k(["b"]) == 0.0
    assert k(["a", "b"]) == 1.0


def test_dual_of_greatest_vanishes_on_proper_subsets():
    k = dual(greatest(ABC))
    assert all(k(m) == 0.0 for m in range(7))
    assert k(7) == 1.0


def test_point_mass_is_self_dual_in_values():
    nu = from_density(point_mass(ABC, "b"))
    assert dual(nu).values.tolist() == nu.values.tolist()


@given(st.integers(1, 4), st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_dual_is_involution(n, seed):
    nu = random_capacity(np.random.default_rng(seed), spaces(n))
    assert dual(dual(nu)) == nu
    assert np.array_equal(dual(dual(nu)).values, nu.values)


@given(st.integers(1, 4), st.integers(0, 2**32 - 1), st.booleans())
@settings(max_examples=60, deadline=None)
def test_possibility_iff_dual_is_necessity(n, seed, poss):
    rng = np.random.default_rng(seed)
    space = spaces(n)
    nu = from_density(random_density(rng, space)) if poss else random_capacity(rng, space)
    assert is_possibility(nu) == is_necessity(dual(nu))


@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_from_density_passes_validation(n, seed):
    space = spaces(n)
    d = random_density(np.random.default_rng(seed), space)
    nu = from_density(d)
    again = make_capacity(space, nu.values.tolist())
    assert isinstance(again, Capacity) and again == nu
    assert from_density(density_of(nu)) == nu
