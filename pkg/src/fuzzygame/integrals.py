"""Choquet, Sugeno and t-normed integrals on finite spaces.

On a finite space the level-set capacity ``t ↦ nu(f_t)`` is a step function
whose steps sit at the values of ``f``, so every integral here is evaluated
exactly over the distinct values of ``f``; no grid in ``t`` is involved.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

from .capacity import ARITH_TOL, Capacity, FiniteSpace, _check_space, make_capacity
from .errors import NegativeValue, RangeError, SpaceMismatch
from .tnorms import MIN, TNorm, apply, get_tnorm


@dataclass(frozen=True, eq=False)
class FiniteFunction:
    """A nonnegative real function on the points of a space."""

    space: FiniteSpace
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float).reshape(-1)
        if v.shape != (self.space.size,):
            raise ValueError(f"function needs {self.space.size} values, got {v.size}")
        if not np.all(np.isfinite(v)):
            raise ValueError("function values must be finite")
        if np.any(v < 0):
            i = int(np.flatnonzero(v < 0)[0])
            raise NegativeValue(f"value {float(v[i])!r} at {self.space.labels[i]!r} is negative")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @classmethod
    def constant(cls, space: FiniteSpace, c: float) -> "FiniteFunction":
        return cls(space, np.full(space.size, float(c)))

    @classmethod
    def indicator(cls, space: FiniteSpace, mask: int) -> "FiniteFunction":
        bits = (mask >> np.arange(space.size)) & 1
        return cls(space, bits.astype(float))

    def __eq__(self, other):
        if not isinstance(other, FiniteFunction):
            return NotImplemented
        return self.space == other.space and np.array_equal(self.values, other.values)

    def __or__(self, other: "FiniteFunction") -> "FiniteFunction":
        _check_space(self.space, other.space)
        return FiniteFunction(self.space, np.maximum(self.values, other.values))

    def __repr__(self):
        return f"FiniteFunction({dict(zip(self.space.labels, self.values.tolist()))})"


Functional = Callable[[FiniteFunction], float]


def _bits(n: int) -> np.ndarray:
    return np.left_shift(1, np.arange(n, dtype=np.int64))


def level_set(f: FiniteFunction, t: float) -> int:
    """Bitmask of ``{x : f(x) >= t}``."""
    if t < 0:
        raise ValueError("threshold must be nonnegative")
    return int(np.sum(_bits(f.space.size)[f.values >= t]))


def _levels(f: FiniteFunction):
    """Distinct values of ``f`` in increasing order and their level-set masks."""
    ws = np.unique(f.values)
    masks = ((f.values[None, :] >= ws[:, None]) * _bits(f.space.size)).sum(axis=1)
    return ws, masks


def _unit_values(f: FiniteFunction) -> FiniteFunction:
    if np.any(f.values > 1 + ARITH_TOL):
        i = int(np.argmax(f.values))
        raise RangeError(f"value {float(f.values[i])!r} at {f.space.labels[i]!r} exceeds 1")
    if np.any(f.values > 1):
        return FiniteFunction(f.space, np.minimum(f.values, 1.0))
    return f


def _coerce(f, nu: Capacity) -> FiniteFunction:
    if not isinstance(f, FiniteFunction):
        f = FiniteFunction(nu.space, f)
    if f.space != nu.space:
        raise SpaceMismatch(f"function lives on {f.space.labels}, capacity on {nu.space.labels}")
    return f


def choquet(f: Union[FiniteFunction, Sequence[float]], nu: Capacity) -> float:
    """Choquet integral: sum of ``(w_i - w_{i-1}) * nu(f_{w_i})`` over sorted values."""
    f = _coerce(f, nu)
    ws, masks = _levels(f)
    widths = np.diff(ws, prepend=0.0)
    total = float(np.sum(widths * nu.values[masks]))
    # the exact value lies in [min f, max f]; clip off accumulated rounding
    return min(max(total, float(ws[0])), float(ws[-1]))


def t_normed(f: Union[FiniteFunction, Sequence[float]], nu: Capacity, t: Union[TNorm, str]) -> float:
    """``max over t of nu(f_t) * t``, evaluated at the distinct values of ``f``."""
    f = _unit_values(_coerce(f, nu))
    ws, masks = _levels(f)
    return float(np.max(apply(get_tnorm(t), nu.values[masks], ws)))


def sugeno(f: Union[FiniteFunction, Sequence[float]], nu: Capacity) -> float:
    return t_normed(f, nu, MIN)


def are_comonotone(f: FiniteFunction, g: FiniteFunction) -> bool:
    """No two points are ordered one way by ``f`` and the other way by ``g``."""
    _check_space(f.space, g.space)
    df = np.sign(f.values[:, None] - f.values[None, :])
    dg = np.sign(g.values[:, None] - g.values[None, :])
    return bool(np.all(df * dg >= 0))


def integral_functional(nu: Capacity, kind: str = "sugeno", t: Union[TNorm, str, None] = None) -> Functional:
    """Freeze the capacity of an integral, giving a functional on functions."""
    if kind == "choquet":
        return lambda f: choquet(f, nu)
    if kind == "sugeno":
        return lambda f: sugeno(f, nu)
    if kind == "tnormed":
        tn = get_tnorm(t if t is not None else MIN)
        return lambda f: t_normed(f, nu, tn)
    raise ValueError(f"unknown integral kind {kind!r}")


# -- representation axioms ---------------------------------------------------

PROPERTIES = {
    1: "normalization",
    2: "monotonicity",
    3: "comonotone maxitivity",
    4: "homogeneity",
}


@dataclass
class AxiomViolation:
    property: int
    witness: dict
    detail: str = ""

    def __str__(self):
        return f"property {self.property} ({PROPERTIES[self.property]}): {self.detail}"


@dataclass
class AxiomCheckReport:
    samples: int
    tnorm: str
    violations: list = field(default_factory=list)
    checked: dict = field(default_factory=lambda: {p: 0 for p in PROPERTIES})

    @property
    def ok(self) -> bool:
        return not self.violations

    def by_property(self, prop: int) -> list:
        return [v for v in self.violations if v.property == prop]


def _random_unit(rng: np.random.Generator, n: int) -> np.ndarray:
    # half the draws sit on a dyadic grid so that ties and exact arithmetic get coverage
    if rng.random() < 0.5:
        return rng.integers(0, 17, size=n) / 16.0
    return rng.random(n)


def _random_monotone_map(rng: np.random.Generator):
    k = int(rng.integers(1, 5))
    xs = np.concatenate(([0.0], np.sort(rng.random(k)), [1.0]))
    ys = np.sort(rng.random(k + 2))
    if rng.random() < 0.3:
        ys = np.round(ys * 8) / 8
    return lambda h: np.interp(h, xs, ys)


def comonotone_pair(rng: np.random.Generator, space: FiniteSpace):
    """Two comonotone functions ``(a∘h, b∘h)`` built from one random ``h``.

    ``a`` and ``b`` are random weakly increasing piecewise-linear maps of the
    unit interval, so the pair is comonotone by construction.
    """
    h = _random_unit(rng, space.size)
    a, b = _random_monotone_map(rng), _random_monotone_map(rng)
    return FiniteFunction(space, a(h)), FiniteFunction(space, b(h))


def check_axioms(
    mu: Functional,
    space: FiniteSpace,
    t: Union[TNorm, str],
    samples: int,
    seed: int,
    tol: float = ARITH_TOL,
) -> AxiomCheckReport:
    """Test the four representation properties of ``mu`` on random functions.

    1. ``mu(1_X) = 1``
    2. ``phi <= psi`` implies ``mu(phi) <= mu(psi)``
    3. ``mu(phi ∨ psi) = mu(phi) ∨ mu(psi)`` for comonotone ``phi, psi``
    4. ``mu(c * phi) = c * mu(phi)`` for ``c`` in [0, 1]

    Violations are collected with their witnesses rather than raised.
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    tn = get_tnorm(t)
    rng = np.random.default_rng(seed)
    report = AxiomCheckReport(samples, tn.name)

    one = FiniteFunction.constant(space, 1.0)
    top = mu(one)
    report.checked[1] += 1
    if abs(top - 1.0) > tol:
        report.violations.append(AxiomViolation(1, {"phi": one.values.tolist()}, f"mu(1_X) = {top!r}"))

    for _ in range(samples):
        phi = _random_unit(rng, space.size)
        psi = np.minimum(phi + _random_unit(rng, space.size) * rng.random(), 1.0)
        lo, hi = mu(FiniteFunction(space, phi)), mu(FiniteFunction(space, psi))
        report.checked[2] += 1
        if lo > hi + tol:
            report.violations.append(
                AxiomViolation(2, {"phi": phi.tolist(), "psi": psi.tolist()}, f"{lo!r} > {hi!r}")
            )

        f, g = comonotone_pair(rng, space)
        if are_comonotone(f, g):
            report.checked[3] += 1
            joined = mu(f | g)
            separate = max(mu(f), mu(g))
            if abs(joined - separate) > tol:
                report.violations.append(
                    AxiomViolation(
                        3,
                        {"phi": f.values.tolist(), "psi": g.values.tolist()},
                        f"mu(phi ∨ psi) = {joined!r} but mu(phi) ∨ mu(psi) = {separate!r}",
                    )
                )

        c = float(rng.integers(0, 17) / 16.0) if rng.random() < 0.5 else float(rng.random())
        phi = _random_unit(rng, space.size)
        scaled = FiniteFunction(space, apply(tn, np.full(space.size, c), phi))
        left = mu(scaled)
        base = mu(FiniteFunction(space, phi))
        report.checked[4] += 1
        if not -tol <= base <= 1 + tol:
            report.violations.append(
                AxiomViolation(4, {"c": c, "phi": phi.tolist()}, f"mu(phi) = {base!r} is outside [0, 1]")
            )
            continue
        right = apply(tn, c, base)
        if abs(left - right) > tol:
            report.violations.append(
                AxiomViolation(4, {"c": c, "phi": phi.tolist()}, f"mu(c*phi) = {left!r} but c*mu(phi) = {right!r}")
            )
    return report


def recover_capacity(mu: Functional, space: FiniteSpace) -> Capacity:
    """Read a capacity off a functional through indicator functions.

    On a finite space the indicator of ``A`` is the smallest function equal to
    1 on ``A``, so for monotone ``mu`` it attains the infimum over all such
    functions. Raises if the resulting table is not a capacity.
    """
    table = np.zeros(space.n_subsets)
    for m in range(1, space.n_subsets):
        table[m] = mu(FiniteFunction.indicator(space, m))
    return make_capacity(space, table, tol=ARITH_TOL)
