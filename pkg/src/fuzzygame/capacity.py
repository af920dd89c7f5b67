"""Capacities on finite spaces.

A capacity is stored as a dense float array indexed by subset bitmask: bit
``i`` of the index is set iff point ``i`` belongs to the subset. The array
has ``2**n`` entries, so the number of points is capped (see
:func:`max_subsets`).
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .errors import NotMonotone, NotNormalized, NotPossibility, SizeError, SpaceMismatch

DEFAULT_MAX_SUBSETS = 2**24
MAX_POINTS = 24

#: tolerance for values that come out of floating-point arithmetic
ARITH_TOL = 1e-12

Subset = Union[int, Iterable[str]]


def max_subsets() -> int:
    """Enumeration cap, read from ``FUZZYGAME_MAX_SUBSETS`` on every call."""
    raw = os.environ.get("FUZZYGAME_MAX_SUBSETS")
    if raw is None or raw.strip() == "":
        return DEFAULT_MAX_SUBSETS
    cap = int(raw)
    if cap < 2:
        raise ValueError(f"FUZZYGAME_MAX_SUBSETS must be >= 2, got {cap}")
    return cap


@dataclass(frozen=True)
class FiniteSpace:
    """A finite set of labelled points."""

    labels: tuple[str, ...]

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if not labels:
            raise ValueError("a space needs at least one point")
        if any(not isinstance(lab, str) or lab == "" for lab in labels):
            raise ValueError("labels must be nonempty strings")
        if len(set(labels)) != len(labels):
            raise ValueError(f"labels must be distinct: {labels}")
        if len(labels) > MAX_POINTS or 2 ** len(labels) > max_subsets():
            raise SizeError(
                f"{len(labels)} points give 2^{len(labels)} subsets, "
                f"above the cap of {max_subsets()}"
            )

    @classmethod
    def of(cls, labels: Union[str, Sequence[str]]) -> "FiniteSpace":
        """Build from a label sequence; a plain string is split into characters."""
        return cls(tuple(labels))

    @property
    def size(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def full(self) -> int:
        """Bitmask of the whole space."""
        return (1 << self.size) - 1

    @property
    def n_subsets(self) -> int:
        return 1 << self.size

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown point {label!r}") from None

    def mask(self, subset: Subset) -> int:
        """Bitmask of a subset given as a mask or as an iterable of labels."""
        if isinstance(subset, (int, np.integer)):
            m = int(subset)
            if not 0 <= m <= self.full:
                raise KeyError(f"subset index {m} out of range for {self.size} points")
            return m
        m = 0
        for lab in subset:
            m |= 1 << self.index(lab)
        return m

    def members(self, mask: int) -> tuple[str, ...]:
        return tuple(lab for i, lab in enumerate(self.labels) if mask >> i & 1)

    def subset_name(self, mask: int) -> str:
        """Comma-joined labels, ``""`` for the empty set."""
        return ",".join(self.members(mask))


def _check_space(a: FiniteSpace, b: FiniteSpace) -> None:
    if a != b:
        raise SpaceMismatch(f"spaces differ: {a.labels} vs {b.labels}")


class CapacityClass(enum.Enum):
    GENERAL = "general"
    POSSIBILITY = "possibility"
    NECESSITY = "necessity"


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class Density:
    """Point values of a possibility capacity; the largest entry is exactly 1.

    Entries within ``ARITH_TOL`` of the unit interval are clipped into it and
    entries within ``ARITH_TOL`` of 1 are snapped to 1.
    """

    space: FiniteSpace
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float).reshape(-1)
        if v.shape != (self.space.size,):
            raise ValueError(f"density needs {self.space.size} entries, got {v.size}")
        if not np.all(np.isfinite(v)):
            raise ValueError("density entries must be finite")
        if v.min() < -ARITH_TOL or v.max() > 1 + ARITH_TOL:
            raise ValueError(f"density entries must lie in [0, 1]: {v.tolist()}")
        if abs(v.max() - 1.0) > ARITH_TOL:
            raise ValueError(f"density maximum must be 1, got {float(v.max())!r}")
        v = np.clip(v, 0.0, 1.0)
        v[np.abs(v - 1.0) <= ARITH_TOL] = 1.0
        object.__setattr__(self, "values", _readonly(v))

    def __eq__(self, other):
        if not isinstance(other, Density):
            return NotImplemented
        return self.space == other.space and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.space, self.values.tobytes()))

    def __getitem__(self, label: Union[str, int]) -> float:
        i = label if isinstance(label, (int, np.integer)) else self.space.index(label)
        return float(self.values[i])

    def as_dict(self) -> dict[str, float]:
        return {lab: float(x) for lab, x in zip(self.space.labels, self.values)}

    def __repr__(self):
        return f"Density({self.as_dict()})"


@dataclass(frozen=True, eq=False)
class Capacity:
    """A normalized monotone set function, validated on construction."""

    space: FiniteSpace
    values: np.ndarray
    tol: float = 0.0
    _dual: "Capacity | None" = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=float).reshape(-1)
        if v.shape != (self.space.n_subsets,):
            raise ValueError(
                f"capacity on {self.space.size} points needs {self.space.n_subsets} values, got {v.size}"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("capacity values must be finite")
        witness = _monotonicity_witness(v, self.space.size, self.tol)
        if witness is not None:
            a, b = witness
            raise NotMonotone(
                f"value {float(v[a])!r} on {{{self.space.subset_name(a)}}} exceeds "
                f"{float(v[b])!r} on its superset {{{self.space.subset_name(b)}}}",
                witness,
            )
        if abs(v[0]) > self.tol or abs(v[-1] - 1.0) > self.tol:
            raise NotNormalized(
                f"capacity must have value 0 on the empty set and 1 on the space, "
                f"got {float(v[0])!r} and {float(v[-1])!r}"
            )
        v[0], v[-1] = 0.0, 1.0
        object.__setattr__(self, "values", _readonly(np.clip(v, 0.0, 1.0)))

    def __call__(self, subset: Subset) -> float:
        return float(self.values[self.space.mask(subset)])

    def __eq__(self, other):
        if not isinstance(other, Capacity):
            return NotImplemented
        return self.space == other.space and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.space, self.values.tobytes()))

    def as_dict(self) -> dict[str, float]:
        return {self.space.subset_name(m): float(x) for m, x in enumerate(self.values)}

    def allclose(self, other: "Capacity", atol: float = ARITH_TOL) -> bool:
        return self.space == other.space and bool(
            np.max(np.abs(self.values - other.values)) <= atol
        )


def _monotonicity_witness(v: np.ndarray, n: int, tol: float):
    # one-point extensions suffice: any chain A ⊆ B passes through them
    masks = np.arange(v.size)
    best = None
    for i in range(n):
        bit = 1 << i
        lo = masks[(masks & bit) == 0]
        bad = lo[v[lo] > v[lo | bit] + tol]
        if bad.size:
            cand = (int(bad[0]), int(bad[0]) | bit)
            if best is None or cand < best:
                best = cand
    return best


def make_capacity(
    space: FiniteSpace,
    values: Union[Sequence[float], np.ndarray, Mapping],
    tol: float = 0.0,
) -> Capacity:
    """Validate a table of subset values and wrap it as a :class:`Capacity`.

    ``values`` is either a sequence indexed by bitmask or a mapping whose
    keys are bitmasks or iterables of labels. Every subset needs a value,
    except that a mapping may omit the empty set.

    Raises :class:`NotNormalized` or :class:`NotMonotone` (with a witness
    pair of masks ``(A, B)``, ``A ⊆ B``).
    """
    if isinstance(values, Mapping):
        table = np.full(space.n_subsets, np.nan)
        table[0] = 0.0
        for key, val in values.items():
            table[space.mask(key)] = float(val)
        missing = np.flatnonzero(np.isnan(table))
        if missing.size:
            raise ValueError(f"no value for subset {{{space.subset_name(int(missing[0]))}}}")
        values = table
    return Capacity(space, values, tol=tol)


def _max_extension(point_values: np.ndarray) -> np.ndarray:
    out = np.zeros(1 << point_values.size)
    for i, x in enumerate(point_values):
        half = 1 << i
        out[half : 2 * half] = np.maximum(out[:half], x)
    return out


def from_density(d: Density) -> Capacity:
    """The possibility capacity ``F ↦ max of d over F``."""
    return Capacity(d.space, _max_extension(d.values))


def is_possibility(nu: Capacity, tol: float = 0.0) -> bool:
    """Whether ``nu(A ∪ B) = max(nu(A), nu(B))`` for all subsets.

    Pairwise maxitivity holds iff every value is the max of the singleton
    values inside it, which is what is compared here.
    """
    singles = nu.values[1 << np.arange(nu.space.size)]
    return bool(np.all(np.abs(_max_extension(singles) - nu.values) <= tol))


def is_necessity(nu: Capacity, tol: float = 0.0) -> bool:
    """Whether ``nu(A ∩ B) = min(nu(A), nu(B))`` for all subsets."""
    n = nu.space.size
    full = nu.space.full
    # value on X \ {x}, for each x
    co = nu.values[full ^ (1 << np.arange(n))]
    h = np.ones(1 << n)
    for i, x in enumerate(co):
        half = 1 << i
        h[half : 2 * half] = np.minimum(h[:half], x)
    # nu(A) must equal min over x outside A of nu(X \ {x})
    expected = h[::-1]
    return bool(np.all(np.abs(expected - nu.values) <= tol))


def classify(nu: Capacity) -> CapacityClass:
    """Possibility takes precedence when both hold (one-point spaces)."""
    if is_possibility(nu):
        return CapacityClass.POSSIBILITY
    if is_necessity(nu):
        return CapacityClass.NECESSITY
    return CapacityClass.GENERAL


def density_of(nu: Capacity) -> Density:
    if not is_possibility(nu):
        raise NotPossibility("capacity is not maxitive, so it has no density")
    return Density(nu.space, nu.values[1 << np.arange(nu.space.size)])


def dual(nu: Capacity) -> Capacity:
    """The conjugate capacity ``F ↦ 1 - nu(X \\ F)``.

    The result remembers its source, so ``dual(dual(nu))`` is ``nu`` itself
    rather than a rounded copy.
    """
    if nu._dual is not None:
        return nu._dual
    return Capacity(nu.space, 1.0 - nu.values[::-1], tol=nu.tol, _dual=nu)


def greatest(space: FiniteSpace) -> Capacity:
    """The possibility capacity equal to 1 on every nonempty subset."""
    return from_density(Density(space, np.ones(space.size)))


def point_mass(space: FiniteSpace, label: str) -> Density:
    d = np.zeros(space.size)
    d[space.index(label)] = 1.0
    return Density(space, d)


def random_capacity(rng: np.random.Generator, space: FiniteSpace, dyadic: bool = False) -> Capacity:
    """A random capacity: random subset values made monotone by running maxima."""
    n = space.size
    v = rng.integers(0, 17, size=1 << n) / 16.0 if dyadic else rng.random(1 << n)
    v[0] = 0.0
    for i in range(n):
        half = 1 << i
        idx = np.arange(1 << n)
        hi = idx[(idx & half) != 0]
        v[hi] = np.maximum(v[hi], v[hi ^ half])
    v[-1] = 1.0
    return Capacity(space, v)


def random_density(rng: np.random.Generator, space: FiniteSpace, dyadic: bool = False) -> Density:
    v = rng.integers(0, 17, size=space.size) / 16.0 if dyadic else rng.random(space.size)
    v[rng.integers(space.size)] = 1.0
    return Density(space, v)
