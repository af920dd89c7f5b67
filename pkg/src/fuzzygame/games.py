"""Games in pure strategies and their extension to possibility capacities.

A mixed strategy is a possibility capacity, carried around as its density.
Expected payoffs build the joint density with one t-norm and integrate the
pure payoff against its capacity, either with a t-normed integral (second
t-norm) or with the Choquet integral.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .capacity import ARITH_TOL, Density, _check_space, from_density, random_density
from .errors import ConstraintError, RangeError, SpaceMismatch
from .integrals import FiniteFunction, choquet, t_normed
from .tensor import tensor_nfold
from .tnorms import MIN, TNorm, get_tnorm


@dataclass(frozen=True, eq=False)
class Game:
    """Payoff tensors indexed by pure strategy profiles, first player slowest."""

    strategy_spaces: tuple
    payoffs: tuple

    def __post_init__(self):
        spaces = tuple(self.strategy_spaces)
        if not spaces:
            raise ValueError("a game needs at least one player")
        shape = tuple(s.size for s in spaces)
        if len(self.payoffs) != len(spaces):
            raise ValueError(f"expected {len(spaces)} payoff tensors, got {len(self.payoffs)}")
        tables = []
        for i, u in enumerate(self.payoffs):
            arr = np.array(u, dtype=float)
            if arr.size == int(np.prod(shape)):
                arr = arr.reshape(shape)
            if arr.shape != shape:
                raise ValueError(f"payoff of player {i} has shape {arr.shape}, expected {shape}")
            if not np.all(np.isfinite(arr)) or np.any(arr < 0):
                raise ConstraintError(f"payoffs of player {i} must be finite and nonnegative")
            arr.flags.writeable = False
            tables.append(arr)
        object.__setattr__(self, "strategy_spaces", spaces)
        object.__setattr__(self, "payoffs", tuple(tables))

    @property
    def players(self) -> int:
        return len(self.strategy_spaces)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(s.size for s in self.strategy_spaces)

    def pure_payoff(self, i: int, profile: Sequence[str]) -> float:
        idx = tuple(s.index(lab) for s, lab in zip(self.strategy_spaces, profile))
        return float(self.payoffs[i][idx])

    def scaled(self) -> "Game":
        """Divide every payoff by the largest entry, mapping the game into [0, 1]."""
        top = max(float(u.max()) for u in self.payoffs)
        if top <= 0:
            return self
        return Game(self.strategy_spaces, tuple(u / top for u in self.payoffs))


@dataclass(frozen=True)
class MixedProfile:
    densities: tuple

    def __post_init__(self):
        object.__setattr__(self, "densities", tuple(self.densities))

    def __len__(self):
        return len(self.densities)

    def __getitem__(self, i: int) -> Density:
        return self.densities[i]

    def replace(self, i: int, d: Density) -> "MixedProfile":
        ds = list(self.densities)
        ds[i] = d
        return MixedProfile(tuple(ds))

    def as_lists(self) -> list:
        return [d.as_dict() for d in self.densities]


def _check_profile(g: Game, p: MixedProfile) -> None:
    if len(p) != g.players:
        raise SpaceMismatch(f"profile has {len(p)} densities for {g.players} players")
    for s, d in zip(g.strategy_spaces, p.densities):
        _check_space(s, d.space)


def _payoff_function(g: Game, joint: Density, i: int) -> FiniteFunction:
    return FiniteFunction(joint.space, g.payoffs[i].reshape(-1))


def expected_payoff_tnormed(
    g: Game, p: MixedProfile, i: int, star: Union[TNorm, str] = MIN, ast: Union[TNorm, str] = MIN
) -> float:
    """t-normed integral (t-norm ``star``) of ``u_i`` against the ``ast``-tensor of ``p``."""
    _check_profile(g, p)
    if float(g.payoffs[i].max()) > 1 + ARITH_TOL:
        raise RangeError(f"payoffs of player {i} exceed 1; rescale the game first")
    joint = tensor_nfold(p.densities, ast)
    return t_normed(_payoff_function(g, joint, i), from_density(joint), star)


def expected_payoff_choquet(g: Game, p: MixedProfile, i: int, ast: Union[TNorm, str] = MIN) -> float:
    _check_profile(g, p)
    joint = tensor_nfold(p.densities, ast)
    return choquet(_payoff_function(g, joint, i), from_density(joint))


@dataclass(frozen=True)
class PayoffRule:
    """Which integral turns pure payoffs into expected payoffs.

    ``kind`` is ``"choquet"`` or ``"tnormed"``; ``star`` is the integral's
    t-norm (ignored for Choquet) and ``ast`` builds the joint capacity.
    """

    kind: str = "tnormed"
    star: TNorm = MIN
    ast: TNorm = MIN

    def __post_init__(self):
        if self.kind not in ("choquet", "tnormed"):
            raise ValueError(f"unknown integral kind {self.kind!r}")
        object.__setattr__(self, "star", get_tnorm(self.star))
        object.__setattr__(self, "ast", get_tnorm(self.ast))

    @classmethod
    def parse(cls, integral: str, tensor_tnorm: Union[TNorm, str] = "min") -> "PayoffRule":
        """``"choquet"``, ``"sugeno"`` or ``"tnorm:<name>"``."""
        key = integral.strip().lower()
        if key == "choquet":
            return cls("choquet", MIN, tensor_tnorm)
        if key == "sugeno":
            return cls("tnormed", MIN, tensor_tnorm)
        if key.startswith("tnorm:"):
            return cls("tnormed", key.split(":", 1)[1], tensor_tnorm)
        raise ValueError(f"unknown integral {integral!r}; use choquet, sugeno or tnorm:<name>")

    @property
    def label(self) -> str:
        if self.kind == "choquet":
            return "choquet"
        return "sugeno" if self.star.name == "min" else f"tnorm:{self.star.name}"

    def payoffs(self, g: Game, p: MixedProfile) -> np.ndarray:
        """Every player's expected payoff, sharing one joint capacity."""
        _check_profile(g, p)
        joint = tensor_nfold(p.densities, self.ast)
        cap = from_density(joint)
        out = np.empty(g.players)
        for i in range(g.players):
            f = _payoff_function(g, joint, i)
            if self.kind == "choquet":
                out[i] = choquet(f, cap)
            else:
                if float(g.payoffs[i].max()) > 1 + ARITH_TOL:
                    raise RangeError(f"payoffs of player {i} exceed 1; rescale the game first")
                out[i] = t_normed(f, cap, self.star)
        return out

    def payoff(self, g: Game, p: MixedProfile, i: int) -> float:
        if self.kind == "choquet":
            return expected_payoff_choquet(g, p, i, self.ast)
        return expected_payoff_tnormed(g, p, i, self.star, self.ast)


def b_convex_combine(s: float, d1: Density, d2: Density) -> Density:
    """Density of ``s·nu1 ∨ nu2``: pointwise ``max(s * d1, d2)``."""
    if not 0 <= s <= 1:
        raise ConstraintError(f"coefficient must lie in [0, 1], got {s!r}")
    if d1.space != d2.space:
        raise SpaceMismatch(f"densities live on {d1.space.labels} and {d2.space.labels}")
    return Density(d1.space, np.maximum(s * d1.values, d2.values))


@dataclass
class QuasiconvexityWitness:
    s: float
    d1: list
    d2: list
    opponents: list
    combined: float
    bound: float

    @property
    def excess(self) -> float:
        return self.combined - self.bound


@dataclass
class QuasiconvexityReport:
    player: int
    samples: int
    rule: str
    witnesses: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.witnesses


def quasiconvexity_witness_search(
    g: Game,
    i: int,
    star: Union[TNorm, str] = MIN,
    ast: Union[TNorm, str] = MIN,
    samples: int = 1000,
    seed: int = 0,
    rule: Optional[PayoffRule] = None,
    tol: float = ARITH_TOL,
) -> QuasiconvexityReport:
    """Sample ``eu_i(s·d1 ∨ d2, rest) <= max(eu_i(d1, rest), eu_i(d2, rest))``.

    Pass ``rule`` to test another payoff (e.g. Choquet) instead of the
    t-normed one given by ``star`` and ``ast``.
    """
    rule = rule or PayoffRule("tnormed", star, ast)
    rng = np.random.default_rng(seed)
    report = QuasiconvexityReport(i, samples, rule.label)
    for _ in range(samples):
        rest = MixedProfile(tuple(random_density(rng, s, rng.random() < 0.5) for s in g.strategy_spaces))
        d1 = random_density(rng, g.strategy_spaces[i], rng.random() < 0.5)
        d2 = random_density(rng, g.strategy_spaces[i], rng.random() < 0.5)
        s = float(rng.random()) if rng.random() < 0.7 else float(rng.integers(0, 5) / 4)
        mixed = b_convex_combine(s, d1, d2)
        combined = rule.payoff(g, rest.replace(i, mixed), i)
        bound = max(rule.payoff(g, rest.replace(i, d1), i), rule.payoff(g, rest.replace(i, d2), i))
        if combined > bound + tol:
            report.witnesses.append(
                QuasiconvexityWitness(
                    s,
                    d1.values.tolist(),
                    d2.values.tolist(),
                    [d.values.tolist() for j, d in enumerate(rest.densities) if j != i],
                    combined,
                    bound,
                )
            )
    return report
