"""Grid search for Nash min/max-equilibria over possibility densities.

Each player's strategy set is discretized to the densities with entries in
``{0, 1/k, ..., 1}``. The search is an exhaustive scan over all grid
profiles: expected payoffs are piecewise flat in the densities, so
best-response dynamics can cycle on plateaus and are not used.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .capacity import ARITH_TOL, Density, FiniteSpace, max_subsets
from .errors import ConstraintError, SizeError, SpaceMismatch
from .games import Game, MixedProfile, PayoffRule, b_convex_combine

MODES = ("min", "max")


@dataclass(frozen=True)
class DensityGrid:
    """All densities on ``space`` with entries in ``{0, 1/k, ..., 1}``.

    Members are in lexicographic order of their numerators; this order
    breaks every tie in the search.
    """

    space: FiniteSpace
    k: int
    members: tuple

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i: int) -> Density:
        return self.members[i]

    def index_of(self, d: Density) -> int:
        for j, m in enumerate(self.members):
            if m == d:
                return j
        raise KeyError(f"{d} is not on the grid")


def grid_count(n: int, k: int) -> int:
    return (k + 1) ** n - k**n


def density_grid(space: FiniteSpace, k: int) -> DensityGrid:
    if k < 1:
        raise ValueError("grid resolution must be at least 1")
    n = space.size
    if n * math.log(k + 1) > math.log(max_subsets()):
        raise SizeError(f"(k+1)^n = {k + 1}^{n} grid points exceed the cap of {max_subsets()}")
    members = tuple(
        Density(space, np.array(nums, dtype=float) / k)
        for nums in itertools.product(range(k + 1), repeat=n)
        if max(nums) == k
    )
    return DensityGrid(space, k, members)


def _check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"mode must be 'min' or 'max', got {mode!r}")
    return mode


def _check_grids(g: Game, grids: Sequence[DensityGrid]) -> None:
    if len(grids) != g.players:
        raise SpaceMismatch(f"{len(grids)} grids for {g.players} players")
    for i, (s, grid) in enumerate(zip(g.strategy_spaces, grids)):
        if grid.space != s:
            raise SpaceMismatch(f"grid {i} is over {grid.space.labels}, player {i} plays {s.labels}")


def _improves(new: float, old: float, mode: str) -> bool:
    return new < old if mode == "min" else new > old


def best_response(
    g: Game,
    p: MixedProfile,
    i: int,
    grid: DensityGrid,
    payoff: PayoffRule,
    mode: str = "min",
) -> tuple[Density, float]:
    """Grid member optimizing player ``i``'s payoff with the others fixed.

    The first member in grid order wins ties.
    """
    _check_mode(mode)
    best, best_val = None, None
    for d in grid:
        val = payoff.payoff(g, p.replace(i, d), i)
        if best is None or _improves(val, best_val, mode):
            best, best_val = d, val
    return best, best_val


def _payoff_tables(g: Game, grids: Sequence[DensityGrid], payoff: PayoffRule, threads: int = 1) -> np.ndarray:
    shape = tuple(len(grid) for grid in grids)
    total = int(np.prod(shape))
    if total > max_subsets():
        raise SizeError(f"{total} grid profiles exceed the cap of {max_subsets()}")
    profiles = list(itertools.product(*(range(s) for s in shape)))

    def evaluate(chunk):
        return [payoff.payoffs(g, MixedProfile(tuple(grids[j][ix] for j, ix in enumerate(idx)))) for idx in chunk]

    if threads > 1 and total > 1:
        size = -(-total // threads)
        chunks = [profiles[s : s + size] for s in range(0, total, size)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            # map keeps chunk order, so the result does not depend on scheduling
            rows = [row for part in pool.map(evaluate, chunks) for row in part]
    else:
        rows = evaluate(profiles)
    return np.array(rows, dtype=float).T.reshape((g.players,) + shape)


@dataclass
class Landscape:
    """Per-profile improvement data for a grid game.

    ``tables[i]`` holds player ``i``'s payoff at every grid profile;
    ``gains[i]`` how much ``i`` gains by the best unilateral deviation and
    ``deviations[i]`` the grid index of that deviation.
    """

    mode: str
    tables: np.ndarray
    gains: np.ndarray
    deviations: np.ndarray

    @property
    def best_gain(self) -> np.ndarray:
        """Largest gain any single player has at each profile."""
        return self.gains.max(axis=0)

    @property
    def defect(self) -> float:
        """Smallest best gain over profiles; zero exactly at a grid equilibrium."""
        return float(self.best_gain.min())

    def argmin_profile(self) -> tuple[int, ...]:
        return tuple(int(i) for i in np.unravel_index(np.argmin(self.best_gain), self.best_gain.shape))

    def as_mapping(self) -> dict:
        bg = self.best_gain
        return {idx: float(bg[idx]) for idx in np.ndindex(bg.shape)}


def improvement_landscape(
    g: Game,
    grids: Sequence[DensityGrid],
    payoff: PayoffRule,
    mode: str = "min",
    threads: int = 1,
) -> Landscape:
    _check_mode(mode)
    _check_grids(g, grids)
    tables = _payoff_tables(g, grids, payoff, threads)
    gains = np.empty_like(tables)
    devs = np.empty(tables.shape, dtype=np.int64)
    for i in range(g.players):
        t = tables[i]
        if mode == "min":
            best = t.min(axis=i, keepdims=True)
            arg = t.argmin(axis=i)
            gains[i] = t - best
        else:
            best = t.max(axis=i, keepdims=True)
            arg = t.argmax(axis=i)
            gains[i] = best - t
        devs[i] = np.expand_dims(arg, i)
    return Landscape(mode, tables, gains, devs)


@dataclass
class Deviation:
    profile: tuple
    player: int
    deviation: int
    gain: float


@dataclass
class EquilibriumResult:
    status: str
    mode: str
    epsilon: float
    profile: Optional[MixedProfile] = None
    profile_index: Optional[tuple] = None
    payoffs: Optional[list] = None
    certificate: list = field(default_factory=list)
    defect: float = 0.0

    @property
    def found(self) -> bool:
        return self.status == "found"


def find_equilibrium(
    g: Game,
    grids: Sequence[DensityGrid],
    payoff: PayoffRule,
    mode: str = "min",
    epsilon: float = 0.0,
    threads: int = 1,
) -> EquilibriumResult:
    """Scan grid profiles for one where no deviation gains more than ``epsilon``.

    Returns the first such profile in enumeration order. Otherwise the
    result is ``not_found`` and carries, for every profile, the player with
    the largest gain and that player's best deviation.
    """
    if epsilon < 0:
        raise ConstraintError("epsilon must be nonnegative")
    land = improvement_landscape(g, grids, payoff, mode, threads)
    best = land.best_gain
    for idx in np.ndindex(best.shape):
        if not best[idx] > epsilon:
            profile = MixedProfile(tuple(grids[j][ix] for j, ix in enumerate(idx)))
            return EquilibriumResult(
                "found",
                mode,
                epsilon,
                profile=profile,
                profile_index=tuple(int(i) for i in idx),
                payoffs=[float(land.tables[i][idx]) for i in range(g.players)],
                defect=land.defect,
            )
    cert = []
    for idx in np.ndindex(best.shape):
        player = int(np.argmax(land.gains[(slice(None),) + idx]))
        cert.append(
            Deviation(
                tuple(int(i) for i in idx),
                player,
                int(land.deviations[(player,) + idx]),
                float(land.gains[(player,) + idx]),
            )
        )
    return EquilibriumResult("not_found", mode, epsilon, certificate=cert, defect=land.defect)


def deviation_gain(
    g: Game,
    p: MixedProfile,
    grids: Sequence[DensityGrid],
    payoff: PayoffRule,
    mode: str = "min",
) -> float:
    """Largest improvement any player gets by a unilateral grid deviation from ``p``.

    ``p`` itself need not lie on the grids.
    """
    _check_mode(mode)
    current = payoff.payoffs(g, p)
    gain = 0.0
    for i, grid in enumerate(grids):
        _, val = best_response(g, p, i, grid, payoff, mode)
        gain = max(gain, current[i] - val if mode == "min" else val - current[i])
    return gain


def quasiconvexity_grid_check(
    g: Game,
    i: int,
    payoff: PayoffRule,
    k: int,
    tol: float = ARITH_TOL,
) -> list:
    """Exhaustive check of quasiconvexity in player ``i``'s strategy.

    Runs over every coefficient in ``{0, 1/k, ..., 1}``, every pair of grid
    densities for player ``i`` and every grid profile of the others; returns
    the violating tuples ``(s, d1, d2, rest, combined, bound)``.
    """
    grids = [density_grid(s, k) for s in g.strategy_spaces]
    others = [range(len(grid)) if j != i else [0] for j, grid in enumerate(grids)]
    out = []
    coeffs = [j / k for j in range(k + 1)]
    for idx in itertools.product(*others):
        rest = MixedProfile(tuple(grids[j][ix] for j, ix in enumerate(idx)))
        own = [payoff.payoff(g, rest.replace(i, d), i) for d in grids[i]]
        for a, d1 in enumerate(grids[i]):
            for b, d2 in enumerate(grids[i]):
                bound = max(own[a], own[b])
                for s in coeffs:
                    val = payoff.payoff(g, rest.replace(i, b_convex_combine(s, d1, d2)), i)
                    if val > bound + tol:
                        out.append((s, d1, d2, rest, val, bound))
    return out
