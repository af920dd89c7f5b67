"""The two-player Choquet game without a Nash min-equilibrium.

Pure payoffs on ``{a, b} x {a, b}`` in profile order ``(a,a), (a,b), (b,a),
(b,b)``::

    u_1 = (3, 0, 1, 2)
    u_2 = (0, 3, 2, 1)

A mixed profile is written ``(l1, b1, l2, b2)``: player 1 has density
``(l1, b1)`` and player 2 has ``(l2, b2)`` on ``(a, b)``. Both densities
must have maximum 1.

The published closed forms for the Choquet payoffs,
``cu_1 = b1∧l2 + 2(b1∧b2) + 3(l1∧l2)`` and
``cu_2 = 2(b1∧l2) + b1∧b2 + 3(l1∧b2)``, weight each pure payoff by the
joint density as if the capacity were additive. They agree with the
Choquet integral only on part of the constraint set; at the all-ones
profile they give 6 although no integral of a function bounded by 3 can
exceed 3. :func:`closed_form_deviation` measures the gap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .capacity import ARITH_TOL, Density, FiniteSpace
from .equilibrium import density_grid
from .errors import ConstraintError
from .games import Game, MixedProfile, expected_payoff_choquet
from .tnorms import MIN

STRATEGIES = FiniteSpace(("a", "b"))
U1 = np.array([[3.0, 0.0], [1.0, 2.0]])
U2 = np.array([[0.0, 3.0], [2.0, 1.0]])


def paper_game() -> Game:
    return Game((STRATEGIES, STRATEGIES), (U1, U2))


def closed_form_cu1(l1, b1, l2, b2) -> float:
    return min(b1, l2) + 2 * min(b1, b2) + 3 * min(l1, l2)


def closed_form_cu2(l1, b1, l2, b2) -> float:
    return 2 * min(b1, l2) + min(b1, b2) + 3 * min(l1, b2)


def profile_of(l1, b1, l2, b2) -> MixedProfile:
    return MixedProfile((Density(STRATEGIES, [l1, b1]), Density(STRATEGIES, [l2, b2])))


def direct_payoffs(l1, b1, l2, b2, game: Optional[Game] = None) -> tuple[float, float]:
    """Choquet payoffs of both players under the min-tensor, computed from scratch."""
    game = game or paper_game()
    p = profile_of(l1, b1, l2, b2)
    return expected_payoff_choquet(game, p, 0, MIN), expected_payoff_choquet(game, p, 1, MIN)


def face_grid(k: int) -> list[tuple[float, float, float, float]]:
    """All ``(l1, b1, l2, b2)`` with entries in ``{0, 1/k, ..., 1}`` satisfying the constraint."""
    g = density_grid(STRATEGIES, k)
    return [tuple(d1.values.tolist() + d2.values.tolist()) for d1 in g for d2 in g]


def closed_form_deviation(k: int = 20) -> dict:
    """Largest gap between the closed forms and the Choquet payoffs on the face grid."""
    game = paper_game()
    worst = [0.0, 0.0]
    where: list = [None, None]
    agree = 0
    points = face_grid(k)
    for pt in points:
        c1, c2 = direct_payoffs(*pt, game=game)
        e1 = abs(c1 - closed_form_cu1(*pt))
        e2 = abs(c2 - closed_form_cu2(*pt))
        if max(e1, e2) <= ARITH_TOL:
            agree += 1
        for j, e in enumerate((e1, e2)):
            if e > worst[j]:
                worst[j], where[j] = e, pt
    return {
        "points": len(points),
        "agreeing_points": agree,
        "max_abs_deviation": [worst[0], worst[1]],
        "worst_profile": [list(w) if w is not None else None for w in where],
    }


@dataclass
class CaseReport:
    """One profile's case, the prescribed deviation, and the payoffs around it.

    ``closed_form_*`` values evaluate the published formulas; ``direct_*``
    values are Choquet integrals of the same profiles.
    """

    point: tuple
    case: int
    condition: str
    player: int
    deviation: tuple
    closed_form_before: float
    closed_form_after: float
    direct_before: float
    direct_after: float
    note: str = ""

    @property
    def gap(self) -> float:
        return self.closed_form_before - self.closed_form_after

    @property
    def direct_gap(self) -> float:
        return self.direct_before - self.direct_after

    def as_dict(self) -> dict:
        return {
            "point": {"lambda1": self.point[0], "beta1": self.point[1], "lambda2": self.point[2], "beta2": self.point[3]},
            "case": self.case,
            "condition": self.condition,
            "deviating_player": self.player + 1,
            "deviation": {"a": self.deviation[0], "b": self.deviation[1]},
            "closed_form": {"before": self.closed_form_before, "after": self.closed_form_after, "gap": self.gap},
            "direct_choquet": {"before": self.direct_before, "after": self.direct_after, "gap": self.direct_gap},
            "note": self.note,
        }


def _snap(x: float, name: str) -> float:
    x = float(x)
    if not -ARITH_TOL <= x <= 1 + ARITH_TOL:
        raise ConstraintError(f"{name} = {x!r} is outside [0, 1]")
    x = min(max(x, 0.0), 1.0)
    return 1.0 if abs(x - 1.0) <= ARITH_TOL else x


_TYPO_NOTE = (
    "the published inequality for this case names cu_1(nu', mu) on both sides; "
    "the right-hand side is cu_1(nu, mu)"
)


def verify_counterexample_cases(l1, b1, l2, b2, game: Optional[Game] = None) -> CaseReport:
    """Classify a profile into the four cases and apply the prescribed deviation.

    Cases are tried in order: ``l1 = 1 = l2``; ``l1 = 1 = b2``;
    ``b1 = 1 = b2``; ``l2 = 1 = b1``. Each case names a deviating player and
    a pure strategy; the report gives that player's payoff before and after,
    both from the closed forms and from the Choquet integral.
    """
    l1, b1, l2, b2 = (_snap(v, n) for v, n in zip((l1, b1, l2, b2), ("lambda1", "beta1", "lambda2", "beta2")))
    if max(l1, b1) != 1.0 or max(l2, b2) != 1.0:
        raise ConstraintError(f"densities ({l1}, {b1}) and ({l2}, {b2}) must each have maximum 1")

    note = ""
    if l1 == 1 and l2 == 1:
        case = 1
        if b2 == 1:
            cond, player, dev = "lambda1 = 1 = lambda2, beta2 = 1", 1, (1.0, 0.0)
        else:
            cond, player, dev = "lambda1 = 1 = lambda2, beta2 < 1", 0, (0.0, 1.0)
    elif l1 == 1 and b2 == 1:
        case, cond, player, dev = 2, "lambda1 = 1 = beta2", 1, (1.0, 0.0)
    elif b1 == 1 and b2 == 1:
        case = 3
        if l2 == 1:
            cond, player, dev = "beta1 = 1 = beta2, lambda2 = 1", 1, (0.0, 1.0)
        else:
            cond, player, dev = "beta1 = 1 = beta2, lambda2 < 1", 0, (1.0, 0.0)
    else:
        case = 4
        if l1 > 0:
            cond, player, dev = "lambda2 = 1 = beta1, lambda1 > 0", 0, (0.0, 1.0)
            note = _TYPO_NOTE
        else:
            cond, player, dev = "lambda2 = 1 = beta1, lambda1 = 0", 1, (0.0, 1.0)

    before = (l1, b1, l2, b2)
    after = dev + (l2, b2) if player == 0 else (l1, b1) + dev
    closed = closed_form_cu1 if player == 0 else closed_form_cu2
    game = game or paper_game()
    return CaseReport(
        point=before,
        case=case,
        condition=cond,
        player=player,
        deviation=dev,
        closed_form_before=closed(*before),
        closed_form_after=closed(*after),
        direct_before=direct_payoffs(*before, game=game)[player],
        direct_after=direct_payoffs(*after, game=game)[player],
        note=note,
    )


def case_sweep(k: int = 20) -> list[CaseReport]:
    game = paper_game()
    return [verify_counterexample_cases(*pt, game=game) for pt in face_grid(k)]
