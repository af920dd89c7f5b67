"""Continuous triangular norms.

Built-in rules work on Python floats, numpy arrays and
:class:`fractions.Fraction` alike; :func:`verify_axioms` uses the latter so
that the axioms of the built-ins are checked without rounding.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, InvalidTNorm

DOMAIN_TOL = 1e-12
CUSTOM_GRID_K = 50
CUSTOM_TOL = 1e-9


def _min_rule(a, b):
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        return np.minimum(a, b)
    return min(a, b)


def _product_rule(a, b):
    return a * b


def _lukasiewicz_rule(a, b):
    # a + b - 1 computed as lo - (1 - hi): 1 - hi is exact for hi >= 1/2, which
    # always holds when the result is positive, so the result is correctly
    # rounded, symmetric, and has exact unit.
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        hi = np.maximum(a, b)
        lo = np.minimum(a, b)
        return np.maximum(0.0, lo - (1.0 - hi))
    hi, lo = max(a, b), min(a, b)
    return max(lo - (1 - hi), 0 * lo)


def _drastic_rule(a, b):
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        a, b = np.broadcast_arrays(np.asarray(a, float), np.asarray(b, float))
        return np.where(a == 1, b, np.where(b == 1, a, 0.0))
    if a == 1:
        return b
    if b == 1:
        return a
    return 0 * a


_BUILTINS = {
    "min": _min_rule,
    "product": _product_rule,
    "lukasiewicz": _lukasiewicz_rule,
}


@dataclass(frozen=True)
class TNorm:
    """A named continuous t-norm.

    Use :meth:`named` for the built-ins and :meth:`custom` for user rules;
    custom rules are screened on a grid before they are accepted.
    """

    name: str
    rule: Callable = field(repr=False, compare=False)
    builtin: bool = True

    @classmethod
    def named(cls, name: str) -> "TNorm":
        key = name.strip().lower()
        if key == "drastic":
            raise InvalidTNorm("the drastic t-norm is not continuous")
        if key not in _BUILTINS:
            raise InvalidTNorm(f"unknown t-norm {name!r}; expected one of {sorted(_BUILTINS)}")
        return cls(key, _BUILTINS[key])

    @classmethod
    def custom(cls, rule: Callable, name: str = "custom", grid_k: int = CUSTOM_GRID_K) -> "TNorm":
        t = cls(name, rule, builtin=False)
        report = verify_axioms(t, grid_k, tol=CUSTOM_TOL, check_continuity=True)
        if not report.ok:
            raise InvalidTNorm(f"{name} is not a continuous t-norm: {report.violations[0]}")
        return t

    def __call__(self, a, b):
        return apply(self, a, b)


MIN = TNorm.named("min")
PRODUCT = TNorm.named("product")
LUKASIEWICZ = TNorm.named("lukasiewicz")


def get_tnorm(name) -> TNorm:
    return name if isinstance(name, TNorm) else TNorm.named(name)


def _check_unit(x, what):
    arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < -DOMAIN_TOL) or np.any(arr > 1 + DOMAIN_TOL):
        raise DomainError(f"{what} must lie in [0, 1], got {x!r}")


def apply(t: TNorm, a, b):
    """Evaluate ``a * b`` under ``t``; arrays broadcast elementwise."""
    _check_unit(a, "first argument")
    _check_unit(b, "second argument")
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        a = np.clip(np.asarray(a, dtype=float), 0.0, 1.0)
        b = np.clip(np.asarray(b, dtype=float), 0.0, 1.0)
        if t.builtin:
            return t.rule(a, b)
        return np.vectorize(lambda x, y: float(t.rule(float(x), float(y))), otypes=[float])(a, b)
    a = min(max(float(a), 0.0), 1.0)
    b = min(max(float(b), 0.0), 1.0)
    return float(t.rule(a, b))


@dataclass
class Violation:
    axiom: str
    witness: tuple
    detail: str = ""

    def __str__(self):
        return f"{self.axiom} fails at {self.witness}" + (f": {self.detail}" if self.detail else "")


@dataclass
class AxiomReport:
    name: str
    grid_k: int
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def witnesses(self, axiom: str) -> list:
        return [v.witness for v in self.violations if v.axiom == axiom]


def verify_axioms(
    t: TNorm,
    grid_k: int,
    tol: Optional[float] = None,
    check_continuity: bool = False,
) -> AxiomReport:
    """Check unit, commutativity, monotonicity and associativity on a grid.

    The grid is ``{0, 1/k, ..., 1}``. Built-ins are evaluated on exact
    rationals with zero tolerance; custom rules get floats and ``tol``
    (default ``1e-9``). Every failing grid point is recorded.
    """
    if grid_k < 2:
        raise ValueError("grid_k must be at least 2")
    exact = t.builtin
    if tol is None:
        tol = 0 if exact else CUSTOM_TOL
    if exact:
        pts = [Fraction(i, grid_k) for i in range(grid_k + 1)]
        op = t.rule
    else:
        pts = [i / grid_k for i in range(grid_k + 1)]
        op = lambda x, y: float(t.rule(x, y))  # noqa: E731

    report = AxiomReport(t.name, grid_k)
    table = {(x, y): op(x, y) for x in pts for y in pts}

    def flag(axiom, witness, detail):
        report.violations.append(Violation(axiom, tuple(float(w) for w in witness), detail))

    for x in pts:
        if abs(table[x, 1] - x) > tol:
            flag("unit", (x, 1), f"got {float(table[x, 1])!r}")
        for y in pts:
            v = table[x, y]
            if v < -tol or v > 1 + tol:
                flag("range", (x, y), f"got {float(v)!r}")
            if abs(v - table[y, x]) > tol:
                flag("commutativity", (x, y), f"{float(v)!r} vs {float(table[y, x])!r}")
    for x in pts:
        for y0, y1 in zip(pts, pts[1:]):
            if table[x, y0] > table[x, y1] + tol:
                flag("monotonicity", (x, y0, y1), "decreases in the second argument")
            if table[y0, x] > table[y1, x] + tol:
                flag("monotonicity", (y0, y1, x), "decreases in the first argument")
    for x, y, z in itertools.product(pts, repeat=3):
        left = op(table[x, y], z)
        right = op(x, table[y, z])
        if abs(left - right) > tol:
            flag("associativity", (x, y, z), f"{float(left)!r} vs {float(right)!r}")
    if check_continuity:
        _check_continuity(t, grid_k, flag)
    return report


def _check_continuity(t: TNorm, grid_k: int, flag) -> None:
    """Sample the modulus of continuity on a grid and on its twofold refinement.

    A continuous rule's largest jump between neighbouring grid points shrinks
    as the grid refines; a jump that persists at the finer scale is reported.
    """

    def max_jump(k):
        pts = np.arange(k + 1) / k
        vals = np.array([[float(t.rule(x, y)) for y in pts] for x in pts])
        dx = np.abs(np.diff(vals, axis=0))
        dy = np.abs(np.diff(vals, axis=1))
        jx = np.unravel_index(np.argmax(dx), dx.shape)
        jy = np.unravel_index(np.argmax(dy), dy.shape)
        if dx[jx] >= dy[jy]:
            return float(dx[jx]), (pts[jx[0]], pts[jx[1]])
        return float(dy[jy]), (pts[jy[0]], pts[jy[1]])

    coarse, _ = max_jump(grid_k)
    fine, where = max_jump(2 * grid_k)
    # Lipschitz-like rules roughly halve their jump; a jump that does not
    # shrink is a discontinuity. Jumps at or below 2/k pass regardless.
    if fine > 2.0 / grid_k and fine > 0.75 * coarse:
        flag("continuity", where, f"jump {fine:.3g} at step 1/{2 * grid_k} (was {coarse:.3g} at 1/{grid_k})")


drastic_rule = _drastic_rule
