"""Slow, independent reference computations used as test oracles.

Nothing here calls into the package's integral or tensor code; capacities
enter only as plain value tables indexed by bitmask.
"""

import itertools
from fractions import Fraction

import numpy as np

T_STEP = 1e-4


def level_masks(f, ts):
    """Bitmask of {x : f(x) >= t} for each t in ``ts``."""
    f = np.asarray(f, dtype=float)
    weights = 1 << np.arange(f.size)
    return ((f[None, :] >= ts[:, None]) * weights).sum(axis=1)


def choquet_grid(f, table, step=T_STEP):
    """Midpoint Riemann sum of t -> nu(f_t) over [0, max f]."""
    top = float(np.max(f))
    if top == 0:
        return 0.0
    m = max(1, int(np.ceil(top / step)))
    h = top / m
    ts = (np.arange(m) + 0.5) * h
    return float(np.asarray(table)[level_masks(f, ts)].sum() * h)


def tnormed_grid(f, table, rule, step=T_STEP):
    """max over a uniform t-grid on [0, 1] of rule(nu(f_t), t)."""
    ts = np.linspace(0.0, 1.0, int(round(1 / step)) + 1)
    vals = np.asarray(table)[level_masks(f, ts)]
    return float(np.max(rule(vals, ts)))


def sugeno_grid(f, table, step=T_STEP):
    return tnormed_grid(f, table, np.minimum, step)


RULES = {
    "min": np.minimum,
    "product": lambda a, b: a * b,
    "lukasiewicz": lambda a, b: np.maximum(0.0, a + b - 1.0),
}


def pairwise_possibility(table, n, tol=0.0):
    """nu(A u B) = max(nu(A), nu(B)) for every pair, empty sets included."""
    v = np.asarray(table)
    return all(abs(v[a | b] - max(v[a], v[b])) <= tol for a in range(1 << n) for b in range(1 << n))


def pairwise_necessity(table, n, tol=0.0):
    v = np.asarray(table)
    return all(abs(v[a & b] - min(v[a], v[b])) <= tol for a in range(1 << n) for b in range(1 << n))


def max_extension(density):
    """Subset table of the possibility capacity with the given density, by loops."""
    n = len(density)
    out = [0.0] * (1 << n)
    for mask in range(1, 1 << n):
        out[mask] = max(density[i] for i in range(n) if mask >> i & 1)
    return out


def joint_density(densities, rule):
    """Joint density over the product, first factor slowest."""
    out = []
    for combo in itertools.product(*densities):
        acc = 1.0
        for x in combo:
            acc = float(rule(acc, x))
        out.append(acc)
    return out


def choquet_counterexample(l1, b1, l2, b2):
    """Choquet payoffs of the 2x2 game u1=(3,0,1,2), u2=(0,3,2,1) under the min joint.

    Written out by hand from the level sets of each payoff table.
    """
    aa, ab, ba, bb = min(l1, l2), min(l1, b2), min(b1, l2), min(b1, b2)
    cu1 = max(aa, ba, bb) + max(aa, bb) + aa
    cu2 = max(ab, ba, bb) + max(ab, ba) + ab
    return cu1, cu2


def published_closed_form(l1, b1, l2, b2):
    cu1 = min(b1, l2) + 2 * min(b1, b2) + 3 * min(l1, l2)
    cu2 = 2 * min(b1, l2) + min(b1, b2) + 3 * min(l1, b2)
    return cu1, cu2


def sugeno_2x2_exact(u, d1, d2):
    """Sugeno payoff of a 2x2 table under the min joint, in exact rationals."""
    joint = {(x, y): min(d1[x], d2[y]) for x in range(2) for y in range(2)}
    best = Fraction(0)
    for t in {u[x][y] for x in range(2) for y in range(2)} | {Fraction(0)}:
        level = [joint[z] for z in joint if u[z[0]][z[1]] >= t]
        best = max(best, min(max(level, default=Fraction(0)), t))
    return best


def grid_defect_2x2_exact(u1, u2, k):
    """Min-mode equilibrium defect of a 2x2 Sugeno game on the k-grid, exactly."""
    pts = [(Fraction(1), Fraction(j, k)) for j in range(k + 1)]
    pts += [(Fraction(j, k), Fraction(1)) for j in range(k)]
    pay = {(p, q): (sugeno_2x2_exact(u1, p, q), sugeno_2x2_exact(u2, p, q)) for p in pts for q in pts}
    defect = None
    for p in pts:
        for q in pts:
            g1 = pay[p, q][0] - min(pay[r, q][0] for r in pts)
            g2 = pay[p, q][1] - min(pay[p, r][1] for r in pts)
            gain = max(g1, g2)
            defect = gain if defect is None else min(defect, gain)
    return defect
