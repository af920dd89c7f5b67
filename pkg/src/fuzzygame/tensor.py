"""Tensor products of capacities generated by a t-norm."""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence, Union

import numpy as np

from .capacity import Capacity, Density, FiniteSpace, max_subsets
from .errors import SizeError, SpaceMismatch
from .tnorms import TNorm, apply, get_tnorm

_CHUNK = 1 << 16


@dataclass(frozen=True)
class ProductSpace(FiniteSpace):
    """A product of finite spaces, flattened with the first factor slowest.

    Point ``(i_1, ..., i_m)`` has flat index ``ravel_multi_index`` in C order,
    so for two factors the row of ``x`` occupies bits ``x*n2 .. x*n2+n2-1``
    of a subset mask.
    """

    factors: tuple = ()

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(f.size for f in self.factors)

    def flat_index(self, point: Sequence[int]) -> int:
        return int(np.ravel_multi_index(tuple(point), self.shape))

    def point(self, index: int) -> tuple[int, ...]:
        return tuple(int(i) for i in np.unravel_index(index, self.shape))


def product_space(*factors: FiniteSpace) -> ProductSpace:
    if not factors:
        raise ValueError("a product needs at least one factor")
    size = int(np.prod([f.size for f in factors]))
    if size > 24 or 2**size > max_subsets():
        raise SizeError(f"product of {[f.size for f in factors]} has {size} points, too many subsets to enumerate")
    grids = np.indices([f.size for f in factors]).reshape(len(factors), -1).T
    labels = tuple("(" + ",".join(f.labels[i] for f, i in zip(factors, idx)) + ")" for idx in grids)
    return ProductSpace(labels, tuple(factors))


def tensor_density(d1: Density, d2: Density, t: Union[TNorm, str]) -> Density:
    """Joint density ``(x, y) ↦ d1(x) * d2(y)`` on the product of the two spaces."""
    space = product_space(d1.space, d2.space)
    vals = apply(get_tnorm(t), d1.values[:, None], d2.values[None, :])
    return Density(space, vals.reshape(-1))


def tensor_nfold(densities: Sequence[Density], t: Union[TNorm, str]) -> Density:
    """Left-associated product of any number of densities on the flat product.

    A single factor is returned unchanged.
    """
    densities = list(densities)
    if not densities:
        raise ValueError("need at least one density")
    if len(densities) == 1:
        return densities[0]
    tn = get_tnorm(t)
    space = product_space(*(d.space for d in densities))
    vals = reduce(lambda acc, d: apply(tn, acc[:, None], d.values[None, :]).reshape(-1), densities[1:], densities[0].values)
    return Density(space, vals)


def tensor_general(nu1: Capacity, nu2: Capacity, t: Union[TNorm, str]) -> Capacity:
    """Tensor product of arbitrary capacities.

    For a product subset ``B`` the value is the sup over ``s`` in [0, 1] of
    ``nu1(A_s) * s`` where ``A_s = {x : nu2(B_x) >= s}`` and ``B_x`` is the
    slice of ``B`` above ``x``. ``s ↦ A_s`` only changes at slice values, and
    between changes the product grows with ``s``, so the sup is attained at a
    slice value or at 1.
    """
    tn = get_tnorm(t)
    space = product_space(nu1.space, nu2.space)
    n1, n2 = nu1.space.size, nu2.space.size
    row = (1 << n2) - 1
    rows = np.arange(n1, dtype=np.int64)
    row_bits = np.left_shift(1, rows)
    out = np.empty(space.n_subsets)
    for start in range(0, space.n_subsets, _CHUNK):
        masks = np.arange(start, min(start + _CHUNK, space.n_subsets), dtype=np.int64)
        slices = (masks[None, :] >> (rows[:, None] * n2)) & row
        sv = nu2.values[slices]
        best = np.zeros(masks.size)
        for level in list(sv) + [np.ones(masks.size)]:
            a = ((sv >= level[None, :]) * row_bits[:, None]).sum(axis=0)
            best = np.maximum(best, apply(tn, nu1.values[a], level))
        out[masks] = best
    # monotone by construction; a failure here is a bug, not bad input
    return Capacity(space, out)


def projection_check(nu: Capacity, i: int) -> Capacity:
    """Push a capacity on a product forward to factor ``i``: ``A ↦ nu(p_i^{-1}(A))``."""
    space = nu.space
    if not isinstance(space, ProductSpace):
        raise SpaceMismatch("projection needs a capacity on a product space")
    if not 0 <= i < len(space.factors):
        raise IndexError(f"factor {i} out of range")
    factor = space.factors[i]
    coords = np.indices(space.shape).reshape(len(space.shape), -1)[i]
    bits = np.left_shift(1, np.arange(space.size, dtype=np.int64))
    columns = [int(bits[coords == p].sum()) for p in range(factor.size)]
    pre = np.zeros(factor.n_subsets, dtype=np.int64)
    for p, col in enumerate(columns):
        half = 1 << p
        pre[half : 2 * half] = pre[:half] | col
    return Capacity(factor, nu.values[pre])
