"""Scalar products of external momenta reduced by momentum conservation.

All momenta are incoming and sum to zero.  The largest momentum index ``m`` is
eliminated through ``p_m = -(p_1 + ... + p_{m-1})``, so every invariant is
expressed in the ``sp(i, j)`` basis with ``i <= j < m``.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .poly import ZERO, Poly, sp

__all__ = ["reduce_momentum", "dot", "square", "momentum_sum"]


def reduce_momentum(coeffs: Mapping[int, int], momenta: Iterable[int]) -> dict[int, int]:
    """Rewrite a combination ``sum c_i p_i`` without the eliminated momentum."""
    moms = sorted(momenta)
    if not moms:
        return {}
    last = moms[-1]
    out = {i: c for i, c in coeffs.items() if i != last and c}
    c_last = coeffs.get(last, 0)
    if c_last:
        for i in moms[:-1]:
            out[i] = out.get(i, 0) - c_last
            if not out[i]:
                del out[i]
    return out


def dot(a: Mapping[int, int], b: Mapping[int, int], momenta: Iterable[int]) -> Poly:
    """Scalar product of two momentum combinations as a polynomial in sp atoms."""
    moms = list(momenta)
    ra, rb = reduce_momentum(a, moms), reduce_momentum(b, moms)
    out = ZERO
    for i, ci in ra.items():
        for j, cj in rb.items():
            out = out + sp(i, j) * (ci * cj)
    return out


def momentum_sum(indices: Iterable[int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for i in indices:
        out[i] = out.get(i, 0) + 1
    return out


def square(indices: Iterable[int], momenta: Iterable[int]) -> Poly:
    """``(sum_{i in indices} p_i)^2`` in the reduced basis."""
    v = momentum_sum(indices)
    return dot(v, v, momenta)
