"""Majorization preorder, lattice greatest lower bound, and the half operator.

For sorted probability vectors, ``a`` is below ``b`` (written a <= b here)
when every prefix sum of ``a`` is at most the matching prefix sum of ``b``.
Under this order the sorted vectors form a lattice; the greatest lower bound
is computed by differencing the componentwise minima of the two prefix-sum
vectors. Entropy is Schur-concave, so the glb is the entropy ceiling of the
pair and drives every bound in this package.

The half operator splits each component into two equal pieces, adding exactly
one bit of entropy per application; it is the accounting device behind the
multi-marginal gap analysis.
"""

from __future__ import annotations

from collections.abc import Sequence

from .distributions import (
    INTERNAL_TOL,
    Distribution,
    as_distribution,
    compensated_prefix,
    make_distribution,
)
from .errors import EmptyError, SizeCapError

HALF_COMPONENT_CAP = 2**20


def _padded_pair(
    a: Distribution | Sequence[float],
    b: Distribution | Sequence[float],
) -> tuple[Distribution, Distribution]:
    da = as_distribution(a)
    db = as_distribution(b)
    n = max(da.n, db.n)
    return da.padded(n), db.padded(n)


def majorizes(a: Distribution | Sequence[float], b: Distribution | Sequence[float]) -> bool:
    """True iff ``a`` sits below ``b`` in the majorization order (a <= b).

    Inputs of unequal length are zero-padded to a common length; prefix sums
    are compared with 1e-12 slack so that exact-in-theory ties do not flip on
    roundoff.
    """
    da, db = _padded_pair(a, b)
    pa = compensated_prefix(da.masses)
    pb = compensated_prefix(db.masses)
    return all(x <= y + INTERNAL_TOL for x, y in zip(pa, pb))


def glb(p: Distribution | Sequence[float], q: Distribution | Sequence[float]) -> Distribution:
    """Greatest lower bound of two distributions in the majorization order.

    The output's k-th prefix sum is min(prefix_p[k], prefix_q[k]); the masses
    are the first differences of that sequence. Negative differences can only
    arise from roundoff (the prefix minima are non-decreasing); they are
    clamped to zero and the deficit folded into the next component so prefix
    sums stay within tolerance.
    """
    dp, dq = _padded_pair(p, q)
    pp = compensated_prefix(dp.masses)
    pq = compensated_prefix(dq.masses)
    masses: list[float] = []
    previous = 0.0
    carry = 0.0
    for a, b in zip(pp, pq):
        m = a if a <= b else b
        z = m - previous + carry
        if z < 0.0:
            carry = z
            z = 0.0
        else:
            carry = 0.0
        masses.append(z)
        previous = m
    return make_distribution(masses)


def glb_many(ds: Sequence[Distribution | Sequence[float]]) -> Distribution:
    """Left fold of :func:`glb` over one or more distributions."""
    if len(ds) == 0:
        raise EmptyError("glb_many requires at least one distribution")
    acc = as_distribution(ds[0])
    for d in ds[1:]:
        acc = glb(acc, d)
    return acc


def half(p: Distribution | Sequence[float]) -> Distribution:
    """Split every component into two identical halves.

    The result (p1/2, p1/2, ..., pn/2, pn/2) is already sorted and has
    entropy exactly one bit above the input's. Trailing zero components are
    duplicated too; strip them before calling if compactness matters.
    """
    dp = as_distribution(p)
    masses: list[float] = []
    for x in dp.masses:
        h = x / 2.0
        masses.append(h)
        masses.append(h)
    return Distribution(tuple(masses), tuple(range(len(masses))))


def half_iter(
    p: Distribution | Sequence[float],
    i: int,
    cap: int = HALF_COMPONENT_CAP,
) -> Distribution:
    """Apply :func:`half` ``i`` times; ``i = 0`` returns the input unchanged.

    Raises:
        SizeCapError: the result would have more than ``cap`` components
            (n doubles with every application).
    """
    if i < 0:
        raise ValueError(f"iteration count must be >= 0, got {i}")
    dp = as_distribution(p)
    if dp.n * (2**i) > cap:
        raise SizeCapError(f"half_iter would produce {dp.n * 2**i} components, cap is {cap}")
    for _ in range(i):
        dp = half(dp)
    return dp
