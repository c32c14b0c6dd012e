"""Probability vectors in canonical sorted form, plus entropy functionals.

Every algorithm in this package operates on masses sorted in non-increasing
order. :class:`Distribution` freezes that canonical form together with the
permutation back to the caller's original indexing, so results computed in
sorted space can always be reported in the caller's coordinates.

Tolerances are package-wide named values: ``NORMALIZATION_TOL`` guards sums
that must equal 1 and is overridable per call (and from the CLI), while
``INTERNAL_TOL`` guards exact-in-theory comparisons between floats.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .errors import (
    BadAlphaError,
    BadPartitionError,
    EmptyError,
    NegativeMassError,
    NotNormalizedError,
    SupportMismatchError,
)

NORMALIZATION_TOL = 1e-9
INTERNAL_TOL = 1e-12


def compensated_prefix(values: Iterable[float]) -> list[float]:
    """Running prefix sums with Neumaier error compensation.

    Plain left-to-right accumulation loses low-order bits that the
    majorization comparisons downstream care about; tracking the rounding
    error keeps each prefix within ~1 ulp of the exact sum.
    """
    prefixes: list[float] = []
    total = 0.0
    err = 0.0
    for x in values:
        t = total + x
        if abs(total) >= abs(x):
            err += (total - t) + x
        else:
            err += (x - t) + total
        total = t
        prefixes.append(total + err)
    return prefixes


@dataclass(frozen=True, slots=True)
class Distribution:
    """A probability vector in canonical (non-increasing) order.

    Attributes:
        masses: components sorted non-increasingly; may include explicit
            zeros (padding is mass-neutral everywhere in the package).
        perm: ``perm[k]`` is the caller's original index of the k-th largest
            component, so ``masses[k] == raw[perm[k]]``.
    """

    masses: tuple[float, ...]
    perm: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.masses) != len(self.perm):
            raise ValueError("masses and perm must have equal length")
        for k in range(len(self.masses) - 1):
            if self.masses[k] < self.masses[k + 1]:
                raise ValueError("masses must be sorted non-increasingly")

    @property
    def n(self) -> int:
        return len(self.masses)

    def to_caller_order(self) -> tuple[float, ...]:
        """Masses rearranged back to the caller's original indexing."""
        out = [0.0] * len(self.masses)
        for k, j in enumerate(self.perm):
            out[j] = self.masses[k]
        return tuple(out)

    def padded(self, n: int) -> "Distribution":
        """Extend with explicit zero components up to length ``n``.

        Fresh indices continue the caller's numbering; zero components never
        receive coupling entries, so padding does not change any result.
        """
        if n <= self.n:
            return self
        zeros = (0.0,) * (n - self.n)
        tail = tuple(range(self.n, n))
        return Distribution(self.masses + zeros, self.perm + tail)


def make_distribution(
    raw: Sequence[float],
    renormalize: bool = False,
    tol: float = NORMALIZATION_TOL,
) -> Distribution:
    """Validate and canonicalize a probability vector.

    Entries in ``[-INTERNAL_TOL, 0)`` are clamped to 0 (negative roundoff is
    tolerated, genuinely negative mass is not). Sorting is stable: ties keep
    the caller's original relative order, which makes ``perm`` deterministic.

    Args:
        raw: masses in the caller's order.
        renormalize: scale by the reciprocal of the total instead of
            requiring the total to be 1 within ``tol``.
        tol: normalization tolerance on ``|sum - 1|``.

    Raises:
        EmptyError: ``raw`` has no entries.
        NegativeMassError: some entry is below ``-INTERNAL_TOL``.
        NotNormalizedError: the total is off by more than ``tol`` (or is not
            positive when renormalizing).
    """
    values = [float(x) for x in raw]
    if not values:
        raise EmptyError("distribution must have at least one component")
    for i, x in enumerate(values):
        if x < -INTERNAL_TOL:
            raise NegativeMassError(f"component {i} is negative: {x!r}")
        if x < 0.0:
            values[i] = 0.0
    total = math.fsum(values)
    if renormalize:
        if total <= 0.0:
            raise NotNormalizedError("cannot renormalize a zero-mass vector")
        values = [x / total for x in values]
    elif abs(total - 1.0) > tol:
        raise NotNormalizedError(f"masses sum to {total!r}, expected 1 within {tol}")
    order = sorted(range(len(values)), key=lambda i: (-values[i], i))
    return Distribution(tuple(values[i] for i in order), tuple(order))


def as_distribution(d: Distribution | Sequence[float], tol: float = NORMALIZATION_TOL) -> Distribution:
    """Coerce raw masses to a :class:`Distribution`; pass instances through."""
    if isinstance(d, Distribution):
        return d
    return make_distribution(d, tol=tol)


def _positive_masses(d: Distribution | Sequence[float]) -> list[float]:
    # shared validation for the entropy functionals; subnormalized input
    # is allowed, negative roundoff is clamped like make_distribution does
    values = d.masses if isinstance(d, Distribution) else d
    out = []
    for i, x in enumerate(values):
        if x < -INTERNAL_TOL:
            raise NegativeMassError(f"component {i} is negative: {x!r}")
        if x > 0.0:
            out.append(float(x))
    return out


def shannon_entropy(d: Distribution | Sequence[float]) -> float:
    """Shannon entropy in bits, with 0 * log(0) taken as 0.

    Examples:
        >>> shannon_entropy([0.5, 0.5])
        1.0
        >>> shannon_entropy([1.0, 0.0])
        0.0
    """
    # adding 0.0 folds the point-mass result -0.0 back to 0.0
    return -math.fsum(x * math.log2(x) for x in _positive_masses(d)) + 0.0


def renyi_entropy(d: Distribution | Sequence[float], alpha: float) -> float:
    """Renyi entropy of order ``alpha`` in bits.

    Defined for ``alpha`` in (0, 1) and (1, inf) as
    ``log2(sum(x ** alpha)) / (1 - alpha)``; orders within 1e-9 of 1 are
    rejected rather than silently switched to the Shannon limit.

    Raises:
        BadAlphaError: ``alpha <= 0`` or ``alpha`` within 1e-9 of 1.
    """
    if alpha <= 0.0 or abs(alpha - 1.0) <= 1e-9:
        raise BadAlphaError(f"order must lie in (0,1) or (1,inf), got {alpha!r}")
    positive = _positive_masses(d)
    if not positive:
        return 0.0
    power_sum = math.fsum(x**alpha for x in positive)
    # adding 0.0 folds the point-mass result -0.0 back to 0.0
    return math.log2(power_sum) / (1.0 - alpha) + 0.0


def kl_divergence(
    y: Distribution | Sequence[float],
    x: Distribution | Sequence[float],
) -> float:
    """Relative entropy D(y || x) in bits, aligned by sorted position.

    Both vectors are canonicalized and zero-padded to a common length; the
    comparison is between the k-th largest mass of each. Requires the support
    of ``y`` to fit inside the support of ``x`` under that alignment.

    Raises:
        SupportMismatchError: some sorted position has ``y > 0`` but ``x == 0``.
    """
    yd = as_distribution(y)
    xd = as_distribution(x)
    n = max(yd.n, xd.n)
    ym = yd.padded(n).masses
    xm = xd.padded(n).masses
    terms = []
    for k in range(n):
        if ym[k] <= 0.0:
            continue
        if xm[k] <= 0.0:
            raise SupportMismatchError(
                f"sorted position {k} has mass {ym[k]!r} but reference mass 0"
            )
        terms.append(ym[k] * math.log2(ym[k] / xm[k]))
    return math.fsum(terms)


def aggregate(
    d: Distribution | Sequence[float],
    partition: Iterable[Iterable[int]],
) -> Distribution:
    """Merge components by a partition of the caller's index space.

    Each cell of ``partition`` is summed into one component of the result;
    cells refer to indices in the caller's original order. The output is a
    fresh canonical distribution (merging only ever coarsens, so the result
    is majorized by the input).

    Raises:
        BadPartitionError: cells overlap, leave indices uncovered, or refer
            to indices outside ``range(n)``.
    """
    dist = as_distribution(d)
    values = dist.to_caller_order()
    n = len(values)
    seen: set[int] = set()
    sums: list[float] = []
    for cell_no, cell in enumerate(partition):
        indices = list(cell)
        if not indices:
            raise BadPartitionError(f"cell {cell_no} is empty")
        for i in indices:
            if not 0 <= i < n:
                raise BadPartitionError(f"cell {cell_no} index {i} outside range(0, {n})")
            if i in seen:
                raise BadPartitionError(f"index {i} appears in more than one cell")
            seen.add(i)
        sums.append(math.fsum(values[i] for i in indices))
    if len(seen) != n:
        missing = sorted(set(range(n)) - seen)
        raise BadPartitionError(f"indices not covered by any cell: {missing}")
    return make_distribution(sums)
