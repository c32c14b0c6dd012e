"""Couplings of k marginals via a balanced tree of pairwise merges.

Each leaf is one marginal with single-index tags; each internal node couples
its children's mass vectors with the sparse pairwise engine and concatenates
their tags, so a node at level l carries 2^l coordinates per component. The
entropy gap doubles its budget once per level, giving H <= H(glb of all
marginals) + ceil(log2 k) at the root. Lists whose length is not a power of
two are padded by duplicating the last marginal; the duplicate axes are
summed back out of the final joint.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

from .coupling import min_entropy_coupling_sparse
from .distributions import (
    Distribution,
    as_distribution,
    shannon_entropy,
)
from .errors import EmptyError, InternalError, TooFewError
from .majorization import glb_many, half_iter, majorizes


@dataclass(frozen=True, slots=True)
class JointEntry:
    """One positive cell of a sparse k-way joint, in caller coordinates."""

    value: float
    coords: tuple[int, ...]


@dataclass(frozen=True, slots=True)
class SparseJoint:
    """A joint distribution over a k-fold product space, positive cells only."""

    dims: tuple[int, ...]
    entries: tuple[JointEntry, ...]

    def __post_init__(self) -> None:
        seen: set[tuple[int, ...]] = set()
        for e in self.entries:
            if e.value <= 0.0:
                raise ValueError(f"entry {e.coords} must be positive, got {e.value!r}")
            if len(e.coords) != len(self.dims):
                raise ValueError(f"entry {e.coords} does not have {len(self.dims)} coordinates")
            for axis, (c, d) in enumerate(zip(e.coords, self.dims)):
                if not 0 <= c < d:
                    raise ValueError(f"entry {e.coords} out of range on axis {axis}")
            if e.coords in seen:
                raise ValueError(f"duplicate entry at {e.coords}")
            seen.add(e.coords)

    def values(self) -> tuple[float, ...]:
        return tuple(e.value for e in self.entries)


def axis_marginals(joint: SparseJoint) -> tuple[tuple[float, ...], ...]:
    """Sum the joint down to each axis, in caller index order."""
    sums = [[[] for _ in range(d)] for d in joint.dims]
    for e in joint.entries:
        for axis, c in enumerate(e.coords):
            sums[axis][c].append(e.value)
    return tuple(
        tuple(math.fsum(cell) for cell in axis_cells) for axis_cells in sums
    )


@dataclass(frozen=True, slots=True)
class IndexedDistribution:
    """Sorted positive masses, each tagged with its marginal coordinates.

    Tags start as single caller indices at the leaves and grow by
    concatenation with every merge.
    """

    masses: tuple[float, ...]
    tags: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.masses) != len(self.tags):
            raise ValueError("masses and tags must have equal length")


def _leaf(d: Distribution) -> IndexedDistribution:
    # zero components can never receive mass; drop them up front
    masses = []
    tags = []
    for pos, m in enumerate(d.masses):
        if m > 0.0:
            masses.append(m)
            tags.append((d.perm[pos],))
    return IndexedDistribution(tuple(masses), tuple(tags))


def _merge(left: IndexedDistribution, right: IndexedDistribution) -> IndexedDistribution:
    dl = Distribution(left.masses, tuple(range(len(left.masses))))
    dr = Distribution(right.masses, tuple(range(len(right.masses))))
    coupling = min_entropy_coupling_sparse(dl, dr)
    pairs = [
        (e.value, left.tags[e.row] + right.tags[e.col]) for e in coupling.entries
    ]
    pairs.sort(key=lambda t: (-t[0], t[1]))
    return IndexedDistribution(
        tuple(v for v, _ in pairs), tuple(tag for _, tag in pairs)
    )


def min_entropy_joint_k(
    ds: Sequence[Distribution | Sequence[float]],
    debug: bool = False,
) -> SparseJoint:
    """Couple k >= 2 marginals with entropy at most H(glb of all) + ceil(log2 k).

    The output's axis-a marginal equals ds[a] (caller order) within the
    normalization tolerance. With ``debug`` on, every internal tree node is
    checked against its majorization witness: the level-l doubling of the glb
    of the leaves below the node must sit below the node's masses.

    Raises:
        EmptyError: no distributions given.
        TooFewError: a single distribution (nothing to couple).
    """
    if len(ds) == 0:
        raise EmptyError("no distributions to couple")
    if len(ds) == 1:
        raise TooFewError("coupling requires at least two distributions")
    dists = [as_distribution(d) for d in ds]
    k = len(dists)
    dims = tuple(d.n for d in dists)
    n_leaves = 1 << (k - 1).bit_length()
    padded = dists + [dists[-1]] * (n_leaves - k)

    nodes = [_leaf(d) for d in padded]
    below = [[d] for d in padded]
    level = 0
    while len(nodes) > 1:
        level += 1
        next_nodes = []
        next_below = []
        for t in range(0, len(nodes), 2):
            merged = _merge(nodes[t], nodes[t + 1])
            leaves = below[t] + below[t + 1]
            if debug:
                witness = half_iter(glb_many(leaves), level)
                if not majorizes(witness, merged.masses):
                    raise InternalError(
                        f"level {level} node violates its majorization witness"
                    )
            next_nodes.append(merged)
            next_below.append(leaves)
        nodes = next_nodes
        below = next_below

    # duplicate axes replicate the last real axis; summing them out restores
    # the k-marginal joint
    cells: dict[tuple[int, ...], list[float]] = {}
    for value, tag in zip(nodes[0].masses, nodes[0].tags):
        cells.setdefault(tag[:k], []).append(value)
    entries = tuple(
        JointEntry(math.fsum(vs), coords) for coords, vs in sorted(cells.items())
    )
    return SparseJoint(dims, entries)


def joint_lower_bound_k(ds: Sequence[Distribution | Sequence[float]]) -> float:
    """Entropy floor for any coupling of the given marginals (in bits)."""
    return shannon_entropy(glb_many([as_distribution(d) for d in ds]).masses)


@dataclass(frozen=True, slots=True)
class FrlBounds:
    """Entropy window for an exogenous variable functionally representing k
    conditional laws: any coupling of the conditionals induces one."""

    lower: float
    upper: float


def frl_bounds(conditionals: Sequence[Distribution | Sequence[float]]) -> FrlBounds:
    """Lower/upper entropy bounds achievable by the tree coupling.

    ``lower`` is the glb entropy (no coupling does better); ``upper`` adds
    the ceil(log2 k) bits the merge tree may pay on top.
    """
    lower = joint_lower_bound_k(conditionals)
    k = len(conditionals)
    return FrlBounds(lower, lower + (k - 1).bit_length())
