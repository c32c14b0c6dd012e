"""Pairwise couplings within one bit of the minimum-entropy optimum.

Finding the coupling of two distributions with the least entropy is NP-hard,
but the greatest lower bound z = glb(p, q) both lower-bounds the optimum and
admits a greedy rearrangement into a valid coupling that splits each z
component at most once. The resulting entropy is at most H(z) + 1, hence at
most OPT + 1, and the support has at most 2n cells.

Two engines produce such couplings. The dense engine walks an explicit n x n
matrix from the last index to the first, resolving each row/column overflow
by a greedy mass split; it is quadratic and easy to audit. The sparse engine
keeps only the moved masses, in two min-priority queues keyed by mass, and
runs in O(n log n) overall.

Both engines report coordinates in the caller's original index order for each
marginal, regardless of the internal sorting and of the role swap applied
when the marginals compare the wrong way at their last differing component.
"""

from __future__ import annotations

import heapq
import math
from collections.abc import Sequence
from dataclasses import dataclass

from .distributions import (
    INTERNAL_TOL,
    NORMALIZATION_TOL,
    Distribution,
    as_distribution,
)
from .errors import InfeasibleSplitError, InternalError
from .majorization import glb


@dataclass(frozen=True, slots=True)
class CouplingEntry:
    """One positive cell of a sparse coupling, in caller coordinates."""

    value: float
    row: int
    col: int


@dataclass(frozen=True, slots=True)
class SparseCoupling:
    """A joint distribution over rows x cols, positive cells only.

    Entries are sorted by (row, col). The support never exceeds
    2 * max(n_rows, n_cols): each glb component is split at most once.
    """

    n_rows: int
    n_cols: int
    entries: tuple[CouplingEntry, ...]

    def __post_init__(self) -> None:
        seen: set[tuple[int, int]] = set()
        for e in self.entries:
            if e.value <= 0.0:
                raise ValueError(f"entry ({e.row}, {e.col}) must be positive, got {e.value!r}")
            if not (0 <= e.row < self.n_rows and 0 <= e.col < self.n_cols):
                raise ValueError(f"entry ({e.row}, {e.col}) outside {self.n_rows} x {self.n_cols}")
            if (e.row, e.col) in seen:
                raise ValueError(f"duplicate entry at ({e.row}, {e.col})")
            seen.add((e.row, e.col))
        if len(self.entries) > 2 * max(self.n_rows, self.n_cols):
            raise ValueError(
                f"{len(self.entries)} entries exceed the 2*max(n_rows, n_cols) support bound"
            )

    def values(self) -> tuple[float, ...]:
        return tuple(e.value for e in self.entries)


@dataclass(frozen=True, slots=True)
class SplitResult:
    """Outcome of one greedy mass split.

    ``z_d`` is the piece retained in place, ``z_r = z - z_d`` the piece
    relocated to the next index, ``chosen`` the identifiers of pool
    candidates that stay to fill the target alongside ``z_d``.
    """

    z_d: float
    z_r: float
    chosen: frozenset[int]


def split_mass(z: float, x: float, pool: Sequence[float]) -> SplitResult:
    """Split mass ``z`` so that the chosen pool prefix plus ``z_d`` hits ``x``.

    Scans ``pool`` in the given order, accumulating candidates while the
    running sum plus the next candidate stays strictly below ``x``; then
    ``z_d = x - sum`` tops the target up exactly. Works for any candidate
    order provided every candidate is at most ``z`` and the total mass
    reaches ``x``.

    Returns chosen candidates as their positions in ``pool``.

    Raises:
        InfeasibleSplitError: a candidate exceeds ``z``, or ``x`` exceeds
            ``z`` plus the whole pool (both checked with 1e-12 slack).
    """
    masses = [float(m) for m in pool]
    for k, m in enumerate(masses):
        if m > z + INTERNAL_TOL:
            raise InfeasibleSplitError(f"candidate {k} has mass {m!r} exceeding z={z!r}")
    if x > z + math.fsum(masses) + INTERNAL_TOL:
        raise InfeasibleSplitError(f"target {x!r} exceeds z plus pool total")
    chosen: list[int] = []
    acc = 0.0
    for k, m in enumerate(masses):
        if acc + m < x:
            chosen.append(k)
            acc += m
    z_d = x - acc
    if z_d < 0.0:
        z_d = 0.0
    if z_d > z:
        if z_d - z > INTERNAL_TOL:
            raise InfeasibleSplitError(f"retained piece {z_d!r} exceeds z={z!r}")
        z_d = z
    return SplitResult(z_d, z - z_d, frozenset(chosen))


class MassPool:
    """Min-priority queue of (mass, origin) records with a running total.

    Ties on mass break toward the smaller origin index, which makes
    extraction order (and therefore every coupling this package emits)
    deterministic. The total is maintained with compensated accumulation so
    overflow tests stay reliable over long push/extract sequences.
    """

    __slots__ = ("_heap", "_sum", "_err")

    def __init__(self) -> None:
        self._heap: list[tuple[float, int]] = []
        self._sum = 0.0
        self._err = 0.0

    def __len__(self) -> int:
        return len(self._heap)

    @property
    def total(self) -> float:
        return self._sum + self._err

    def _accumulate(self, x: float) -> None:
        t = self._sum + x
        if abs(self._sum) >= abs(x):
            self._err += (self._sum - t) + x
        else:
            self._err += (x - t) + self._sum
        self._sum = t

    def push(self, mass: float, origin: int) -> None:
        if mass <= 0.0:
            raise ValueError(f"pool masses must be positive, got {mass!r}")
        heapq.heappush(self._heap, (mass, origin))
        self._accumulate(mass)

    def split(self, z: float, x: float) -> tuple[SplitResult, tuple[tuple[float, int], ...]]:
        """Greedy split against the queue, extracting smallest masses first.

        Extracted records are removed from the queue and returned alongside
        the :class:`SplitResult` (whose ``chosen`` holds their origins).
        """
        if x > z + self.total + INTERNAL_TOL:
            raise InfeasibleSplitError(f"target {x!r} exceeds z plus queued total")
        taken: list[tuple[float, int]] = []
        acc = 0.0
        while self._heap and acc + self._heap[0][0] < x:
            mass, origin = heapq.heappop(self._heap)
            self._accumulate(-mass)
            taken.append((mass, origin))
            acc += mass
        z_d = x - acc
        if z_d < 0.0:
            z_d = 0.0
        if z_d > z:
            if z_d - z > INTERNAL_TOL:
                raise InfeasibleSplitError(f"retained piece {z_d!r} exceeds z={z!r}")
            z_d = z
        return SplitResult(z_d, z - z_d, frozenset(o for _, o in taken)), tuple(taken)

    def drain(self) -> list[tuple[float, int]]:
        """Remove and return all records, smallest mass first."""
        out: list[tuple[float, int]] = []
        while self._heap:
            out.append(heapq.heappop(self._heap))
        self._sum = 0.0
        self._err = 0.0
        return out


def _prepare(
    p: Distribution | Sequence[float],
    q: Distribution | Sequence[float],
) -> tuple[Distribution, Distribution, bool, int, int]:
    """Coerce, pad, and decide the role swap.

    The greedy walk requires the first marginal to dominate at the last index
    where the sorted masses differ; when it does not, roles are swapped and
    the output is transposed back afterwards.
    """
    dp = as_distribution(p)
    dq = as_distribution(q)
    n_rows, n_cols = dp.n, dq.n
    n = max(dp.n, dq.n)
    dp = dp.padded(n)
    dq = dq.padded(n)
    swapped = False
    for j in range(n - 1, -1, -1):
        if dp.masses[j] != dq.masses[j]:
            swapped = dp.masses[j] < dq.masses[j]
            break
    if swapped:
        dp, dq = dq, dp
    return dp, dq, swapped, n_rows, n_cols


def _finish(
    raw: list[tuple[float, int, int]],
    dp: Distribution,
    dq: Distribution,
    swapped: bool,
    n_rows: int,
    n_cols: int,
) -> SparseCoupling:
    # raw holds (value, row, col) in sorted positions of the (possibly
    # swapped) working pair; undo the swap, then map through the perms
    entries = []
    for value, r, c in raw:
        if swapped:
            r, c = c, r
        row = (dq.perm if swapped else dp.perm)[r]
        col = (dp.perm if swapped else dq.perm)[c]
        entries.append(CouplingEntry(value, row, col))
    entries.sort(key=lambda e: (e.row, e.col))
    return SparseCoupling(n_rows, n_cols, tuple(entries))


def _check_one_sided(col_over: bool, row_over: bool, i: int) -> None:
    if col_over and row_over:
        raise InternalError(f"both marginals overflow at index {i}; state is corrupted")


def min_entropy_coupling_dense(
    p: Distribution | Sequence[float],
    q: Distribution | Sequence[float],
    debug: bool = False,
) -> SparseCoupling:
    """Quadratic coupling engine over an explicit matrix.

    Starts from diag(glb(p, q)) and walks indices from last to first; an
    overflowing column (resp. row) is resolved by greedily splitting the
    diagonal mass against the other occupied cells of that column (resp.
    row), relocating the remainder and the non-chosen cells one index down.
    Each glb component is split at most once, so the output keeps at most 2n
    positive cells and entropy at most H(glb) + 1.

    With ``debug`` on, verifies that the output values regroup exactly into
    the recorded splits of the glb components.
    """
    dp, dq, swapped, n_rows, n_cols = _prepare(p, q)
    n = dp.n
    z = glb(dp, dq).masses
    pm, qm = dp.masses, dq.masses
    grid = [[0.0] * n for _ in range(n)]
    origin = [[-1] * n for _ in range(n)]
    for i in range(n):
        grid[i][i] = z[i]
        origin[i][i] = i
    splits: dict[int, tuple[float, float]] = {}

    for i in range(n - 1, -1, -1):
        col_sum = math.fsum(grid[k][i] for k in range(n))
        row_sum = math.fsum(grid[i][k] for k in range(n))
        col_over = col_sum > qm[i] + INTERNAL_TOL
        row_over = row_sum > pm[i] + INTERNAL_TOL
        _check_one_sided(col_over, row_over, i)
        if not (col_over or row_over):
            continue
        if i == 0:
            raise InternalError("first index cannot overflow; state is corrupted")
        if col_over:
            # candidates: every other cell of column i (zeros are harmless)
            rows = [k for k in range(n) if k != i]
            res = split_mass(grid[i][i], qm[i], [grid[k][i] for k in rows])
            kept = {rows[k] for k in res.chosen}
            grid[i][i] = res.z_d
            grid[i][i - 1] = res.z_r
            origin[i][i - 1] = i
            for k in rows:
                if k not in kept and grid[k][i] > 0.0:
                    grid[k][i - 1] = grid[k][i]
                    origin[k][i - 1] = origin[k][i]
                    grid[k][i] = 0.0
        else:
            cols = [k for k in range(n) if k != i]
            res = split_mass(grid[i][i], pm[i], [grid[i][k] for k in cols])
            kept = {cols[k] for k in res.chosen}
            grid[i][i] = res.z_d
            grid[i - 1][i] = res.z_r
            origin[i - 1][i] = i
            for k in cols:
                if k not in kept and grid[i][k] > 0.0:
                    grid[i - 1][k] = grid[i][k]
                    origin[i - 1][k] = origin[i][k]
                    grid[i][k] = 0.0
        splits[i] = (res.z_d, res.z_r)

    raw = [
        (grid[r][c], r, c)
        for r in range(n)
        for c in range(n)
        if grid[r][c] > 0.0
    ]
    if debug:
        tagged = [
            (grid[r][c], origin[r][c])
            for r in range(n)
            for c in range(n)
            if grid[r][c] > 0.0
        ]
        _verify_split_conservation(tagged, z, splits)
    return _finish(raw, dp, dq, swapped, n_rows, n_cols)


def min_entropy_coupling_sparse(
    p: Distribution | Sequence[float],
    q: Distribution | Sequence[float],
    debug: bool = False,
) -> SparseCoupling:
    """O(n log n) coupling engine over two priority queues.

    Only moved masses are materialized: pieces travelling along a row wait in
    one queue, pieces travelling down a column in the other, each keyed by
    mass with its fixed coordinate attached. At index i the queue total plus
    z_i either equals the marginal (the queue drains into this index) or
    overflows it (a greedy min-first split retains exactly the missing
    amount and requeues the remainder). Same output contract as the dense
    engine.
    """
    dp, dq, swapped, n_rows, n_cols = _prepare(p, q)
    n = dp.n
    z = glb(dp, dq).masses
    pm, qm = dp.masses, dq.masses
    q_col = MassPool()
    q_row = MassPool()
    raw: list[tuple[float, int, int]] = []
    tagged: list[tuple[float, int]] = []
    splits: dict[int, tuple[float, float]] = {}

    for i in range(n - 1, -1, -1):
        zi = z[i]
        col_over = q_col.total + zi > qm[i] + INTERNAL_TOL
        row_over = q_row.total + zi > pm[i] + INTERNAL_TOL
        _check_one_sided(col_over, row_over, i)
        z_d = zi
        if col_over:
            res, taken = q_col.split(zi, qm[i])
            for mass, fixed_row in taken:
                raw.append((mass, fixed_row, i))
                tagged.append((mass, fixed_row))
            z_d = res.z_d
            if res.z_r > 0.0:
                q_col.push(res.z_r, i)
                splits[i] = (res.z_d, res.z_r)
        else:
            if debug and abs(q_col.total + zi - qm[i]) > NORMALIZATION_TOL:
                raise InternalError(f"column {i} neither overflows nor balances")
            for mass, fixed_row in q_col.drain():
                raw.append((mass, fixed_row, i))
                tagged.append((mass, fixed_row))
        if row_over:
            res, taken = q_row.split(zi, pm[i])
            for mass, fixed_col in taken:
                raw.append((mass, i, fixed_col))
                tagged.append((mass, fixed_col))
            z_d = res.z_d
            if res.z_r > 0.0:
                q_row.push(res.z_r, i)
                splits[i] = (res.z_d, res.z_r)
        else:
            if debug and abs(q_row.total + zi - pm[i]) > NORMALIZATION_TOL:
                raise InternalError(f"row {i} neither overflows nor balances")
            for mass, fixed_col in q_row.drain():
                raw.append((mass, i, fixed_col))
                tagged.append((mass, fixed_col))
        if z_d > 0.0:
            raw.append((z_d, i, i))
            tagged.append((z_d, i))

    if len(q_col) or len(q_row):
        raise InternalError("leftover queued mass after the final index")
    if debug:
        _verify_split_conservation(tagged, z, splits)
    return _finish(raw, dp, dq, swapped, n_rows, n_cols)


def _verify_split_conservation(
    tagged: list[tuple[float, int]],
    z: tuple[float, ...],
    splits: dict[int, tuple[float, float]],
) -> None:
    # every output value descends from exactly one z component: either the
    # component whole, or one of the two recorded pieces of its single split
    groups: dict[int, list[float]] = {}
    for value, origin in tagged:
        groups.setdefault(origin, []).append(value)
    for j, zj in enumerate(z):
        got = sorted(groups.get(j, ()))
        if j in splits:
            expect = sorted(v for v in splits[j] if v > 0.0)
        else:
            expect = [zj] if zj > 0.0 else []
        if got != expect:
            raise InternalError(f"component {j} pieces {got} do not match split {expect}")


def is_valid_coupling(
    m: SparseCoupling,
    p: Distribution | Sequence[float],
    q: Distribution | Sequence[float],
    tol: float = NORMALIZATION_TOL,
) -> tuple[bool, str]:
    """Check every coupling invariant against the prescribed marginals.

    Returns (True, "ok") or (False, diagnostic); the diagnostic names the
    first violated row or column in index order.
    """
    dp = as_distribution(p)
    dq = as_distribution(q)
    if m.n_rows != dp.n:
        return False, f"n_rows is {m.n_rows}, first marginal has {dp.n} components"
    if m.n_cols != dq.n:
        return False, f"n_cols is {m.n_cols}, second marginal has {dq.n} components"
    seen: set[tuple[int, int]] = set()
    row_sums = [[] for _ in range(m.n_rows)]
    col_sums = [[] for _ in range(m.n_cols)]
    for e in m.entries:
        if e.value <= 0.0:
            return False, f"entry ({e.row}, {e.col}) has non-positive value {e.value!r}"
        if not (0 <= e.row < m.n_rows and 0 <= e.col < m.n_cols):
            return False, f"entry ({e.row}, {e.col}) is out of range"
        if (e.row, e.col) in seen:
            return False, f"duplicate entry at ({e.row}, {e.col})"
        seen.add((e.row, e.col))
        row_sums[e.row].append(e.value)
        col_sums[e.col].append(e.value)
    pvec = dp.to_caller_order()
    qvec = dq.to_caller_order()
    for r in range(m.n_rows):
        total = math.fsum(row_sums[r])
        if abs(total - pvec[r]) > tol:
            return False, f"row {r} sums to {total!r}, expected {pvec[r]!r}"
    for c in range(m.n_cols):
        total = math.fsum(col_sums[c])
        if abs(total - qvec[c]) > tol:
            return False, f"column {c} sums to {total!r}, expected {qvec[c]!r}"
    bound = 2 * max(m.n_rows, m.n_cols)
    if len(m.entries) > bound:
        return False, f"{len(m.entries)} entries exceed the support bound {bound}"
    return True, "ok"
