"""Exact dense linear algebra over the Gaussian rationals."""

from __future__ import annotations

from .scalars import ONE, ZERO


class LinearSolution:
    """Particular solution (or None) plus a basis of the homogeneous kernel."""

    __slots__ = ("particular", "nullspace_basis")

    def __init__(self, particular, nullspace_basis):
        self.particular = particular
        self.nullspace_basis = list(nullspace_basis)

    @property
    def solvable(self) -> bool:
        return self.particular is not None


def rref(rows):
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    rows = [list(r) for r in rows]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for k in range(r, len(rows)):
            if rows[k][c]:
                pivot = k
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = ONE / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for k in range(len(rows)):
            if k != r and rows[k][c]:
                factor = rows[k][c]
                rows[k] = [a - factor * b for a, b in zip(rows[k], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r] + [row for row in rows[r:]], pivots


def nullspace(rows, ncols=None) -> list:
    """Basis of the exact kernel of the matrix (rows of GaussianRational)."""
    rows = [list(r) for r in rows]
    if ncols is None:
        if not rows:
            raise ValueError("ncols required for an empty matrix")
        ncols = len(rows[0])
    if not rows:
        rows = [[ZERO] * ncols]
    reduced, pivots = rref(rows)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [ZERO] * ncols
        v[fc] = ONE
        for r, pc in enumerate(pivots):
            v[pc] = -reduced[r][fc]
        basis.append(v)
    return basis


def solve(rows, rhs) -> LinearSolution:
    """Solve A x = b exactly; particular uses zero for the free unknowns."""
    rows = [list(r) for r in rows]
    if not rows:
        raise ValueError("empty system")
    ncols = len(rows[0])
    aug = [r + [b] for r, b in zip(rows, rhs)]
    reduced, pivots = rref(aug)
    # inconsistent iff a pivot lands in the rhs column
    if ncols in pivots:
        particular = None
        pivots = [p for p in pivots if p < ncols]
    else:
        particular = [ZERO] * ncols
        for r, pc in enumerate(pivots):
            particular[pc] = reduced[r][ncols]
    return LinearSolution(particular, nullspace(rows, ncols))


def matvec(rows, vec):
    return [sum((a * x for a, x in zip(row, vec)), ZERO) for row in rows]


def eliminate_vector(basis, vector):
    """Quotient a solution-space basis by one known solution direction.

    Subtracts multiples of `vector` so every returned basis element has a
    zero in vector's pivot coordinate, then re-reduces to independence.
    """
    vector = list(vector)
    pivot = next((k for k, x in enumerate(vector) if x), None)
    if pivot is None:
        return [list(b) for b in basis]
    adjusted = []
    for b in basis:
        b = list(b)
        if b[pivot]:
            f = b[pivot] / vector[pivot]
            b = [x - f * y for x, y in zip(b, vector)]
        if any(b):
            adjusted.append(b)
    if not adjusted:
        return []
    reduced, pivots = rref(adjusted)
    return [row for row in reduced[: len(pivots)]]
