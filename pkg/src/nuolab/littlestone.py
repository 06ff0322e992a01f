"""Exact Littlestone dimension, shattered-tree witnesses, and the minimax
mistake-game oracle for finite explicit classes.

The dimension recursion and the game-tree oracle are two independent code
paths with separate memo tables; their agreement on finite classes is one
of the verification suite's core checks, so neither may delegate to the
other.
"""
from __future__ import annotations

import weakref
from dataclasses import dataclass
from typing import Optional, Sequence

from .hypotheses import DomainError, FiniteClass, Point


class StructureError(ValueError):
    """A witness whose shape does not match its declared depth."""


class CapacityError(RuntimeError):
    """An oracle call beyond its configured exact-computation caps."""


# ---------------------------------------------------------------------------
# per-class workspace: memoized dimension over surviving-row index sets
# ---------------------------------------------------------------------------

class _Workspace:
    """Dimension memo for one root class, keyed by the frozenset of
    surviving row indices. Different constraint orders reach the same
    version space, so constraint lists are never part of the key.
    Entries are write-once values of a pure function, so concurrent use
    under the GIL returns identical results regardless of interleaving."""

    def __init__(self, root: FiniteClass):
        self.root = root
        self.memo: dict[frozenset[int], int] = {}

    def split(self, ids: frozenset[int], col: int):
        rows = self.root.rows
        zeros = frozenset(i for i in ids if rows[i][col] == 0)
        return zeros, ids - zeros

    def ldim(self, ids: frozenset[int]) -> int:
        if not ids:
            raise DomainError("Ldim undefined for the empty class")
        cached = self.memo.get(ids)
        if cached is not None:
            return cached
        best = 0
        if len(ids) > 1:
            for col in range(len(self.root.domain)):
                zeros, ones = self.split(ids, col)
                if zeros and ones:
                    cand = 1 + min(self.ldim(zeros), self.ldim(ones))
                    if cand > best:
                        best = cand
        self.memo[ids] = best
        return best


_workspaces: "weakref.WeakKeyDictionary[FiniteClass, _Workspace]" = weakref.WeakKeyDictionary()


def _workspace(root: FiniteClass) -> _Workspace:
    ws = _workspaces.get(root)
    if ws is None:
        ws = _Workspace(root)
        _workspaces[root] = ws
    return ws


# ---------------------------------------------------------------------------
# version spaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VersionSpace:
    """The surviving rows of a root class under a list of (point, label)
    constraints. Cheap to fork; dimension queries share the root's memo."""

    root: FiniteClass
    ids: frozenset[int]
    constraints: tuple[tuple[Point, int], ...] = ()

    @classmethod
    def full(cls, root: FiniteClass) -> "VersionSpace":
        return cls(root, frozenset(range(len(root))))

    @property
    def size(self) -> int:
        return len(self.ids)

    @property
    def is_empty(self) -> bool:
        return not self.ids

    def labels(self) -> list:
        return [self.root.labels[i] for i in sorted(self.ids)]

    def restrict(self, x: Point, y: int) -> "VersionSpace":
        col = self.root.point_index(x)
        keep = frozenset(i for i in self.ids if self.root.rows[i][col] == y)
        return VersionSpace(self.root, keep, self.constraints + ((x, y),))

    def ldim(self) -> int:
        return _workspace(self.root).ldim(self.ids)


def soa_prediction(vs: VersionSpace, x: Point) -> int:
    """The label whose restriction has the larger dimension.

    Ties go to 0; a label with an empty restriction is never chosen while
    the other is non-empty. Empty version spaces have no prediction.
    """
    if vs.is_empty:
        raise DomainError("no prediction from an empty version space")
    ws = _workspace(vs.root)
    zeros, ones = ws.split(vs.ids, vs.root.point_index(x))
    if not ones:
        return 0
    if not zeros:
        return 1
    return 1 if ws.ldim(ones) > ws.ldim(zeros) else 0


# ---------------------------------------------------------------------------
# dimension and witnesses
# ---------------------------------------------------------------------------

def ldim(cls: FiniteClass) -> int:
    """Exact dimension: the largest d with a depth-d shattered tree."""
    if cls.is_empty:
        raise DomainError("Ldim undefined for the empty class")
    return VersionSpace.full(cls).ldim()


def path_node_indices(labeling: Sequence[int]) -> list[int]:
    """Level-order node indices visited by a labeling: starting at the root
    (index 1), the label y moves from node i to node 2i + y."""
    out, node = [], 1
    for y in labeling:
        out.append(node)
        node = 2 * node + y
    return out


@dataclass(frozen=True)
class ShatteredTreeWitness:
    """A depth-d point array in level order, every labeling of which is
    realized by some hypothesis. `realizers` maps each labeling to the id
    of one consistent hypothesis."""

    depth: int
    points: tuple[Point, ...]
    realizers: Optional[dict] = None

    def __post_init__(self):
        if self.depth < 1:
            raise StructureError("witness depth must be >= 1")
        if len(self.points) != 2 ** self.depth - 1:
            raise StructureError(
                f"witness of depth {self.depth} needs {2 ** self.depth - 1} points, "
                f"got {len(self.points)}")


def shattered_tree_witness(cls: FiniteClass, d: int) -> Optional[ShatteredTreeWitness]:
    """A depth-d witness if one exists, else None.

    Points are chosen level by level, pruning by the dimension of each
    node's version space; ties break to the first point in domain order.
    Points may repeat across nodes (never along a path with conflicting
    labels, which the shattering requirement itself rules out).
    """
    if d < 1:
        raise ValueError("witness depth must be >= 1 (use ldim for depth 0)")
    if cls.is_empty:
        raise DomainError("no witness for an empty class")
    ws = _workspace(cls)
    full = frozenset(range(len(cls)))
    if ws.ldim(full) < d:
        return None

    points: list[Optional[Point]] = [None] * (2 ** d - 1)

    def build(ids: frozenset[int], remaining: int, node: int) -> None:
        if remaining == 0:
            return
        for col, x in enumerate(cls.domain):
            zeros, ones = ws.split(ids, col)
            if not zeros or not ones:
                continue
            if ws.ldim(zeros) >= remaining - 1 and ws.ldim(ones) >= remaining - 1:
                points[node - 1] = x
                build(zeros, remaining - 1, 2 * node)
                build(ones, remaining - 1, 2 * node + 1)
                return
        raise AssertionError("dimension guarantee violated during witness search")

    build(full, d, 1)

    realizers: dict[tuple[int, ...], int | str] = {}
    from itertools import product
    for labeling in product((0, 1), repeat=d):
        ids = full
        for node, y in zip(path_node_indices(labeling), labeling):
            col = cls.point_index(points[node - 1])
            ids = frozenset(i for i in ids if cls.rows[i][col] == y)
        realizers[labeling] = cls.labels[min(ids)]

    return ShatteredTreeWitness(d, tuple(points), realizers)


def verify_witness(witness: ShatteredTreeWitness, cls: FiniteClass) -> bool:
    """Check every labeling is realized, using the level-order index walk."""
    d = witness.depth
    if len(witness.points) != 2 ** d - 1:
        raise StructureError("point array does not match witness depth")
    cols = [cls.point_index(p) for p in witness.points]
    from itertools import product
    for labeling in product((0, 1), repeat=d):
        nodes = path_node_indices(labeling)
        if not any(all(row[cols[n - 1]] == y for n, y in zip(nodes, labeling))
                   for row in cls.rows):
            return False
    return True


# ---------------------------------------------------------------------------
# minimax game oracle
# ---------------------------------------------------------------------------

def minimax_mistakes(cls: FiniteClass, max_points: int = 8, max_rows: int = 96) -> int:
    """Exact value of the adaptive mistake game on a finite class.

    Each turn the adversary picks a point and, after seeing the prediction,
    any label that keeps the surviving set non-empty; the learner predicts
    to minimize total mistakes. Play effectively ends once no point splits
    the surviving set. Intended for small instances only; beyond the caps
    this raises instead of approximating.
    """
    if cls.is_empty:
        raise DomainError("mistake game undefined for the empty class")
    if len(cls.domain) > max_points or len(cls) > max_rows:
        raise CapacityError(
            f"instance {len(cls)} rows x {len(cls.domain)} points exceeds caps "
            f"({max_rows} rows, {max_points} points)")

    rows = cls.rows
    ncols = len(cls.domain)
    memo: dict[frozenset[int], int] = {}

    def value(ids: frozenset[int]) -> int:
        cached = memo.get(ids)
        if cached is not None:
            return cached
        best = 0
        if len(ids) > 1:
            for col in range(ncols):
                zeros = frozenset(i for i in ids if rows[i][col] == 0)
                ones = ids - zeros
                if not zeros or not ones:
                    continue
                v0, v1 = value(zeros), value(ones)
                predict_zero = max(v0, 1 + v1)
                predict_one = max(1 + v0, v1)
                outcome = min(predict_zero, predict_one)
                if outcome > best:
                    best = outcome
        memo[ids] = best
        return best

    return value(frozenset(range(len(cls))))
