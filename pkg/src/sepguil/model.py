"""Core domain types and exhaustive generators.

The objects here are deliberately small and immutable: multidimensional
permutations (matrices whose rows are permutations, first row the
identity), colored binary trees encoding guillotine partitions, and
colored Schroder paths.  The two generators at the bottom feed every
brute-force cross-check in the package, so their iteration order is
fixed and documented.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

from .errors import DomainError, ParseError


@dataclass(frozen=True)
class DPermutation:
    """A d x n matrix whose rows are permutations of 1..n, row 1 the identity.

    Equivalently: a set of n points in the discrete d-cube with exactly one
    point on each axis-aligned hyperplane.
    """

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if not self.rows or not self.rows[0]:
            raise DomainError("a d-permutation needs at least one row and one column")
        n = len(self.rows[0])
        identity = tuple(range(1, n + 1))
        if self.rows[0] != identity:
            raise DomainError(f"first row must be the identity 1..{n}, got {self.rows[0]}")
        for i, row in enumerate(self.rows):
            if len(row) != n or tuple(sorted(row)) != identity:
                raise DomainError(f"row {i + 1} is not a permutation of 1..{n}: {row}")

    @property
    def d(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.rows[0])

    @classmethod
    def from_rows(cls, rows) -> "DPermutation":
        return cls(tuple(tuple(int(v) for v in row) for row in rows))

    @classmethod
    def identity(cls, d: int, n: int) -> "DPermutation":
        if d < 1 or n < 1:
            raise DomainError("identity d-permutation needs d >= 1 and n >= 1")
        row = tuple(range(1, n + 1))
        return cls((row,) * d)

    def column(self, j: int) -> tuple[int, ...]:
        """The j-th column, 1-indexed."""
        return tuple(row[j - 1] for row in self.rows)

    def to_json_dict(self) -> dict:
        return {"d": self.d, "n": self.n, "rows": [list(row) for row in self.rows]}

    @classmethod
    def from_json_dict(cls, obj) -> "DPermutation":
        if not isinstance(obj, dict) or "rows" not in obj:
            raise ParseError("expected an object with a 'rows' field")
        try:
            perm = cls.from_rows(obj["rows"])
        except (TypeError, DomainError) as exc:
            raise ParseError(f"invalid d-permutation: {exc}") from exc
        for key in ("d", "n"):
            if key in obj and obj[key] != getattr(perm, key):
                raise ParseError(f"declared {key}={obj[key]} does not match rows")
        return perm


@dataclass(frozen=True)
class PrimaryBlockStructure:
    """Per-row orientation of a top-level split: (1, 2) or (2, 1) per row.

    Row 1 is always (1, 2), so there are exactly 2**(d-1) distinct
    structures for a given d.
    """

    rows: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if not self.rows:
            raise DomainError("a block structure needs at least one row")
        if self.rows[0] != (1, 2):
            raise DomainError("row 1 of a block structure is always (1, 2)")
        for row in self.rows:
            if row not in ((1, 2), (2, 1)):
                raise DomainError(f"block structure rows must be (1, 2) or (2, 1), got {row}")

    @property
    def d(self) -> int:
        return len(self.rows)

    @property
    def flips(self) -> tuple[bool, ...]:
        """True per row where the left block sits above the right block."""
        return tuple(row == (2, 1) for row in self.rows)

    @classmethod
    def from_flips(cls, flips) -> "PrimaryBlockStructure":
        return cls(tuple((2, 1) if f else (1, 2) for f in flips))


@dataclass(frozen=True)
class ColoredTree:
    """A vertex-colored binary tree; the empty tree is represented by None.

    The one structural invariant, enforced on construction, is that no
    vertex has a right child of its own color.  This is exactly the
    condition for the tree to encode a guillotine partition when colors
    are read as cut directions.
    """

    color: int
    left: Optional["ColoredTree"] = None
    right: Optional["ColoredTree"] = None

    def __post_init__(self) -> None:
        if self.color < 0:
            raise DomainError(f"colors are nonnegative integers, got {self.color}")
        if self.right is not None and self.right.color == self.color:
            raise DomainError(
                f"right child repeats its parent's color {self.color}; "
                "no such tree encodes a guillotine partition"
            )


Tree = Optional[ColoredTree]
TreePredicate = Callable[[Tree], bool]


def tree_size(t: Tree) -> int:
    """Number of vertices (cuts); the empty tree has size 0."""
    if t is None:
        return 0
    return 1 + tree_size(t.left) + tree_size(t.right)


def tree_vertices(t: Tree) -> Iterator[ColoredTree]:
    """All vertices in preorder."""
    if t is None:
        return
    yield t
    yield from tree_vertices(t.left)
    yield from tree_vertices(t.right)


def tree_colors_in_range(t: Tree, d: int) -> bool:
    return all(0 <= v.color < d for v in tree_vertices(t))


def tree_to_json_dict(t: Tree):
    if t is None:
        return None
    return {
        "color": t.color,
        "left": tree_to_json_dict(t.left),
        "right": tree_to_json_dict(t.right),
    }


def tree_from_json_dict(obj) -> Tree:
    if obj is None:
        return None
    if not isinstance(obj, dict) or "color" not in obj:
        raise ParseError("expected null or an object with 'color', 'left', 'right'")
    try:
        return ColoredTree(
            int(obj["color"]),
            tree_from_json_dict(obj.get("left")),
            tree_from_json_dict(obj.get("right")),
        )
    except DomainError as exc:
        raise ParseError(f"invalid colored tree: {exc}") from exc


@dataclass(frozen=True)
class ColoredSchroderPath:
    """A lattice path of colored up-steps U<c>, down-steps D and level-steps L.

    Up and down steps balance, no prefix dips below the axis, and a level
    step counts two units of length, so a path of length 2n has
    #U + #L = n.
    """

    tokens: tuple[str, ...]

    def __post_init__(self) -> None:
        height = 0
        for tok in self.tokens:
            if tok == "D":
                height -= 1
            elif tok == "L":
                pass
            elif tok.startswith("U") and tok[1:].isdigit():
                height += 1
            else:
                raise DomainError(f"bad path token {tok!r} (expected U<c>, D or L)")
            if height < 0:
                raise DomainError("path dips below the axis")
        if height != 0:
            raise DomainError("path does not return to the axis")

    @property
    def half_length(self) -> int:
        """n, where the path has length 2n with level steps counting 2."""
        return sum(1 for tok in self.tokens if tok != "D")

    def up_colors(self) -> tuple[int, ...]:
        return tuple(int(tok[1:]) for tok in self.tokens if tok.startswith("U"))

    def __str__(self) -> str:
        return " ".join(self.tokens)

    @classmethod
    def from_string(cls, text: str) -> "ColoredSchroderPath":
        tokens = tuple(text.split())
        try:
            return cls(tokens)
        except DomainError as exc:
            raise ParseError(f"invalid path {text!r}: {exc}") from exc


def enumerate_dperms(d: int, n: int) -> Iterator[DPermutation]:
    """Every d-permutation of 1..n, exactly once.

    Rows 2..d range independently over all permutations; the stream is in
    lexicographic order of the concatenation of those rows, so two runs
    always agree.  There are (n!)**(d-1) items.
    """
    if d < 1 or n < 1:
        raise DomainError(f"need d >= 1 and n >= 1, got d={d}, n={n}")
    identity = tuple(range(1, n + 1))
    for tail in itertools.product(itertools.permutations(identity), repeat=d - 1):
        yield DPermutation((identity,) + tail)


def _shapes(n: int) -> Iterator:
    """Unlabeled binary tree shapes with n vertices, as nested (left, right) pairs."""
    if n == 0:
        yield None
        return
    for left_size in range(n):
        for left in _shapes(left_size):
            for right in _shapes(n - 1 - left_size):
                yield (left, right)


def _colorings(shape, d: int, banned: Optional[int]) -> Iterator[Tree]:
    if shape is None:
        yield None
        return
    left_shape, right_shape = shape
    for color in range(d):
        if color == banned:
            continue
        for left in _colorings(left_shape, d, None):
            for right in _colorings(right_shape, d, color):
                yield ColoredTree(color, left, right)


def enumerate_colored_trees(
    d: int, n: int, predicate: Optional[TreePredicate] = None
) -> Iterator[Tree]:
    """Every colored binary tree with n vertices, colors 0..d-1 and no
    right child repeating its parent's color; optionally filtered.

    Order is deterministic: shapes first (recursively, by left-subtree
    size), then color assignments lexicographically in preorder.  For
    n = 0 the single empty tree (None) is produced.
    """
    if d < 1:
        raise DomainError(f"need d >= 1, got d={d}")
    if n < 0:
        raise DomainError(f"need n >= 0, got n={n}")
    for shape in _shapes(n):
        for tree in _colorings(shape, d, None):
            if predicate is None or predicate(tree):
                yield tree


def dumps(obj) -> str:
    """Serialize a domain object to its canonical JSON text."""
    if isinstance(obj, DPermutation):
        return json.dumps(obj.to_json_dict())
    if isinstance(obj, ColoredSchroderPath):
        return json.dumps(str(obj))
    if obj is None or isinstance(obj, ColoredTree):
        return json.dumps(tree_to_json_dict(obj))
    raise TypeError(f"cannot serialize {type(obj).__name__}")
