"""Invertible transforms between trees, colored lattice paths and
separable d-permutations, plus the restricted-tree predicates and a
planar SVG renderer.

Conventions fixed here:

* Tree colors are 0..d-1 internally; color 0 plays the distinguished role
  of the level-step color in the path bijection.
* The tree <-> d-permutation correspondence maps the axes of a
  2**(d-1)-dimensional box to block structures through the binary
  representation: axis ``a`` flips row k (k = 2..d) exactly when bit
  k - 2 of ``a`` is set.
* Decomposing a separable d-permutation always splits at the largest
  separation point: trailing parallel cuts then live in the left block,
  matching the "highest principal cut is the root" convention, and the
  right child can never repeat the root color.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .errors import DomainError, ParseError, ResourceLimitError, UnsupportedDimensionError
from .model import (
    ColoredSchroderPath,
    ColoredTree,
    DPermutation,
    PrimaryBlockStructure,
    Tree,
    enumerate_dperms,
    tree_size,
    tree_vertices,
)
from .separability import (
    DEFAULT_MAX_WORK,
    blocks,
    is_separable,
    primary_block_structure,
    separation_points,
)


@dataclass(frozen=True)
class AxisEncoding:
    """Canonical bijection between the axes 0..2**(d-1)-1 of a
    2**(d-1)-dimensional box and the primary block structures of
    d-permutations."""

    d: int

    def __post_init__(self) -> None:
        if self.d < 1:
            raise DomainError("dimension d must be >= 1")

    @property
    def axis_count(self) -> int:
        return 2 ** (self.d - 1)

    def structure_of(self, axis: int) -> PrimaryBlockStructure:
        if not 0 <= axis < self.axis_count:
            raise DomainError(f"axis {axis} outside 0..{self.axis_count - 1}")
        flips = [False] + [bool(axis >> k & 1) for k in range(self.d - 1)]
        return PrimaryBlockStructure.from_flips(flips)

    def axis_of(self, structure: PrimaryBlockStructure) -> int:
        if structure.d != self.d:
            raise DomainError(f"structure has {structure.d} rows, expected {self.d}")
        return sum(1 << k for k, flip in enumerate(structure.flips[1:]) if flip)


# ---------------------------------------------------------------------------
# Trees <-> colored Schroder paths.
# ---------------------------------------------------------------------------


def tree_to_path(tree: Tree, d: int) -> ColoredSchroderPath:
    """Encode a tree with colors 0..d-1 as a path with up-step colors
    1..d-1; inverse of :func:`path_to_tree`."""
    if d < 1:
        raise DomainError("dimension d must be >= 1")
    if not all(0 <= v.color < d for v in tree_vertices(tree)):
        raise DomainError(f"tree colors must lie in 0..{d - 1}")

    def emit(t: Tree) -> list[str]:
        if t is None:
            return []
        if t.right is None:
            if t.color == 0:
                return ["L"] + emit(t.left)
            return [f"U{t.color}"] + emit(t.left) + ["D"]
        up = (t.color - t.right.color) % d
        # up != 0 because a right child never repeats its parent's color
        return [f"U{up}"] + emit(t.left) + ["D"] + emit(t.right)

    return ColoredSchroderPath(tuple(emit(tree)))


def path_to_tree(path: ColoredSchroderPath, d: int) -> Tree:
    """Decode a colored path into a tree.

    The decomposition is unique: a leading level step contributes a color-0
    root with no right branch; a leading up-step of color a with matching
    down-step followed by a nonempty remainder R contributes a root colored
    (a + b) mod d where b is the root color of the decoded R.
    """
    if d < 1:
        raise DomainError("dimension d must be >= 1")

    def parse(tokens: tuple[str, ...]) -> Tree:
        if not tokens:
            return None
        head = tokens[0]
        if head == "L":
            return ColoredTree(0, parse(tokens[1:]), None)
        if head == "D":
            raise ParseError("path starts with a down-step")
        color = int(head[1:])
        if not 1 <= color < d:
            raise ParseError(f"up-step color {color} outside 1..{d - 1}")
        depth = 1
        match = None
        for idx in range(1, len(tokens)):
            tok = tokens[idx]
            if tok == "D":
                depth -= 1
                if depth == 0:
                    match = idx
                    break
            elif tok != "L":
                depth += 1
        if match is None:
            raise ParseError("unbalanced up-step")
        inner = parse(tokens[1:match])
        rest = tokens[match + 1 :]
        if not rest:
            return ColoredTree(color, inner, None)
        right = parse(rest)
        assert right is not None
        return ColoredTree((color + right.color) % d, inner, right)

    return parse(path.tokens)


# ---------------------------------------------------------------------------
# Trees <-> separable d-permutations.
# ---------------------------------------------------------------------------


def tree_to_dperm(tree: Tree, d: int) -> DPermutation:
    """Build the separable d-permutation of a tree whose colors are axes of
    a 2**(d-1)-dimensional box.

    The root is the highest principal cut: the left subtree becomes the
    left block, the right subtree the right block, oriented row by row by
    the root axis.  A tree with n vertices yields n + 1 columns.
    """
    encoding = AxisEncoding(d)
    q = encoding.axis_count
    if not all(0 <= v.color < q for v in tree_vertices(tree)):
        raise DomainError(f"tree colors must lie in 0..{q - 1} (axes of a {q}-box)")

    def build(t: Tree) -> DPermutation:
        if t is None:
            return DPermutation.identity(d, 1)
        left = build(t.left)
        right = build(t.right)
        ell, r = left.n, right.n
        rows = []
        for i, flip in enumerate(encoding.structure_of(t.color).flips):
            if flip:
                rows.append(tuple(v + r for v in left.rows[i]) + right.rows[i])
            else:
                rows.append(left.rows[i] + tuple(v + ell for v in right.rows[i]))
        return DPermutation(tuple(rows))

    return build(tree)


def dperm_to_tree(perm: DPermutation) -> Tree:
    """Inverse of :func:`tree_to_dperm`; requires a separable input.

    Splits at the largest separation point, so that any stack of parallel
    top-level cuts is unwound from the top: the right block can then never
    share the root's block structure, which is exactly the guillotine
    validity of the output tree.
    """
    if not is_separable(perm):
        raise DomainError("d-permutation is not separable")
    encoding = AxisEncoding(perm.d)

    def decompose(p: DPermutation) -> Tree:
        if p.n == 1:
            return None
        ell = max(separation_points(p).points)
        left, right = blocks(p, ell)
        color = encoding.axis_of(primary_block_structure(p))
        return ColoredTree(color, decompose(left), decompose(right))

    return decompose(perm)


def restricted_separable_count(
    d: int,
    allowed_axes: Iterable[int],
    n: int,
    max_work: int = DEFAULT_MAX_WORK,
) -> int:
    """Separable d-permutations of 1..n whose every recursive block
    structure lies in ``allowed_axes``; equals g_q(n-1) for q allowed axes,
    whichever axes are chosen."""
    encoding = AxisEncoding(d)
    axes = frozenset(allowed_axes)
    if not axes:
        raise DomainError("the allowed axis set must be nonempty")
    if not all(0 <= a < encoding.axis_count for a in axes):
        raise DomainError(f"axes must lie in 0..{encoding.axis_count - 1}")
    if n < 1:
        raise DomainError("need n >= 1")
    work = math.factorial(n) ** (d - 1)
    if work > max_work:
        raise ResourceLimitError(
            f"enumerating (n!)**(d-1) = {work} d-permutations exceeds "
            f"the work bound {max_work}"
        )
    count = 0
    for perm in enumerate_dperms(d, n):
        if not is_separable(perm):
            continue
        tree = dperm_to_tree(perm)
        if all(v.color in axes for v in tree_vertices(tree)):
            count += 1
    return count


# ---------------------------------------------------------------------------
# Restricted-tree predicates.
# ---------------------------------------------------------------------------


def boundary_predicate(tree: Tree) -> bool:
    """True for trees of boundary partitions (every cut reaches the box
    boundary on at least one side of each face pair).

    Forbidden: a vertex v in the right subtree of a same-colored vertex u
    whose left child has a different color (such a child is sandwiched
    between the u and v cuts), and the left/right mirror image.  A
    same-colored child continues the stack and stays legal.
    """
    for u in tree_vertices(tree):
        c = u.color
        for v in tree_vertices(u.right):
            if v.color == c and v.left is not None and v.left.color != c:
                return False
        for v in tree_vertices(u.left):
            if v.color == c and v.right is not None and v.right.color != c:
                return False
    return True


def alternating_predicate(tree: Tree, m: int) -> bool:
    """True when no m vertices form a same-colored chain of left children,
    i.e. every subbox has at most m - 1 parallel principal cuts."""
    if m < 2:
        raise DomainError("need m >= 2")
    for v in tree_vertices(tree):
        length = 1
        walk = v
        while walk.left is not None and walk.left.color == v.color:
            length += 1
            walk = walk.left
            if length >= m:
                return False
    return True


def alternating_filter(m: int):
    """Predicate factory for :func:`enumerate_colored_trees` filters."""
    return lambda tree: alternating_predicate(tree, m)


def window_predicate(tree: Tree) -> bool:
    """True for trees of partitions in which no principal cut is met from
    both sides by same-direction cuts.

    Forbidden: (a) a vertex whose left and right children share a color;
    (b) a vertex p whose left child continues p's stack (same color) and
    whose right child shares its color with that child's right child.
    """
    for p in tree_vertices(tree):
        r, q = p.left, p.right
        if r is None or q is None:
            continue
        if r.color == q.color:
            return False
        if r.color == p.color and r.right is not None and r.right.color == q.color:
            return False
    return True


# ---------------------------------------------------------------------------
# Planar rendering.
# ---------------------------------------------------------------------------

_SVG_HEADER = (
    '<?xml version="1.0" encoding="UTF-8"?>\n'
    '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
    'width="{w}" height="{h}" viewBox="0 0 {w} {h}">\n'
)


def render_planar(tree: Tree, size: int = 400) -> str:
    """Draw a planar (d = 2) partition as an SVG subdivision of a square.

    Color 0 cuts horizontally (blocks stacked, left block at the bottom),
    color 1 vertically (left block on the left).  Split positions are
    proportional to leaf counts so nested cuts stay visible; a tree with
    n vertices yields n + 1 rectangles.
    """
    if not all(v.color in (0, 1) for v in tree_vertices(tree)):
        raise UnsupportedDimensionError("the renderer handles colors 0 and 1 only (d = 2)")

    leaves: list[tuple[Fraction, Fraction, Fraction, Fraction]] = []

    def walk(t: Tree, x0: Fraction, y0: Fraction, x1: Fraction, y1: Fraction) -> None:
        if t is None:
            leaves.append((x0, y0, x1, y1))
            return
        share = Fraction(tree_size(t.left) + 1, tree_size(t) + 1)
        if t.color == 0:
            # horizontal cut; SVG y grows downward, so the left block
            # (geometrically below) takes the bottom strip
            y_split = y1 - (y1 - y0) * share
            walk(t.left, x0, y_split, x1, y1)
            walk(t.right, x0, y0, x1, y_split)
        else:
            x_split = x0 + (x1 - x0) * share
            walk(t.left, x0, y0, x_split, y1)
            walk(t.right, x_split, y0, x1, y1)

    one = Fraction(1)
    walk(tree, Fraction(0), Fraction(0), one, one)

    def fmt(v: Fraction) -> str:
        return f"{float(v * size):.2f}"

    parts = [_SVG_HEADER.format(w=size, h=size)]
    for x0, y0, x1, y1 in leaves:
        parts.append(
            f'  <rect x="{fmt(x0)}" y="{fmt(y0)}" '
            f'width="{fmt(x1 - x0)}" height="{fmt(y1 - y0)}" '
            'fill="white" stroke="black" stroke-width="1"/>\n'
        )
    parts.append("</svg>\n")
    return "".join(parts)
