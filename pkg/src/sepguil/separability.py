"""Separability testing, block decomposition and pattern containment.

A d-permutation splits at position l when every row sends the first l
columns either entirely below or entirely above the remaining columns;
it is separable when it is a single column or some split yields two
separable blocks.  Separability is equivalent to avoiding three small
patterns (one with two rows, two with three rows) under the row-invariant
containment order implemented by :func:`contains_pattern`; the counting
operations at the bottom are the brute-force side of that equivalence.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .errors import ConsistencyError, DomainError, PatternError, ResourceLimitError
from .model import DPermutation, PrimaryBlockStructure, enumerate_dperms

DEFAULT_MAX_WORK = 2_000_000

_separable_cache: dict[tuple, bool] = {}


def standardize(values: Iterable[int]) -> tuple[int, ...]:
    """Order-isomorphic relabeling onto 1..len(values)."""
    values = tuple(values)
    rank = {v: i + 1 for i, v in enumerate(sorted(values))}
    return tuple(rank[v] for v in values)


@dataclass(frozen=True)
class SeparationResult:
    """All top-level split points of a d-permutation, plus the (unique)
    per-row orientation they induce; ``structure`` is None when there is
    no split point."""

    points: frozenset[int]
    structure: Optional[PrimaryBlockStructure]


def separation_points(perm: DPermutation) -> SeparationResult:
    """Every l with 1 <= l < n at which ``perm`` splits, with the induced
    block structure.

    A row passes at l when its first l values are exactly 1..l (row
    orientation (1, 2)) or exactly n-l+1..n (orientation (2, 1)).
    """
    n = perm.n
    if n < 2:
        raise DomainError("separation points are defined for n >= 2")
    prefix_max = []
    prefix_min = []
    for row in perm.rows:
        maxes, mins = [], []
        hi, lo = 0, n + 1
        for v in row:
            hi = max(hi, v)
            lo = min(lo, v)
            maxes.append(hi)
            mins.append(lo)
        prefix_max.append(maxes)
        prefix_min.append(mins)

    points = []
    structure = None
    for ell in range(1, n):
        rows = []
        for i in range(perm.d):
            if prefix_max[i][ell - 1] == ell:
                rows.append((1, 2))
            elif prefix_min[i][ell - 1] == n - ell + 1:
                rows.append((2, 1))
            else:
                rows = None
                break
        if rows is None:
            continue
        points.append(ell)
        found = PrimaryBlockStructure(tuple(rows))
        if structure is None:
            structure = found
        elif structure != found:
            raise ConsistencyError(
                f"two split points of {perm.rows} induce different structures"
            )
    return SeparationResult(frozenset(points), structure)


def blocks(perm: DPermutation, ell: int) -> tuple[DPermutation, DPermutation]:
    """The left and right blocks at split point ``ell``, each relabeled
    order-isomorphically onto 1..l and 1..n-l."""
    if ell not in separation_points(perm).points:
        raise DomainError(f"{ell} is not a separation point of this d-permutation")
    left = DPermutation(tuple(standardize(row[:ell]) for row in perm.rows))
    right = DPermutation(tuple(standardize(row[ell:]) for row in perm.rows))
    return left, right


def is_separable(perm: DPermutation) -> bool:
    """True when the d-permutation decomposes recursively into order-separated
    blocks (single columns are separable)."""
    cached = _separable_cache.get(perm.rows)
    if cached is not None:
        return cached
    if perm.n == 1:
        result = True
    else:
        result = False
        for ell in sorted(separation_points(perm).points):
            left, right = blocks(perm, ell)
            if is_separable(left) and is_separable(right):
                result = True
                break
    _separable_cache[perm.rows] = result
    return result


def primary_block_structure(perm: DPermutation) -> PrimaryBlockStructure:
    """The unique per-row orientation of the top-level split of a separable
    d-permutation with n >= 2."""
    if perm.n < 2:
        raise DomainError("the block structure is defined for n >= 2")
    if not is_separable(perm):
        raise DomainError("d-permutation is not separable")
    structure = separation_points(perm).structure
    assert structure is not None
    return structure


# ---------------------------------------------------------------------------
# Patterns.
# ---------------------------------------------------------------------------


def _row_closure(rows: tuple[tuple[int, ...], ...]) -> frozenset[tuple[tuple[int, ...], ...]]:
    """All matrices obtained by permuting rows and restoring the identity
    first row by a column exchange."""
    out = set()
    for order in itertools.permutations(range(len(rows))):
        permuted = [rows[i] for i in order]
        col_order = sorted(range(len(permuted[0])), key=lambda j: permuted[0][j])
        out.add(tuple(tuple(row[j] for j in col_order) for row in permuted))
    return frozenset(out)


@dataclass(frozen=True)
class MatrixPattern:
    """A row-invariant multi-row pattern, stored as the full list of its
    matrix forms (closed under row permutation followed by the column
    exchange that restores the identity first row)."""

    name: str
    forms: tuple[DPermutation, ...]

    def __post_init__(self) -> None:
        if not self.forms:
            raise PatternError("a matrix pattern needs at least one form")
        d, n = self.forms[0].d, self.forms[0].n
        for form in self.forms:
            if (form.d, form.n) != (d, n):
                raise PatternError("all forms of a pattern must share dimensions")
        closure = _row_closure(self.forms[0].rows)
        if frozenset(f.rows for f in self.forms) != closure:
            raise PatternError(
                f"form list of {self.name!r} is not the row-permutation closure "
                f"({len(self.forms)} forms given, closure has {len(closure)})"
            )

    @property
    def d(self) -> int:
        return self.forms[0].d

    @property
    def n(self) -> int:
        return self.forms[0].n


@dataclass(frozen=True)
class ClassicalPattern:
    """A plain single-row pattern, contained as an order-isomorphic
    subsequence of the permutation (row 2 of a 2-permutation)."""

    values: tuple[int, ...]

    def __post_init__(self) -> None:
        if standardize(self.values) != self.values:
            raise PatternError(f"{self.values} is not a permutation pattern")

    @property
    def n(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class BarredPattern:
    """A single-row pattern with exactly one barred letter.

    A permutation avoids it when every occurrence of the bar-deleted
    (standardized) pattern extends to an occurrence of the full pattern.
    """

    values: tuple[int, ...]
    barred_position: int  # 1-indexed

    def __post_init__(self) -> None:
        if standardize(self.values) != self.values:
            raise PatternError(f"{self.values} is not a permutation pattern")
        if not 1 <= self.barred_position <= len(self.values):
            raise PatternError(f"barred position {self.barred_position} out of range")

    @property
    def reduced(self) -> tuple[int, ...]:
        kept = [v for i, v in enumerate(self.values, start=1) if i != self.barred_position]
        return standardize(kept)


PatternSpec = Union[MatrixPattern, ClassicalPattern, BarredPattern]


def _make_forms(name: str, *matrices) -> MatrixPattern:
    return MatrixPattern(name, tuple(DPermutation.from_rows(m) for m in matrices))


#: The three minimal non-separable patterns.  PI1 has two rows and four
#: columns; PI2 and PI3 have three rows and three columns and together
#: cover every 3x3 matrix with a 2 in both the first and last column.
PI1 = _make_forms(
    "pi1",
    [[1, 2, 3, 4], [2, 4, 1, 3]],
    [[1, 2, 3, 4], [3, 1, 4, 2]],
)
PI2 = _make_forms(
    "pi2",
    [[1, 2, 3], [2, 1, 3], [1, 3, 2]],
    [[1, 2, 3], [2, 1, 3], [3, 1, 2]],
    [[1, 2, 3], [2, 3, 1], [1, 3, 2]],
    [[1, 2, 3], [1, 3, 2], [2, 1, 3]],
    [[1, 2, 3], [1, 3, 2], [2, 3, 1]],
    [[1, 2, 3], [3, 1, 2], [2, 1, 3]],
)
PI3 = _make_forms(
    "pi3",
    [[1, 2, 3], [2, 3, 1], [3, 1, 2]],
    [[1, 2, 3], [3, 1, 2], [2, 3, 1]],
)

SEPARABILITY_PATTERNS = (PI1, PI2, PI3)


def contains_pattern_witness(
    perm: DPermutation, pattern: MatrixPattern
) -> Optional[tuple[tuple[int, ...], tuple[int, ...]]]:
    """First (rows, columns) choice, 1-indexed, whose normalization is a
    form of ``pattern``; None when the pattern is avoided.

    Rows are taken in increasing index order only; the form list absorbs
    row permutations.
    """
    if pattern.d > perm.d or pattern.n > perm.n:
        raise DomainError(
            f"pattern dimensions {pattern.d}x{pattern.n} exceed "
            f"d-permutation dimensions {perm.d}x{perm.n}"
        )
    forms = frozenset(f.rows for f in pattern.forms)
    for row_idx in itertools.combinations(range(perm.d), pattern.d):
        chosen = [perm.rows[i] for i in row_idx]
        for col_idx in itertools.combinations(range(perm.n), pattern.n):
            sub = [standardize(row[j] for j in col_idx) for row in chosen]
            order = sorted(range(pattern.n), key=lambda j: sub[0][j])
            candidate = tuple(tuple(row[j] for j in order) for row in sub)
            if candidate in forms:
                return (
                    tuple(i + 1 for i in row_idx),
                    tuple(j + 1 for j in col_idx),
                )
    return None


def contains_pattern(perm: DPermutation, pattern: MatrixPattern) -> bool:
    """Row-invariant containment: some choice of rows and columns of ``perm``
    normalizes to one of the pattern's forms."""
    return contains_pattern_witness(perm, pattern) is not None


def contains_classical(perm: Iterable[int], pattern: ClassicalPattern) -> bool:
    """Plain pattern containment in a one-row permutation."""
    values = tuple(perm)
    k = pattern.n
    if k > len(values):
        return False
    return any(
        standardize(sub) == pattern.values
        for sub in itertools.combinations(values, k)
    )


def avoids_barred(perm: Iterable[int], pattern: BarredPattern) -> bool:
    """True when every occurrence of the bar-deleted pattern in ``perm``
    extends to an occurrence of the full pattern."""
    values = tuple(perm)
    n = len(values)
    full = pattern.values
    k = len(full)
    bar = pattern.barred_position - 1
    reduced = pattern.reduced

    extendable = set()
    for pos in itertools.combinations(range(n), k):
        if standardize(values[i] for i in pos) == full:
            extendable.add(tuple(p for i, p in enumerate(pos) if i != bar))
    for pos in itertools.combinations(range(n), k - 1):
        if standardize(values[i] for i in pos) == reduced and pos not in extendable:
            return False
    return True


def _avoids_all(perm: DPermutation, patterns: Iterable[PatternSpec]) -> bool:
    for pattern in patterns:
        if isinstance(pattern, MatrixPattern):
            if pattern.d > perm.d or pattern.n > perm.n:
                continue  # cannot occur
            if contains_pattern(perm, pattern):
                return False
        elif isinstance(pattern, ClassicalPattern):
            if perm.d != 2:
                raise PatternError("single-row patterns apply to 2-row permutations")
            if contains_classical(perm.rows[1], pattern):
                return False
        elif isinstance(pattern, BarredPattern):
            if perm.d != 2:
                raise PatternError("barred patterns apply to 2-row permutations")
            if not avoids_barred(perm.rows[1], pattern):
                return False
        else:
            raise PatternError(f"unknown pattern object {pattern!r}")
    return True


def count_class(
    d: int,
    n: int,
    patterns: Iterable[PatternSpec],
    max_work: int = DEFAULT_MAX_WORK,
) -> int:
    """Number of d-permutations of 1..n avoiding every listed pattern,
    by exhaustive enumeration."""
    patterns = tuple(patterns)
    work = math.factorial(n) ** (d - 1)
    if work > max_work:
        raise ResourceLimitError(
            f"enumerating (n!)**(d-1) = {work} d-permutations exceeds "
            f"the work bound {max_work}"
        )
    return sum(1 for perm in enumerate_dperms(d, n) if _avoids_all(perm, patterns))


def parse_pattern(token: str) -> PatternSpec:
    """Decode a compact CLI pattern string.

    ``pi1``/``pi2``/``pi3`` name the multi-row patterns; a digit string
    like ``2413`` is a classical single-row pattern; a tilde marks the
    letter under the bar, e.g. ``21~354`` bars the third letter.
    """
    token = token.strip()
    named = {"pi1": PI1, "pi2": PI2, "pi3": PI3}
    if token in named:
        return named[token]
    if token.count("~") > 1:
        raise PatternError(f"{token!r} has more than one barred entry")
    if "~" in token:
        idx = token.index("~")
        digits = token.replace("~", "")
        if not digits.isdigit() or idx == len(token) - 1:
            raise PatternError(f"cannot parse barred pattern {token!r}")
        return BarredPattern(tuple(int(c) for c in digits), idx + 1)
    if token.isdigit():
        return ClassicalPattern(tuple(int(c) for c in token))
    raise PatternError(f"cannot parse pattern {token!r}")


def parse_pattern_list(text: str) -> tuple[PatternSpec, ...]:
    return tuple(parse_pattern(tok) for tok in text.split(",") if tok.strip())
