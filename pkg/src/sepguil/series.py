"""Exact truncated power-series arithmetic and the counting formulas.

Everything in this module is exact: coefficients are ``fractions.Fraction``
throughout, and every public counting function asserts integrality (and
nonnegativity) before returning, so a non-integer intermediate can never
leak into a reported count.

Two canonical counters tie the families together:

* ``g_q(n)`` -- guillotine partitions of a q-dimensional box by n cuts,
  with generating function f = 1 + x f + (q - 1) x f**2;
* ``s_d(n)`` -- separable d-permutations of 1..n.

They satisfy s_d(n) = g_{2**(d-1)}(n - 1) for n >= 1, which is why the
guillotine functions below take the box dimension ``q`` directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence, Union

from .errors import ConsistencyError, DomainError, SolverError

Scalar = Union[int, Fraction]


def binom(a: int, b: int) -> int:
    """Binomial coefficient with C(a, b) = 0 unless 0 <= b <= a."""
    if b < 0 or a < 0 or b > a:
        return 0
    return math.comb(a, b)


def catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)


@dataclass(frozen=True)
class TruncatedPowerSeries:
    """A power series known exactly up to x**order."""

    order: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.order < 0:
            raise DomainError("series order must be nonnegative")
        if len(self.coeffs) != self.order + 1:
            raise DomainError("coefficient count must be order + 1")

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_coeffs(cls, values: Sequence[Scalar], order: int) -> "TruncatedPowerSeries":
        coeffs = [Fraction(v) for v in values[: order + 1]]
        coeffs += [Fraction(0)] * (order + 1 - len(coeffs))
        return cls(order, tuple(coeffs))

    @classmethod
    def constant(cls, value: Scalar, order: int) -> "TruncatedPowerSeries":
        return cls.from_coeffs([Fraction(value)], order)

    @classmethod
    def zero(cls, order: int) -> "TruncatedPowerSeries":
        return cls.constant(0, order)

    @classmethod
    def one(cls, order: int) -> "TruncatedPowerSeries":
        return cls.constant(1, order)

    @classmethod
    def x(cls, order: int) -> "TruncatedPowerSeries":
        return cls.monomial(1, order)

    @classmethod
    def monomial(cls, degree: int, order: int, coefficient: Scalar = 1) -> "TruncatedPowerSeries":
        values = [Fraction(0)] * (order + 1)
        if 0 <= degree <= order:
            values[degree] = Fraction(coefficient)
        return cls(order, tuple(values))

    # -- access ------------------------------------------------------------

    def __getitem__(self, n: int) -> Fraction:
        if not 0 <= n <= self.order:
            raise DomainError(f"coefficient index {n} outside 0..{self.order}")
        return self.coeffs[n]

    def int_coefficients(self, require_nonnegative: bool = False) -> list[int]:
        """Coefficients as plain integers; non-integers are a hard error."""
        out = []
        for i, c in enumerate(self.coeffs):
            if c.denominator != 1:
                raise ConsistencyError(f"coefficient of x**{i} is not an integer: {c}")
            if require_nonnegative and c < 0:
                raise ConsistencyError(f"coefficient of x**{i} is negative: {c}")
            out.append(int(c))
        return out

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> "TruncatedPowerSeries":
        if isinstance(other, TruncatedPowerSeries):
            if other.order != self.order:
                raise DomainError("series orders differ")
            return other
        return TruncatedPowerSeries.constant(other, self.order)

    def __add__(self, other) -> "TruncatedPowerSeries":
        other = self._coerce(other)
        return TruncatedPowerSeries(
            self.order, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    __radd__ = __add__

    def __neg__(self) -> "TruncatedPowerSeries":
        return TruncatedPowerSeries(self.order, tuple(-a for a in self.coeffs))

    def __sub__(self, other) -> "TruncatedPowerSeries":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "TruncatedPowerSeries":
        return self._coerce(other) - self

    def __mul__(self, other) -> "TruncatedPowerSeries":
        if not isinstance(other, TruncatedPowerSeries):
            scalar = Fraction(other)
            return TruncatedPowerSeries(self.order, tuple(scalar * a for a in self.coeffs))
        other = self._coerce(other)
        n = self.order
        out = [Fraction(0)] * (n + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j in range(n + 1 - i):
                b = other.coeffs[j]
                if b != 0:
                    out[i + j] += a * b
        return TruncatedPowerSeries(n, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "TruncatedPowerSeries":
        if exponent < 0:
            raise DomainError("negative powers: use reciprocal() explicitly")
        result = TruncatedPowerSeries.one(self.order)
        for _ in range(exponent):
            result = result * self
        return result

    def reciprocal(self) -> "TruncatedPowerSeries":
        """Multiplicative inverse; requires a nonzero constant term."""
        if self.coeffs[0] == 0:
            raise DomainError("reciprocal of a series with zero constant term")
        n = self.order
        out = [Fraction(0)] * (n + 1)
        out[0] = 1 / self.coeffs[0]
        for k in range(1, n + 1):
            acc = Fraction(0)
            for j in range(1, k + 1):
                acc += self.coeffs[j] * out[k - j]
            out[k] = -acc / self.coeffs[0]
        return TruncatedPowerSeries(n, tuple(out))

    def shift(self, k: int) -> "TruncatedPowerSeries":
        """Multiply by x**k (k >= 0), truncating at the order."""
        if k < 0:
            raise DomainError("shift amount must be nonnegative")
        out = [Fraction(0)] * (self.order + 1)
        for i, c in enumerate(self.coeffs):
            if i + k > self.order:
                break
            out[i + k] = c
        return TruncatedPowerSeries(self.order, tuple(out))

    def agreement_order(self, other: "TruncatedPowerSeries") -> int:
        """Index of the first differing coefficient, or order + 1 if equal."""
        other = self._coerce(other)
        for i, (a, b) in enumerate(zip(self.coeffs, other.coeffs)):
            if a != b:
                return i
        return self.order + 1


def solve_fixed_point(
    phi: Callable[[TruncatedPowerSeries], TruncatedPowerSeries],
    seed: Scalar,
    order: int,
) -> TruncatedPowerSeries:
    """The unique series with f = phi(f) up to the order, found by iteration.

    ``phi`` must be an x-adic contraction: whenever two inputs agree up to
    x**k, the outputs agree up to x**(k+1).  Under that contract the
    iteration converges within order + 2 steps; failure to make progress
    raises :class:`SolverError`.
    """
    current = TruncatedPowerSeries.constant(seed, order)
    progress = -1
    for _ in range(order + 2):
        nxt = phi(current)
        if nxt.order != order:
            raise SolverError("the map changed the truncation order")
        agree = current.agreement_order(nxt)
        if agree > order:
            return current
        if agree <= progress:
            raise SolverError(
                f"iteration stalled at order {agree}: the map is not an x-adic contraction"
            )
        progress = agree
        current = nxt
    raise SolverError(f"no fixed point reached within {order + 2} iterations")


# ---------------------------------------------------------------------------
# Guillotine partitions / separable d-permutations (three routes).
# ---------------------------------------------------------------------------


def guillotine_gf(q: int, order: int) -> TruncatedPowerSeries:
    """Series of g_q(n): solves f = 1 + x f + (q - 1) x f**2."""
    if q < 1:
        raise DomainError("box dimension q must be >= 1")
    x = TruncatedPowerSeries.x(order)
    series = solve_fixed_point(lambda f: 1 + x * f + (q - 1) * (x * f * f), 1, order)
    series.int_coefficients(require_nonnegative=True)
    return series


def count_guillotine_recursive(q: int, n: int) -> int:
    """g_q(n) via the convolution recurrence

        a(n) = q * ( a(n-1) + sum_{k=1}^{n-1} ((q-1)/q) a(k) a(n-k-1) ),

    with a(0) = 1.  The (q-1)/q weight is carried exactly."""
    if q < 1:
        raise DomainError("box dimension q must be >= 1")
    if n < 0:
        raise DomainError("cut count n must be >= 0")
    a: list[Fraction] = [Fraction(1)]
    weight = Fraction(q - 1, q)
    for m in range(1, n + 1):
        inner = a[m - 1] + weight * sum(a[k] * a[m - k - 1] for k in range(1, m))
        a.append(q * inner)
    if a[n].denominator != 1:
        raise ConsistencyError(f"g_{q}({n}) came out non-integer: {a[n]}")
    return int(a[n])


def count_separable_explicit(d: int, n: int) -> int:
    """s_d(n) for n >= 2 by the closed form

        (1/(n-1)) * sum_{k=0}^{n-2} C(n-1,k) C(n-1,k+1) (q-1)**k q**(n-k-1)

    with q = 2**(d-1); the division by n - 1 must be exact."""
    if d < 1:
        raise DomainError("dimension d must be >= 1")
    if n < 2:
        raise DomainError("the closed form applies for n >= 2 (s_d(1) = 1)")
    q = 2 ** (d - 1)
    total = sum(
        binom(n - 1, k) * binom(n - 1, k + 1) * (q - 1) ** k * q ** (n - k - 1)
        for k in range(n - 1)
    )
    value = Fraction(total, n - 1)
    if value.denominator != 1:
        raise ConsistencyError(f"s_{d}({n}) division by {n - 1} is not exact")
    return int(value)


# ---------------------------------------------------------------------------
# Boundary partitions.
# ---------------------------------------------------------------------------


def boundary_gf(d: int, order: int) -> TruncatedPowerSeries:
    """Series counting boundary partitions of a d-box by n cuts.

    Evaluated from the innermost level t = 1/(1 - d x) outward through
    t -> (1/(1 - i x)) (1 + (d - i) x (1 - x) t**2) for i = d-1 .. 1,
    finishing with f = 1 + d x (1 - x) t**2."""
    if d < 2:
        raise DomainError("boundary partitions need d >= 2")
    one = TruncatedPowerSeries.one(order)
    x = TruncatedPowerSeries.x(order)
    x1mx = x * (one - x)
    t = (one - d * x).reciprocal()
    for i in range(d - 1, 0, -1):
        t = (one - i * x).reciprocal() * (1 + (d - i) * x1mx * t * t)
    series = 1 + d * x1mx * t * t
    series.int_coefficients(require_nonnegative=True)
    return series


def boundary_square_explicit(n: int) -> int:
    """Boundary partitions of a square by n cuts:
    2 + (n-1)(n**2+n+42)/3 * 2**(n-4) for n >= 1, and 1 for n = 0."""
    if n < 0:
        raise DomainError("cut count n must be >= 0")
    if n == 0:
        return 1
    value = 2 + Fraction((n - 1) * (n * n + n + 42), 3) * Fraction(2) ** (n - 4)
    if value.denominator != 1:
        raise ConsistencyError(f"square boundary count at n={n} is non-integer: {value}")
    return int(value)


def boundary_asymptotic_ratio(d: int, n: int) -> Fraction:
    """Exact ratio of the boundary count to its leading asymptotic term

        c_d * n**(2**d - 1) * d**n / (2**d - 1)!,  c_d = ((d-1)/d)**(2**d - 1),

    which tends to 1 as n grows."""
    if d < 2:
        raise DomainError("boundary partitions need d >= 2")
    if n < 1:
        raise DomainError("the asymptotic ratio needs n >= 1")
    count = boundary_gf(d, n)[n]
    e = 2**d - 1
    c_d = Fraction(d - 1, d) ** e
    leading = c_d * n**e * Fraction(d) ** n / math.factorial(e)
    return Fraction(count) / leading


# ---------------------------------------------------------------------------
# m-alternating partitions.
# ---------------------------------------------------------------------------


def alternating_gf(d: int, m: int, order: int) -> TruncatedPowerSeries:
    """Series counting m-alternating partitions of a d-box (each subbox has
    at most m - 1 parallel principal cuts).

    Solves g = 1 + (d-1) x g**2 (1 - x**(m-1) g**(m-1)) / (1 - x g) and
    returns f = 1 + (d/(d-1)) (g - 1)."""
    if d < 2 or m < 2:
        raise DomainError("need d >= 2 and m >= 2")
    x = TruncatedPowerSeries.x(order)
    xm1 = TruncatedPowerSeries.monomial(m - 1, order)

    def step(g: TruncatedPowerSeries) -> TruncatedPowerSeries:
        numer = 1 - xm1 * g ** (m - 1)
        denom = (1 - x * g).reciprocal()
        return 1 + (d - 1) * (x * g * g * numer * denom)

    g = solve_fixed_point(step, 1, order)
    series = 1 + Fraction(d, d - 1) * (g - 1)
    series.int_coefficients(require_nonnegative=True)
    return series


def alternating_explicit(d: int, m: int, n: int) -> int:
    """m-alternating partitions of a d-box by n >= 1 cuts, as the finite sum

        d * sum_{p=0}^{n-1} sum_{i=0}^{p+1} ((-1)**i / (p+1)) C(p+1, i)
            C(n-1-(m-1)i, p) C(n+p+1, p) (d-1)**p

    with vanishing binomials outside 0 <= b <= a."""
    if d < 2 or m < 2:
        raise DomainError("need d >= 2 and m >= 2")
    if n < 1:
        raise DomainError("the explicit sum applies for n >= 1")
    total = Fraction(0)
    for p in range(n):
        for i in range(p + 2):
            middle = binom(n - 1 - (m - 1) * i, p)
            if middle == 0:
                continue
            term = Fraction((-1) ** i, p + 1) * binom(p + 1, i) * middle
            term *= binom(n + p + 1, p) * (d - 1) ** p
            total += term
    total *= d
    if total.denominator != 1:
        raise ConsistencyError(f"alternating count (d={d}, m={m}, n={n}) non-integer: {total}")
    return int(total)


# ---------------------------------------------------------------------------
# Window-avoiding partitions.
# ---------------------------------------------------------------------------


def window_avoiding_gf(d: int, order: int) -> TruncatedPowerSeries:
    """Series counting partitions avoiding a principal cut met from both
    sides by same-direction cuts.

    The fixed-color root series satisfies
    f = x + x(x - 1 + 2d) f + d x (x + d - 2) f**2;
    the returned total is 1 + d f."""
    if d < 2:
        raise DomainError("need d >= 2")
    x = TruncatedPowerSeries.x(order)
    a1 = x * (x + (2 * d - 1))
    a2 = d * (x * (x + (d - 2)))
    root = solve_fixed_point(lambda f: x + a1 * f + a2 * f * f, 0, order)
    series = 1 + d * root
    series.int_coefficients(require_nonnegative=True)
    return series


def window_avoiding_explicit(d: int, n: int) -> int:
    """Window-avoiding partitions of a d-box by n >= 1 cuts, as the sum

        d * sum_{k=0}^{(n-1)//2} sum_{j=0}^{n-1-2k} sum_{i=0}^{k}
            c_k d**k (d-2)**(k-i) (2d-1)**(2j+2k+i+1-n)
            C(k,i) C(2k+j, j) C(j, n-2k-i-j-1)

    where carried powers of 2d - 1 may be negative, so the sum is taken
    over the rationals and checked integral at the end."""
    if d < 2:
        raise DomainError("need d >= 2")
    if n < 1:
        raise DomainError("the explicit sum applies for n >= 1")
    base = 2 * d - 1
    total = Fraction(0)
    for k in range((n - 1) // 2 + 1):
        ck = catalan(k)
        for j in range(n - 2 * k):
            cj = binom(2 * k + j, j)
            if cj == 0:
                continue
            for i in range(k + 1):
                tail = binom(j, n - 2 * k - i - j - 1)
                if tail == 0:
                    continue
                exponent = 2 * j + 2 * k + i + 1 - n
                power = Fraction(base) ** exponent
                total += ck * d**k * (d - 2) ** (k - i) * power * binom(k, i) * cj * tail
    total *= d
    if total.denominator != 1:
        raise ConsistencyError(f"window-avoiding count (d={d}, n={n}) non-integer: {total}")
    return int(total)


def wincc_gf(order: int) -> TruncatedPowerSeries:
    """Planar partitions avoiding same-direction cuts on both sides of a
    principal cut even without touching it: (1 - 2x)/(1 - 4x + 2x**2),
    i.e. a(n) = 4 a(n-1) - 2 a(n-2) with a(0) = 1, a(1) = 2."""
    values = [1, 2]
    while len(values) <= order:
        values.append(4 * values[-1] - 2 * values[-2])
    return TruncatedPowerSeries.from_coeffs(values, order)
