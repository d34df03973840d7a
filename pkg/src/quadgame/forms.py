"""Exact rational quadratic forms: evaluation, diagonalization, splitting, norms.

Coefficients are `fractions.Fraction` throughout; evaluating a rational vector
never rounds.  A form is stored in its ambient coordinate order together with
the permutation that lists the positively-weighted coordinates first, so that
the positive/negative split  Q = q1 - q2  (both parts positive definite and
diagonal) holds identically.  Floats only appear in derived norm constants,
which involve square roots.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

__all__ = [
    "FormError",
    "DefiniteForm",
    "QuadraticForm",
    "NormConstants",
    "diagonalize",
    "parse_form",
    "norm_constants",
]


class FormError(ValueError):
    """Malformed or unsupported quadratic form input."""


def _rat(x) -> Fraction:
    """Coerce to an exact rational; floats are rejected on purpose."""
    if isinstance(x, float):
        raise FormError("coefficients must be exact rationals, not floats")
    try:
        return Fraction(x)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise FormError(f"not a rational: {x!r}") from exc


@dataclass(frozen=True)
class DefiniteForm:
    """Positive-definite diagonal form q(v) = sum_i a_i v_i^2, all a_i > 0."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise FormError("empty definite form")
        if any(a <= 0 for a in self.coeffs):
            raise FormError("definite part needs strictly positive coefficients")

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def value(self, v: Sequence) -> Fraction:
        """q(v); exact when v has rational entries, float otherwise."""
        if len(v) != self.dim:
            raise FormError(f"expected {self.dim} components, got {len(v)}")
        return sum(a * c * c for a, c in zip(self.coeffs, v))

    def norm(self, v: Sequence) -> float:
        return math.sqrt(float(self.value(v)))

    def inner(self, v: Sequence, w: Sequence):
        return sum(a * x * y for a, x, y in zip(self.coeffs, v, w))

    def float_coeffs(self) -> tuple[float, ...]:
        return tuple(float(a) for a in self.coeffs)


@dataclass(frozen=True)
class QuadraticForm:
    """Nondegenerate indefinite diagonal rational form in ambient coordinates.

    ``ambient`` keeps the user's coordinate order with signs; ``perm`` lists
    the positively-weighted coordinate indices first, then the negative ones,
    which fixes the split  Q(v) = q1(w) - q2(u)  with
    w = (v[perm[0]], ..., v[perm[k-1]]) and u the remaining components.

    ``transform`` (optional) is an exact invertible matrix M recording that
    this diagonal form came from a general symmetric form via Q(v) = G(M v).
    """

    ambient: tuple[Fraction, ...]
    transform: tuple[tuple[Fraction, ...], ...] | None = None

    def __post_init__(self):
        amb = tuple(_rat(a) for a in self.ambient)
        object.__setattr__(self, "ambient", amb)
        if len(amb) < 2:
            raise FormError("need at least two coordinates")
        if any(a == 0 for a in amb):
            raise FormError("diagonal coefficients must be nonzero")
        if all(a > 0 for a in amb) or all(a < 0 for a in amb):
            raise FormError("form must be indefinite (both signs present)")
        if self.transform is not None:
            t = tuple(tuple(_rat(x) for x in row) for row in self.transform)
            if len(t) != len(amb) or any(len(row) != len(amb) for row in t):
                raise FormError("transform must be a square matrix of matching size")
            object.__setattr__(self, "transform", t)

    # ------------------------------------------------------------------ #
    # constructors

    @classmethod
    def diagonal(cls, coeffs: Sequence) -> "QuadraticForm":
        return cls(tuple(_rat(c) for c in coeffs))

    # ------------------------------------------------------------------ #
    # structure

    @property
    def dim(self) -> int:
        return len(self.ambient)

    @property
    def d(self) -> int:
        """Dimension of the ambient cube the variety boundary lives on."""
        return self.dim - 1

    @property
    def perm(self) -> tuple[int, ...]:
        pos = [i for i, a in enumerate(self.ambient) if a > 0]
        neg = [i for i, a in enumerate(self.ambient) if a < 0]
        return tuple(pos + neg)

    @property
    def k(self) -> int:
        return sum(1 for a in self.ambient if a > 0)

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        """Canonically ordered coefficient magnitudes (positives first)."""
        return tuple(abs(self.ambient[i]) for i in self.perm)

    @property
    def s_lcm(self) -> int:
        return math.lcm(*(a.denominator for a in self.ambient))

    @property
    def numerators(self) -> tuple[int, ...]:
        s = self.s_lcm
        nums = tuple(a * s for a in self.coeffs)
        assert all(n.denominator == 1 for n in nums)
        return tuple(int(n) for n in nums)

    def split(self) -> tuple[DefiniteForm, DefiniteForm]:
        c = self.coeffs
        return DefiniteForm(c[: self.k]), DefiniteForm(c[self.k :])

    @property
    def q1(self) -> DefiniteForm:
        return self.split()[0]

    @property
    def q2(self) -> DefiniteForm:
        return self.split()[1]

    # ------------------------------------------------------------------ #
    # evaluation and splitting of vectors

    def evaluate(self, v: Sequence):
        """Q(v) in ambient coordinates; exact on rational input."""
        if len(v) != self.dim:
            raise FormError(f"expected {self.dim} components, got {len(v)}")
        return sum(a * c * c for a, c in zip(self.ambient, v))

    __call__ = evaluate

    def split_vector(self, v: Sequence) -> tuple[tuple, tuple]:
        if len(v) != self.dim:
            raise FormError(f"expected {self.dim} components, got {len(v)}")
        p = self.perm
        return tuple(v[i] for i in p[: self.k]), tuple(v[i] for i in p[self.k :])

    def join(self, w: Sequence, u: Sequence) -> tuple:
        """Inverse of split_vector: rebuild the ambient vector exactly."""
        if len(w) + len(u) != self.dim:
            raise FormError("component sizes do not match the form")
        out = [None] * self.dim
        for j, i in enumerate(self.perm):
            out[i] = w[j] if j < self.k else u[j - self.k]
        return tuple(out)

    def float_ambient(self) -> tuple[float, ...]:
        return tuple(float(a) for a in self.ambient)

    def label(self) -> str:
        return ",".join(str(a) for a in self.ambient)


# ---------------------------------------------------------------------- #
# congruence diagonalization of general symmetric forms


def _mat_mul(a, b):
    n = len(a)
    return tuple(
        tuple(sum(a[i][t] * b[t][j] for t in range(n)) for j in range(n))
        for i in range(n)
    )


def _identity(n):
    return tuple(
        tuple(Fraction(1) if i == j else Fraction(0) for j in range(n))
        for i in range(n)
    )


def general_evaluate(matrix: Sequence[Sequence], v: Sequence):
    """v^T G v for a symmetric matrix G (exact on rational input)."""
    n = len(matrix)
    return sum(matrix[i][j] * v[i] * v[j] for i in range(n) for j in range(n))


def diagonalize(matrix: Sequence[Sequence]) -> QuadraticForm:
    """Reduce a symmetric rational matrix to a diagonal form by congruence.

    Returns a QuadraticForm whose ``transform`` M satisfies
    Q_diag(v) == G(M v) for every v.  Degenerate or definite inputs are
    rejected.
    """
    n = len(matrix)
    g = [[_rat(x) for x in row] for row in matrix]
    if any(len(row) != n for row in g):
        raise FormError("matrix must be square")
    if n < 2:
        raise FormError("need at least a binary form")
    for i in range(n):
        for j in range(n):
            if g[i][j] != g[j][i]:
                raise FormError("matrix must be symmetric")

    m = [list(row) for row in _identity(n)]

    def col_op(dst: int, src: int, f: Fraction):
        # column dst += f * column src, same on rows: G <- C^T G C, M <- M C
        for r in range(n):
            g[r][dst] += f * g[r][src]
        for r in range(n):
            g[dst][r] += f * g[src][r]
        for r in range(n):
            m[r][dst] += f * m[r][src]

    def col_swap(i: int, j: int):
        for r in range(n):
            g[r][i], g[r][j] = g[r][j], g[r][i]
        for r in range(n):
            g[i][r], g[j][r] = g[j][r], g[i][r]
        for r in range(n):
            m[r][i], m[r][j] = m[r][j], m[r][i]

    for i in range(n):
        if g[i][i] == 0:
            pivot = next((j for j in range(i + 1, n) if g[j][j] != 0), None)
            if pivot is not None:
                col_swap(i, pivot)
            else:
                # all remaining diagonal entries vanish: bring in a
                # hyperbolic pair if any off-diagonal entry survives
                off = next(
                    (j for j in range(i + 1, n) if g[i][j] != 0), None
                )
                if off is None:
                    raise FormError("degenerate form (zero block)")
                col_op(i, off, Fraction(1))
        for j in range(i + 1, n):
            if g[i][j] != 0:
                col_op(j, i, -g[i][j] / g[i][i])

    diag = [g[i][i] for i in range(n)]
    if any(x == 0 for x in diag):
        raise FormError("degenerate form")
    # reorder positives first and fold the permutation into the transform
    order = [i for i, x in enumerate(diag) if x > 0] + [
        i for i, x in enumerate(diag) if x < 0
    ]
    perm_mat = tuple(
        tuple(Fraction(1) if r == order[c] else Fraction(0) for c in range(n))
        for r in range(n)
    )
    full = _mat_mul(tuple(tuple(row) for row in m), perm_mat)
    return QuadraticForm(tuple(diag[i] for i in order), transform=full)


# ---------------------------------------------------------------------- #
# parsing


def parse_form(text: str) -> QuadraticForm:
    """Parse ``1,1,-1`` / ``1/2,3,-2`` (diagonal) or row-major JSON matrix."""
    text = text.strip()
    if text.startswith("["):
        try:
            rows = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FormError(f"bad matrix JSON: {exc}") from exc
        if rows and not isinstance(rows[0], list):
            raise FormError("matrix JSON must be a list of rows")
        return diagonalize([[_rat(x) for x in row] for row in rows])
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if len(parts) < 2:
        raise FormError("need at least two diagonal coefficients")
    return QuadraticForm.diagonal(parts)


# ---------------------------------------------------------------------- #
# norm constants


@dataclass(frozen=True)
class NormConstants:
    """Certified equivalence constants between the split norms and sup/l2.

    ``eucl_q1_sq`` / ``eucl_q2_sq`` are exact squares of the constants c with
    (1/c)|v|_2 <= |v|_q <= c |v|_2 on each definite block.  ``sum_sup`` is a
    provable constant c with
        (1/c)(|w|_q1 + |u|_q2) <= |(w,u)|_sup <= c (|w|_q1 + |u|_q2);
    ``sum_sup_sampled`` is a tighter empirical estimate kept for reporting
    only (the provable value feeds every certified bound downstream).
    """

    eucl_q1_sq: Fraction
    eucl_q2_sq: Fraction
    sum_sup: float
    sum_sup_sampled: float
    samples: int

    @property
    def eucl_q1(self) -> float:
        return math.sqrt(float(self.eucl_q1_sq))

    @property
    def eucl_q2(self) -> float:
        return math.sqrt(float(self.eucl_q2_sq))


def _eucl_const_sq(q: DefiniteForm) -> Fraction:
    hi = max(q.coeffs)
    lo = min(q.coeffs)
    return max(hi, 1 / lo)


def norm_constants(form: QuadraticForm, samples: int = 20000) -> NormConstants:
    q1, q2 = form.split()
    e1_sq = _eucl_const_sq(q1)
    e2_sq = _eucl_const_sq(q2)
    e_max = math.sqrt(float(max(e1_sq, e2_sq)))
    k, ell = q1.dim, q2.dim
    # sup <= l2 <= e_max * q-norm on each block gives the upper bound; the
    # lower one pays sqrt(k) + sqrt(ell) for sup -> l1-of-blocks.
    provable = e_max * (math.sqrt(k) + math.sqrt(ell))

    rng = random.Random(1729)
    worst = 1.0
    for _ in range(samples):
        w = [rng.uniform(-1, 1) for _ in range(k)]
        u = [rng.uniform(-1, 1) for _ in range(ell)]
        sup = max(max(abs(c) for c in w), max(abs(c) for c in u))
        if sup < 1e-9:
            continue
        total = q1.norm(w) + q2.norm(u)
        ratio = sup / total
        worst = max(worst, ratio, 1 / ratio)
    sampled = worst
    return NormConstants(
        eucl_q1_sq=e1_sq,
        eucl_q2_sq=e2_sq,
        sum_sup=provable,
        sum_sup_sampled=min(sampled, provable),
        samples=samples,
    )
