"""Approximation margins and the boundary cases of the badness claim.

The central quantity is the margin of a board point v against the lattice
points of {Q = m}: the smallest value of

    dist_sup(x / ||x||_sup, v) * ||x||_sup ** s

over nonzero integer points x.  A positive lower bound as the search range
grows is exactly what a finished game certifies for s = 1.  This module
also settles the one-dimensional boards (where everything is decided by
whether a square root is rational), the supercritical exponents s > 2,
and the escape question for translations of the full torus.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .forms import QuadraticForm
from .geometry import GeometryError, sample_board_points
from .lattice import shell_store


# ---------------------------------------------------------------------- #
# margins


@dataclass(frozen=True)
class MarginReport:
    sup_limit: int
    s: float
    margin: float
    argmin: tuple[int, ...] | None
    count: int


def _store_mask(form: QuadraticForm, m, sup_limit: int):
    store = shell_store(form, m, max(10_000, sup_limit))
    q2_sum = sum(form.numerators[form.k:])
    store.ensure(q2_sum * sup_limit * sup_limit)
    mask = store.sup <= sup_limit
    return store, mask


def badness_margin(
    form: QuadraticForm, m, v: Sequence[float], sup_limit: int = 1000, s: float = 1.0
) -> MarginReport:
    """Float margin of v over all lattice points with sup norm <= limit."""
    store, mask = _store_mask(form, m, sup_limit)
    count = int(mask.sum())
    if count == 0:
        return MarginReport(sup_limit, s, math.inf, None, 0)
    vv = np.asarray([float(t) for t in v])
    dist = np.abs(store.normalized[mask] - vv).max(axis=1)
    weighted = dist * store.sup[mask].astype(float) ** s
    idx = int(np.argmin(weighted))
    argmin = tuple(int(t) for t in store.pts[mask][idx])
    return MarginReport(sup_limit, s, float(weighted[idx]), argmin, count)


def exact_margin(
    form: QuadraticForm, m, v: Sequence, sup_limit: int, s: int = 1
) -> tuple[Fraction, tuple[int, ...] | None]:
    """Exact margin for a rational v; the same minimum, without roundoff."""
    vv = [Fraction(t) for t in v]
    store, mask = _store_mask(form, m, sup_limit)
    best = None
    arg = None
    for row, sup in zip(store.pts[mask], store.sup[mask]):
        sup = int(sup)
        dist = max(abs(Fraction(int(t), sup) - c) for t, c in zip(row, vv))
        value = dist * Fraction(sup) ** s
        if best is None or value < best:
            best, arg = value, tuple(int(t) for t in row)
    if best is None:
        return Fraction(0), None
    return best, arg


def margin_profile(
    form: QuadraticForm,
    m,
    v: Sequence[float],
    limits: Sequence[int] = (100, 1000, 10000),
    s: float = 1.0,
) -> list[MarginReport]:
    """Margins over a growing family of search ranges (non-increasing)."""
    return [badness_margin(form, m, v, sup_limit=n, s=s) for n in sorted(limits)]


def lift_unit_vector(form: QuadraticForm, v: Sequence[float]) -> tuple[float, ...]:
    """Lift a vector of the first block onto the light-cone board.

    For Q = q1(w) - b*y**2 a vector v with q1(v) = b lands on the board as
    (v, 1), normalized to the unit shell.  The value of q1(v)/b is reported
    when the lift is refused.
    """
    if form.dim - form.k != 1:
        raise GeometryError("lifting needs a single coordinate in the second block")
    if len(v) != form.k:
        raise GeometryError("vector length does not match the first block")
    b = form.numerators[form.k] / form.s_lcm
    q1v = math.fsum(
        (num / form.s_lcm) * float(t) * float(t)
        for num, t in zip(form.numerators[: form.k], v)
    )
    if abs(q1v / b - 1.0) > 1e-9:
        raise GeometryError(f"vector is not on the q1 unit sphere: q1(v)/b = {q1v / b!r}")
    point = [0.0] * form.dim
    w_axes = form.perm[: form.k]
    for axis, t in zip(w_axes, v):
        point[axis] = float(t)
    point[form.perm[form.k]] = 1.0
    sup = max(abs(t) for t in point)
    return tuple(t / sup for t in point)


# ---------------------------------------------------------------------- #
# one-dimensional boards: a*x^2 - b*y^2


@dataclass(frozen=True)
class LineClassification:
    """What badness looks like on a two-variable board."""

    kind: str                      # "empty" | "all-bad" | "irrational"
    alpha: Fraction                # coefficient ratio a/b
    root: tuple[int, int] | None   # sqrt(alpha) = p/p' when rational
    epsilon: Fraction | None       # repulsion constant in the all-bad case
    witness: tuple[int, int] | None  # lattice point killing badness when empty
    k_constant: float | None       # liminf q*|q*theta - p| for the surd slope
    threshold: float | None        # k_constant * sqrt(alpha)


def _surd_cf_terms(D: int, P: int, Q: int, depth: int) -> list[int]:
    """Continued fraction of (P + sqrt(D)) / Q for a non-square D."""
    root = math.isqrt(D)
    terms = []
    for _ in range(depth):
        a = (P + root) // Q
        terms.append(a)
        P = a * Q - P
        Q = (D - P * P) // Q
    return terms


def classify_line_board(form: QuadraticForm, m) -> LineClassification:
    """Decide badness on a board with one variable on each side.

    With a rational root the board directions are rational: for m = 0 a
    lattice point sits exactly on them (no direction is badly approximable)
    while for m != 0 every direction is, with an explicit constant.  An
    irrational root makes the slope a quadratic surd whose own badness
    constant transfers to the board.
    """
    if form.k != 1 or form.dim != 2:
        raise GeometryError("line classification needs one variable on each side")
    m = Fraction(m)
    a, b = form.numerators[0], form.numerators[1]
    alpha = Fraction(a, b)
    D = a * b
    g = math.isqrt(D)
    if g * g == D:
        # sqrt(alpha) = g/b in lowest terms
        gc = math.gcd(g, b)
        p, p_prime = g // gc, b // gc
        if m == 0:
            # (p', p) in the w,u ordering solves a*x^2 = b*y^2 exactly
            x = [0, 0]
            x[form.perm[0]], x[form.perm[1]] = p_prime, p
            return LineClassification(
                kind="empty", alpha=alpha, root=(p, p_prime),
                epsilon=None, witness=(x[0], x[1]), k_constant=None, threshold=None,
            )
        return LineClassification(
            kind="all-bad", alpha=alpha, root=(p, p_prime),
            epsilon=Fraction(1, p), witness=None, k_constant=None, threshold=None,
        )
    # irrational slope theta = sqrt(b/a) = sqrt(D)/a
    terms = _surd_cf_terms(D, 0, a, 50)
    h_prev, h_cur = 1, terms[0]
    k_prev, k_cur = 0, 1
    # q = 1 (the floor) participates alongside the later convergents
    best = abs(math.sqrt(D) / a - terms[0])
    for t in terms[1:]:
        h_prev, h_cur = h_cur, t * h_cur + h_prev
        k_prev, k_cur = k_cur, t * k_cur + k_prev
        # q*|q*theta - p| through the exact difference of squares
        num = abs(k_cur * k_cur * D - a * a * h_cur * h_cur)
        val = k_cur * num / (a * (k_cur * math.sqrt(D) + a * h_cur))
        best = min(best, val)
    root_alpha = math.sqrt(float(alpha))
    return LineClassification(
        kind="irrational", alpha=alpha, root=None, epsilon=None,
        witness=None, k_constant=best, threshold=best * root_alpha,
    )


# ---------------------------------------------------------------------- #
# supercritical exponents


@dataclass(frozen=True)
class StrongExponentReport:
    s: float
    m: Fraction
    y_threshold: int
    sup_limit: int
    margins: list[float]
    min_margin: float


def check_strong_exponent(
    form: QuadraticForm,
    m,
    s: float,
    points: Sequence[Sequence[float]] | None = None,
    count: int = 20,
    sup_limit: int = 1000,
    seed: int = 20,
) -> StrongExponentReport:
    """Margins with exponent s > 2, plus the height where approximation dies.

    Against |y| at least the reported threshold, a lattice point of a
    nonzero level set cannot come within |y| ** (-s) of any direction:
    the first-block size A = 2 * sum(a_i) and B = sum(a_i) control
    A * y**(2-s) + B * y**(2-2s) < |m|.  Below the threshold only finitely
    many heights remain, so every margin stays positive.
    """
    m = Fraction(m)
    if s <= 2:
        raise ValueError("this check concerns exponents above 2")
    if m == 0:
        raise ValueError("the zero level set has no supercritical guarantee")
    if form.dim - form.k != 1:
        raise ValueError("the height argument needs one coordinate in the second block")
    weights = [abs(num) / form.s_lcm for num in form.numerators[: form.k]]
    big_a, big_b = 2.0 * sum(weights), float(sum(weights))
    target = abs(float(m))
    y0 = 1
    while big_a * y0 ** (2 - s) + big_b * y0 ** (2 - 2 * s) >= target:
        y0 += 1
        if y0 > 10**9:
            raise ValueError("no finite threshold found; the exponent is too close to 2")
    if points is None:
        points = sample_board_points(form, count, random.Random(seed))
    margins = [
        badness_margin(form, m, v, sup_limit=sup_limit, s=s).margin for v in points
    ]
    return StrongExponentReport(
        s=s, m=m, y_threshold=y0, sup_limit=sup_limit,
        margins=margins, min_margin=min(margins),
    )


# ---------------------------------------------------------------------- #
# translations of the full torus


@dataclass(frozen=True)
class EscapeReport:
    found: bool
    n: int | None
    gap: float | None
    eps: float
    n_max: int
    detail: str


def full_lattice_escape(v: Sequence, eps: float, n_max: int = 10**6) -> EscapeReport:
    """First multiple n*v within eps of the integer lattice (sup distance).

    Rational inputs are walked exactly through their common denominator;
    floats are scanned in vectorized chunks.  When nothing is found the
    verdict is only that the range was too small -- increase n_max.
    """
    if all(isinstance(t, (int, Fraction)) for t in v):
        vv = [Fraction(t) for t in v]
        den = math.lcm(*(t.denominator for t in vv)) if vv else 1
        nums = [t.numerator * (den // t.denominator) for t in vv]
        for n in range(1, n_max + 1):
            worst = 0
            for a in nums:
                r = (n * a) % den
                r = min(r, den - r)
                if r > worst:
                    worst = r
            if worst < eps * den:
                return EscapeReport(
                    found=True, n=n, gap=worst / den, eps=eps, n_max=n_max,
                    detail=f"n = {n} lands within {worst}/{den} of the lattice",
                )
        return EscapeReport(
            found=False, n=None, gap=None, eps=eps, n_max=n_max,
            detail="no multiple found in range; increase n_max",
        )
    vv = np.asarray([float(t) for t in v])
    chunk = 100_000
    start = 1
    while start <= n_max:
        stop = min(start + chunk - 1, n_max)
        ns = np.arange(start, stop + 1)
        frac = np.outer(ns, vv) % 1.0
        dist = np.minimum(frac, 1.0 - frac).max(axis=1)
        hits = np.nonzero(dist < eps)[0]
        if len(hits):
            n = int(ns[hits[0]])
            return EscapeReport(
                found=True, n=n, gap=float(dist[hits[0]]), eps=eps, n_max=n_max,
                detail=f"n = {n} lands within {float(dist[hits[0]]):.3e} of the lattice",
            )
        start = stop + 1
    return EscapeReport(
        found=False, n=None, gap=None, eps=eps, n_max=n_max,
        detail="no multiple found in range; increase n_max",
    )
