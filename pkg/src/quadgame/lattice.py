"""Integer points on level sets of split quadratic forms.

Enumeration is organised by shells of the negative-part norm |u|_q2: the
outer loop runs over integer u in an exact ellipsoidal ring, the inner loop
solves q1(w) = m + q2(u) exactly.  Window bounds are kept as exact squared
rationals so that membership at irrational thresholds is decided without
rounding.  A per-(form, m) shell store caches results as numpy arrays for
the game engine and margin scans.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .forms import FormError, QuadraticForm

__all__ = [
    "Window",
    "LatticePoint",
    "CoreSet",
    "EnumerationBudgetError",
    "enumerate_window",
    "core_points",
    "sup_normalize",
    "equiv_key",
    "ShellStore",
    "shell_store",
    "point_json",
]

DEFAULT_BUDGET = 60_000_000

RELATIONS = ("scalar", "block", "q1_ratio", "q2_ratio")


class EnumerationBudgetError(RuntimeError):
    """The requested window exceeds the iteration budget; nothing was truncated."""

    def __init__(self, estimate: int, budget: int):
        super().__init__(
            f"window needs ~{estimate} candidates, over the budget of {budget}; "
            "narrow the window or raise the budget"
        )
        self.estimate = estimate
        self.budget = budget


@dataclass(frozen=True)
class Window:
    """Ring lo <= |u|_q2 <= hi stored via exact squared bounds."""

    lo_sq: Fraction
    hi_sq: Fraction
    lo_open: bool = False
    hi_open: bool = False
    index: int = 0

    def __post_init__(self):
        if self.lo_sq < 0 or self.hi_sq < self.lo_sq:
            raise ValueError("need 0 <= lo <= hi")

    @classmethod
    def from_norms(cls, lo, hi, lo_open=False, hi_open=False, index=0) -> "Window":
        lo_f, hi_f = Fraction(lo), Fraction(hi)
        if lo_f < 0 or hi_f < 0:
            raise ValueError("window bounds must be nonnegative")
        return cls(lo_f * lo_f, hi_f * hi_f, lo_open, hi_open, index)

    @property
    def lo(self) -> float:
        return math.sqrt(float(self.lo_sq))

    @property
    def hi(self) -> float:
        return math.sqrt(float(self.hi_sq))


@dataclass(frozen=True)
class LatticePoint:
    """Integer solution of Q(x) = m with its exact split norms squared."""

    x: tuple[int, ...]
    q1_sq: Fraction
    q2_sq: Fraction
    sup: int

    @classmethod
    def build(cls, form: QuadraticForm, x: Sequence[int]) -> "LatticePoint":
        xt = tuple(int(c) for c in x)
        w, u = form.split_vector(xt)
        return cls(xt, form.q1.value(w), form.q2.value(u), max(abs(c) for c in xt))

    def normalize(self) -> tuple[Fraction, ...]:
        return sup_normalize(self.x)


@dataclass(frozen=True)
class CoreSet:
    """Points below the first shell threshold, with their normalized min gap."""

    points: tuple[LatticePoint, ...]
    min_gap: float  # +inf when fewer than two distinct normalized points


def sup_normalize(x: Sequence) -> tuple[Fraction, ...]:
    """Radial projection x / |x|_sup onto the unit cube, exact on rationals."""
    sup = max(abs(Fraction(c)) for c in x)
    if sup == 0:
        raise ValueError("cannot normalize the zero vector")
    return tuple(Fraction(c) / sup for c in x)


# ---------------------------------------------------------------------- #
# exact integer thresholds for scaled squared norms


def _t_bounds(scale: int, win: Window) -> tuple[int, int]:
    """Integer range for t = scale * |u|_q2^2 matching the window exactly."""
    lo = scale * win.lo_sq
    hi = scale * win.hi_sq
    t_min = math.floor(lo) + 1 if win.lo_open else math.ceil(lo)
    t_max = math.ceil(hi) - 1 if win.hi_open else math.floor(hi)
    return t_min, t_max


def _isqrt_exact(n: int) -> int | None:
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def _rep_vectors(nums: tuple[int, ...], target: int, cap: int | None) -> Iterator[tuple[int, ...]]:
    """All integer v with sum nums[i]*v[i]^2 == target, |v[i]| <= cap."""
    if target < 0:
        return
    if len(nums) == 1:
        q, r = divmod(target, nums[0])
        if r == 0:
            root = _isqrt_exact(q)
            if root is not None and (cap is None or root <= cap):
                if root == 0:
                    yield (0,)
                else:
                    yield (root,)
                    yield (-root,)
        return
    head = nums[0]
    bound = math.isqrt(target // head)
    if cap is not None:
        bound = min(bound, cap)
    for a in range(-bound, bound + 1):
        rest = target - head * a * a
        for tail in _rep_vectors(nums[1:], rest, cap):
            yield (a,) + tail


def _u_box_estimate(nums: tuple[int, ...], t_max: int, cap: int | None) -> int:
    est = 1
    for n in nums:
        b = math.isqrt(t_max // n) if t_max >= 0 else 0
        if cap is not None:
            b = min(b, cap)
        est *= 2 * b + 1
        if est > 10**18:
            break
    return est


def _enumerate_raw(
    form: QuadraticForm,
    m: Fraction,
    t_min: int,
    t_max: int,
    sup_cap: int | None,
    budget: int,
) -> list[tuple[int, ...]]:
    """Ambient integer points with Q = m and t = s*q2(u)^2 in [t_min, t_max]."""
    s = form.s_lcm
    sm = s * Fraction(m)
    if sm.denominator != 1:
        return []  # s*q1(w) - t is always an integer, so no solutions
    sm = int(sm)
    nums = form.numerators
    q1_nums, q2_nums = nums[: form.k], nums[form.k :]
    t_min = max(t_min, 0)
    if t_max < t_min:
        return []

    est = _u_box_estimate(q2_nums, t_max, sup_cap)
    if est > budget:
        raise EnumerationBudgetError(est, budget)

    fast = (
        len(q1_nums) == 2
        and q1_nums[0] == q1_nums[1]
        and len(q2_nums) == 1
    )
    out: list[tuple[int, ...]] = []
    if fast:
        out = _enumerate_fast_2plus1(
            form, sm, q1_nums[0], q2_nums[0], t_min, t_max, sup_cap, budget
        )
    else:
        work = 0
        for u in _rep_range(q2_nums, t_min, t_max, sup_cap):
            t = sum(n * c * c for n, c in zip(q2_nums, u))
            target = sm + t  # = s * q1(w)
            for w in _rep_vectors(q1_nums, target, sup_cap):
                x = form.join(w, u)
                if x != (0,) * form.dim:
                    out.append(x)
                work += 1
                if work > budget:
                    raise EnumerationBudgetError(work, budget)
    return out


def _rep_range(
    nums: tuple[int, ...], t_min: int, t_max: int, cap: int | None
) -> Iterator[tuple[int, ...]]:
    """Integer u with t_min <= sum nums[i]*u[i]^2 <= t_max."""

    def rec(idx: int, acc: int) -> Iterator[tuple[int, ...]]:
        if idx == len(nums):
            if acc >= t_min:
                yield ()
            return
        head = nums[idx]
        bound = math.isqrt((t_max - acc) // head)
        if cap is not None:
            bound = min(bound, cap)
        for a in range(-bound, bound + 1):
            for tail in rec(idx + 1, acc + head * a * a):
                yield (a,) + tail

    yield from rec(0, 0)


def _enumerate_fast_2plus1(
    form: QuadraticForm,
    sm: int,
    c1: int,
    c2: int,
    t_min: int,
    t_max: int,
    sup_cap: int | None,
    budget: int,
) -> list[tuple[int, ...]]:
    """Vectorized path for q1 = c1*(x^2 + y^2), q2 = c2*z^2."""
    z_lo = math.isqrt((t_min + c2 - 1) // c2) if t_min > 0 else 0
    while c2 * z_lo * z_lo < t_min:
        z_lo += 1
    z_hi = math.isqrt(t_max // c2)
    if sup_cap is not None:
        z_hi = min(z_hi, sup_cap)
    if z_hi < z_lo:
        return []

    out: list[tuple[int, ...]] = []
    chunk = 512
    work_total = 0
    for z0 in range(z_lo, z_hi + 1, chunk):
        zs = np.arange(z0, min(z0 + chunk, z_hi + 1), dtype=np.int64)
        targets = sm + c2 * zs * zs  # = s*q1(w) per z
        ok = targets >= 0
        if c1 != 1:
            ok &= targets % c1 == 0
        zs, targets = zs[ok], targets[ok]
        if len(zs) == 0:
            continue
        t2 = targets // c1  # = x^2 + y^2
        xmax = np.sqrt(t2.astype(np.float64)).astype(np.int64) + 1
        if sup_cap is not None:
            xmax = np.minimum(xmax, sup_cap)
        counts = xmax + 1
        work_total += int(counts.sum())
        if work_total > budget:
            raise EnumerationBudgetError(work_total, budget)
        zrep = np.repeat(zs, counts)
        t2rep = np.repeat(t2, counts)
        offs = np.concatenate([np.arange(c + 0, dtype=np.int64) for c in counts]) if len(counts) else np.array([], dtype=np.int64)
        xs = offs
        y2 = t2rep - xs * xs
        good = y2 >= 0
        xs, y2, zrep = xs[good], y2[good], zrep[good]
        ys = np.rint(np.sqrt(y2.astype(np.float64))).astype(np.int64)
        exact = ys * ys == y2
        if sup_cap is not None:
            exact &= ys <= sup_cap
        xs, ys, zrep = xs[exact], ys[exact], zrep[exact]
        for x, y, z in zip(xs.tolist(), ys.tolist(), zrep.tolist()):
            for sx in ((x,) if x == 0 else (x, -x)):
                for sy in ((y,) if y == 0 else (y, -y)):
                    for sz in ((z,) if z == 0 else (z, -z)):
                        pt = form.join((sx, sy), (sz,))
                        if pt != (0,) * form.dim:
                            out.append(pt)
    return out


# ---------------------------------------------------------------------- #
# public enumeration API


def enumerate_window(
    form: QuadraticForm,
    m,
    window: Window,
    sup_cap: int | None = None,
    budget: int = DEFAULT_BUDGET,
) -> list[LatticePoint]:
    """Integer points of {Q = m} whose |u|_q2 lies in the window.

    Output is sorted lexicographically by the ambient coordinate tuple and is
    exhaustive for the given bounds; if the search space exceeds the budget an
    EnumerationBudgetError is raised instead of silently truncating.
    """
    m = Fraction(m)
    t_min, t_max = _t_bounds(form.s_lcm, window)
    raw = _enumerate_raw(form, m, t_min, t_max, sup_cap, budget)
    raw.sort()
    return [LatticePoint.build(form, x) for x in raw]


def core_points(form: QuadraticForm, m, variant: str | None = None) -> CoreSet:
    """Variety points below the first shell (|u|_q2 < 3 sqrt|m|, resp. < 1).

    The zero vector is excluded.  ``min_gap`` is the least sup-norm distance
    between distinct normalized core points (+inf when there are fewer than
    two of them).
    """
    m = Fraction(m)
    if variant is None:
        variant = "lightcone" if m == 0 else "level"
    if (variant == "lightcone") != (m == 0):
        raise ValueError("variant must match m: lightcone iff m == 0")
    hi_sq = Fraction(1) if m == 0 else 9 * abs(m)
    win = Window(Fraction(0), hi_sq, lo_open=False, hi_open=True)
    pts = enumerate_window(form, m, win)
    normalized = sorted({p.normalize() for p in pts})
    gap = math.inf
    for i in range(len(normalized)):
        for j in range(i + 1, len(normalized)):
            d = max(abs(a - b) for a, b in zip(normalized[i], normalized[j]))
            gap = min(gap, float(d))
    return CoreSet(tuple(pts), gap)


def point_json(p: LatticePoint) -> dict:
    return {
        "x": list(p.x),
        "q1_sq": f"{p.q1_sq.numerator}/{p.q1_sq.denominator}",
        "q2_sq": f"{p.q2_sq.numerator}/{p.q2_sq.denominator}",
        "sup": p.sup,
    }


# ---------------------------------------------------------------------- #
# equivalence keys


def _primitive_signed(v: tuple[int, ...]) -> tuple:
    """Primitive direction, sign-normalized so the first nonzero is positive.

    Two integer vectors get the same key iff one is a nonzero real multiple
    of the other.
    """
    if all(c == 0 for c in v):
        return ("0",)
    g = math.gcd(*(abs(c) for c in v))
    p = tuple(c // g for c in v)
    lead = next(c for c in p if c != 0)
    if lead < 0:
        p = tuple(-c for c in p)
    return p


def _primitive_oriented(v: tuple[int, ...]) -> tuple:
    """Primitive direction keeping orientation (key equal iff positive multiple)."""
    if all(c == 0 for c in v):
        return ("0",)
    g = math.gcd(*(abs(c) for c in v))
    return tuple(c // g for c in v)


def equiv_key(form: QuadraticForm, x: Sequence[int], relation: str) -> tuple:
    """Canonical key: two points are related iff their keys are equal.

    relation is one of
      - "scalar":    x = gamma * x'   for some nonzero real gamma
      - "block":     w = gamma * w' and u = gamma' * u' (independent scalars)
      - "q1_ratio":  w / |u|_q2 == w' / |u'|_q2  componentwise
      - "q2_ratio":  u / |w|_q1 == u' / |w'|_q1  componentwise

    Points with a vanishing divisor block under the ratio relations are pooled
    into a single flagged class.
    """
    xt = tuple(int(c) for c in x)
    if all(c == 0 for c in xt):
        raise ValueError("zero vector has no equivalence class")
    w, u = form.split_vector(xt)
    if relation == "scalar":
        return ("scalar",) + _primitive_signed(xt)
    if relation == "block":
        return ("block", _primitive_signed(w), _primitive_signed(u))
    if relation == "q1_ratio":
        den = form.q2.value(u)
        if den == 0:
            return ("q1_ratio", "zero-divisor")
        if all(c == 0 for c in w):
            return ("q1_ratio", "zero-block")
        p = _primitive_oriented(w)
        j = next(i for i, c in enumerate(p) if c != 0)
        lam = Fraction(w[j], p[j])  # positive: w is a positive multiple of p
        return ("q1_ratio", p, lam * lam / den)
    if relation == "q2_ratio":
        den = form.q1.value(w)
        if den == 0:
            return ("q2_ratio", "zero-divisor")
        if all(c == 0 for c in u):
            return ("q2_ratio", "zero-block")
        p = _primitive_oriented(u)
        j = next(i for i, c in enumerate(p) if c != 0)
        lam = Fraction(u[j], p[j])
        return ("q2_ratio", p, lam * lam / den)
    raise ValueError(f"unknown relation {relation!r}; pick one of {RELATIONS}")


# ---------------------------------------------------------------------- #
# shell store: cached arrays for repeated window queries


class ShellStore:
    """Caches every enumerated point of {Q = m} with sup norm <= cap.

    Points are extended lazily in t = s*|u|_q2^2 order; queries return numpy
    views (coordinates, scaled squared u-norms, sup norms, normalized floats)
    filtered by exact integer thresholds.
    """

    def __init__(self, form: QuadraticForm, m, sup_cap: int):
        self.form = form
        self.m = Fraction(m)
        self.sup_cap = sup_cap
        self.t_done = -1
        q2_nums = form.numerators[form.k :]
        self.t_cap = sum(q2_nums) * sup_cap * sup_cap
        dim = form.dim
        self.pts = np.empty((0, dim), dtype=np.int64)
        self.t = np.empty(0, dtype=np.int64)
        self.sup = np.empty(0, dtype=np.int64)
        self.normalized = np.empty((0, dim), dtype=np.float64)

    def ensure(self, t_hi: int, budget: int = DEFAULT_BUDGET) -> None:
        t_hi = min(t_hi, self.t_cap)
        if t_hi <= self.t_done:
            return
        raw = _enumerate_raw(
            self.form, self.m, self.t_done + 1, t_hi, self.sup_cap, budget
        )
        self.t_done = t_hi
        if not raw:
            return
        arr = np.array(sorted(raw), dtype=np.int64)
        q2_nums = np.array(self.form.numerators[self.form.k :], dtype=np.int64)
        u_idx = np.array(self.form.perm[self.form.k :], dtype=np.int64)
        u = arr[:, u_idx]
        t = (q2_nums[None, :] * u * u).sum(axis=1)
        sup = np.abs(arr).max(axis=1)
        norm = arr.astype(np.float64) / sup[:, None].astype(np.float64)
        self.pts = np.concatenate([self.pts, arr])
        self.t = np.concatenate([self.t, t])
        self.sup = np.concatenate([self.sup, sup])
        self.normalized = np.concatenate([self.normalized, norm])

    def window_arrays(self, window: Window, budget: int = DEFAULT_BUDGET):
        """(points, sup, normalized) arrays for the window, capped at sup_cap."""
        t_min, t_max = _t_bounds(self.form.s_lcm, window)
        if t_min > self.t_cap:  # the whole window lies beyond the cap
            dim = self.form.dim
            return (
                np.empty((0, dim), dtype=np.int64),
                np.empty(0, dtype=np.int64),
                np.empty((0, dim), dtype=np.float64),
            )
        t_max = min(t_max, self.t_cap)
        self.ensure(t_max, budget)
        mask = (self.t >= t_min) & (self.t <= t_max)
        return self.pts[mask], self.sup[mask], self.normalized[mask]


_STORES: dict = {}


def shell_store(form: QuadraticForm, m, sup_cap: int = 10_000) -> ShellStore:
    key = (form, Fraction(m), sup_cap)
    if key not in _STORES:
        _STORES[key] = ShellStore(form, m, sup_cap)
    return _STORES[key]
