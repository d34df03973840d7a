"""Independent oracles shared across test modules.

Everything here is written the dumb-but-obviously-correct way (full box
scans, definitional pairwise predicates) so library results can be checked
against code that shares no logic with the implementation.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from quadgame.forms import QuadraticForm
from quadgame.lattice import Window


def box_oracle(
    form: QuadraticForm, m, window: Window, sup_cap: int | None = None
) -> set[tuple[int, ...]]:
    """All integer x with Q(x) = m and |u|_q2 in the window, by box scan."""
    m = Fraction(m)
    s = form.s_lcm
    amb = [int(a * s) for a in form.ambient]  # signed scaled coefficients
    sm = m * s
    if sm.denominator != 1:
        return set()
    sm = int(sm)
    u_positions = set(form.perm[form.k :])

    # per-coordinate bound: q2 coords from the window, q1 coords from
    # q1(w) = m + q2(u) <= m + hi^2
    hi_sq = Fraction(window.hi_sq)
    w_cap_sq = m + hi_sq
    bounds = []
    for i, a in enumerate(form.ambient):
        if i in u_positions:
            b_sq = hi_sq / abs(a)
        else:
            b_sq = w_cap_sq / a if w_cap_sq > 0 else Fraction(0)
        b = math.isqrt(math.floor(b_sq)) + 1
        while b * b * abs(a) > (hi_sq if i in u_positions else max(w_cap_sq, 0)):
            b -= 1
        if sup_cap is not None:
            b = min(b, sup_cap)
        bounds.append(max(b, 0))

    axes = [np.arange(-b, b + 1, dtype=np.int64) for b in bounds]
    grids = np.meshgrid(*axes, indexing="ij")
    coords = np.stack([g.ravel() for g in grids], axis=1)
    sq = coords.astype(np.int64) ** 2
    qval = sum(amb[i] * sq[:, i] for i in range(form.dim))
    on_level = qval == sm
    t = sum(
        abs(amb[i]) * sq[:, i] for i in range(form.dim) if i in u_positions
    )
    t_lo = s * window.lo_sq
    t_hi = s * window.hi_sq
    lo_int = math.floor(t_lo) + 1 if window.lo_open else math.ceil(t_lo)
    hi_int = math.ceil(t_hi) - 1 if window.hi_open else math.floor(t_hi)
    in_window = (t >= lo_int) & (t <= hi_int)
    keep = on_level & in_window
    out = set()
    for row in coords[keep]:
        pt = tuple(int(c) for c in row)
        if any(c != 0 for c in pt):
            out.add(pt)
    return out


def related(form: QuadraticForm, x, y, relation: str) -> bool:
    """Definitional equivalence predicate, exact arithmetic."""
    xt, yt = tuple(x), tuple(y)
    wx, ux = form.split_vector(xt)
    wy, uy = form.split_vector(yt)

    def parallel(a, b) -> bool:
        # a = gamma*b for some real gamma != 0 (both-zero counts as parallel)
        if all(c == 0 for c in a) and all(c == 0 for c in b):
            return True
        if all(c == 0 for c in a) or all(c == 0 for c in b):
            return False
        for i in range(len(a)):
            for j in range(len(a)):
                if a[i] * b[j] != a[j] * b[i]:
                    return False
        return True

    if relation == "scalar":
        return parallel(xt, yt)
    if relation == "block":
        return parallel(wx, wy) and parallel(ux, uy)
    if relation == "q1_ratio":
        qx, qy = form.q2.value(ux), form.q2.value(uy)
        if qx == 0 or qy == 0:
            return qx == 0 and qy == 0
        # w_i / sqrt(qx) == w'_i / sqrt(qy): compare squares plus signs
        for a, b in zip(wx, wy):
            if a * a * qy != b * b * qx:
                return False
            if (a > 0) != (b > 0) or (a < 0) != (b < 0):
                return False
        return True
    if relation == "q2_ratio":
        qx, qy = form.q1.value(wx), form.q1.value(wy)
        if qx == 0 or qy == 0:
            return qx == 0 and qy == 0
        for a, b in zip(ux, uy):
            if a * a * qy != b * b * qx:
                return False
            if (a > 0) != (b > 0) or (a < 0) != (b < 0):
                return False
        return True
    raise ValueError(relation)
