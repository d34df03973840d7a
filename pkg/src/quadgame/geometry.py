"""Geometry of the direction set {Q = 0} on the unit sup-norm shell.

The playing board for the game engine is the set of directions x with
Q(x) = 0 and ||x||_sup = 1.  Locally the board is a graph over a face of
the cube, and everything the engine needs is built from that picture:
face patches and the radial projection between a thickened face and its
carrier hyperplane, tangent frames, snapping of near-surface points back
onto the board, curvature radii below which the surface is almost flat,
path-component statistics, and the bundle of constants (kappa0, alpha,
R0, ...) that parameterize a playable game.

Constants come in two flavors and the report attached to the bundle says
which is which: "provable" values are safe bounds computed from the
coefficients alone, while "sampled" values carry an explicit safety
factor on top of a randomized or gridded estimate.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .forms import DefiniteForm, QuadraticForm, norm_constants
from .lattice import core_points


SURFACE_TOL = 1e-12     # residual below which a point counts as on-surface
PATCH_DEPTH = 0.5       # faces are thickened by this much for projection
_GEOM_CACHE: dict = {}


class GeometryError(ValueError):
    """A point left the patch, a projection diverged, or a face is empty."""


def _sup(x) -> float:
    return max(abs(float(t)) for t in x)


def _l2(x, y) -> float:
    return math.sqrt(math.fsum((float(a) - float(b)) ** 2 for a, b in zip(x, y)))


def float_quadric(form: QuadraticForm, x: Sequence[float]) -> float:
    """Q(x) in float arithmetic (compensated summation)."""
    return math.fsum(a * float(t) * float(t) for a, t in zip(form.float_ambient(), x))


# ---------------------------------------------------------------------- #
# faces of the cube and their surface patches


@dataclass(frozen=True)
class Face:
    """One face of the sup-norm unit cube: {x : x[axis] == sign}."""

    axis: int
    sign: int
    dim: int

    def __post_init__(self):
        if self.sign not in (-1, 1):
            raise GeometryError("face sign must be +1 or -1")
        if not 0 <= self.axis < self.dim:
            raise GeometryError("face axis out of range")

    @property
    def plane_axes(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.dim) if i != self.axis)

    def embed(self, y: Sequence[float]) -> tuple[float, ...]:
        """Plane coordinates -> ambient point on the face hyperplane."""
        y = list(float(t) for t in y)
        if len(y) != self.dim - 1:
            raise GeometryError("wrong number of plane coordinates")
        y.insert(self.axis, float(self.sign))
        return tuple(y)

    def drop(self, x: Sequence[float]) -> tuple[float, ...]:
        """Ambient point -> plane coordinates (the axis entry is dropped)."""
        return tuple(float(x[i]) for i in self.plane_axes)


def face_coeffs(form: QuadraticForm, face: Face) -> tuple[Fraction, ...]:
    """Coefficients of Q restricted to the face plane, in plane order."""
    return tuple(form.ambient[i] for i in face.plane_axes)


def face_level(form: QuadraticForm, face: Face) -> Fraction:
    """Restricting Q = 0 to the face gives sum a_i y_i^2 = -a_axis."""
    return -form.ambient[face.axis]


def is_active_face(form: QuadraticForm, face: Face) -> bool:
    """Whether the face carries a patch of the surface of full dimension.

    Over the open face box, sum a_i y_i^2 sweeps the open interval between
    minus the total negative weight and the total positive weight; the face
    hosts a (d-1)-dimensional patch exactly when the required level falls
    strictly inside.  Faces that fail this carry at most boundary points
    shared with neighboring faces.
    """
    level = face_level(form, face)
    coeffs = face_coeffs(form, face)
    pos = sum((a for a in coeffs if a > 0), Fraction(0))
    neg = sum((-a for a in coeffs if a < 0), Fraction(0))
    return -neg < level < pos


def active_faces(form: QuadraticForm) -> list[Face]:
    out = []
    for axis in range(form.dim):
        for sign in (1, -1):
            face = Face(axis, sign, form.dim)
            if is_active_face(form, face):
                out.append(face)
    return out


def sample_board_points(form: QuadraticForm, count: int, rng, max_tries: int = 400):
    """Draw board points by Newton-snapping random seeds onto face patches.

    Points close to a face boundary are rejected so that every sample sits
    well inside its patch.  ``rng`` is a random.Random instance.
    """
    faces = active_faces(form)
    if not faces:
        raise GeometryError("the board has no face patches to sample from")
    out = []
    for _ in range(count):
        for _ in range(max_tries):
            face = faces[rng.randrange(len(faces))]
            seed = [rng.uniform(-0.9, 0.9) for _ in range(form.dim - 1)]
            try:
                plane = newton_to_face(form, face, seed)
            except GeometryError:
                continue
            if max(abs(t) for t in plane) > 0.95:
                continue
            out.append(face_unproject(face.embed(plane), face))
            break
        else:
            raise GeometryError("could not sample enough board points")
    return out


def pick_face(x: Sequence[float]) -> Face:
    """Face of the cube the point x radially lands on (ties: lowest axis)."""
    s = _sup(x)
    if s == 0:
        raise GeometryError("origin has no direction")
    axis = min(i for i in range(len(x)) if abs(float(x[i])) == s)
    return Face(axis, 1 if float(x[axis]) > 0 else -1, len(x))


def pick_active_face(form: QuadraticForm, x: Sequence[float], tol: float = 1e-9) -> Face:
    """Like pick_face but prefers a face that carries a surface patch."""
    s = _sup(x)
    if s == 0:
        raise GeometryError("origin has no direction")
    candidates = [
        Face(i, 1 if float(x[i]) > 0 else -1, len(x))
        for i in range(len(x))
        if abs(float(x[i])) >= s * (1.0 - tol)
    ]
    for face in candidates:
        if is_active_face(form, face):
            return face
    return candidates[0]


# ---------------------------------------------------------------------- #
# radial projection between a thickened face and its hyperplane


def face_project(x: Sequence[float], face: Face) -> tuple[float, ...]:
    """Push a point of the thickened face onto the face hyperplane.

    The map is x -> x / (sign * x[axis]) and is defined as long as the
    point sits at depth at least PATCH_DEPTH over the face.
    """
    depth = face.sign * float(x[face.axis])
    if depth < PATCH_DEPTH - 1e-12:
        raise GeometryError("point is too shallow over the face")
    return tuple(float(t) / depth for t in x)


def face_unproject(y: Sequence[float], face: Face) -> tuple[float, ...]:
    """Pull a hyperplane point back onto the unit shell (inverse map)."""
    if abs(float(y[face.axis]) - face.sign) > 1e-9:
        raise GeometryError("point is not on the face hyperplane")
    s = _sup(y)
    if s > 2.0 + 1e-9:
        raise GeometryError("point is outside the image of the thickened face")
    return tuple(float(t) / s for t in y)


# ---------------------------------------------------------------------- #
# the face quadric and Newton snapping


def face_quadric_value(form: QuadraticForm, face: Face, y: Sequence[float]) -> float:
    coeffs = face_coeffs(form, face)
    acc = [float(a) * float(t) * float(t) for a, t in zip(coeffs, y)]
    return math.fsum(acc) - float(face_level(form, face))


def face_quadric_grad(form: QuadraticForm, face: Face, y: Sequence[float]) -> tuple[float, ...]:
    coeffs = face_coeffs(form, face)
    return tuple(2.0 * float(a) * float(t) for a, t in zip(coeffs, y))


def newton_to_face(
    form: QuadraticForm,
    face: Face,
    y: Sequence[float],
    tol: float = 1e-14,
    max_iter: int = 60,
) -> tuple[float, ...]:
    """Snap plane coordinates onto the face quadric along its gradient."""
    cur = [float(t) for t in y]
    for _ in range(max_iter):
        f = face_quadric_value(form, face, cur)
        if abs(f) <= tol:
            return tuple(cur)
        g = face_quadric_grad(form, face, cur)
        g2 = math.fsum(t * t for t in g)
        if g2 < 1e-18:
            raise GeometryError("gradient vanished while snapping to the face")
        step = f / g2
        cur = [t - step * gt for t, gt in zip(cur, g)]
    raise GeometryError("no convergence while snapping to the face")


@dataclass(frozen=True)
class SurfacePoint:
    """A verified board point: on the shell and on the surface."""

    face: Face
    ambient: tuple[float, ...]
    plane: tuple[float, ...]


def surface_point(form: QuadraticForm, face: Face, plane: Sequence[float]) -> SurfacePoint:
    plane = newton_to_face(form, face, plane)
    ambient = face_unproject(face.embed(plane), face)
    if abs(float_quadric(form, ambient)) > SURFACE_TOL:
        raise GeometryError("surface residual too large")
    return SurfacePoint(face=face, ambient=ambient, plane=plane)


def project_to_variety(form: QuadraticForm, x: Sequence[float], basin: float = 0.25) -> tuple[float, ...]:
    """Snap a nearby ambient point onto the board.

    The direction of x picks a face; plane coordinates are Newton-snapped
    onto the face quadric and the result is pulled back to the shell.  If
    the snap moves the normalized input by more than ``basin`` in sup norm
    the input was not meaningfully near the surface and we refuse.
    """
    s = _sup(x)
    if s == 0:
        raise GeometryError("origin has no direction")
    xn = tuple(float(t) / s for t in x)
    face = pick_face(xn)
    plane = newton_to_face(form, face, face.drop(xn))
    out = face_unproject(face.embed(plane), face)
    if max(abs(a - b) for a, b in zip(out, xn)) > basin:
        raise GeometryError("point is outside the projection basin")
    return out


# ---------------------------------------------------------------------- #
# tangent frames and local charts


def tangent_frame(
    form: QuadraticForm, face: Face, plane: Sequence[float]
) -> tuple[tuple[float, ...], tuple[tuple[float, ...], ...]]:
    """Unit normal and an orthonormal tangent basis at a face-plane point.

    The normal is the normalized gradient of the face quadric; the tangent
    vectors come from two rounds of Gram-Schmidt over the standard basis,
    so the returned frame is orthonormal to about 1e-15.
    """
    d = len(tuple(plane))
    g = face_quadric_grad(form, face, plane)
    gn = math.sqrt(math.fsum(t * t for t in g))
    if gn < 1e-12:
        raise GeometryError("degenerate point: gradient vanishes")
    normal = tuple(t / gn for t in g)

    basis: list[tuple[float, ...]] = []
    for j in range(d):
        if len(basis) == d - 1:
            break
        v = [1.0 if i == j else 0.0 for i in range(d)]
        for _ in range(2):  # second pass scrubs rounding residue
            dot_n = math.fsum(a * b for a, b in zip(v, normal))
            v = [a - dot_n * b for a, b in zip(v, normal)]
            for b_vec in basis:
                dot_b = math.fsum(a * b for a, b in zip(v, b_vec))
                v = [a - dot_b * b for a, b in zip(v, b_vec)]
        nv = math.sqrt(math.fsum(t * t for t in v))
        if nv < 1e-6:
            continue
        basis.append(tuple(t / nv for t in v))
    if len(basis) != d - 1:
        raise GeometryError("could not build a tangent basis")

    frame = [normal] + basis
    for i, u in enumerate(frame):
        for j, w in enumerate(frame):
            want = 1.0 if i == j else 0.0
            if abs(math.fsum(a * b for a, b in zip(u, w)) - want) > 1e-12:
                raise GeometryError("tangent frame failed the orthonormality check")
    return normal, tuple(basis)


@dataclass(frozen=True)
class Chart:
    """Local coordinates on the face patch around a base point.

    Forward drops the pivot coordinate of the offset from the base point;
    inverse restores it by solving the face quadric on the branch of the
    base point.  Both directions are exact up to float rounding for points
    on the patch near the base point.
    """

    form: QuadraticForm
    face: Face
    center: tuple[float, ...]
    pivot: int

    def forward(self, plane: Sequence[float]) -> tuple[float, ...]:
        return tuple(
            float(plane[i]) - self.center[i]
            for i in range(len(self.center))
            if i != self.pivot
        )

    def inverse(self, z: Sequence[float]) -> tuple[float, ...]:
        coeffs = face_coeffs(self.form, self.face)
        level = float(face_level(self.form, self.face))
        out = [0.0] * len(self.center)
        rest = iter(z)
        for i in range(len(self.center)):
            if i != self.pivot:
                out[i] = self.center[i] + float(next(rest))
        acc = level - math.fsum(
            float(coeffs[i]) * out[i] * out[i]
            for i in range(len(self.center))
            if i != self.pivot
        )
        rad = acc / float(coeffs[self.pivot])
        if rad < 0:
            raise GeometryError("chart inverse left the patch")
        root = math.sqrt(rad)
        out[self.pivot] = root if self.center[self.pivot] > 0 else -root
        return tuple(out)


def chart(form: QuadraticForm, face: Face, plane: Sequence[float]) -> Chart:
    """Build the local chart at a point of the face patch."""
    center = tuple(float(t) for t in plane)
    if abs(face_quadric_value(form, face, center)) > 1e-9:
        raise GeometryError("chart base point is not on the face quadric")
    coeffs = face_coeffs(form, face)
    weights = [abs(float(a) * t) for a, t in zip(coeffs, center)]
    pivot = max(range(len(center)), key=lambda i: (weights[i], -i))
    if weights[pivot] < 1e-12:
        raise GeometryError("no usable pivot coordinate for the chart")
    return Chart(form=form, face=face, center=center, pivot=pivot)


# ---------------------------------------------------------------------- #
# sampled constants: projection distortion and ray avoidance


def estimate_c_pi(d: int, samples: int = 20000, seed: int = 7) -> float:
    """Distortion bound for the face projection, by sampled ratios.

    Pairs of shell points over a face (half of them nearly coincident, to
    expose the local stretching) are pushed through the projection and the
    worst length-ratio in either direction is recorded.  A 1.25 safety
    factor covers what the sample may have missed.  By symmetry the answer
    depends only on the dimension, never on the form or the face.
    """
    if d < 1:
        raise GeometryError("the board needs dimension at least 1")
    dim = d + 1
    rng = random.Random(seed)

    def shell_point() -> list[float]:
        u = [rng.uniform(-1.0, 1.0) for _ in range(dim)]
        u[-1] = rng.uniform(0.55, 1.0)
        s = max(abs(t) for t in u)
        return [t / s for t in u]

    def proj(p: Sequence[float]) -> list[float]:
        return [t / p[-1] for t in p]

    worst = 1.0
    for n in range(samples):
        a = shell_point()
        if n % 2 == 0:
            b = shell_point()
        else:
            b = [t + rng.gauss(0.0, 1e-3) for t in a]
            s = max(abs(t) for t in b)
            b = [t / s for t in b]
            if b[-1] < PATCH_DEPTH:
                continue
        den = _l2(a, b)
        if den < 1e-12:
            continue
        ratio = _l2(proj(a), proj(b)) / den
        worst = max(worst, ratio, 1.0 / ratio)
    return 1.25 * worst


def miss_ray_constant(block, grid: int = 64, pair_samples: int = 4000, seed: int = 4242) -> float:
    """Safe lower bound for the ray-avoidance ratio of a definite block.

    For unit vectors w, w' of the block's norm, compare the distance from
    w' to the ray through w against the distance from w' to w itself.
    With c the block inner product of the pair, the squared ratio is
    (1 - max(c, 0)^2) / (2 - 2c) exactly, so each candidate pair is
    resolved exactly and only the choice of pairs is sampled.  The
    infimum is approached by antipodal pairs, which the candidate set
    always contains, and a 0.9 safety factor is applied.  A block in one
    variable has no distinct rays to separate, so the ratio is 1.
    """
    if isinstance(block, DefiniteForm):
        coeffs = block.coeffs
    else:
        coeffs = tuple(Fraction(a) for a in block)
    k = len(coeffs)
    if k == 1:
        return 1.0
    a = [float(t) for t in coeffs]

    dirs: list[tuple[float, ...]] = []
    if k == 2:
        for i in range(grid):
            t = 2.0 * math.pi * i / grid
            dirs.append((math.cos(t) / math.sqrt(a[0]), math.sin(t) / math.sqrt(a[1])))
        pairs = list(itertools.combinations(range(len(dirs)), 2))
    else:
        rng = random.Random(seed)
        for _ in range(2 * grid):
            v = [rng.gauss(0.0, 1.0) for _ in range(k)]
            s = math.sqrt(math.fsum(ai * t * t for ai, t in zip(a, v)))
            if s < 1e-9:
                continue
            dirs.append(tuple(t / s for t in v))
        dirs += [tuple(-t for t in v) for v in dirs]
        pairs = [(i, len(dirs) // 2 + i) for i in range(len(dirs) // 2)]  # antipodes
        pairs += [
            (rng.randrange(len(dirs)), rng.randrange(len(dirs)))
            for _ in range(pair_samples)
        ]

    best = math.inf
    for i, j in pairs:
        if i == j:
            continue
        c = math.fsum(ai * u * w for ai, u, w in zip(a, dirs[i], dirs[j]))
        c = max(-1.0, min(1.0, c))
        if c > 1.0 - 1e-12:
            continue
        ratio_sq = (1.0 - max(c, 0.0) ** 2) / (2.0 - 2.0 * c)
        best = min(best, math.sqrt(ratio_sq))
    if not math.isfinite(best):
        raise GeometryError("no usable direction pairs for the ray constant")
    return 0.9 * best


# ---------------------------------------------------------------------- #
# curvature: how far the patch stays near its tangent plane


def taylor_radius(form: QuadraticForm, face: Face, eps: float) -> float:
    """Radius below which the patch hugs its tangent plane to relative eps.

    Within a ball of the returned radius around any patch point, surface
    points sit within eps times the radius of the tangent plane.  The
    bound is radius = eps / C with C built from the coefficient spread and
    the guaranteed size of the largest coordinate on the patch.
    """
    if eps <= 0:
        raise GeometryError("eps must be positive")
    if not is_active_face(form, face):
        raise GeometryError("face carries no surface patch")
    coeffs = [abs(float(a)) for a in face_coeffs(form, face)]
    amax, amin = max(coeffs), min(coeffs)
    mf = abs(float(face_level(form, face)))
    d = form.d
    delta = math.sqrt(mf / (d * amax))  # largest coordinate is at least this
    c_bound = max(1.0, amax / (2.0 * amin * delta))
    return eps / c_bound


def circle_surface_crossings(
    form: QuadraticForm,
    face: Face,
    plane: Sequence[float],
    u: Sequence[float],
    w: Sequence[float],
    radius: float,
    samples: int = 720,
) -> int:
    """Count sign changes of the face quadric around a plane circle.

    The circle has the given center and radius and lives in the 2-plane
    spanned by the (orthonormal) directions u and w.  A well-behaved
    round of the game has the surface crossing such circles exactly twice.
    """
    signs = []
    for i in range(samples):
        t = 2.0 * math.pi * i / samples
        pt = [
            float(plane[j]) + radius * (math.cos(t) * float(u[j]) + math.sin(t) * float(w[j]))
            for j in range(len(plane))
        ]
        signs.append(face_quadric_value(form, face, pt) > 0)
    return sum(1 for i in range(samples) if signs[i] != signs[(i + 1) % samples])


# ---------------------------------------------------------------------- #
# path components of the board


@dataclass(frozen=True)
class ComponentStats:
    """Mesh-based picture of the board's path components."""

    count: int
    sizes: tuple[int, ...]
    d1: float  # safe lower estimate of the least component diameter
    d2: float  # safe lower estimate of the least gap between components
    h: float   # mesh resolution the estimates were computed at


def component_geometry(form: QuadraticForm, h: float | None = None) -> ComponentStats:
    """Mesh the board and measure its path components.

    Every active face is gridded at resolution h; cells where the face
    quadric changes sign contribute nodes that are Newton-snapped onto the
    patch and pulled back to the shell.  Points are glued into components
    by linking mesh points within a few h of each other in ambient space,
    which is reliable as long as distinct components stay much further
    apart than the mesh step (true for every form we play on; meshes at
    comparable scale to the component gap would need a finer h).

    The least component diameter is probed by farthest-point iteration and
    scaled by 0.9; the least inter-component distance subtracts a 3h mesh
    allowance.  Both are deliberately under-estimates: game radii derived
    from them only get safer as they shrink.
    """
    d = form.d
    if d < 2:
        raise GeometryError("component meshing needs a surface, not isolated points")
    if h is None:
        h = 1e-3 if d == 2 else 1.0 / 32
    cached = _GEOM_CACHE.get(("mesh", form, h))
    if cached is not None:
        return cached
    faces = active_faces(form)
    if not faces:
        raise GeometryError("no active faces: the board is empty")

    chunks = []
    for face in faces:
        c = np.array([float(a) for a in face_coeffs(form, face)])
        mf = float(face_level(form, face))
        n = int(round(2.0 / h)) + 1
        axis_vals = np.linspace(-1.0, 1.0, n)
        sq = axis_vals * axis_vals

        vals = np.full((n,) * d, -mf)
        for i in range(d):
            shape = [1] * d
            shape[i] = n
            vals = vals + c[i] * sq.reshape(shape)
        pos = vals > 0

        mask = np.zeros_like(pos)
        for ax in range(d):
            lo = [slice(None)] * d
            hi = [slice(None)] * d
            lo[ax] = slice(None, -1)
            hi[ax] = slice(1, None)
            diff = pos[tuple(lo)] ^ pos[tuple(hi)]
            mask[tuple(lo)] |= diff
            mask[tuple(hi)] |= diff
        idx = np.argwhere(mask)
        if idx.size == 0:
            continue
        y = -1.0 + idx.astype(np.float64) * (2.0 / (n - 1))

        for _ in range(12):
            f = (y * y) @ c - mf
            g = 2.0 * y * c
            g2 = np.sum(g * g, axis=1)
            ok = g2 > 1e-14
            y = y[ok]
            f = f[ok]
            g = g[ok]
            g2 = g2[ok]
            y = y - (f / g2)[:, None] * g
        f = (y * y) @ c - mf
        keep = (np.abs(f) <= 1e-10) & (np.max(np.abs(y), axis=1) <= 1.0 + 2.0 * h)
        y = y[keep]
        if y.shape[0] == 0:
            continue
        amb = np.insert(y, face.axis, float(face.sign), axis=1)
        s = np.max(np.abs(amb), axis=1)
        chunks.append(amb / s[:, None])

    if not chunks:
        raise GeometryError("mesh found no surface points")
    points = np.vstack(chunks)
    # the sign-change mask marks several nodes per crossing cell; one
    # representative per cell keeps the resolution and sheds the rest
    cell = np.floor(points / h).astype(np.int64)
    _, first = np.unique(cell, axis=0, return_index=True)
    points = points[np.sort(first)]

    # union-find over spatial buckets: points in the same or adjacent
    # buckets of side 2.5h belong to the same component
    side = 2.5 * h
    keys = [tuple(k) for k in np.floor(points / side).astype(np.int64)]
    parent: dict[tuple, tuple] = {}

    def find(k):
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    def union(k1, k2):
        r1, r2 = find(k1), find(k2)
        if r1 != r2:
            parent[r1] = r2

    for k in keys:
        parent.setdefault(k, k)
    offsets = list(itertools.product((-1, 0, 1), repeat=points.shape[1]))
    for k in list(parent):
        for off in offsets:
            nb = tuple(a + b for a, b in zip(k, off))
            if nb in parent:
                union(k, nb)

    groups: dict[tuple, list[int]] = {}
    for i, k in enumerate(keys):
        groups.setdefault(find(k), []).append(i)
    comps = [points[np.array(ix)] for ix in groups.values()]
    comps.sort(key=len, reverse=True)

    diams = []
    for comp in comps:
        i = 0
        best = 0.0
        for _ in range(4):
            dd = np.linalg.norm(comp - comp[i], axis=1)
            j = int(np.argmax(dd))
            best = max(best, float(dd[j]))
            i = j
        diams.append(best)
    d1 = 0.9 * min(diams)

    if len(comps) == 1:
        d2 = math.inf
    else:
        raw = math.inf
        for a_i, b_i in itertools.combinations(range(len(comps)), 2):
            A, B = comps[a_i], comps[b_i]
            for start in range(0, A.shape[0], 2048):
                block = A[start : start + 2048]
                dist = np.linalg.norm(block[:, None, :] - B[None, :, :], axis=2)
                raw = min(raw, float(dist.min()))
        d2 = max(raw - 3.0 * h, 0.5 * raw)

    out = ComponentStats(
        count=len(comps),
        sizes=tuple(len(c) for c in comps),
        d1=d1,
        d2=d2,
        h=h,
    )
    _GEOM_CACHE[("mesh", form, h)] = out
    return out


# ---------------------------------------------------------------------- #
# the assembled constants bundle


def transform_bilip(form: QuadraticForm) -> float:
    """Bilipschitz constant of the coordinate change, 1 for diagonal input."""
    if form.transform is None:
        return 1.0
    mat = np.array([[float(t) for t in row] for row in form.transform])
    sv = np.linalg.svd(mat, compute_uv=False)
    return float(max(sv[0], 1.0 / sv[-1], 1.0))


def _transform_denom_sq(form: QuadraticForm) -> int:
    if form.transform is None:
        return 1
    worst = max(t.denominator for row in form.transform for t in row)
    return worst * worst


def kappa0(
    form: QuadraticForm,
    norms=None,
    ray_constants: tuple[float, float] | None = None,
) -> float:
    """Window-scaling constant separating inequivalent lattice directions.

    Built from the provable norm-comparison bound, the Euclidean-vs-block
    constants of the two definite blocks, and the ray-avoidance constants;
    non-diagonal forms pick up the squared worst denominator of the
    coordinate change.  Larger values are always safe: they widen windows
    and weaken the distance bound being certified.
    """
    if norms is None:
        norms = norm_constants(form)
    c_2q1 = math.sqrt(float(norms.eucl_q1_sq))
    c_2q2 = math.sqrt(float(norms.eucl_q2_sq))
    if ray_constants is None:
        ray_constants = (
            miss_ray_constant(form.q1),
            miss_ray_constant(form.q2),
        )
    base = (
        8.0
        * math.sqrt(10.0 * form.s_lcm)
        * norms.sum_sup
        * (1.0 + 1.0 / math.sqrt(3.0))
        * max(c_2q1, c_2q2)
        / min(ray_constants)
    )
    return base * _transform_denom_sq(form)


@dataclass(frozen=True, eq=False)
class GeomConstants:
    """Everything the game engine needs to know about a board.

    ``report`` maps each constant name to value / method / samples /
    safety so a reader can tell provable bounds from sampled estimates.
    """

    variant: str
    m: Fraction
    eps: float
    c_s: float
    c_s_sampled: float
    c_2q1: float
    c_2q2: float
    c_q1: float
    c_q2: float
    c_pi: float
    c_M: float
    c_2s: float
    c_2s_prime: float
    d0: float
    d1: float
    d2: float
    n_components: int
    R_eps: float
    R0: float
    R0_binding: str
    kappa0: float
    alpha: float
    report: dict


def geom_constants(
    form: QuadraticForm,
    m,
    variant: str | None = None,
    eps: float = 1e-3,
    c_pi_samples: int = 20000,
    h: float | None = None,
    norm_samples: int = 20000,
) -> GeomConstants:
    """Assemble the constants bundle for a board.

    ``variant`` is "lightcone" when approximating with lattice points on
    the zero set itself (m = 0) and "level" otherwise; it is inferred from
    m when omitted.  Results are cached per argument tuple since every
    game on the same board shares them.
    """
    m = Fraction(m)
    inferred = "lightcone" if m == 0 else "level"
    if variant is None:
        variant = inferred
    if variant not in ("level", "lightcone"):
        raise ValueError("variant must be 'level' or 'lightcone'")
    if variant != inferred:
        raise ValueError(f"variant {variant!r} does not match m = {m}")
    d = form.d
    if d < 2:
        raise GeometryError("game geometry needs dimension at least 2")

    key = (form, m, variant, eps, c_pi_samples, h, norm_samples)
    hit = _GEOM_CACHE.get(key)
    if hit is not None:
        return hit

    norms = norm_constants(form, samples=norm_samples)
    c_s = norms.sum_sup
    c_2q1 = math.sqrt(float(norms.eucl_q1_sq))
    c_2q2 = math.sqrt(float(norms.eucl_q2_sq))
    c_q1 = miss_ray_constant(form.q1)
    c_q2 = miss_ray_constant(form.q2)
    c_pi = estimate_c_pi(d, samples=c_pi_samples)
    c_m = transform_bilip(form)
    k0 = kappa0(form, norms=norms, ray_constants=(c_q1, c_q2))

    core = core_points(form, m)
    d0 = float(core.min_gap) if core.min_gap != math.inf else math.inf
    comps = component_geometry(form, h=h)
    mesh_h = comps.h
    r_eps = min(taylor_radius(form, f, eps) for f in active_faces(form))

    if variant == "level":
        anchor = 1.0 / (6.0 * k0 * math.sqrt(abs(float(m))))
    else:
        anchor = 1.0 / (2.0 * k0)
    # the patch-margin term keeps the projected opening ball inside the
    # slightly enlarged face image; we take the smaller (safe) reading
    patch_margin = min(c_pi, 1.0 / c_pi) / math.sqrt(d)
    terms = [
        ("window_anchor", anchor),
        ("core_gap", d0 / 2.0),
        ("component_diameter", comps.d1 / 2.0),
        ("component_gap", comps.d2 / 2.0),
        ("unit", 0.5),
        ("patch_margin", patch_margin),
        ("flat_radius", r_eps),
    ]
    binding, smallest = min(terms, key=lambda t: t[1])
    r0 = smallest / 3.0
    alpha = 1.0 / (8.0 * c_m * c_m * c_pi * c_pi)

    report = {
        "c_s": {"value": c_s, "method": "provable norm comparison", "samples": None, "safety": None},
        "c_s_sampled": {"value": norms.sum_sup_sampled, "method": "random direction sampling", "samples": norm_samples, "safety": None},
        "c_2q1": {"value": c_2q1, "method": "exact coefficient bound", "samples": None, "safety": None},
        "c_2q2": {"value": c_2q2, "method": "exact coefficient bound", "samples": None, "safety": None},
        "c_q1": {"value": c_q1, "method": "direction grid with exact ray minimization", "samples": None, "safety": 0.9},
        "c_q2": {"value": c_q2, "method": "direction grid with exact ray minimization", "samples": None, "safety": 0.9},
        "c_pi": {"value": c_pi, "method": "sampled projection distortion", "samples": c_pi_samples, "safety": 1.25},
        "c_M": {"value": c_m, "method": "singular values of the coordinate change", "samples": None, "safety": None},
        "c_2s": {"value": 1.0 / c_s, "method": "reciprocal of c_s", "samples": None, "safety": None},
        "c_2s_prime": {"value": 1.0 / math.sqrt(d + 1), "method": "Euclidean-to-sup in dimension d+1", "samples": None, "safety": None},
        "d0": {"value": d0, "method": "exact scan of the small-vector pool", "samples": None, "safety": None},
        "d1": {"value": comps.d1, "method": f"mesh farthest-point at h={mesh_h:g}", "samples": sum(comps.sizes), "safety": 0.9},
        "d2": {"value": comps.d2, "method": f"mesh cross-distance minus 2h at h={mesh_h:g}", "samples": sum(comps.sizes), "safety": None},
        "R_eps": {"value": r_eps, "method": f"curvature bound at eps={eps:g}", "samples": None, "safety": None},
        "kappa0": {"value": k0, "method": "formula over provable constants", "samples": None, "safety": None},
        "R0": {"value": r0, "method": f"one third of the binding term ({binding})", "samples": None, "safety": None},
        "alpha": {"value": alpha, "method": "1 / (8 c_M^2 c_pi^2)", "samples": None, "safety": None},
    }

    out = GeomConstants(
        variant=variant,
        m=m,
        eps=eps,
        c_s=c_s,
        c_s_sampled=norms.sum_sup_sampled,
        c_2q1=c_2q1,
        c_2q2=c_2q2,
        c_q1=c_q1,
        c_q2=c_q2,
        c_pi=c_pi,
        c_M=c_m,
        c_2s=1.0 / c_s,
        c_2s_prime=1.0 / math.sqrt(d + 1),
        d0=d0,
        d1=comps.d1,
        d2=comps.d2,
        n_components=comps.count,
        R_eps=r_eps,
        R0=r0,
        R0_binding=binding,
        kappa0=k0,
        alpha=alpha,
        report=report,
    )
    _GEOM_CACHE[key] = out
    return out
