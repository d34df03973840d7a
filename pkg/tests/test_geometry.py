"""Geometry layer: patches, constants, components, charts."""

import math
import random
from fractions import Fraction

import numpy as np
import pytest

from quadgame import geometry as G
from quadgame.forms import QuadraticForm, diagonalize

CONE = QuadraticForm.diagonal([1, 1, -1])
HYP = QuadraticForm.diagonal([1, -1])
MIXED = QuadraticForm.diagonal([2, -3, -1])
CONE3 = QuadraticForm.diagonal([1, 1, 1, -1])

Z_FACE = G.Face(2, 1, 3)


# ---------------------------------------------------------------------- #
# faces and activity


def test_active_faces_frozen():
    assert [(f.axis, f.sign) for f in G.active_faces(CONE)] == [(2, 1), (2, -1)]
    assert [(f.axis, f.sign) for f in G.active_faces(MIXED)] == [
        (0, 1),
        (0, -1),
        (2, 1),
        (2, -1),
    ]
    assert G.active_faces(HYP) == []
    assert [(f.axis, f.sign) for f in G.active_faces(CONE3)] == [(3, 1), (3, -1)]


def test_face_bookkeeping():
    face = G.Face(0, -1, 3)
    assert face.plane_axes == (1, 2)
    assert face.embed((0.3, 0.7)) == (-1.0, 0.3, 0.7)
    assert face.drop((-1.0, 0.3, 0.7)) == (0.3, 0.7)
    assert G.face_coeffs(MIXED, face) == (Fraction(-3), Fraction(-1))
    assert G.face_level(MIXED, face) == Fraction(-2)
    with pytest.raises(G.GeometryError):
        G.Face(3, 1, 3)
    with pytest.raises(G.GeometryError):
        G.Face(0, 2, 3)


def test_pick_face():
    assert G.pick_face((0.6, 0.8, 1.0)) == G.Face(2, 1, 3)
    assert G.pick_face((-1.0, 0.0, -0.2)) == G.Face(0, -1, 3)
    # ties break to the lowest axis; the active variant prefers a face
    # that actually carries surface
    assert G.pick_face((1.0, 0.0, 1.0)) == G.Face(0, 1, 3)
    assert G.pick_active_face(CONE, (1.0, 0.0, 1.0)) == G.Face(2, 1, 3)
    with pytest.raises(G.GeometryError):
        G.pick_face((0.0, 0.0, 0.0))


# ---------------------------------------------------------------------- #
# the radial projection between shell and face hyperplane


def test_face_project_examples():
    assert G.face_project((1.0, 0.5, 0.8), Z_FACE) == pytest.approx((1.25, 0.625, 1.0))
    # points already on the hyperplane stay put
    assert G.face_project((0.6, 0.8, 1.0), Z_FACE) == pytest.approx((0.6, 0.8, 1.0))
    with pytest.raises(G.GeometryError):
        G.face_project((1.0, 0.5, 0.4), Z_FACE)


def test_face_unproject_round_trip():
    y = G.face_project((1.0, 0.5, 0.8), Z_FACE)
    assert G.face_unproject(y, Z_FACE) == pytest.approx((1.0, 0.5, 0.8))
    with pytest.raises(G.GeometryError):
        G.face_unproject((2.5, 0.0, 1.0), Z_FACE)  # beyond the patch image
    with pytest.raises(G.GeometryError):
        G.face_unproject((1.25, 0.625, 0.9), Z_FACE)  # not on the hyperplane


def test_projection_distortion_within_estimate():
    """Fresh sampled pairs must respect the reported bilipschitz bound."""
    c_pi = G.estimate_c_pi(2)
    assert c_pi >= 1.0
    rng = random.Random(991)

    def shell_point():
        u = [rng.uniform(-1.0, 1.0) for _ in range(3)]
        u[2] = rng.uniform(0.55, 1.0)
        s = max(abs(t) for t in u)
        return tuple(t / s for t in u)

    for n in range(20000):
        a = shell_point()
        if n % 2 == 0:
            b = shell_point()
        else:
            b = tuple(t + rng.gauss(0.0, 1e-4) for t in a)
            s = max(abs(t) for t in b)
            b = tuple(t / s for t in b)
            if b[2] < 0.5:
                continue
        den = math.dist(a, b)
        if den < 1e-12:
            continue
        ratio = math.dist(G.face_project(a, Z_FACE), G.face_project(b, Z_FACE)) / den
        assert 1.0 / c_pi <= ratio <= c_pi


# ---------------------------------------------------------------------- #
# ray avoidance


def test_miss_ray_oracle_round_block():
    """Dense brute force over angle pairs and ray parameters.

    For the round block x^2 + y^2 the worst ratio of (distance to the ray
    through w) over (distance to w itself) should be 1/2, approached by
    antipodal pairs.
    """
    theta = np.linspace(0.0, 2.0 * np.pi, 240, endpoint=False)
    w = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    gam = np.linspace(0.0, 3.0, 301)
    best = np.inf
    for i in range(len(w)):
        diff = w[:, None, :] - gam[None, :, None] * w[i][None, None, :]
        ray_dist = np.sqrt((diff**2).sum(axis=2)).min(axis=1)
        point_dist = np.sqrt(((w - w[i]) ** 2).sum(axis=1))
        ok = point_dist > 1e-9
        best = min(best, float((ray_dist[ok] / point_dist[ok]).min()))
    assert best == pytest.approx(0.5, abs=0.005)

    est = G.miss_ray_constant(CONE.q1)
    assert est == pytest.approx(0.45, abs=0.005)
    assert est < best  # the safety factor keeps us below the true infimum


def test_miss_ray_variants():
    assert G.miss_ray_constant(HYP.q1) == 1.0  # one variable, no rays to split
    assert 0.0 < G.miss_ray_constant([1, 4]) <= 0.5
    assert 0.0 < G.miss_ray_constant([1, 2, 3]) <= 0.5


# ---------------------------------------------------------------------- #
# snapping and surface points


def test_project_to_variety_examples():
    p = G.project_to_variety(CONE, (0.61, 0.79, 1.0))
    assert abs(G.float_quadric(CONE, p)) <= 1e-12
    assert max(abs(t) for t in p) == pytest.approx(1.0)
    # surface points are fixed points of the snap
    again = G.project_to_variety(CONE, p)
    assert max(abs(a - b) for a, b in zip(p, again)) <= 1e-14
    with pytest.raises(G.GeometryError):
        G.project_to_variety(CONE, (10.0, 10.0, 10.0))
    with pytest.raises(G.GeometryError):
        G.project_to_variety(CONE, (0.0, 0.0, 0.0))


def test_project_to_variety_random_perturbations():
    rng = random.Random(55)
    for _ in range(300):
        t = rng.uniform(0.0, 2.0 * math.pi)
        base = (math.cos(t), math.sin(t), 1.0)
        sign = rng.choice([1.0, -1.0])
        base = tuple(b * sign for b in base)
        x = tuple(b + rng.gauss(0.0, 1e-4) for b in base)
        snapped = G.project_to_variety(CONE, x)
        assert abs(G.float_quadric(CONE, snapped)) <= 1e-12
        assert math.dist(snapped, base) <= 1e-3


def test_surface_point_builder():
    sp = G.surface_point(CONE, Z_FACE, (0.6, 0.81))
    assert abs(G.float_quadric(CONE, sp.ambient)) <= 1e-12
    with pytest.raises(G.GeometryError):
        G.surface_point(CONE, Z_FACE, (0.0, 0.0))  # gradient vanishes at the center


# ---------------------------------------------------------------------- #
# tangent frames


def test_tangent_frame_circle():
    normal, basis = G.tangent_frame(CONE, Z_FACE, (0.6, 0.8))
    assert normal == pytest.approx((0.6, 0.8))
    assert len(basis) == 1
    # tangent is the rotated normal, up to sign
    cross = basis[0][0] * normal[1] - basis[0][1] * normal[0]
    assert abs(abs(cross) - 1.0) <= 1e-12


def test_tangent_frame_sphere():
    face = G.Face(3, 1, 4)
    p = (0.4, 0.4, math.sqrt(1 - 0.32))
    normal, basis = G.tangent_frame(CONE3, face, p)
    assert len(basis) == 2
    scale = normal[0] / p[0]
    assert normal == pytest.approx(tuple(scale * t for t in p))
    for u in basis:
        assert sum(a * b for a, b in zip(u, normal)) == pytest.approx(0.0, abs=1e-12)
        assert sum(a * a for a in u) == pytest.approx(1.0, abs=1e-12)
    assert sum(a * b for a, b in zip(*basis)) == pytest.approx(0.0, abs=1e-12)


# ---------------------------------------------------------------------- #
# curvature: flatness radius and crossing counts


def _slab_violation(form, face, plane_p, radius, eps, samples=1000):
    """Worst tangent-plane deviation of surface points in a small disc."""
    normal, basis = G.tangent_frame(form, face, plane_p)
    worst = 0.0
    rng = random.Random(17)
    for _ in range(samples):
        off = [rng.gauss(0.0, 1.0) for _ in basis]
        scale = radius * rng.random() / math.sqrt(sum(t * t for t in off))
        probe = [
            p + scale * sum(o * b[i] for o, b in zip(off, basis))
            for i, p in enumerate(plane_p)
        ]
        try:
            x = G.newton_to_face(form, face, probe)
        except G.GeometryError:
            continue
        if math.dist(x, plane_p) > radius:
            continue
        dev = abs(sum((a - b) * n for a, b, n in zip(x, plane_p, normal)))
        worst = max(worst, dev - eps * radius)
    return worst


def test_flatness_radius_slab_property():
    eps = 1e-3
    for form, face, plane in [
        (CONE, Z_FACE, (0.6, 0.8)),
        (MIXED, G.Face(0, 1, 3), (0.5, math.sqrt(2 - 3 * 0.25))),
        (MIXED, G.Face(2, 1, 3), (math.sqrt((1 + 3 * 0.09) / 2), 0.3)),
    ]:
        plane = G.newton_to_face(form, face, plane)
        r = G.taylor_radius(form, face, eps)
        assert r > 0
        assert _slab_violation(form, face, plane, r, eps) <= 1e-12
        assert _slab_violation(form, face, plane, r / 2, eps) <= 1e-12


def test_flatness_radius_scaling():
    r1 = G.taylor_radius(MIXED, G.Face(0, 1, 3), 1e-3)
    r2 = G.taylor_radius(MIXED, G.Face(0, 1, 3), 2e-3)
    assert r2 == pytest.approx(2 * r1, rel=1e-12)
    # flatter boards allow larger radii than curvier ones
    assert G.taylor_radius(CONE, Z_FACE, 1e-3) > r1
    with pytest.raises(G.GeometryError):
        G.taylor_radius(CONE, G.Face(0, 1, 3), 1e-3)  # inactive face
    with pytest.raises(G.GeometryError):
        G.taylor_radius(CONE, Z_FACE, 0.0)


def test_small_circles_cross_surface_twice():
    rng = random.Random(23)
    for _ in range(25):
        t = rng.uniform(0.0, 2.0 * math.pi)
        plane = (math.cos(t), math.sin(t))
        normal, basis = G.tangent_frame(CONE, Z_FACE, plane)
        hits = G.circle_surface_crossings(
            CONE, Z_FACE, plane, basis[0], normal, radius=rng.uniform(0.01, 0.2)
        )
        assert hits == 2
    # d = 3: a small plane circle through a sphere point also crosses twice
    face = G.Face(3, 1, 4)
    p = G.newton_to_face(CONE3, face, (0.3, 0.5, 0.8))
    normal, basis = G.tangent_frame(CONE3, face, p)
    assert G.circle_surface_crossings(CONE3, face, p, basis[0], normal, 0.1) == 2


# ---------------------------------------------------------------------- #
# charts


def test_chart_round_trip():
    for form, face, seeds in [
        (CONE, Z_FACE, [(0.6, 0.8), (0.99, 0.14), (-0.7, 0.71)]),
        (MIXED, G.Face(0, 1, 3), [(0.5, 0.7), (-0.2, 1.3)]),
    ]:
        for seed in seeds:
            base = G.newton_to_face(form, face, seed)
            ch = G.chart(form, face, base)
            rng = random.Random(3)
            for _ in range(100):
                probe = [t + rng.uniform(-0.02, 0.02) for t in base]
                y = G.newton_to_face(form, face, probe)
                back = ch.inverse(ch.forward(y))
                assert max(abs(a - b) for a, b in zip(y, back)) <= 1e-10


def test_chart_errors():
    ch = G.chart(CONE, Z_FACE, (0.6, 0.8))
    with pytest.raises(G.GeometryError):
        ch.inverse((1.5,))  # no surface point that far out
    with pytest.raises(G.GeometryError):
        G.chart(CONE, Z_FACE, (0.5, 0.5))  # base point off the surface


# ---------------------------------------------------------------------- #
# components


def test_component_geometry_cone():
    stats = G.component_geometry(CONE)
    assert stats.count == 2
    assert stats.sizes[0] == stats.sizes[1]
    # two unit circles at heights +-1: diameters 2 (scaled by the 0.9
    # safety), gap 2 (minus the 3h mesh allowance)
    assert stats.d1 == pytest.approx(1.8, rel=1e-2)
    assert stats.d2 == pytest.approx(2.0 - 3 * stats.h, abs=5e-3)
    assert 0 < stats.d1 < 2.0 and 0 < stats.d2 < 2.0


def test_component_geometry_mixed():
    stats = G.component_geometry(MIXED)
    assert stats.count == 2
    # the two loops approach each other across the gap 2 / sqrt(2)
    assert stats.d2 == pytest.approx(math.sqrt(2.0), abs=0.01)
    assert stats.d1 > 1.5


def test_component_geometry_d3():
    stats = G.component_geometry(CONE3)
    assert stats.count == 2
    assert stats.d1 == pytest.approx(1.8, rel=5e-2)
    assert stats.d2 > 1.9


def test_component_geometry_rejects_points():
    with pytest.raises(G.GeometryError):
        G.component_geometry(HYP)


# ---------------------------------------------------------------------- #
# the constants bundle


def test_kappa0_frozen_value():
    want = 16.0 * math.sqrt(10.0) * (1.0 + 1.0 / math.sqrt(3.0))
    assert G.kappa0(HYP) == pytest.approx(want, rel=1e-12)


def test_kappa0_general_form_multiplier():
    gen = diagonalize([[0, 1], [1, 0]])
    denom = max(t.denominator for row in gen.transform for t in row)
    plain = QuadraticForm.diagonal(gen.ambient)
    assert G.kappa0(gen) == pytest.approx(G.kappa0(plain) * denom**2, rel=1e-12)
    assert G.transform_bilip(gen) >= 1.0
    assert G.transform_bilip(plain) == 1.0


def test_geom_constants_cone_level():
    gc = G.geom_constants(CONE, 1)
    assert gc.variant == "level"
    assert gc.R0_binding == "window_anchor"
    assert gc.R0 == pytest.approx(1.0 / (18.0 * gc.kappa0), rel=1e-12)
    assert 0 < gc.alpha < 0.5
    assert gc.alpha == pytest.approx(1.0 / (8.0 * gc.c_pi**2), rel=1e-12)
    assert gc.c_2s == pytest.approx(1.0 / gc.c_s, rel=1e-12)
    assert gc.c_2s_prime == pytest.approx(1.0 / math.sqrt(3.0), rel=1e-12)
    assert gc.d0 == pytest.approx(0.5)  # smallest gap in the small-vector pool
    assert gc.n_components == 2
    # every reported entry carries its method
    for name, entry in gc.report.items():
        assert set(entry) == {"value", "method", "samples", "safety"}, name


def test_geom_constants_cone_lightcone():
    gc = G.geom_constants(CONE, 0)
    assert gc.variant == "lightcone"
    assert gc.d0 == math.inf  # no small vectors exist on the zero set
    assert gc.R0_binding == "flat_radius"
    assert gc.R0 == pytest.approx(gc.R_eps / 3.0, rel=1e-12)
    with pytest.raises(ValueError):
        G.geom_constants(CONE, 0, variant="level")
    with pytest.raises(ValueError):
        G.geom_constants(CONE, 1, variant="lightcone")
    with pytest.raises(G.GeometryError):
        G.geom_constants(HYP, 1)
