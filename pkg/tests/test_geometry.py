import dataclasses
import math

import numpy as np
import pytest

from cornermag.errors import (
    InvalidDomain, UnsupportedGeometry, ValidationError, ZeroField,
)
from cornermag.geometry import (
    ChainFamily, CornerDomain, Edge, Face, SingularChain, Vertex,
    chain_distance_upper, chain_leq, circular_cone, cone_chain_classes,
    corner_opening_2d, enumerate_chain_classes, field_face_angle, fullspace,
    halfspace, same_cone, stratify, tangent_cone_at, validate_domain, wedge,
)
from conftest import build_unit_cube
from oracles import rotation_alignment_norm


def _by_dim(strata):
    out = {}
    for s in strata:
        out.setdefault(s.reduced_dimension, []).append(s)
    return {k: len(v) for k, v in out.items()}


def test_square_stratification(unit_square):
    strata = stratify(unit_square)
    assert _by_dim(strata) == {0: 1, 1: 4, 2: 4}
    assert strata[0].id == "interior"
    assert {s.carrier_kind for s in strata} == {"interior", "edge", "vertex"}


def test_cube_stratification(unit_cube):
    strata = stratify(unit_cube)
    assert _by_dim(strata) == {0: 1, 1: 6, 2: 12, 3: 8}


def test_lens_stratification(lens_domain):
    strata = stratify(lens_domain)
    assert _by_dim(strata) == {0: 1, 1: 2, 2: 1}
    assert all(s.carrier_kind != "vertex" for s in strata)


def test_square_corner_cone(unit_square):
    strata = stratify(unit_square)
    corner = next(s for s in strata if s.id == "vertex:v0")
    cone = tangent_cone_at(unit_square, corner)
    assert cone.kind == "wedge" and cone.ambient_dimension == 2
    assert abs(cone.opening - math.pi / 2) < 1e-12
    bis = np.asarray(cone.frame[0])
    assert np.allclose(bis, [math.sqrt(0.5), math.sqrt(0.5)])


def test_reflex_corner_bisector(l_polygon):
    assert abs(corner_opening_2d(l_polygon, "v3") - 1.5 * math.pi) < 1e-12
    cone = tangent_cone_at(l_polygon, next(
        s for s in stratify(l_polygon) if s.id == "vertex:v3"))
    assert abs(cone.opening - 1.5 * math.pi) < 1e-12
    # bisector must point into the L, away from the missing quadrant
    assert np.allclose(cone.frame[0], [-math.sqrt(0.5), -math.sqrt(0.5)])


def test_square_side_cone(unit_square):
    side = next(s for s in stratify(unit_square) if s.id == "edge:s0")
    cone = tangent_cone_at(unit_square, side)
    assert cone.kind == "halfspace"
    assert np.allclose(cone.normal, [0.0, -1.0])


def test_cube_face_and_edge_cones(unit_cube):
    strata = stratify(unit_cube)
    face = next(s for s in strata if s.id == "face:top")
    assert tangent_cone_at(unit_cube, face).normal == (0.0, 0.0, 1.0)
    edge = next(s for s in strata if s.id == "edge:e0")
    cone = tangent_cone_at(unit_cube, edge)
    assert cone.kind == "wedge"
    assert abs(cone.opening - math.pi / 2) < 1e-10
    e = np.asarray(cone.frame[0])
    assert abs(abs(e[0]) - 1.0) < 1e-12  # edge e0 runs along x
    nus = np.array(cone.face_normals())
    want = {(0.0, 0.0, -1.0), (0.0, -1.0, 0.0)}
    got = {tuple(np.round(n, 9)) for n in nus}
    assert got == want


def test_cube_vertex_cone(unit_cube):
    v = next(s for s in stratify(unit_cube) if s.id == "vertex:v000")
    cone = tangent_cone_at(unit_cube, v)
    assert cone.kind == "cone3d" and cone.section.kind == "polygon"
    assert len(cone.section.face_normals) == 3
    assert len(cone.section.edge_wedges) == 3
    assert all(w.kind == "wedge" for w in cone.section.edge_wedges)


def test_lens_edge_cone_rotates(lens_domain):
    rim = next(s for s in stratify(lens_domain) if s.id == "edge:rim")
    c0 = tangent_cone_at(lens_domain, rim, 0.0)
    c1 = tangent_cone_at(lens_domain, rim, 0.25)
    assert c0.kind == c1.kind == "wedge"
    assert abs(c0.opening - 0.3 * math.pi) < 1e-12
    assert not same_cone(c0, c1)
    # bisector points toward the rim's axis
    assert np.allclose(c0.frame[1], [-1.0, 0.0, 0.0], atol=1e-3)


def test_chain_class_counts(unit_cube):
    assert len(cone_chain_classes(fullspace())) == 1
    assert len(cone_chain_classes(halfspace((0, 0, 1)))) == 2
    assert len(cone_chain_classes(wedge(2.0))) == 4
    v = next(s for s in stratify(unit_cube) if s.id == "vertex:v111")
    chains = enumerate_chain_classes(unit_cube, v)
    assert len(chains) == 8
    assert all(isinstance(c, SingularChain) for c in chains)
    depths = sorted(c.length for c in chains)
    assert depths == [1, 2, 2, 2, 2, 2, 2, 2]


def test_wedge_chain_halfspaces_match_faces():
    cone = wedge(0.8, edge_dir=(0, 0, 1), bisector=(1, 0, 0))
    chains = cone_chain_classes(cone)
    normals = {c.structure.normal for c in chains if c.structure.kind == "halfspace"}
    assert normals == set(cone.face_normals())
    interior = [c for c in chains if c.structure.kind == "fullspace"]
    assert len(interior) == 1 and interior[0].length == 2


def test_conical_vertex_chain_family():
    chains = cone_chain_classes(circular_cone(0.5, axis=(0, 0, 1)))
    fam = chains[-1]
    assert isinstance(fam, ChainFamily)
    grid = fam.grid()
    assert len(grid) == 64
    for c in grid[:4]:
        n = np.asarray(c.structure.normal)
        # every family normal keeps the same angle to the cone axis
        assert abs(float(n @ [0, 0, 1]) + math.sin(0.25)) < 1e-12
    assert {c.structure.kind for c in chains[:-1]} == {"cone3d", "fullspace"}


def test_chain_prefix_order():
    cone = wedge(1.0)
    head, ray_p, ray_m, interior = cone_chain_classes(cone)
    assert chain_leq(head, head)
    assert chain_leq(head, ray_p) and chain_leq(head, interior)
    assert not chain_leq(ray_p, head)
    assert not chain_leq(ray_p, ray_m)
    assert not chain_leq(ray_p, interior)
    moved = dataclasses.replace(head, base_point=(0.0, 1.0, 0.0))
    assert not chain_leq(moved, ray_p)


def test_chain_distance_same_structure():
    a = cone_chain_classes(wedge(1.0), base_point=(0, 0, 0))[0]
    b = cone_chain_classes(wedge(1.0), base_point=(3, 4, 0))[0]
    assert abs(chain_distance_upper(a, b) - 5.0) < 1e-12


def test_chain_distance_halfspace_rotation():
    phi = 0.7
    n1 = (0.0, 0.0, 1.0)
    n2 = (0.0, math.sin(phi), math.cos(phi))
    a = cone_chain_classes(halfspace(n1))[0]
    b = cone_chain_classes(halfspace(n2))[0]
    d = chain_distance_upper(a, b)
    assert abs(d - 2 * math.sin(phi / 2)) < 1e-12
    assert abs(d - rotation_alignment_norm(np.array(n1), np.array(n2))) < 1e-10
    assert chain_distance_upper(b, a) == pytest.approx(d)


def test_chain_distance_wedge_pairs():
    a = cone_chain_classes(wedge(0.9))[0]
    b = cone_chain_classes(wedge(1.3))[0]
    d = chain_distance_upper(a, b)
    assert 0 < d < math.inf
    assert chain_distance_upper(b, a) == pytest.approx(d)
    # pure rotation of the frame: defect equals the rotation norm
    rot = cone_chain_classes(wedge(0.9, edge_dir=(0, 1, 0), bisector=(0, 0, 1)))[0]
    dr = chain_distance_upper(a, rot)
    assert 0 < dr <= 2.0 + 1e-12
    # no canonical stretch joins a convex wedge to a reflex one
    reflex = cone_chain_classes(wedge(4.0))[0]
    assert chain_distance_upper(a, reflex) == math.inf


def test_chain_distance_dimension_gap():
    hs = cone_chain_classes(halfspace((0, 0, 1)))[0]
    full = cone_chain_classes(fullspace())[0]
    assert chain_distance_upper(hs, full) == math.inf
    c1 = cone_chain_classes(circular_cone(0.4))[0]
    c2 = cone_chain_classes(circular_cone(0.5))[0]
    with pytest.raises(UnsupportedGeometry):
        chain_distance_upper(c1, c2)
    assert chain_distance_upper(c1, c1) == 0.0


def test_validate_rejects_flipped_face_normal():
    cube = build_unit_cube()
    bad_faces = tuple(
        Face(f.id, tuple(-x for x in f.normal), f.loop) if f.id == "top" else f
        for f in cube.faces)
    bad = CornerDomain(3, cube.vertices, cube.edges, bad_faces)
    with pytest.raises(ValidationError) as err:
        validate_domain(bad)
    assert err.value.invariant == "normal-consistency"


def test_validate_rejects_wrong_opening():
    cube = build_unit_cube()
    bad_edges = tuple(
        dataclasses.replace(e, opening=1.0) if e.id == "e0" else e
        for e in cube.edges)
    with pytest.raises(ValidationError) as err:
        validate_domain(CornerDomain(3, cube.vertices, bad_edges, cube.faces))
    assert err.value.invariant == "dihedral-opening"


def test_validate_rejects_nonunit_normal():
    cube = build_unit_cube()
    bad_faces = tuple(
        Face(f.id, (0.0, 0.0, 2.0), f.loop) if f.id == "top" else f
        for f in cube.faces)
    with pytest.raises(ValidationError) as err:
        validate_domain(CornerDomain(3, cube.vertices, cube.edges, bad_faces))
    assert err.value.invariant == "unit-normal"


def test_validate_rejects_conical_on_edge():
    cube = build_unit_cube()
    bad = CornerDomain(3, cube.vertices, cube.edges, cube.faces,
                       conical=(("v000", 0.5, (0.0, 0.0, 1.0)),))
    with pytest.raises(ValidationError) as err:
        validate_domain(bad)
    assert err.value.invariant == "conical-isolation"


def test_validate_rejects_dangling_edge():
    cube = build_unit_cube()
    bad_edges = cube.edges + (Edge("e12", ("v000", "ghost"),
                                   opening=1.0, faces=("top", "bottom")),)
    with pytest.raises(InvalidDomain):
        validate_domain(CornerDomain(3, cube.vertices, bad_edges, cube.faces))


def test_validate_rejects_flat_corner():
    pts = [("v0", (0.0, 0.0)), ("v1", (1.0, 0.0)), ("v2", (2.0, 0.0)),
           ("v3", (1.0, 1.0))]
    ids = [k for k, _ in pts]
    sides = tuple(Edge(f"s{i}", (ids[i], ids[(i + 1) % 4])) for i in range(4))
    dom = CornerDomain(2, tuple(Vertex(k, v) for k, v in pts), sides)
    with pytest.raises(ValidationError) as err:
        validate_domain(dom)
    assert err.value.invariant == "degenerate-corner"


def test_field_face_angle():
    hs = halfspace((0.0, 0.0, 1.0))
    assert field_face_angle((0, 0, 2.0), hs) == pytest.approx(math.pi / 2)
    assert field_face_angle((1.0, 0, 0), hs) == pytest.approx(0.0)
    assert field_face_angle((1.0, 0, 1.0), hs) == pytest.approx(math.pi / 4)
    with pytest.raises(ZeroField):
        field_face_angle((0.0, 0.0, 0.0), hs)
    with pytest.raises(UnsupportedGeometry):
        field_face_angle((1.0, 0, 0), fullspace())


def test_wedge_face_normals_reflex():
    cone = wedge(1.5 * math.pi, edge_dir=(1, 0, 0), bisector=(0, 1, 0))
    nu_p, nu_m = (np.asarray(n) for n in cone.face_normals())
    s, c = math.sin(0.75 * math.pi), math.cos(0.75 * math.pi)
    assert np.allclose(nu_p, [0, -s, c])
    assert np.allclose(nu_m, [0, -s, -c])
    # both normals are unit and symmetric about the bisector plane
    assert abs(np.linalg.norm(nu_p) - 1) < 1e-12
    assert abs(nu_p @ [0, 1, 0] - nu_m @ [0, 1, 0]) < 1e-12
