"""Corner domains, strata, tangent cones, and singular chains.

Supported geometry: 2D straight polygons and 3D straight polyhedra, optionally
with circular-cone vertices and closed sampled edge loops (lens-style domains
whose single smooth edge is given as a planar polyline with a constant
opening).  All local maps are rigid motions, so tangent-cone descriptors are
exact and per-stratum model energies are constant along each stratum.

Frames follow the intrinsic convention: a wedge of opening alpha is the set of
directions within alpha/2 of its interior bisector, in the plane orthogonal to
the edge.  This absorbs the convex/reflex case split into the frame choice;
the boundary rays are at +-alpha/2 and the outward face normals are

    nu_+- = -sin(alpha/2) * bisector +- cos(alpha/2) * binormal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    InvalidDomain, UnsupportedGeometry, ValidationError, ZeroField,
)

_DEGENERACY_TOL = 1e-12
_ANGLE_TOL = 1e-10


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if n < _DEGENERACY_TOL:
        raise ValueError("cannot normalize a null vector")
    return v / n


def _tup(v) -> tuple:
    return tuple(float(x) for x in np.asarray(v, dtype=float))


# ---------------------------------------------------------------------------
# Cone descriptors


@dataclass(frozen=True)
class Cone3DSection:
    """Section data of a 3D cone: spherical polygon or circular aperture."""

    kind: str  # "polygon" | "circle"
    face_normals: tuple = ()
    edge_wedges: tuple = ()  # ConeDescriptor wedges at the apex
    aperture: float | None = None
    axis: tuple | None = None


@dataclass(frozen=True)
class ConeDescriptor:
    """A tangent model cone.

    kind: "fullspace" | "halfspace" | "wedge" | "cone3d".
    For half-spaces `normal` is the outward unit normal.  For wedges `opening`
    is alpha in (0,pi)u(pi,2pi) and `frame` holds unit rows: in 3D
    (edge direction, bisector, binormal), right-handed; in 2D
    (bisector, binormal).  cone3d carries a Cone3DSection.
    """

    kind: str
    ambient_dimension: int = 3
    normal: tuple | None = None
    opening: float | None = None
    frame: tuple | None = None
    section: Cone3DSection | None = None

    @property
    def reduced_dimension(self) -> int:
        return {"fullspace": 0, "halfspace": 1, "wedge": 2, "cone3d": 3}[self.kind]

    def face_normals(self) -> tuple:
        """Outward unit normals of the boundary faces (wedge/halfspace only)."""
        if self.kind == "halfspace":
            return (self.normal,)
        if self.kind != "wedge":
            raise UnsupportedGeometry(f"no face normals for kind {self.kind!r}")
        half = self.opening / 2.0
        fr = np.asarray(self.frame)
        bis, bin_ = (fr[0], fr[1]) if self.ambient_dimension == 2 else (fr[1], fr[2])
        plus = -math.sin(half) * bis + math.cos(half) * bin_
        minus = -math.sin(half) * bis - math.cos(half) * bin_
        return (_tup(plus), _tup(minus))


def fullspace(dim: int = 3) -> ConeDescriptor:
    return ConeDescriptor(kind="fullspace", ambient_dimension=dim)


def halfspace(normal, dim: int = 3) -> ConeDescriptor:
    return ConeDescriptor(kind="halfspace", ambient_dimension=dim,
                          normal=_tup(_unit(normal)))


def wedge(opening: float, edge_dir=None, bisector=None, dim: int = 3) -> ConeDescriptor:
    """Wedge (3D) or plane sector (2D) from opening + frame vectors.

    Defaults: canonical frame with edge along x1 and bisector along x2 (3D),
    or bisector along x1 (2D).  The 3D frame is made right-handed by flipping
    the edge direction if necessary (the wedge is invariant under that flip).
    """
    if not (0 < opening < 2 * math.pi) or abs(opening - math.pi) < _DEGENERACY_TOL:
        raise ValueError("wedge opening must lie in (0,pi)u(pi,2pi)")
    if dim == 2:
        bis = _unit(bisector if bisector is not None else (1.0, 0.0))
        bin_ = np.array([-bis[1], bis[0]])
        return ConeDescriptor(kind="wedge", ambient_dimension=2, opening=float(opening),
                              frame=(_tup(bis), _tup(bin_)))
    e = _unit(edge_dir if edge_dir is not None else (1.0, 0.0, 0.0))
    bis = _unit(bisector if bisector is not None else (0.0, 1.0, 0.0))
    if abs(float(np.dot(e, bis))) > _ANGLE_TOL:
        bis = _unit(bis - np.dot(bis, e) * e)
    bin_ = np.cross(e, bis)
    return ConeDescriptor(kind="wedge", ambient_dimension=3, opening=float(opening),
                          frame=(_tup(e), _tup(bis), _tup(bin_)))


def circular_cone(aperture: float, axis=(0.0, 0.0, 1.0)) -> ConeDescriptor:
    if not 0 < aperture < math.pi:
        raise ValueError("aperture must lie in (0,pi)")
    sec = Cone3DSection(kind="circle", aperture=float(aperture), axis=_tup(_unit(axis)))
    return ConeDescriptor(kind="cone3d", ambient_dimension=3, section=sec)


def polyhedral_cone(face_normals, edge_wedges) -> ConeDescriptor:
    sec = Cone3DSection(kind="polygon",
                        face_normals=tuple(_tup(_unit(n)) for n in face_normals),
                        edge_wedges=tuple(edge_wedges))
    return ConeDescriptor(kind="cone3d", ambient_dimension=3, section=sec)


def same_cone(a: ConeDescriptor, b: ConeDescriptor, tol: float = 1e-9) -> bool:
    """Set equality of two descriptors (base points are compared by callers)."""
    if a.kind != b.kind or a.ambient_dimension != b.ambient_dimension:
        return False
    if a.kind == "fullspace":
        return True
    if a.kind == "halfspace":
        return bool(np.linalg.norm(np.subtract(a.normal, b.normal)) < tol)
    if a.kind == "wedge":
        if abs(a.opening - b.opening) > tol:
            return False
        fa, fb = np.asarray(a.frame), np.asarray(b.frame)
        if a.ambient_dimension == 2:
            return bool(np.linalg.norm(fa[0] - fb[0]) < tol)
        same_axis = abs(abs(float(np.dot(fa[0], fb[0]))) - 1.0) < tol
        return same_axis and bool(np.linalg.norm(fa[1] - fb[1]) < tol)
    sa, sb = a.section, b.section
    if sa.kind != sb.kind:
        return False
    if sa.kind == "circle":
        return (abs(sa.aperture - sb.aperture) < tol
                and np.linalg.norm(np.subtract(sa.axis, sb.axis)) < tol)
    if len(sa.face_normals) != len(sb.face_normals):
        return False
    used = set()
    for n in sa.face_normals:
        hit = next((j for j, m in enumerate(sb.face_normals)
                    if j not in used and np.linalg.norm(np.subtract(n, m)) < tol), None)
        if hit is None:
            return False
        used.add(hit)
    return True


# ---------------------------------------------------------------------------
# Domains


@dataclass(frozen=True)
class Vertex:
    id: str
    point: tuple


@dataclass(frozen=True)
class Edge:
    """Straight edge (two endpoint ids) or closed sampled loop (>= 3 ids)."""

    id: str
    vertices: tuple
    opening: float | None = None
    faces: tuple | None = None
    closed: bool = False
    direction: tuple | None = None


@dataclass(frozen=True)
class Face:
    id: str
    normal: tuple
    loop: tuple


@dataclass(frozen=True)
class Stratum:
    id: str
    reduced_dimension: int
    carrier_kind: str  # "interior" | "face" | "edge" | "vertex"
    carrier_id: str | None = None


@dataclass(frozen=True)
class CornerDomain:
    dimension: int
    vertices: tuple = ()
    edges: tuple = ()
    faces: tuple = ()
    conical: tuple = ()  # (vertex id, aperture, axis tuple)

    def vertex(self, vid: str) -> Vertex:
        for v in self.vertices:
            if v.id == vid:
                return v
        raise InvalidDomain(f"unknown vertex {vid!r}")

    def edge(self, eid: str) -> Edge:
        for e in self.edges:
            if e.id == eid:
                return e
        raise InvalidDomain(f"unknown edge {eid!r}")

    def face(self, fid: str) -> Face:
        for f in self.faces:
            if f.id == fid:
                return f
        raise InvalidDomain(f"unknown face {fid!r}")

    def points(self, ids) -> np.ndarray:
        return np.array([self.vertex(i).point for i in ids], dtype=float)


# -- 2D helpers -------------------------------------------------------------


def _polygon_loop(domain: CornerDomain) -> list[str]:
    """Order the 2D sides into a single closed loop of vertex ids."""
    succ: dict[str, list[str]] = {}
    for e in domain.edges:
        if len(e.vertices) != 2:
            raise InvalidDomain("2D domains use two-vertex sides")
        a, b = e.vertices
        succ.setdefault(a, []).append(b)
        succ.setdefault(b, []).append(a)
    if set(succ) != {v.id for v in domain.vertices} or any(len(n) != 2 for n in succ.values()):
        raise InvalidDomain("2D sides must form one closed loop over all vertices")
    start = domain.vertices[0].id
    loop = [start]
    prev = None
    while True:
        nxts = [x for x in succ[loop[-1]] if x != prev]
        prev = loop[-1]
        loop.append(nxts[0])
        if loop[-1] == start:
            break
        if len(loop) > len(domain.vertices) + 1:
            raise InvalidDomain("2D sides do not close into a single loop")
    loop.pop()
    if len(loop) != len(domain.vertices):
        raise InvalidDomain("2D sides do not cover every vertex")
    pts = domain.points(loop)
    area2 = float(np.sum(pts[:, 0] * np.roll(pts[:, 1], -1)
                         - np.roll(pts[:, 0], -1) * pts[:, 1]))
    if abs(area2) < _DEGENERACY_TOL:
        raise InvalidDomain("degenerate polygon")
    if area2 < 0:
        loop.reverse()
    return loop


def corner_opening_2d(domain: CornerDomain, vid: str) -> float:
    """Interior angle at a polygon corner, in (0,pi)u(pi,2pi)."""
    loop = _polygon_loop(domain)
    i = loop.index(vid)
    p = domain.points([loop[i - 1], loop[i], loop[(i + 1) % len(loop)]])
    u_prev = _unit(p[0] - p[1])
    u_next = _unit(p[2] - p[1])
    cross = u_next[0] * u_prev[1] - u_next[1] * u_prev[0]
    ang = math.atan2(cross, float(np.dot(u_next, u_prev)))
    if ang < 0:
        ang += 2 * math.pi
    if abs(ang - math.pi) < _DEGENERACY_TOL:
        raise ValidationError("degenerate-corner", f"flat corner at {vid!r}")
    return ang


# -- 3D edge frames ---------------------------------------------------------


def _face_inward_direction(domain: CornerDomain, face: Face, p1: np.ndarray,
                           p2: np.ndarray, e: np.ndarray) -> np.ndarray:
    """Unit vector perpendicular to the edge, pointing from it into the face."""
    others = [v for v in face.loop]
    pts = domain.points(others)
    centroid = pts.mean(axis=0)
    d = centroid - p1
    d = d - np.dot(d, e) * e
    return _unit(d)


def edge_frame(domain: CornerDomain, eid: str):
    """(edge_dir, bisector, binormal, opening, (face+ id, face- id)) at a straight edge."""
    edge = domain.edge(eid)
    if edge.closed:
        raise UnsupportedGeometry("closed sampled edges are parametrized; use loop_edge_frame")
    p1, p2 = domain.points(edge.vertices)
    e = _unit(p2 - p1)
    f_plus = domain.face(edge.faces[0])
    f_minus = domain.face(edge.faces[1])
    u_plus = _face_inward_direction(domain, f_plus, p1, p2, e)
    u_minus = _face_inward_direction(domain, f_minus, p1, p2, e)
    alpha = edge.opening
    sign = 1.0 if alpha < math.pi else -1.0
    m = u_plus + u_minus
    if np.linalg.norm(m) < _DEGENERACY_TOL:
        raise InvalidDomain(f"edge {eid!r}: faces meet flat")
    bis = sign * _unit(m)
    half = alpha / 2.0
    w = (u_plus - math.cos(half) * bis) / math.sin(half)
    w = _unit(w)
    if float(np.dot(np.cross(e, bis), w)) < 0:
        e = -e  # keep the (edge, bisector, binormal) triple right-handed
    return e, bis, w, alpha, (f_plus.id, f_minus.id)


def loop_edge_frame(domain: CornerDomain, eid: str, t: float):
    """Frame at parameter t in [0,1) along a closed sampled edge loop."""
    edge = domain.edge(eid)
    pts = domain.points(edge.vertices)
    k = len(pts)
    i = int(t * k) % k
    p = pts[i]
    tangent = _unit(pts[(i + 1) % k] - pts[i - 1])
    centroid = pts.mean(axis=0)
    d = centroid - p
    d = d - np.dot(d, tangent) * tangent
    bis = _unit(d)
    w = np.cross(tangent, bis)
    return tangent, bis, w, edge.opening, p


# -- validation -------------------------------------------------------------


def validate_domain(domain: CornerDomain) -> None:
    """Check structural invariants; raises InvalidDomain / ValidationError."""
    ids = [v.id for v in domain.vertices]
    if len(set(ids)) != len(ids):
        raise InvalidDomain("duplicate vertex ids")
    known = set(ids)
    if domain.dimension == 2:
        _polygon_loop(domain)
        for v in domain.vertices:
            corner_opening_2d(domain, v.id)
        return
    if domain.dimension != 3:
        raise InvalidDomain("dimension must be 2 or 3")
    face_ids = {f.id for f in domain.faces}
    conical_ids = {c[0] for c in domain.conical}
    for f in domain.faces:
        if abs(np.linalg.norm(f.normal) - 1.0) > 1e-8:
            raise ValidationError("unit-normal", f"face {f.id!r} normal is not unit")
        pts = domain.points(f.loop)
        n = np.asarray(f.normal)
        spread = pts - pts.mean(axis=0)
        if np.max(np.abs(spread @ n)) > 1e-8:
            raise ValidationError("planar-face", f"face {f.id!r} loop leaves its plane")
    for e in domain.edges:
        for vid in e.vertices:
            if vid not in known:
                raise InvalidDomain(f"edge {e.id!r} references unknown vertex {vid!r}")
        if e.faces is None or any(fid not in face_ids for fid in e.faces):
            raise InvalidDomain(f"edge {e.id!r} references unknown faces")
        if e.opening is None or not 0 < e.opening < 2 * math.pi \
                or abs(e.opening - math.pi) < _DEGENERACY_TOL:
            raise ValidationError("edge-opening", f"edge {e.id!r} opening out of range")
        if e.closed:
            continue
        if conical_ids & set(e.vertices):
            raise ValidationError("conical-isolation",
                                  f"edge {e.id!r} touches a conical vertex")
        p1, p2 = domain.points(e.vertices)
        edir = _unit(p2 - p1)
        if e.direction is not None:
            if abs(abs(float(np.dot(e.direction, edir))) - 1.0) > 1e-8:
                raise ValidationError("edge-direction",
                                      f"edge {e.id!r} declared direction is off-axis")
        for fid in e.faces:
            if not set(e.vertices) <= set(domain.face(fid).loop):
                raise InvalidDomain(
                    f"edge {e.id!r} endpoints missing from face {fid!r} loop")
        fp, fm = domain.face(e.faces[0]), domain.face(e.faces[1])
        up = _face_inward_direction(domain, fp, p1, p2, edir)
        um = _face_inward_direction(domain, fm, p1, p2, edir)
        delta = math.acos(float(np.clip(np.dot(up, um), -1.0, 1.0)))
        geometric = delta if e.opening < math.pi else 2 * math.pi - delta
        if abs(geometric - e.opening) > _ANGLE_TOL:
            raise ValidationError(
                "dihedral-opening",
                f"edge {e.id!r}: declared {e.opening}, geometry gives {geometric}")
        edir2, bis, w, alpha, _ = edge_frame(domain, e.id)
        half = alpha / 2.0
        pred_p = -math.sin(half) * bis + math.cos(half) * w
        pred_m = -math.sin(half) * bis - math.cos(half) * w
        for fid, pred in ((e.faces[0], pred_p), (e.faces[1], pred_m)):
            declared = np.asarray(domain.face(fid).normal)
            if np.linalg.norm(declared - pred) > 1e-8:
                raise ValidationError(
                    "normal-consistency",
                    f"face {fid!r} normal disagrees with the dihedral frame at edge {e.id!r}")
    for (vid, aperture, axis) in domain.conical:
        if vid not in known:
            raise InvalidDomain(f"conical record references unknown vertex {vid!r}")
        if not 0 < aperture < math.pi:
            raise ValidationError("aperture-range", f"conical vertex {vid!r}")
        if abs(np.linalg.norm(axis) - 1.0) > 1e-8:
            raise ValidationError("unit-axis", f"conical vertex {vid!r}")


# -- stratification ---------------------------------------------------------


def stratify(domain: CornerDomain) -> list[Stratum]:
    """One stratum per interior / face / edge / vertex, tagged by d0."""
    validate_domain(domain)
    strata = [Stratum("interior", 0, "interior")]
    if domain.dimension == 2:
        for e in domain.edges:
            strata.append(Stratum(f"edge:{e.id}", 1, "edge", e.id))
        for v in domain.vertices:
            strata.append(Stratum(f"vertex:{v.id}", 2, "vertex", v.id))
        return strata
    loop_sample_ids = set()
    for e in domain.edges:
        if e.closed:
            loop_sample_ids.update(e.vertices)
    for f in domain.faces:
        strata.append(Stratum(f"face:{f.id}", 1, "face", f.id))
    for e in domain.edges:
        strata.append(Stratum(f"edge:{e.id}", 2, "edge", e.id))
    for v in domain.vertices:
        if v.id not in loop_sample_ids:
            strata.append(Stratum(f"vertex:{v.id}", 3, "vertex", v.id))
    return strata


def _vertex_cone(domain: CornerDomain, vid: str) -> ConeDescriptor:
    for (cid, aperture, axis) in domain.conical:
        if cid == vid:
            return circular_cone(aperture, axis)
    incident_edges = [e for e in domain.edges
                      if not e.closed and vid in e.vertices]
    incident_faces = [f for f in domain.faces if vid in f.loop]
    if len(incident_edges) != len(incident_faces) or not incident_edges:
        raise UnsupportedGeometry(
            f"vertex {vid!r}: section is neither a spherical polygon nor a circle")
    wedges = []
    for e in incident_edges:
        edir, bis, w, alpha, _ = edge_frame(domain, e.id)
        wedges.append(wedge(alpha, edir, bis))
    normals = [f.normal for f in incident_faces]
    return polyhedral_cone(normals, wedges)


def tangent_cone_at(domain: CornerDomain, stratum: Stratum,
                    point_param: float | None = None) -> ConeDescriptor:
    """Tangent model cone at a point of the stratum.

    Constant along each stratum for straight domains; for a closed sampled
    edge the frame rotates with the parameter, so point_param selects the
    sample (default 0).
    """
    dim = domain.dimension
    if stratum.carrier_kind == "interior":
        return fullspace(dim)
    if dim == 2:
        if stratum.carrier_kind == "edge":
            e = domain.edge(stratum.carrier_id)
            loop = _polygon_loop(domain)
            a, b = e.vertices
            i = loop.index(a)
            forward = loop[(i + 1) % len(loop)] == b
            p1, p2 = domain.points([a, b] if forward else [b, a])
            t = _unit(p2 - p1)
            inward = np.array([-t[1], t[0]])  # CCW loop: interior on the left
            return halfspace(-inward, dim=2)
        v = domain.vertex(stratum.carrier_id)
        alpha = corner_opening_2d(domain, v.id)
        loop = _polygon_loop(domain)
        i = loop.index(v.id)
        p = domain.points([loop[i - 1], v.id, loop[(i + 1) % len(loop)]])
        u_prev = _unit(p[0] - p[1])
        u_next = _unit(p[2] - p[1])
        sign = 1.0 if alpha < math.pi else -1.0
        bis = sign * _unit(u_prev + u_next)
        return wedge(alpha, bisector=bis, dim=2)
    if stratum.carrier_kind == "face":
        return halfspace(domain.face(stratum.carrier_id).normal)
    if stratum.carrier_kind == "edge":
        e = domain.edge(stratum.carrier_id)
        if e.closed:
            t = 0.0 if point_param is None else float(point_param)
            tangent, bis, w, alpha, _ = loop_edge_frame(domain, e.id, t)
            return wedge(alpha, tangent, bis)
        edir, bis, w, alpha, _ = edge_frame(domain, e.id)
        return wedge(alpha, edir, bis)
    return _vertex_cone(domain, stratum.carrier_id)


# ---------------------------------------------------------------------------
# Singular chains


@dataclass(frozen=True)
class SingularChain:
    """A chain (x0, x1, ..., xp) with symbolic tail selectors.

    Selectors name entries of the recursive section hierarchy: a face-side
    point ("section-side", face_id), a section corner ("section-vertex",
    edge_id), an interior section point ("section-interior",), a wedge
    boundary ray ("ray", +1|-1), or a point on a circular section
    ("circle", phi).  Tails that only deepen into the same tangent structure
    are collapsed into their equivalence class.
    """

    base_point: tuple
    entries: tuple
    structure: ConeDescriptor
    base_id: str = "model"

    @property
    def length(self) -> int:
        return 1 + len(self.entries)


class ChainFamily:
    """One-parameter family of half-space chains at a conical vertex."""

    def __init__(self, base_point, base_id, aperture, axis, samples: int = 64):
        self.base_point = _tup(base_point)
        self.base_id = base_id
        self.aperture = float(aperture)
        self.axis = _tup(_unit(axis))
        self.samples = samples
        u = np.asarray(self.axis)
        seed = np.array([1.0, 0.0, 0.0]) if abs(u[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
        e1 = _unit(seed - np.dot(seed, u) * u)
        self._e1 = e1
        self._e2 = np.cross(u, e1)

    def normal_at(self, phi: float) -> tuple:
        half = self.aperture / 2.0
        radial = math.cos(phi) * self._e1 + math.sin(phi) * self._e2
        return _tup(math.cos(half) * radial - math.sin(half) * np.asarray(self.axis))

    def chain_at(self, phi: float) -> SingularChain:
        return SingularChain(self.base_point, (("circle", float(phi)),),
                             halfspace(self.normal_at(phi)), self.base_id)

    def grid(self) -> list[SingularChain]:
        return [self.chain_at(2 * math.pi * k / self.samples) for k in range(self.samples)]


def cone_chain_classes(cone: ConeDescriptor, base_point=None, base_id: str = "model"):
    """Equivalence classes of singular chains rooted at a model cone.

    Full space: 1 class.  Half-space: 2.  Wedge: 4 (itself, the two boundary
    half-spaces, full space).  Polyhedral 3D cone with N section corners:
    2N+2.  Circular 3D cone: the cone, full space, and a one-parameter family
    of boundary half-spaces (returned last, as a ChainFamily); deeper tails
    all land in the full-space class and are collapsed.
    """
    dim = cone.ambient_dimension
    base = _tup(base_point if base_point is not None else (0.0,) * dim)
    head = SingularChain(base, (), cone, base_id)
    if cone.kind == "fullspace":
        return [head]
    if cone.kind == "halfspace":
        return [head, SingularChain(base, (("section-interior",),), fullspace(dim), base_id)]
    if cone.kind == "wedge":
        nu_plus, nu_minus = cone.face_normals()
        return [
            head,
            SingularChain(base, (("ray", 1),), halfspace(nu_plus, dim), base_id),
            SingularChain(base, (("ray", -1),), halfspace(nu_minus, dim), base_id),
            SingularChain(base, (("section-interior",),), fullspace(dim), base_id),
        ]
    sec = cone.section
    if sec.kind == "circle":
        return [
            head,
            SingularChain(base, (("section-interior",),), fullspace(3), base_id),
            ChainFamily(base, base_id, sec.aperture, sec.axis),
        ]
    out = [head]
    for j, w in enumerate(sec.edge_wedges):
        out.append(SingularChain(base, (("section-vertex", j),), w, base_id))
    for j, n in enumerate(sec.face_normals):
        out.append(SingularChain(base, (("section-side", j),), halfspace(n), base_id))
    out.append(SingularChain(base, (("section-interior",),), fullspace(3), base_id))
    return out


def enumerate_chain_classes(domain: CornerDomain, stratum: Stratum,
                            point_param: float | None = None):
    cone = tangent_cone_at(domain, stratum, point_param)
    if stratum.carrier_kind == "vertex":
        base = domain.vertex(stratum.carrier_id).point
    elif stratum.carrier_kind == "edge" and domain.dimension == 3:
        e = domain.edge(stratum.carrier_id)
        pts = domain.points(e.vertices)
        if e.closed:
            k = len(pts)
            base = pts[int((0.0 if point_param is None else point_param) * k) % k]
        else:
            base = pts.mean(axis=0)
    elif stratum.carrier_kind == "edge":
        base = domain.points(domain.edge(stratum.carrier_id).vertices).mean(axis=0)
    elif stratum.carrier_kind == "face":
        base = domain.points(domain.face(stratum.carrier_id).loop).mean(axis=0)
    else:
        base = np.zeros(domain.dimension)
    return cone_chain_classes(cone, base, stratum.id)


def chain_leq(x: SingularChain, y: SingularChain) -> bool:
    """Prefix order: x <= y iff same base point and x's entries start y's."""
    if np.linalg.norm(np.subtract(x.base_point, y.base_point)) > _DEGENERACY_TOL:
        return False
    if x.length > y.length:
        return False
    return y.entries[: len(x.entries)] == x.entries


def _min_rotation(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Minimal rotation matrix taking unit u onto unit v."""
    w = np.cross(u, v)
    s = np.linalg.norm(w)
    c = float(np.dot(u, v))
    if s < _DEGENERACY_TOL:
        if c > 0:
            return np.eye(3)
        seed = np.array([1.0, 0.0, 0.0]) if abs(u[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
        k = _unit(seed - np.dot(seed, u) * u)
        kx = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
        return np.eye(3) + 2.0 * (kx @ kx)  # half turn
    k = w / s
    kx = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
    return np.eye(3) + s * kx + (1 - c) * (kx @ kx)


def _map_defect(mat: np.ndarray) -> float:
    eye = np.eye(mat.shape[0])
    fwd = float(np.linalg.svd(mat - eye, compute_uv=False)[0])
    bwd = float(np.linalg.svd(np.linalg.inv(mat) - eye, compute_uv=False)[0])
    return max(fwd, bwd)  # symmetric in the pair, still an upper bound


def chain_distance_upper(x: SingularChain, y: SingularChain) -> float:
    """Upper bound on the chain distance via canonical alignment maps.

    Base-point offset plus a structural defect: 0 for equal structures,
    ||R - I|| for half-space pairs (the minimal rotation of normals),
    the defect of the canonical rotation-and-stretch for wedge pairs on the
    same side of the flat opening.  +inf across reduced dimensions and for
    convex-to-reflex wedge pairs (no canonical map).  Cone3D pairs other than
    identical sections are unsupported.
    """
    a, b = x.structure, y.structure
    if a.ambient_dimension != b.ambient_dimension:
        raise UnsupportedGeometry("chains live in different ambient dimensions")
    offset = float(np.linalg.norm(np.subtract(x.base_point, y.base_point)))
    if same_cone(a, b):
        return offset
    if a.kind == "cone3d" and b.kind == "cone3d":
        raise UnsupportedGeometry("only identical 3D cone sections are comparable")
    if a.reduced_dimension != b.reduced_dimension:
        return math.inf
    dim = a.ambient_dimension
    if a.kind == "halfspace":
        na, nb = np.asarray(a.normal), np.asarray(b.normal)
        cosphi = float(np.clip(np.dot(na, nb), -1.0, 1.0))
        return offset + 2.0 * math.sin(math.acos(cosphi) / 2.0)
    if a.kind == "wedge":
        ta = math.tan(a.opening / 2.0)
        tb = math.tan(b.opening / 2.0)
        if ta * tb < 0:
            return math.inf
        if dim == 2:
            fa, fb = np.asarray(a.frame), np.asarray(b.frame)
            ca = fa[0, 0] * fb[0, 1] - fa[0, 1] * fb[0, 0]
            ang = math.atan2(ca, float(np.dot(fa[0], fb[0])))
            rot = np.array([[math.cos(ang), -math.sin(ang)],
                            [math.sin(ang), math.cos(ang)]])
            stretch = fb.T @ np.diag([1.0, tb / ta]) @ fb
            return offset + _map_defect(stretch @ rot)
        fa, fb = np.asarray(a.frame), np.asarray(b.frame)
        ea, eb = fa[0], fb[0]
        if float(np.dot(ea, eb)) < 0:
            fa = np.stack([-fa[0], fa[1], -fa[2]])  # same wedge, closer frame
            ea = fa[0]
        r1 = _min_rotation(ea, eb)
        r2 = _min_rotation(r1 @ fa[1], fb[1])
        basis = np.stack([fb[0], fb[1], fb[2]])
        stretch = basis.T @ np.diag([1.0, 1.0, tb / ta]) @ basis
        return offset + _map_defect(stretch @ r2 @ r1)
    return math.inf


def field_face_angle(field_vector, half_space: ConeDescriptor) -> float:
    """Unoriented angle in [0, pi/2] between the field and the boundary plane."""
    if half_space.kind != "halfspace":
        raise UnsupportedGeometry("field_face_angle needs a half-space")
    b = np.asarray(field_vector, dtype=float)
    norm = np.linalg.norm(b)
    if norm < _DEGENERACY_TOL:
        raise ZeroField("field vanishes")
    ratio = abs(float(np.dot(b, half_space.normal))) / norm
    return math.asin(min(1.0, ratio))
