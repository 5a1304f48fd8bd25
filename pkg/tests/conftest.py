import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cornermag.geometry import CornerDomain, Edge, Face, Vertex


def build_unit_square() -> CornerDomain:
    pts = {"v0": (0.0, 0.0), "v1": (1.0, 0.0), "v2": (1.0, 1.0), "v3": (0.0, 1.0)}
    sides = [("s0", ("v0", "v1")), ("s1", ("v1", "v2")),
             ("s2", ("v2", "v3")), ("s3", ("v3", "v0"))]
    return CornerDomain(
        dimension=2,
        vertices=tuple(Vertex(k, v) for k, v in pts.items()),
        edges=tuple(Edge(eid, vv) for eid, vv in sides),
    )


def build_l_polygon() -> CornerDomain:
    pts = [("v0", (0.0, 0.0)), ("v1", (2.0, 0.0)), ("v2", (2.0, 1.0)),
           ("v3", (1.0, 1.0)), ("v4", (1.0, 2.0)), ("v5", (0.0, 2.0))]
    ids = [k for k, _ in pts]
    sides = [(f"s{i}", (ids[i], ids[(i + 1) % 6])) for i in range(6)]
    return CornerDomain(
        dimension=2,
        vertices=tuple(Vertex(k, v) for k, v in pts),
        edges=tuple(Edge(eid, vv) for eid, vv in sides),
    )


_CUBE_FACES = [
    ("bottom", (0.0, 0.0, -1.0), ("v000", "v100", "v110", "v010")),
    ("top", (0.0, 0.0, 1.0), ("v001", "v011", "v111", "v101")),
    ("left", (-1.0, 0.0, 0.0), ("v000", "v010", "v011", "v001")),
    ("right", (1.0, 0.0, 0.0), ("v100", "v101", "v111", "v110")),
    ("front", (0.0, -1.0, 0.0), ("v000", "v001", "v101", "v100")),
    ("back", (0.0, 1.0, 0.0), ("v010", "v110", "v111", "v011")),
]

_CUBE_EDGES = [
    ("e0", ("v000", "v100"), ("bottom", "front")),
    ("e1", ("v100", "v110"), ("bottom", "right")),
    ("e2", ("v110", "v010"), ("bottom", "back")),
    ("e3", ("v010", "v000"), ("bottom", "left")),
    ("e4", ("v001", "v101"), ("top", "front")),
    ("e5", ("v101", "v111"), ("top", "right")),
    ("e6", ("v111", "v011"), ("top", "back")),
    ("e7", ("v011", "v001"), ("top", "left")),
    ("e8", ("v000", "v001"), ("front", "left")),
    ("e9", ("v100", "v101"), ("front", "right")),
    ("e10", ("v110", "v111"), ("right", "back")),
    ("e11", ("v010", "v011"), ("back", "left")),
]


def build_unit_cube() -> CornerDomain:
    verts = [Vertex(f"v{x}{y}{z}", (float(x), float(y), float(z)))
             for x in (0, 1) for y in (0, 1) for z in (0, 1)]
    edges = [Edge(eid, vv, opening=math.pi / 2, faces=ff) for eid, vv, ff in _CUBE_EDGES]
    faces = [Face(fid, n, loop) for fid, n, loop in _CUBE_FACES]
    return CornerDomain(dimension=3, vertices=tuple(verts),
                        edges=tuple(edges), faces=tuple(faces))


def build_lens(opening: float = 0.3 * math.pi, radius: float = 1.0,
               samples: int = 64) -> CornerDomain:
    phis = 2 * math.pi * np.arange(samples) / samples
    verts = tuple(Vertex(f"r{k}", (radius * math.cos(p), radius * math.sin(p), 0.0))
                  for k, p in enumerate(phis))
    ring = tuple(v.id for v in verts)
    faces = (Face("cap_top", (0.0, 0.0, 1.0), ring),
             Face("cap_bottom", (0.0, 0.0, -1.0), ring))
    rim = Edge("rim", ring, opening=opening, faces=("cap_top", "cap_bottom"),
               closed=True)
    return CornerDomain(dimension=3, vertices=verts, edges=(rim,), faces=faces)


@pytest.fixture
def unit_square():
    return build_unit_square()


@pytest.fixture
def unit_cube():
    return build_unit_cube()


@pytest.fixture
def l_polygon():
    return build_l_polygon()


@pytest.fixture
def lens_domain():
    return build_lens()
