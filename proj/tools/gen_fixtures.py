#!/usr/bin/env python3
"""Writes the mesh fixtures under data/. Deterministic; rerun after edits."""

import json
import math
import random
import sys
from pathlib import Path


def build(geometry, faces, weights=None, radii=None):
    """Simplicial mesh from vertex triples; edges are keyed by vertex pair."""
    edge_ids = {}
    edges = []
    out_faces = []
    for tri in faces:
        e = []
        for n in range(3):
            a, b = tri[(n + 1) % 3], tri[(n + 2) % 3]
            key = (min(a, b), max(a, b))
            if key not in edge_ids:
                edge_ids[key] = len(edges)
                edges.append({"a": key[0], "b": key[1], "weight": 0.0})
            e.append(edge_ids[key])
        out_faces.append({"v": list(tri), "e": e})
    for key, w in (weights or {}).items():
        edges[edge_ids[(min(key), max(key))]]["weight"] = w
    n = 1 + max(max(t) for t in faces)
    doc = {"geometry": geometry, "vertices": n, "edges": edges, "faces": out_faces}
    if radii is not None:
        doc["radii"] = radii
    return doc


def stellar(faces, index, apex):
    i, j, k = faces[index]
    return faces[:index] + faces[index + 1:] + [[i, j, apex], [j, k, apex], [k, i, apex]]


TETRA = [[0, 1, 2], [0, 3, 1], [1, 3, 2], [2, 3, 0]]
OCTA = [[0, 2, 4], [2, 1, 4], [1, 3, 4], [3, 0, 4], [2, 0, 5], [1, 2, 5], [3, 1, 5], [0, 3, 5]]
TORUS7 = [[i, (i + 1) % 7, (i + 3) % 7] for i in range(7)] + \
         [[i, (i + 3) % 7, (i + 2) % 7] for i in range(7)]


def genus2():
    # Connected sum of two 7-vertex tori across the face {0, 1, 3}.
    a = [t for t in TORUS7 if sorted(t) != [0, 1, 3]]
    relabel = {0: 0, 1: 1, 3: 3, 2: 7, 4: 8, 5: 9, 6: 10}
    b = [[relabel[v] for v in reversed(t)] for t in TORUS7 if sorted(t) != [0, 1, 3]]
    return a + b


def main(out_dir):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(20240607)
    fixtures = {}

    fixtures["tetrahedron"] = build("euclidean", TETRA)
    fixtures["tetrahedron_hyperbolic"] = build("hyperbolic", TETRA)
    fixtures["tetrahedron_spherical"] = build("spherical", TETRA, radii=[math.pi / 8] * 4)
    fixtures["octahedron"] = build("euclidean", OCTA)
    fixtures["torus7"] = build("euclidean", TORUS7)
    fixtures["torus7_weighted"] = build(
        "euclidean", TORUS7,
        weights={tuple(sorted((t[0], t[1]))): round(rng.uniform(0.0, 1.0), 6) for t in TORUS7})
    fixtures["torus7_hyperbolic"] = build("hyperbolic", TORUS7)
    fixtures["genus2"] = build("hyperbolic", genus2())
    fixtures["genus2_euclidean"] = build("euclidean", genus2())

    # Bipyramid over the triangle 0,1,2 with apexes 3 (north) and 4 (south);
    # the south side is refined so that the average curvature drops below the
    # bound for the north apex once the equator carries weight pi/2.
    faces = [[0, 1, 3], [1, 2, 3], [2, 0, 3], [1, 0, 4], [2, 1, 4], [0, 2, 4]]
    apex = 5
    for _ in range(5):
        index = next(i for i, t in enumerate(faces) if 3 not in t and 4 in t)
        faces = stellar(faces, index, apex)
        apex += 1
    fixtures["stacked_sphere_violating"] = build(
        "euclidean", faces, weights={(0, 1): math.pi / 2, (1, 2): math.pi / 2, (0, 2): math.pi / 2})

    # A face of the genus-2 surface split at a new vertex; its boundary is a
    # null-homotopic 3-loop that no longer bounds a face.
    g2 = genus2()
    i, j, k = g2[0]
    fixtures["genus2_violating"] = build(
        "hyperbolic", stellar(g2, 0, 11),
        weights={(i, j): math.pi / 2, (j, k): math.pi / 2, (k, i): math.pi / 2})

    bad = build("euclidean", TETRA)
    bad["edges"][3]["weight"] = 2.0
    fixtures["bad_weight"] = bad

    for name, doc in fixtures.items():
        (out / f"{name}.json").write_text(json.dumps(doc, indent=2) + "\n")
    (out / "malformed.json").write_text('{\n  "geometry": "euclidean",\n  "vertices": 4,\n  "edges": [\n')


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data")
