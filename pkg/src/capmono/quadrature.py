"""Quadrature rules: Gauss-Legendre tensor grids, a subdivided-icosahedron
rule on the unit sphere, and uniform cell grids on the plane.

The sphere rule uses face centroids of a refined icosahedron with exact
spherical-triangle areas as weights; the weights are nearly equal and sum
to 4*pi to rounding.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np


def gauss_legendre(n: int, a: float = 0.0, b: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the n-point Gauss-Legendre rule on [a, b]."""
    x, w = np.polynomial.legendre.leggauss(n)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    return mid + half * x, half * w


def tensor_rule(nu: int, nv: int, u_range=(0.0, 1.0), v_range=(0.0, 2.0 * np.pi)):
    """Tensor-product Gauss-Legendre rule on a rectangle.

    Returns flattened arrays ``(u, v, w)`` of length nu*nv.
    """
    u, wu = gauss_legendre(nu, *u_range)
    v, wv = gauss_legendre(nv, *v_range)
    uu, vv = np.meshgrid(u, v, indexing="ij")
    ww = np.outer(wu, wv)
    return uu.ravel(), vv.ravel(), ww.ravel()


def _icosahedron() -> tuple[np.ndarray, np.ndarray]:
    phi = (1.0 + np.sqrt(5.0)) / 2.0
    verts = np.array(
        [
            (-1, phi, 0), (1, phi, 0), (-1, -phi, 0), (1, -phi, 0),
            (0, -1, phi), (0, 1, phi), (0, -1, -phi), (0, 1, -phi),
            (phi, 0, -1), (phi, 0, 1), (-phi, 0, -1), (-phi, 0, 1),
        ],
        dtype=float,
    )
    verts /= np.linalg.norm(verts, axis=1, keepdims=True)
    faces = np.array(
        [
            (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
            (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
            (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
            (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
        ],
        dtype=np.int64,
    )
    return verts, faces


def _subdivide(verts: np.ndarray, faces: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # Split every triangle into four; midpoints are shared through a cache.
    cache: dict[tuple[int, int], int] = {}
    verts_list = list(verts)

    def midpoint(i: int, j: int) -> int:
        key = (min(i, j), max(i, j))
        idx = cache.get(key)
        if idx is None:
            m = verts_list[i] + verts_list[j]
            m /= np.linalg.norm(m)
            idx = len(verts_list)
            verts_list.append(m)
            cache[key] = idx
        return idx

    new_faces = np.empty((4 * len(faces), 3), dtype=np.int64)
    for k, (a, b, c) in enumerate(faces):
        ab = midpoint(a, b)
        bc = midpoint(b, c)
        ca = midpoint(c, a)
        new_faces[4 * k : 4 * k + 4] = [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
    return np.array(verts_list), new_faces


def spherical_triangle_areas(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Areas of spherical triangles on the unit sphere (L'Huilier)."""
    sa = np.arccos(np.clip(np.sum(b * c, axis=-1), -1.0, 1.0))
    sb = np.arccos(np.clip(np.sum(c * a, axis=-1), -1.0, 1.0))
    sc = np.arccos(np.clip(np.sum(a * b, axis=-1), -1.0, 1.0))
    s = 0.5 * (sa + sb + sc)
    t = (
        np.tan(0.5 * s)
        * np.tan(0.5 * (s - sa))
        * np.tan(0.5 * (s - sb))
        * np.tan(0.5 * (s - sc))
    )
    return 4.0 * np.arctan(np.sqrt(np.maximum(t, 0.0)))


@lru_cache(maxsize=8)
def sphere_mesh(level: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Subdivided icosahedron: vertices, faces, face centroids and areas."""
    verts, faces = _icosahedron()
    for _ in range(level):
        verts, faces = _subdivide(verts, faces)
    a, b, c = verts[faces[:, 0]], verts[faces[:, 1]], verts[faces[:, 2]]
    centroids = a + b + c
    centroids /= np.linalg.norm(centroids, axis=1, keepdims=True)
    weights = spherical_triangle_areas(a, b, c)
    return verts, faces, centroids, weights


def sphere_rule(level: int) -> tuple[np.ndarray, np.ndarray]:
    """Quadrature on the unit sphere from a level-times subdivided icosahedron.

    Nodes are face centroids projected to the sphere, weights the exact
    spherical areas of the faces (20 * 4**level nodes; level 6 is ~82k).
    """
    _, _, centroids, weights = sphere_mesh(level)
    return centroids, weights


def barycentric_subtriangles(depth: int) -> np.ndarray:
    """Barycentric corner triples of the 4**depth regular subtriangles."""
    tris = [np.array([[1.0, 0, 0], [0, 1.0, 0], [0, 0, 1.0]])]
    for _ in range(depth):
        nxt = []
        for t in tris:
            a, b, c = t
            ab, bc, ca = 0.5 * (a + b), 0.5 * (b + c), 0.5 * (c + a)
            nxt.extend(
                [
                    np.array([a, ab, ca]),
                    np.array([b, bc, ab]),
                    np.array([c, ca, bc]),
                    np.array([ab, bc, ca]),
                ]
            )
        tris = nxt
    return np.array(tris)


def plane_grid(bbox: tuple[float, float, float, float], n: int):
    """Uniform midpoint grid on a rectangle of the plane {x3 = 0}.

    Returns ``(points, cell_area, xs, ys)``; points is the (n*n, 3) array of
    cell centers at x3 = 0 raveled in ``meshgrid(xs, ys, indexing='ij')``
    order.
    """
    x0, x1, y0, y1 = bbox
    hx = (x1 - x0) / n
    hy = (y1 - y0) / n
    xs = x0 + hx * (np.arange(n) + 0.5)
    ys = y0 + hy * (np.arange(n) + 0.5)
    xx, yy = np.meshgrid(xs, ys, indexing="ij")
    pts = np.column_stack([xx.ravel(), yy.ravel(), np.zeros(n * n)])
    return pts, hx * hy, xs, ys
