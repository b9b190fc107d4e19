"""
Hull Geometry - Convex hull of order-parameter points and its planar features

Coordinates are (jz, jz2, jpm2). Qhull supplies a triangulated hull; adjacent
coplanar triangles are merged into planar facets, which the ruled-surface and
first-order-plane detectors work on.
"""
import logging
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from ..models.lmg_models import LmgParams, RdmPoint
from ..utils.errors import HullDegeneracyError

logger = logging.getLogger(__name__)

AXES = ("jz", "jz2", "jpm2")
AXIS_TAGS = {"jz": "spin-flip", "jpm2": "parity"}

DEFAULT_EPS = 1e-9
DEFAULT_ANGLE_TOL = 1e-7
# narrowest in-plane extent of a first-order plane, relative to the coordinate scale
DEFAULT_MIN_WIDTH = 1e-6
# sampled points: eps is this many standard errors, facets merge within SAMPLED_ANGLE_TOL
SAMPLED_ERROR_FACTOR = 3.0
SAMPLED_ANGLE_TOL = 1e-2

PointsLike = Union[np.ndarray, Sequence[RdmPoint], Sequence[Sequence[float]]]


def axis_index(axis: Union[str, int]) -> int:
    if isinstance(axis, int):
        if axis not in (0, 1, 2):
            raise ValueError(f"axis index {axis} out of range")
        return axis
    if axis not in AXES:
        raise ValueError(f"unknown axis '{axis}', expected one of {AXES}")
    return AXES.index(axis)


def as_coords(points: PointsLike) -> np.ndarray:
    if len(points) and isinstance(points[0], RdmPoint):
        return np.array([p.as_array() for p in points], dtype=float)
    coords = np.asarray(points, dtype=float)
    if coords.ndim != 2 or coords.shape[1] != 3:
        raise ValueError(f"expected an (n, 3) point array, got shape {coords.shape}")
    return coords


def coordinate_scale(coords: np.ndarray) -> float:
    return max(1.0, float(np.max(np.abs(coords)))) if coords.size else 1.0


def largest_std_error(points: Sequence[RdmPoint]) -> float:
    """Largest tomography standard error over the points; 0 for exact data"""
    errors = [e for p in points for e in (p.jz_err, p.jz2_err, p.jpm2_err) if e is not None and math.isfinite(e)]
    return float(max(errors, default=0.0))


def affine_rank(coords: np.ndarray, eps: float) -> int:
    if len(coords) < 2:
        return 0
    centered = coords - coords.mean(axis=0)
    singular = np.linalg.svd(centered, compute_uv=False)
    return int(np.sum(singular > eps * max(1.0, singular[0])))


@dataclass
class Facet:
    """A merged planar face: outward unit normal n with n.x = offset on the face"""

    id: int
    normal: np.ndarray
    offset: float
    triangles: List[int]
    loop: List[int]
    corners: List[int]

    def distance(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(x) @ self.normal - self.offset


@dataclass
class Hull3:
    points: np.ndarray
    vertices: List[int]
    facets: List[Facet]
    eps: float
    angle_tol: float
    volume: float
    tolerance: float

    @property
    def euler_characteristic(self) -> int:
        loop_vertices = set()
        edges = set()
        for facet in self.facets:
            loop_vertices.update(facet.loop)
            for a, b in zip(facet.loop, facet.loop[1:] + facet.loop[:1]):
                edges.add((min(a, b), max(a, b)))
        return len(loop_vertices) - len(edges) + len(self.facets)

    def facet(self, facet_id: int) -> Facet:
        return self.facets[facet_id]


@dataclass
class RulingSegment:
    start_index: int
    end_index: int
    start: Tuple[float, float, float]
    end: Tuple[float, float, float]
    facet_ids: List[int] = field(default_factory=list)


@dataclass
class RuledSurfaceReport:
    axis: str
    tag: Optional[str]
    facet_ids: List[int]
    families: List[List[int]]
    segments: List[RulingSegment]

    @property
    def empty(self) -> bool:
        return not self.facet_ids

    def to_dict(self) -> Dict:
        return {
            "axis": self.axis,
            "tag": self.tag,
            "facet_ids": self.facet_ids,
            "families": self.families,
            "segments": [
                {"start": list(s.start), "end": list(s.end), "facets": s.facet_ids}
                for s in self.segments
            ],
        }


def _boundary_loop(coords: np.ndarray, triangles: List[Tuple[int, int, int]], normal: np.ndarray) -> List[int]:
    """
    Outer loop of a planar triangle patch, counter-clockwise seen from outside.

    Boundary edges are those used by exactly one triangle; counting instead of
    directing them keeps zero-area triangles from breaking the loop.
    """
    uses: Dict[Tuple[int, int], int] = {}
    for a, b, c in triangles:
        for u, v in ((a, b), (b, c), (c, a)):
            key = (min(u, v), max(u, v))
            uses[key] = uses.get(key, 0) + 1
    neighbours: Dict[int, List[int]] = {}
    for (u, v), count in uses.items():
        if count == 1:
            neighbours.setdefault(u, []).append(v)
            neighbours.setdefault(v, []).append(u)
    if not neighbours:
        return []
    start = min(neighbours)
    loop = [start]
    previous, node = start, min(neighbours[start])
    while node != start and len(loop) <= len(neighbours):
        loop.append(node)
        options = [n for n in neighbours[node] if n != previous]
        if not options:
            break
        previous, node = node, min(options)
    # Newell normal of the loop decides the winding
    pts = coords[loop]
    newell = np.cross(pts, np.roll(pts, -1, axis=0)).sum(axis=0)
    if np.dot(newell, normal) < 0:
        loop = [loop[0]] + loop[1:][::-1]
    return loop


def _simplify_loop(coords: np.ndarray, loop: List[int], tol: float) -> List[int]:
    """Drop coincident and collinear loop vertices"""
    corners = []
    for idx in loop:
        if not corners or np.linalg.norm(coords[idx] - coords[corners[-1]]) > tol:
            corners.append(idx)
    if len(corners) > 1 and np.linalg.norm(coords[corners[0]] - coords[corners[-1]]) <= tol:
        corners.pop()
    changed = True
    while changed and len(corners) > 3:
        changed = False
        for k in range(len(corners)):
            prev_p = coords[corners[k - 1]]
            here = coords[corners[k]]
            next_p = coords[corners[(k + 1) % len(corners)]]
            chord = next_p - prev_p
            length = np.linalg.norm(chord)
            if length == 0:
                continue
            off_line = np.linalg.norm(np.cross(here - prev_p, chord)) / length
            if off_line <= tol:
                del corners[k]
                changed = True
                break
    return corners


def quickhull3(points: PointsLike, eps: float = DEFAULT_EPS, angle_tol: float = DEFAULT_ANGLE_TOL) -> Hull3:
    """
    3D hull with triangles merged into planar facets.

    Raises HullDegeneracyError carrying the affine rank when the points do not
    span three dimensions.
    """
    coords = as_coords(points)
    rank = affine_rank(coords, eps)
    if len(coords) < 4 or rank < 3:
        raise HullDegeneracyError(f"{len(coords)} points do not span three dimensions", rank)
    try:
        qhull = ConvexHull(coords)
    except QhullError as e:
        raise HullDegeneracyError(f"qhull failed: {str(e).splitlines()[0]}", rank)

    scale = coordinate_scale(coords)
    tolerance = eps * scale
    normals = qhull.equations[:, :3]
    n_triangles = len(qhull.simplices)
    cos_tol = np.cos(angle_tol)

    group = [-1] * n_triangles
    facets: List[Facet] = []
    for seed in range(n_triangles):
        if group[seed] >= 0:
            continue
        facet_id = len(facets)
        seed_normal = normals[seed]
        seed_offset = float(np.mean(coords[qhull.simplices[seed]] @ seed_normal))
        members = []
        queue = deque([seed])
        group[seed] = facet_id
        while queue:
            t = queue.popleft()
            members.append(t)
            for nb in qhull.neighbors[t]:
                if group[nb] >= 0:
                    continue
                if np.dot(normals[nb], seed_normal) < cos_tol:
                    continue
                if np.max(np.abs(coords[qhull.simplices[nb]] @ seed_normal - seed_offset)) > tolerance:
                    continue
                group[nb] = facet_id
                queue.append(nb)

        weights = []
        for t in members:
            a, b, c = coords[qhull.simplices[t]]
            weights.append(np.linalg.norm(np.cross(b - a, c - a)))
        normal = np.average(normals[members], axis=0, weights=np.asarray(weights) + 1e-300)
        normal = normal / np.linalg.norm(normal)
        triangles = [tuple(int(v) for v in qhull.simplices[t]) for t in members]
        member_vertices = sorted({v for tri in triangles for v in tri})
        offset = float(np.mean(coords[member_vertices] @ normal))
        loop = _boundary_loop(coords, triangles, normal)
        facets.append(Facet(
            id=facet_id,
            normal=normal,
            offset=offset,
            triangles=sorted(members),
            loop=loop,
            corners=_simplify_loop(coords, loop, tolerance),
        ))

    hull = Hull3(
        points=coords,
        vertices=sorted(int(v) for v in qhull.vertices),
        facets=facets,
        eps=eps,
        angle_tol=angle_tol,
        volume=float(qhull.volume),
        tolerance=tolerance,
    )
    chi = hull.euler_characteristic
    if chi != 2:
        logger.warning("merged hull has Euler characteristic %d (expected 2)", chi)
    logger.debug("hull: %d points, %d triangles merged into %d facets", len(coords), n_triangles, len(facets))
    return hull


def boundary_distance(hull: Hull3, point: Sequence[float]) -> float:
    """Largest facet-plane distance: ~0 on the boundary, negative inside, positive outside"""
    x = np.asarray(point, dtype=float)
    return float(max(f.distance(x) for f in hull.facets))


def contains(hull: Hull3, points: PointsLike, eps: Optional[float] = None) -> np.ndarray:
    coords = as_coords(points)
    tol = hull.tolerance if eps is None else eps * coordinate_scale(hull.points)
    normals = np.array([f.normal for f in hull.facets])
    offsets = np.array([f.offset for f in hull.facets])
    excess = coords @ normals.T - offsets
    return np.all(excess <= tol, axis=1)


def on_boundary(hull: Hull3, points: PointsLike, eps: Optional[float] = None) -> np.ndarray:
    coords = as_coords(points)
    tol = hull.tolerance if eps is None else eps * coordinate_scale(hull.points)
    return np.array([abs(boundary_distance(hull, x)) <= tol for x in coords], dtype=bool)


def ruling_candidates(points: PointsLike, axis: Union[str, int], tol: float,
                      params: Optional[Sequence[LmgParams]] = None) -> List[Tuple[int, int]]:
    """
    Index pairs that may span a ruling parallel to `axis`.

    With params the pairs are sign conjugates (eps -> -eps for jz, lambda ->
    -lambda for jpm2); otherwise the extreme points of every group that agrees
    in the two remaining coordinates.
    """
    coords = as_coords(points)
    k = axis_index(axis)
    others = [c for c in range(3) if c != k]

    def agrees(i: int, j: int) -> bool:
        return (np.all(np.abs(coords[i, others] - coords[j, others]) <= tol)
                and abs(coords[i, k] - coords[j, k]) > tol)

    pairs: List[Tuple[int, int]] = []
    if params is not None:
        if len(params) != len(coords):
            raise ValueError("params and points differ in length")
        index = {(p.epsilon, p.lam, p.n_particles): i for i, p in enumerate(params)}
        for i, p in enumerate(params):
            if AXES[k] == "jz":
                key = (-p.epsilon, p.lam, p.n_particles)
            elif AXES[k] == "jpm2":
                key = (p.epsilon, -p.lam, p.n_particles)
            else:
                raise ValueError("parameter conjugation is defined for the jz and jpm2 axes")
            j = index.get(key)
            if j is not None and i < j and agrees(i, j):
                pairs.append((i, j))
        return pairs

    order = np.lexsort((coords[:, others[1]], coords[:, others[0]]))
    run = [int(order[0])] if len(order) else []
    for idx in list(order[1:]) + [None]:
        if idx is not None and np.all(np.abs(coords[idx, others] - coords[run[0], others]) <= tol):
            run.append(int(idx))
            continue
        if len(run) > 1:
            lo = min(run, key=lambda i: coords[i, k])
            hi = max(run, key=lambda i: coords[i, k])
            if coords[hi, k] - coords[lo, k] > tol:
                pairs.append((min(lo, hi), max(lo, hi)))
        if idx is not None:
            run = [int(idx)]
    return pairs


def _normal_families(hull: Hull3, facet_ids: List[int], angle_tol: float) -> List[List[int]]:
    families: List[List[int]] = []
    for fid in facet_ids:
        n = hull.facets[fid].normal
        for family in families:
            if abs(np.dot(hull.facets[family[0]].normal, n)) >= np.cos(angle_tol):
                family.append(fid)
                break
        else:
            families.append([fid])
    return families


def detect_ruled_surfaces(hull: Hull3, axis: Union[str, int], angle_tol: Optional[float] = None,
                          min_lines: int = 2,
                          candidates: Optional[Sequence[Tuple[int, int]]] = None) -> RuledSurfaceReport:
    """
    Facets whose plane contains the axis direction and at least min_lines
    distinct maximal segments parallel to it
    """
    k = axis_index(axis)
    angle_tol = hull.angle_tol if angle_tol is None else angle_tol
    coords = hull.points
    tol = hull.tolerance
    direction = np.eye(3)[k]
    if candidates is None:
        candidates = ruling_candidates(coords, k, tol)

    perpendicular = [f for f in hull.facets if abs(np.dot(f.normal, direction)) <= np.sin(angle_tol)]
    by_facet: Dict[int, List[Tuple[int, int]]] = {}
    for i, j in candidates:
        seg = coords[j] - coords[i]
        length = np.linalg.norm(seg)
        if length <= tol:
            continue
        if np.linalg.norm(np.cross(seg / length, direction)) > np.sin(angle_tol):
            continue
        for facet in perpendicular:
            if abs(facet.distance(coords[i])) <= tol and abs(facet.distance(coords[j])) <= tol:
                by_facet.setdefault(facet.id, []).append((i, j))

    others = [c for c in range(3) if c != k]
    segments: Dict[Tuple[int, int], RulingSegment] = {}
    facet_ids = []
    for fid in sorted(by_facet):
        # collinear candidates in one facet collapse to their maximal extent
        lines: List[List[int]] = []
        for i, j in by_facet[fid]:
            for line in lines:
                if np.all(np.abs(coords[i, others] - coords[line[0], others]) <= tol):
                    line.extend((i, j))
                    break
            else:
                lines.append([i, j])
        maximal = []
        for line in lines:
            lo = min(line, key=lambda v: (coords[v, k], v))
            hi = max(line, key=lambda v: (coords[v, k], -v))
            maximal.append((lo, hi))
        if len(maximal) < min_lines:
            continue
        facet_ids.append(fid)
        for lo, hi in maximal:
            seg = segments.get((lo, hi))
            if seg is None:
                seg = RulingSegment(lo, hi, tuple(coords[lo]), tuple(coords[hi]))
                segments[(lo, hi)] = seg
            seg.facet_ids.append(fid)

    report = RuledSurfaceReport(
        axis=AXES[k],
        tag=AXIS_TAGS.get(AXES[k]),
        facet_ids=facet_ids,
        families=_normal_families(hull, facet_ids, angle_tol),
        segments=[segments[key] for key in sorted(segments)],
    )
    logger.info("ruled surfaces along %s: %d facets, %d segments", report.axis, len(facet_ids), len(report.segments))
    return report


def facet_width(hull: Hull3, facet: Facet) -> float:
    """Smallest in-plane extent of a facet: min over its edges of the farthest corner from that edge"""
    corners = hull.points[facet.corners]
    if len(corners) < 3:
        return 0.0
    width = math.inf
    for a, b in zip(corners, np.roll(corners, -1, axis=0)):
        edge = b - a
        length = np.linalg.norm(edge)
        if length == 0:
            continue
        width = min(width, float(np.max(np.linalg.norm(np.cross(edge, corners - a), axis=1)) / length))
    return width


def detect_first_order_plane(hull: Hull3, normal_axis: Union[str, int] = "jz2",
                             angle_tol: Optional[float] = None, min_vertices: int = 4,
                             min_width: float = DEFAULT_MIN_WIDTH) -> List[Facet]:
    """Planar facets normal to the axis with at least four distinct corners.

    Facets narrower than min_width (relative to the coordinate scale) are
    slivers left by nearly coincident degenerate points, not planes.
    """
    k = axis_index(normal_axis)
    tol = hull.angle_tol if angle_tol is None else angle_tol
    threshold = min_width * coordinate_scale(hull.points)
    direction = np.eye(3)[k]
    planes = []
    for f in hull.facets:
        if np.linalg.norm(np.cross(f.normal, direction)) > np.sin(tol) or len(f.corners) < min_vertices:
            continue
        width = facet_width(hull, f)
        if width < threshold:
            logger.debug("facet %d normal to %s rejected: width %.3g below %.3g", f.id, AXES[k], width, threshold)
            continue
        planes.append(f)
    return planes


@dataclass
class Projection:
    drop_axis: str
    kept_axes: Tuple[str, str]
    points: np.ndarray
    outline: List[int]


def project_to_plane(points: PointsLike, drop_axis: Union[str, int] = "jz2",
                     eps: float = DEFAULT_EPS) -> Projection:
    """Orthogonal projection and its 2D convex outline (counter-clockwise)"""
    coords = as_coords(points)
    if not len(coords):
        raise ValueError("nothing to project")
    k = axis_index(drop_axis)
    kept = [c for c in range(3) if c != k]
    flat = coords[:, kept]
    tol = eps * coordinate_scale(flat)

    rank = affine_rank(flat, eps)
    if rank == 0:
        outline = [0]
    elif rank == 1:
        centered = flat - flat.mean(axis=0)
        direction = np.linalg.svd(centered)[2][0]
        t = centered @ direction
        outline = [int(np.argmin(t)), int(np.argmax(t))]
    else:
        hull2 = ConvexHull(flat)
        outline = [int(v) for v in hull2.vertices]
        outline = _drop_collinear_2d(flat, outline, tol)
    return Projection(AXES[k], (AXES[kept[0]], AXES[kept[1]]), flat, outline)


def _drop_collinear_2d(flat: np.ndarray, outline: List[int], tol: float) -> List[int]:
    kept = []
    n = len(outline)
    for idx in range(n):
        a = flat[outline[idx - 1]]
        b = flat[outline[idx]]
        c = flat[outline[(idx + 1) % n]]
        chord = c - a
        length = np.linalg.norm(chord)
        cross = abs(chord[0] * (b - a)[1] - chord[1] * (b - a)[0])
        if length > 0 and cross / length <= tol:
            continue
        kept.append(outline[idx])
    return kept


def supporting_plane_violations(points: Sequence[RdmPoint], rel_tol: float = 1e-9) -> List[int]:
    """
    Indices whose point does not minimize eps*jz + lambda/2*jpm2 over the set
    (only points sharing n_particles are compared)
    """
    violations = []
    coords = as_coords(points)
    n_values = np.array([p.params.n_particles for p in points])
    for i, p in enumerate(points):
        same = n_values == p.params.n_particles
        values = p.params.epsilon * coords[same, 0] + 0.5 * p.params.lam * coords[same, 2]
        own = p.params.epsilon * coords[i, 0] + 0.5 * p.params.lam * coords[i, 2]
        floor = rel_tol * max(1.0, float(np.max(np.abs(values))))
        if own > float(np.min(values)) + floor:
            violations.append(i)
    return violations


@dataclass
class ContainmentReport:
    contained: bool
    volume_ratio: float
    max_excess: float
    outside: List[int]

    def to_dict(self) -> Dict:
        return {
            "contained": self.contained,
            "volume_ratio": self.volume_ratio,
            "max_excess": self.max_excess,
            "outside": self.outside,
        }


def containment_report(exact_hull: Hull3, noisy_points: PointsLike, eps: float) -> ContainmentReport:
    """Is the noisy set inside the exact hull dilated by eps, and how much smaller is it"""
    coords = as_coords(noisy_points)
    excess = np.array([boundary_distance(exact_hull, x) for x in coords])
    outside = [int(i) for i in np.flatnonzero(excess > eps)]
    try:
        noisy_volume = quickhull3(coords, exact_hull.eps, exact_hull.angle_tol).volume
    except HullDegeneracyError as e:
        logger.warning("noisy point set is flat (rank %d); volume taken as 0", e.rank)
        noisy_volume = 0.0
    ratio = noisy_volume / exact_hull.volume if exact_hull.volume > 0 else float("nan")
    return ContainmentReport(
        contained=not outside,
        volume_ratio=float(ratio),
        max_excess=float(excess.max()) if len(excess) else 0.0,
        outside=outside,
    )
