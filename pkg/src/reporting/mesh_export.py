"""
Mesh Export - Wavefront OBJ of the merged hull facets, grouped by feature
"""
from typing import Dict, List, Optional

from ..analytics.hull_geometry import Facet, Hull3, RuledSurfaceReport

GROUP_ORDER = ("first_order_plane", "ruled_jz", "ruled_jpm2", "other")


def facet_groups(hull: Hull3, ruled: Optional[List[RuledSurfaceReport]] = None,
                 first_order: Optional[List[Facet]] = None) -> Dict[str, List[int]]:
    """Each facet lands in the first group of GROUP_ORDER that claims it"""
    claimed: Dict[int, str] = {}
    for facet in first_order or []:
        claimed.setdefault(facet.id, "first_order_plane")
    for report in ruled or []:
        for fid in report.facet_ids:
            claimed.setdefault(fid, f"ruled_{report.axis}")
    groups: Dict[str, List[int]] = {name: [] for name in GROUP_ORDER}
    for facet in hull.facets:
        groups[claimed.get(facet.id, "other")].append(facet.id)
    return groups


def write_obj(hull: Hull3, output_path: str, groups: Optional[Dict[str, List[int]]] = None) -> str:
    groups = groups or facet_groups(hull)
    used = sorted({v for facet in hull.facets for v in facet.corners})
    number = {v: i + 1 for i, v in enumerate(used)}
    lines = ["# convex hull of (jz, jz2, jpm2)"]
    for v in used:
        x, y, z = hull.points[v]
        lines.append(f"v {float(x)!r} {float(y)!r} {float(z)!r}")
    for name in GROUP_ORDER:
        if not groups.get(name):
            continue
        lines.append(f"g {name}")
        for fid in groups[name]:
            lines.append("f " + " ".join(str(number[v]) for v in hull.facet(fid).corners))
    with open(output_path, "w") as f:
        f.write("\n".join(lines) + "\n")
    return output_path
