"""
Analytics - Hull geometry and trajectory signatures of the order-parameter set
"""
from .hull_geometry import (
    AXES,
    ContainmentReport,
    Facet,
    Hull3,
    Projection,
    RuledSurfaceReport,
    boundary_distance,
    containment_report,
    contains,
    detect_first_order_plane,
    detect_ruled_surfaces,
    facet_width,
    on_boundary,
    project_to_plane,
    quickhull3,
    ruling_candidates,
    supporting_plane_violations,
)
from .trajectory import TrajectoryAnalysis, trajectory_analysis
