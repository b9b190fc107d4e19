"""
Reporting - Tables, JSON reports, SVG figures and OBJ meshes of sweep results
"""
from .mesh_export import facet_groups, write_obj
from .plots import plot_gradient, plot_projection
from .report_generator import (
    POINT_COLUMNS,
    ReportGenerator,
    comparison_frame,
    gradient_frame,
    points_frame,
    projection_frame,
    read_points_csv,
    write_points_csv,
)
