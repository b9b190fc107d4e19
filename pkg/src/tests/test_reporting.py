import itertools
import json
import os
import sys
import tempfile
import unittest

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))

from src.analytics.hull_geometry import detect_first_order_plane, detect_ruled_surfaces, project_to_plane, quickhull3
from src.analytics.trajectory import trajectory_analysis
from src.lmg.exact_solver import exact_point
from src.models.lmg_models import LmgParams, RdmPoint, Source, SweepRow
from src.reporting.mesh_export import facet_groups, write_obj
from src.reporting.plots import plot_gradient, plot_projection
from src.reporting.report_generator import (
    POINT_COLUMNS,
    ReportGenerator,
    comparison_frame,
    errors_path_for,
    gradient_frame,
    points_frame,
    projection_frame,
    read_points_csv,
    write_points_csv,
)

CUBE = np.array(list(itertools.product((0.0, 1.0), repeat=3)))


def exact_rows(n=3, lambdas=(-2.0, -0.3, 0.0, 0.7, 4.0)):
    rows = []
    for i, lam in enumerate(lambdas):
        params = LmgParams(epsilon=1.0, lam=lam, n_particles=n)
        rows.append(SweepRow(index=i, params=params, point=exact_point(params)))
    return rows


def sampled_row(index, lam, jz, err):
    params = LmgParams(epsilon=1.0, lam=lam, n_particles=3)
    point = RdmPoint(jz=jz, jz2=2.2, jpm2=-0.5, params=params, source=Source.SIM_IDEAL, shots=1024,
                     seed=99 + index, energy=jz - 0.25 * lam, jz_err=err, jz2_err=2 * err, jpm2_err=3 * err)
    return SweepRow(index=index, params=params, source=Source.SIM_IDEAL, point=point, seed=99 + index)


class TestPointsTable(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmp.cleanup()

    def test_header_and_round_trip(self):
        rows = exact_rows()
        target = os.path.join(self.tmp.name, "points.csv")
        self.assertEqual(write_points_csv(target, rows), [target])
        with open(target) as f:
            self.assertEqual(f.readline().strip(), ",".join(POINT_COLUMNS))
        loaded = read_points_csv(target)
        self.assertEqual(len(loaded), len(rows))
        for row, point in zip(rows, loaded):
            self.assertEqual(point.params.n_particles, 3)
            self.assertEqual(point.params.lam, row.params.lam)
            self.assertEqual((point.jz, point.jz2, point.jpm2), (row.point.jz, row.point.jz2, row.point.jpm2))
            self.assertEqual(point.energy, row.point.energy)
            self.assertIsNone(point.shots)

    def test_rewrite_is_byte_identical(self):
        first = os.path.join(self.tmp.name, "a.csv")
        second = os.path.join(self.tmp.name, "b.csv")
        write_points_csv(first, exact_rows())
        write_points_csv(second, exact_rows())
        with open(first, "rb") as a, open(second, "rb") as b:
            self.assertEqual(a.read(), b.read())

    def test_sampled_errors_sidecar(self):
        rows = [sampled_row(0, 0.5, -1.2, 0.01), sampled_row(1, 1.5, -0.9, 0.02)]
        target = os.path.join(self.tmp.name, "points.csv")
        written = write_points_csv(target, rows)
        self.assertEqual(written, [target, errors_path_for(target)])
        self.assertTrue(errors_path_for(target).endswith("points_errors.csv"))
        loaded = read_points_csv(target, n_particles=3)
        self.assertEqual([p.jz_err for p in loaded], [0.01, 0.02])
        self.assertEqual([p.jpm2_err for p in loaded], [3 * 0.01, 3 * 0.02])
        self.assertEqual([p.seed for p in loaded], [99, 100])
        self.assertEqual(loaded[0].source, Source.SIM_IDEAL)
        self.assertEqual(loaded[0].shots, 1024)

    def test_failed_rows_are_kept_and_skipped_on_read(self):
        rows = exact_rows()[:2]
        rows.append(SweepRow(index=2, params=LmgParams(epsilon=1.0, lam=9.0, n_particles=3),
                             source=Source.SIM_IDEAL, seed=7, error="infeasible"))
        frame = points_frame(rows)
        self.assertTrue(np.isnan(frame["jz"].iloc[2]))
        target = os.path.join(self.tmp.name, "points.csv")
        write_points_csv(target, rows)
        self.assertEqual(len(read_points_csv(target)), 2)

    def test_limit_labels(self):
        rows = []
        for i, eps in enumerate((1.0, 1e-6, -1e-6)):
            params = LmgParams(epsilon=eps, lam=5.0, n_particles=3)
            rows.append(SweepRow(index=i, params=params, point=exact_point(params)))
        frame = points_frame(rows)
        self.assertEqual(frame["limit"].tolist(), [None, "eps->0+", "eps->0-"])

        # files written before the label existed still load
        target = os.path.join(self.tmp.name, "points.csv")
        frame.drop(columns=["limit"]).to_csv(target, index=False, na_rep="")
        loaded = read_points_csv(target, n_particles=3)
        self.assertEqual([p.params.limit for p in loaded], [None, "eps->0+", "eps->0-"])

    def test_missing_column(self):
        target = os.path.join(self.tmp.name, "points.csv")
        with open(target, "w") as f:
            f.write("epsilon,lambda,jz\n1.0,0.0,-1.5\n")
        with self.assertRaises(ValueError):
            read_points_csv(target)

    def test_unphysical_row(self):
        target = os.path.join(self.tmp.name, "points.csv")
        write_points_csv(target, exact_rows())
        with self.assertRaises(ValueError):
            read_points_csv(target, n_particles=1)


class TestFrames(unittest.TestCase):
    def test_gradient_frame_columns(self):
        points = [row.point for row in exact_rows(lambdas=(0.0, 0.5, 1.0, 1.5))]
        frame = gradient_frame(trajectory_analysis(points))
        self.assertEqual(list(frame.columns), ["lambda", "djz_dlambda", "arc_speed", "std_error"])
        self.assertEqual(len(frame), 4)

    def test_projection_frame_marks_outline(self):
        frame = projection_frame(project_to_plane(CUBE, "jz2"))
        self.assertEqual(list(frame.columns), ["jz", "jpm2", "outline_order"])
        self.assertEqual(int(frame["outline_order"].notna().sum()), 4)

    def test_comparison_frame(self):
        exact = [row.point for row in exact_rows(lambdas=(0.5, 1.5))]
        simulated = [sampled_row(0, 0.5, exact[0].jz + 0.02, 0.01).point,
                     sampled_row(1, 1.5, exact[1].jz, 0.01).point,
                     sampled_row(2, 9.0, -1.0, 0.01).point]
        frame = comparison_frame(exact, simulated)
        self.assertEqual(len(frame), 2)
        self.assertAlmostEqual(frame["d_jz"].iloc[0], 0.02, delta=1e-12)
        self.assertAlmostEqual(frame["z_jz"].iloc[0], 2.0, delta=1e-9)
        self.assertAlmostEqual(frame["d_jz"].iloc[1], 0.0, delta=1e-15)

    def test_comparison_needs_both_sets(self):
        with self.assertRaises(ValueError):
            comparison_frame([], [row.point for row in exact_rows()])


class TestArtifacts(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmp.cleanup()

    def test_obj_groups_cube(self):
        hull = quickhull3(CUBE)
        ruled = [detect_ruled_surfaces(hull, "jz"), detect_ruled_surfaces(hull, "jpm2")]
        groups = facet_groups(hull, ruled, detect_first_order_plane(hull, "jz2"))
        self.assertEqual(len(groups["first_order_plane"]), 2)
        self.assertEqual(len(groups["ruled_jz"]), 2)
        self.assertEqual(len(groups["ruled_jpm2"]), 2)
        self.assertEqual(groups["other"], [])

        target = write_obj(hull, os.path.join(self.tmp.name, "hull.obj"), groups)
        with open(target) as f:
            lines = f.read().splitlines()
        self.assertEqual(sum(1 for line in lines if line.startswith("v ")), 8)
        faces = [line for line in lines if line.startswith("f ")]
        self.assertEqual(len(faces), 6)
        self.assertTrue(all(len(face.split()) == 5 for face in faces))
        self.assertEqual([line for line in lines if line.startswith("g ")],
                         ["g first_order_plane", "g ruled_jz", "g ruled_jpm2"])

    def test_svg_is_reproducible(self):
        points = [row.point for row in exact_rows(lambdas=tuple(np.linspace(0, 2, 9)))]
        analysis = trajectory_analysis(points)
        first = plot_gradient(analysis, os.path.join(self.tmp.name, "a.svg"), epsilon=1.0)
        second = plot_gradient(analysis, os.path.join(self.tmp.name, "b.svg"), epsilon=1.0)
        with open(first, "rb") as a, open(second, "rb") as b:
            content = a.read()
            self.assertEqual(content, b.read())
        self.assertIn(b"<svg", content)

    def test_projection_svg(self):
        target = plot_projection(project_to_plane(CUBE), os.path.join(self.tmp.name, "p.svg"))
        self.assertTrue(os.path.getsize(target) > 0)


class TestReportGenerator(unittest.TestCase):
    def test_manifest_hashes_outputs(self):
        with tempfile.TemporaryDirectory() as tmp:
            out = os.path.join(tmp, "run")
            generator = ReportGenerator(out)
            generator.write_points(exact_rows())
            generator.write_json({"b": 1, "a": [1.5]}, "report.json")
            manifest = generator.write_manifest("exact-sweep", "2026-01-01T00:00:00+00:00")
            self.assertEqual(sorted(manifest.outputs), ["points.csv", "report.json"])
            with open(os.path.join(out, "manifest.json")) as f:
                data = json.load(f)
            self.assertEqual(data["command"], "exact-sweep")
            self.assertEqual(len(data["outputs"]["points.csv"]), 64)
            with open(os.path.join(out, "report.json")) as f:
                self.assertEqual(f.read(), '{\n  "a": [\n    1.5\n  ],\n  "b": 1\n}\n')


if __name__ == "__main__":
    unittest.main()
