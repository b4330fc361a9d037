"""Tests for segmentation metrics, comparison tables and disparity scoring."""

import json

import numpy as np
import pandas as pd
import pytest
from rich.console import Console

from rgbd_encodings.dataset import LabelMap
from rgbd_encodings.errors import DimensionError, UndefinedMetricError
from rgbd_encodings.eval import (
    ConfusionMatrix,
    MetricsReport,
    best_mask,
    confusion_matrix,
    create_latex_table,
    depth_edge_mask,
    disparity_accuracy,
    edge_band_accuracy,
    export_comparison,
    export_reports_csv,
    format_text_table,
    load_all_reports_from_directory,
    load_reports_csv,
    mean_avg_precision_recall,
    overall_accuracy,
    per_class_precision_recall,
    reports_to_dataframe,
)
from rgbd_encodings.stereo import DisparityMap
from rgbd_encodings.ui import build_report_table, display_loss_summary, display_reports


def labels(rows) -> LabelMap:
    """Helper to build a LabelMap from nested lists."""
    return LabelMap(np.asarray(rows, dtype=np.uint8))


def make_report(variant: str, accuracy: float, precision: float, recall: float) -> MetricsReport:
    """Helper to build a report with fixed summary scores."""
    return MetricsReport(
        variant=variant,
        kind=variant.split()[0].lower(),
        source=None,
        overall_accuracy=accuracy,
        mean_avg_precision=precision,
        mean_avg_recall=recall,
        per_class_precision=[0.5, 0.25, None, 1.0, 0.0, 0.75],
        per_class_recall=[0.5, None, 0.25, 1.0, 0.125, 0.0],
        excluded_precision=1,
        excluded_recall=1,
        pixel_count=100,
    )


@pytest.fixture
def example_cm() -> ConfusionMatrix:
    """Five scored pixels over three classes; one ignored pixel."""
    gt = labels([[0, 0, 1], [1, 2, 255]])
    pred = labels([[0, 1, 1], [1, 0, 3]])
    return confusion_matrix(pred, gt)


@pytest.fixture
def reports() -> list[MetricsReport]:
    """Three variants; RGB and RGBH tie on accuracy."""
    return [
        make_report("RGB", 0.875, 0.5, 0.625),
        make_report("RGBH (SGBM)", 0.875, 0.75, 0.5),
        make_report("RGBD (ASW)", 0.75, 0.25, 0.25),
    ]


class TestConfusionMatrix:
    """Test confusion counts and the scores derived from them."""

    def test_counts(self, example_cm):
        """Test that rows are ground truth, columns predictions and ignored pixels skipped."""
        assert example_cm.total == 5
        assert example_cm.counts[0, 0] == 1
        assert example_cm.counts[0, 1] == 1
        assert example_cm.counts[1, 1] == 2
        assert example_cm.counts[2, 0] == 1

    def test_overall_accuracy(self, example_cm):
        """Test the trace over the total."""
        assert overall_accuracy(example_cm) == pytest.approx(0.6)

    def test_per_class(self, example_cm):
        """Test per-class values with NaN for empty denominators."""
        precision, recall = per_class_precision_recall(example_cm)
        np.testing.assert_allclose(precision[:2], [0.5, 2 / 3])
        assert np.isnan(precision[2:]).all()
        np.testing.assert_allclose(recall[:3], [0.5, 1.0, 0.0])
        assert np.isnan(recall[3:]).all()

    def test_means_skip_undefined_classes(self, example_cm):
        """Test that mean precision and recall average only the defined classes."""
        mean_precision, mean_recall = mean_avg_precision_recall(example_cm)
        assert mean_precision == pytest.approx((0.5 + 2 / 3) / 2)
        assert mean_recall == pytest.approx(0.5)

    def test_perfect_prediction(self):
        """Test that identical maps score 1 everywhere defined."""
        gt = labels([[0, 1, 2], [3, 4, 5]])
        cm = confusion_matrix(gt, gt)
        assert overall_accuracy(cm) == 1.0
        assert mean_avg_precision_recall(cm) == (1.0, 1.0)

    def test_random_pairs_match_pixel_loop(self):
        """Test counts and every score on 100 random label pairs against a loop over pixels."""
        rng = np.random.default_rng(42)
        for _ in range(100):
            h, w = int(rng.integers(1, 12)), int(rng.integers(1, 12))
            gt = rng.integers(0, 6, size=(h, w)).astype(np.uint8)
            gt[rng.random((h, w)) < 0.1] = 255
            gt[0, 0] = int(rng.integers(0, 6))
            pred = rng.integers(0, 6, size=(h, w)).astype(np.uint8)
            cm = confusion_matrix(LabelMap(pred), LabelMap(gt))

            counts = np.zeros((6, 6), dtype=np.int64)
            for g, p in zip(gt.ravel().tolist(), pred.ravel().tolist(), strict=True):
                if g != 255:
                    counts[g, p] += 1
            np.testing.assert_array_equal(cm.counts, counts)

            scored = sum(counts[g].sum() for g in range(6))
            assert overall_accuracy(cm) == pytest.approx(sum(counts[k, k] for k in range(6)) / scored)
            precision = [counts[k, k] / counts[:, k].sum() for k in range(6) if counts[:, k].sum() > 0]
            recall = [counts[k, k] / counts[k].sum() for k in range(6) if counts[k].sum() > 0]
            mean_precision, mean_recall = mean_avg_precision_recall(cm)
            assert mean_precision == pytest.approx(sum(precision) / len(precision))
            assert mean_recall == pytest.approx(sum(recall) / len(recall))

            report = MetricsReport.from_confusion(cm, "RGB", "rgb")
            for value in [report.overall_accuracy, report.mean_avg_precision, report.mean_avg_recall]:
                assert 0.0 <= value <= 1.0
            per_class = [*report.per_class_precision, *report.per_class_recall]
            assert all(0.0 <= v <= 1.0 for v in per_class if v is not None)
            assert report.excluded_precision == 6 - len(precision)
            assert report.excluded_recall == 6 - len(recall)

    def test_permutation_invariance(self, rng):
        """Test that shuffling pixels changes nothing and relabelling classes only permutes the matrix."""
        gt = rng.integers(0, 6, size=(9, 7)).astype(np.uint8)
        gt[rng.random((9, 7)) < 0.2] = 255
        pred = rng.integers(0, 6, size=(9, 7)).astype(np.uint8)
        cm = confusion_matrix(LabelMap(pred), LabelMap(gt))

        order = rng.permutation(gt.size)
        shuffled = confusion_matrix(
            LabelMap(pred.ravel()[order].reshape(7, 9)), LabelMap(gt.ravel()[order].reshape(7, 9))
        )
        np.testing.assert_array_equal(shuffled.counts, cm.counts)

        relabel = rng.permutation(6)
        lookup = np.append(relabel, np.zeros(250, dtype=np.int64)).astype(np.uint8)
        lookup[255] = 255
        renamed = confusion_matrix(LabelMap(lookup[pred]), LabelMap(lookup[gt]))
        np.testing.assert_array_equal(renamed.counts[np.ix_(relabel, relabel)], cm.counts)
        assert overall_accuracy(renamed) == pytest.approx(overall_accuracy(cm))
        np.testing.assert_allclose(mean_avg_precision_recall(renamed), mean_avg_precision_recall(cm))

    def test_report(self, example_cm):
        """Test that a report carries every score and the excluded class counts."""
        report = MetricsReport.from_confusion(example_cm, "RGBA (ASW)", "rgba", "asw")
        assert report.overall_accuracy == pytest.approx(0.6)
        assert report.per_class_precision[2] is None
        assert (report.excluded_precision, report.excluded_recall) == (4, 3)
        assert report.pixel_count == 5
        assert report.class_names == ["sky", "water", "dirt", "grass", "bush", "tree"]

    def test_empty_matrix(self):
        """Test that scores of an empty matrix are undefined."""
        cm = ConfusionMatrix.empty()
        with pytest.raises(UndefinedMetricError):
            overall_accuracy(cm)
        with pytest.raises(UndefinedMetricError):
            mean_avg_precision_recall(cm)
        with pytest.raises(UndefinedMetricError):
            MetricsReport.from_confusion(cm, "RGB", "rgb")

    def test_addition(self, example_cm):
        """Test that matrices accumulate over images."""
        assert (example_cm + example_cm).total == 10
        with pytest.raises(DimensionError):
            _ = example_cm + ConfusionMatrix.empty(3)

    def test_size_mismatch(self):
        """Test that label maps must match in size."""
        with pytest.raises(DimensionError):
            confusion_matrix(labels([[0, 1]]), labels([[0], [1]]))

    def test_prediction_out_of_range(self):
        """Test that a scored pixel cannot be predicted as an unknown class."""
        with pytest.raises(ValueError):
            confusion_matrix(labels([[7]]), labels([[0]]))

    def test_invalid_counts(self):
        """Test that counts must be square and non-negative."""
        with pytest.raises(DimensionError):
            ConfusionMatrix(np.zeros((2, 3), dtype=np.int64))
        with pytest.raises(ValueError):
            ConfusionMatrix(np.array([[1, -1], [0, 0]]))


class TestComparisonTables:
    """Test tabulation across encoding variants."""

    def test_dataframe(self, reports):
        """Test the summary and per-class columns."""
        df = reports_to_dataframe(reports, per_class=True)
        assert len(df) == 3
        assert {"variant", "overall_accuracy", "precision_sky", "recall_tree"} <= set(df.columns)
        assert pd.isna(df.loc[0, "precision_dirt"])

    def test_best_mask_marks_ties(self, reports):
        """Test that every row sharing the best value is marked."""
        marks = best_mask(reports_to_dataframe(reports))
        assert marks["overall_accuracy"].tolist() == [True, True, False]
        assert marks["mean_avg_precision"].tolist() == [False, True, False]
        assert marks["mean_avg_recall"].tolist() == [True, False, False]

    def test_text_table(self, reports):
        """Test the header and the best-value markers of the text table."""
        lines = format_text_table(reports).splitlines()
        assert lines[0].startswith("Input Data")
        assert len(lines) == 2 + len(reports)
        assert "0.75*" in lines[3]
        assert "0.25*" not in lines[4]
        assert lines[2].count("*") == 2

    def test_text_table_needs_reports(self):
        """Test that an empty table is refused."""
        with pytest.raises(ValueError):
            format_text_table([])

    def test_latex_table(self, reports):
        """Test underlined best values and escaped labels."""
        latex = create_latex_table([*reports, make_report("RGB_X", 0.5, 0.5, 0.5)])
        assert latex.startswith(r"\begin{table}")
        assert r"\underline{0.88}" in latex
        assert r"\underline{0.75}" in latex
        assert r"RGB\_X" in latex
        assert "Input Data & Overall Accuracy & Mean Average Precision & Mean Average Recall" in latex

    def test_latex_empty(self):
        """Test the placeholder table for no reports."""
        assert "No results" in create_latex_table([])


class TestReportFiles:
    """Test metrics CSV files and exports."""

    def test_csv_round_trip(self, reports, tmp_path):
        """Test that reports, including undefined per-class values, survive their CSV."""
        path = export_reports_csv(reports, tmp_path / "metrics" / "all.csv")
        assert load_reports_csv(path) == reports

    def test_directory(self, reports, tmp_path):
        """Test that a directory of CSVs is read in file-name order."""
        export_reports_csv(reports[1:], tmp_path / "b.csv")
        export_reports_csv(reports[:1], tmp_path / "a.csv")
        loaded = load_all_reports_from_directory(tmp_path)
        assert [r.variant for r in loaded] == ["RGB", "RGBH (SGBM)", "RGBD (ASW)"]

    def test_missing_files(self, tmp_path):
        """Test that missing CSVs and directories are reported."""
        with pytest.raises(FileNotFoundError):
            load_reports_csv(tmp_path / "none.csv")
        with pytest.raises(FileNotFoundError):
            load_all_reports_from_directory(tmp_path / "none")

    def test_export_json(self, reports, tmp_path):
        """Test JSON export inferred from the extension."""
        path = export_comparison(reports, tmp_path / "table.json")
        records = json.loads(path.read_text(encoding="utf-8"))
        assert [r["variant"] for r in records] == ["RGB", "RGBH (SGBM)", "RGBD (ASW)"]
        assert "recall_tree" in records[0]

    @pytest.mark.parametrize(("name", "marker"), [("table.tex", r"\underline{0.88}"), ("table.txt", "0.75*")])
    def test_export_tables(self, reports, tmp_path, name, marker):
        """Test the LaTeX and text exports with their best-value markers."""
        text = export_comparison(reports, tmp_path / "out" / name).read_text(encoding="utf-8")
        assert marker in text
        assert "RGBD (ASW)" in text

    @pytest.mark.parametrize("name", ["table.xml", "table"])
    def test_export_unsupported(self, reports, tmp_path, name):
        """Test that unknown formats are rejected."""
        with pytest.raises(ValueError):
            export_comparison(reports, tmp_path / name)

    def test_latex_escapes_variant_names(self, reports):
        """Test that free-text variant names cannot break the LaTeX table."""
        latex = create_latex_table([*reports, make_report("RGB & H 50% {x}", 0.5, 0.5, 0.5)])
        assert r"RGB \& H 50\% \{x\}" in latex


class TestConsoleOutput:
    """Test the rich tables."""

    def test_report_table(self, reports):
        """Test one table row per report."""
        assert build_report_table(reports).row_count == 3

    def test_display(self, reports):
        """Test that the comparison and per-class tables are printed."""
        output = Console(record=True, width=120)
        display_reports(reports, per_class=True, console_instance=output)
        text = output.export_text()
        assert "Classification Results" in text
        assert "Per-class scores: RGBH (SGBM)" in text

    def test_loss_summary(self):
        """Test the loss summary and its empty case."""
        output = Console(record=True, width=120)
        display_loss_summary([1.5, 0.75, 1.0], console_instance=output)
        display_loss_summary([], console_instance=output)
        text = output.export_text()
        assert "0.7500" in text
        assert "No training iterations" in text


class TestDisparityAccuracy:
    """Test scoring of disparity maps against ground truth."""

    @pytest.fixture
    def step_gt(self) -> DisparityMap:
        """Ground truth with disparity 10 on the left half and 20 on the right."""
        disparity = np.full((8, 10), 10.0)
        disparity[:, 5:] = 20.0
        return DisparityMap.from_array(disparity, np.ones((8, 10), dtype=bool))

    def test_perfect(self, step_gt):
        """Test that the ground truth scores no error."""
        accuracy = disparity_accuracy(step_gt, step_gt)
        assert accuracy.bad_pixel_rate == 0.0
        assert accuracy.mean_abs_error == 0.0
        assert accuracy.coverage == 1.0
        assert accuracy.evaluated == 80

    def test_bad_column(self, step_gt):
        """Test bad-pixel rate and mean error with one column off by three."""
        disparity = step_gt.disparity.copy()
        disparity[:, 0] = 13.0
        dmap = DisparityMap.from_array(disparity, step_gt.valid)
        accuracy = disparity_accuracy(dmap, step_gt)
        assert accuracy.bad_pixel_rate == pytest.approx(0.1)
        assert accuracy.mean_abs_error == pytest.approx(0.3)
        occluded = np.zeros(step_gt.valid.shape, dtype=bool)
        occluded[:, 0] = True
        assert disparity_accuracy(dmap, step_gt, occluded).bad_pixel_rate == 0.0

    def test_coverage(self, step_gt):
        """Test that invalid estimates lower coverage but not the error."""
        valid = step_gt.valid.copy()
        valid[:, ::2] = False
        accuracy = disparity_accuracy(DisparityMap.from_array(step_gt.disparity, valid), step_gt)
        assert accuracy.coverage == pytest.approx(0.5)
        assert accuracy.bad_pixel_rate == 0.0

    def test_nothing_to_score(self, step_gt):
        """Test that an all-invalid estimate cannot be scored."""
        empty = DisparityMap.from_array(step_gt.disparity, np.zeros(step_gt.valid.shape, dtype=bool))
        with pytest.raises(UndefinedMetricError):
            disparity_accuracy(empty, step_gt)

    def test_size_mismatch(self, step_gt):
        """Test that maps must match in size."""
        other = DisparityMap.from_array(np.full((4, 4), 10.0), np.ones((4, 4), dtype=bool))
        with pytest.raises(DimensionError):
            disparity_accuracy(other, step_gt)

    @pytest.mark.parametrize(("band", "columns"), [(0, [4, 5]), (2, [2, 3, 4, 5, 6, 7])])
    def test_edge_mask(self, step_gt, band, columns):
        """Test the band around a vertical disparity step."""
        mask = depth_edge_mask(step_gt, band=band)
        expected = np.zeros(step_gt.valid.shape, dtype=bool)
        expected[:, columns] = True
        np.testing.assert_array_equal(mask, expected)

    def test_edge_band_accuracy(self, step_gt):
        """Test that errors at the step count within the band."""
        assert edge_band_accuracy(step_gt, step_gt).mean_abs_error == 0.0
        disparity = step_gt.disparity.copy()
        disparity[:, 5] = 10.0
        dmap = DisparityMap.from_array(disparity, step_gt.valid)
        accuracy = edge_band_accuracy(dmap, step_gt, band=2)
        assert accuracy.bad_pixel_rate == pytest.approx(1 / 6)
        assert accuracy.mean_abs_error == pytest.approx(10 / 6)
        assert accuracy.evaluated == 48

    def test_no_edges(self):
        """Test that a flat ground truth has no edge band to score."""
        flat = DisparityMap.from_array(np.full((6, 6), 12.0), np.ones((6, 6), dtype=bool))
        with pytest.raises(UndefinedMetricError):
            edge_band_accuracy(flat, flat)
