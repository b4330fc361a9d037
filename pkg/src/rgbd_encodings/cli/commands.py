"""
Subcommand implementations.

Each ``run_*`` function takes the parsed arguments and the resolved
PipelineConfig, writes its artefacts and returns the written paths.
Per-sample work functions live at module level so worker processes can
import them.
"""

from __future__ import annotations

import argparse
import logging
from collections.abc import Callable, Iterable
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import NamedTuple, TypeVar

import cv2
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..dataset import (
    CONTAINER_SUFFIX,
    DatasetEntry,
    DatasetIndex,
    export_planes_png,
    load_label_png,
    read_container,
    save_label_png,
    write_container,
)
from ..encodings import EncodingKind, encode_all, pack_from_depth
from ..errors import UndefinedMetricError
from ..eval import (
    CONFUSION_SUFFIX,
    ConfusionMatrix,
    MetricsReport,
    confusion_matrix,
    create_latex_table,
    disparity_accuracy,
    edge_band_accuracy,
    export_comparison,
    export_reports_csv,
    format_text_table,
    load_all_reports_from_directory,
    load_reports_csv,
)
from ..geometry import CameraRig
from ..model import (
    DESK_SCALE_TRAINING,
    TrainConfig,
    load_checkpoint,
    predict_labels,
    prepare_input,
    save_checkpoint,
    train,
)
from ..model.training import save_loss_curve
from ..stereo import (
    AswParams,
    DisparityMap,
    MatcherParams,
    SgbmParams,
    StereoAlgorithm,
    compute_disparity,
    default_params,
    load_disparity_png,
    load_gray_image,
    load_rgb_image,
    save_disparity_png,
    save_disparity_visualization,
    to_gray,
)
from ..synth import SceneSpec, random_offroad_scene, render_scene, save_fixture
from ..ui import console, display_loss_summary, display_reports

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


class PipelineConfig(BaseModel):
    """Resolved settings shared by every subcommand."""

    model_config = ConfigDict(frozen=True)

    rig: CameraRig = Field(default_factory=CameraRig, description="Stereo rig")
    algorithm: StereoAlgorithm | None = Field(default=None, description="Stereo matcher for depth channels")
    matcher: SgbmParams | AswParams | None = Field(default=None, description="Matcher parameters")
    kind: EncodingKind | None = Field(default=None, description="Encoding kind")
    jobs: int = Field(default=1, ge=1, description="Worker processes for per-sample work")
    seed: int = Field(default=0, description="Seed for splits, scenes and training")
    split_ratio: float = Field(default=0.8, gt=0, lt=1, description="Train fraction")
    train: TrainConfig = Field(default=DESK_SCALE_TRAINING, description="Optimiser settings for train")

    @model_validator(mode="after")
    def _stereo_for_depth_kinds(self) -> PipelineConfig:
        if self.kind is not None and self.kind.needs_stereo and self.algorithm is None:
            raise ValueError(f"Encoding {self.kind.name} needs a stereo algorithm (--stereo)")
        return self

    def matcher_params(self) -> MatcherParams:
        if self.algorithm is None:
            raise ValueError("No stereo algorithm selected")
        return self.matcher or default_params(self.algorithm)


def _require(path: Path | None, what: str) -> Path:
    if path is None:
        raise ValueError(f"Missing {what}")
    if not path.exists():
        raise FileNotFoundError(f"{what} not found: {path}")
    return path


def _map(func: Callable[[T], R], tasks: Iterable[T], jobs: int) -> list[R]:
    """Run tasks in order, on a process pool when jobs > 1."""
    items = list(tasks)
    if jobs <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ProcessPoolExecutor(max_workers=jobs) as executor:
        return list(executor.map(func, items))


# -- stereo -------------------------------------------------------------------

def run_stereo(args: argparse.Namespace, config: PipelineConfig) -> list[Path]:
    left = load_gray_image(_require(args.left, "Left image"))
    right = load_gray_image(_require(args.right, "Right image"))
    dmap = compute_disparity(left, right, config.algorithm, config.matcher_params())
    args.out.parent.mkdir(parents=True, exist_ok=True)
    save_disparity_png(dmap, args.out)
    written = [args.out]
    if args.visualize:
        save_disparity_visualization(dmap, args.visualize)
        written.append(args.visualize)
    logger.info("Disparity written to %s (%.1f%% valid)", args.out, 100.0 * dmap.valid.mean())
    if args.gt:
        _score_disparity(dmap, args.gt, args.occluded)
    return written


def _score_disparity(dmap: DisparityMap, gt_path: Path, occluded_path: Path | None) -> None:
    gt = load_disparity_png(_require(gt_path, "Ground-truth disparity"))
    occluded = None
    if occluded_path is not None:
        mask = cv2.imread(str(_require(occluded_path, "Occlusion mask")), cv2.IMREAD_GRAYSCALE)
        if mask is None:
            raise OSError(f"Failed to read occlusion mask: {occluded_path}")
        occluded = mask > 0
    accuracy = disparity_accuracy(dmap, gt, occluded)
    logger.info(
        "Bad pixels (>1 px): %.2f%%, mean abs error %.3f px, coverage %.1f%% of %d scored pixels",
        100.0 * accuracy.bad_pixel_rate,
        accuracy.mean_abs_error,
        100.0 * accuracy.coverage,
        accuracy.evaluated,
    )
    try:
        edges = edge_band_accuracy(dmap, gt, occluded)
        logger.info(
            "Near depth edges: bad pixels %.2f%%, mean abs error %.3f px",
            100.0 * edges.bad_pixel_rate,
            edges.mean_abs_error,
        )
    except UndefinedMetricError:
        logger.info("No depth edges to score")


# -- encode -------------------------------------------------------------------

class EncodeTask(NamedTuple):
    left: Path
    right: Path
    out: Path
    kind: EncodingKind
    algorithm: StereoAlgorithm | None
    params: MatcherParams | None
    rig: CameraRig
    export_png: bool


def encode_sample(task: EncodeTask) -> Path:
    """Encode one stereo pair into a container file."""
    left_rgb = load_rgb_image(_require(task.left, "Left image"))
    task.rig.require_image_shape(left_rgb.shape)
    depth = None
    if task.kind.needs_stereo:
        right_rgb = load_rgb_image(_require(task.right, "Right image"))
        dmap = compute_disparity(to_gray(left_rgb), to_gray(right_rgb), task.algorithm, task.params)
        depth = encode_all(dmap, task.rig)
    image = pack_from_depth(left_rgb, task.kind, depth, task.algorithm)
    task.out.parent.mkdir(parents=True, exist_ok=True)
    write_container(image, task.out, task.rig.rig_hash())
    if task.export_png:
        export_planes_png(image, task.out.with_suffix(".png"))
    return task.out


def run_encode(args: argparse.Namespace, config: PipelineConfig) -> list[Path]:
    if config.kind is None:
        raise ValueError("encode needs --kind")
    params = config.matcher_params() if config.kind.needs_stereo else None
    algorithm = config.algorithm if config.kind.needs_stereo else None

    if args.manifest is None:
        task = EncodeTask(
            _require(args.left, "Left image"), args.right, args.out, config.kind, algorithm, params,
            config.rig, args.export_png,
        )
        return [encode_sample(task)]

    index = DatasetIndex.read(_require(args.manifest, "Manifest"))
    out_dir: Path = args.out
    suffix = config.kind.value if algorithm is None else f"{config.kind.value}_{algorithm.value}"
    tasks = [
        EncodeTask(
            index.resolve(entry.left),
            index.resolve(entry.right),
            out_dir / f"{entry.sample_id}_{suffix}{CONTAINER_SUFFIX}",
            config.kind,
            algorithm,
            params,
            config.rig,
            args.export_png,
        )
        for entry in index.entries
    ]
    written = _map(encode_sample, tasks, config.jobs)

    out_dir.mkdir(parents=True, exist_ok=True)
    entries = [
        DatasetEntry(
            sample_id=entry.sample_id,
            left=_relative(index.resolve(entry.left), out_dir),
            right=_relative(index.resolve(entry.right), out_dir),
            label=_relative(index.resolve(entry.label), out_dir),
            container=_relative(path, out_dir),
            split=entry.split,
        )
        for entry, path in zip(index.entries, written, strict=True)
    ]
    manifest = DatasetIndex(entries=entries, root=out_dir, split_seed=index.split_seed).write(
        out_dir / "manifest.csv"
    )
    logger.info("Encoded %d samples as %s", len(written), suffix)
    return [*written, manifest]


def _relative(path: Path, base: Path) -> str:
    try:
        return str(path.resolve().relative_to(base.resolve()))
    except ValueError:
        return str(path.resolve())


# -- render-synthetic ---------------------------------------------------------

def render_sample(task: tuple[int, CameraRig, Path]) -> dict[str, Path]:
    seed, rig, directory = task
    spec = random_offroad_scene(seed, rig)
    return save_fixture(render_scene(spec, rig), spec, rig, directory)


def run_render_synthetic(args: argparse.Namespace, config: PipelineConfig) -> list[Path]:
    out_dir: Path = args.out
    if args.spec is not None:
        spec = SceneSpec.load(_require(args.spec, "Scene spec"))
        return list(save_fixture(render_scene(spec, config.rig), spec, config.rig, out_dir).values())

    count = args.random
    ids = [f"scene_{i:04d}" for i in range(count)]
    tasks = [(config.seed * 100_003 + i, config.rig, out_dir / sample_id) for i, sample_id in enumerate(ids)]
    fixtures = _map(render_sample, tasks, config.jobs)
    entries = [
        DatasetEntry(
            sample_id=sample_id,
            left=f"{sample_id}/{paths['left'].name}",
            right=f"{sample_id}/{paths['right'].name}",
            label=f"{sample_id}/{paths['labels'].name}",
        )
        for sample_id, paths in zip(ids, fixtures, strict=True)
    ]
    manifest = DatasetIndex(entries=entries, root=out_dir).write(out_dir / "manifest.csv")
    return [manifest, *(p for paths in fixtures for p in paths.values())]


# -- split --------------------------------------------------------------------

def run_split(args: argparse.Namespace, config: PipelineConfig) -> list[Path]:
    index = DatasetIndex.read(_require(args.manifest, "Manifest")).with_split(config.split_ratio, config.seed)
    out_dir: Path = args.out or args.manifest.parent
    rebased = _rebase(index, out_dir)
    written = [
        rebased.write(out_dir / "split.csv"),
        rebased.subset("train").write(out_dir / "train.csv"),
        rebased.subset("test").write(out_dir / "test.csv"),
    ]
    logger.info(
        "Split %d samples: %d train, %d test", len(index), len(rebased.subset("train")), len(rebased.subset("test"))
    )
    return written


def _rebase(index: DatasetIndex, out_dir: Path) -> DatasetIndex:
    def move(relative: str | None) -> str | None:
        return None if relative is None else _relative(index.resolve(relative), out_dir)

    entries = [
        entry.model_copy(update={
            "left": move(entry.left),
            "right": move(entry.right),
            "label": move(entry.label),
            "container": move(entry.container),
        })
        for entry in index.entries
    ]
    return DatasetIndex(entries=entries, root=out_dir, split_seed=index.split_seed)


# -- train --------------------------------------------------------------------

def _load_training_data(index: DatasetIndex):
    data = []
    for entry in index.entries:
        if entry.container is None:
            raise ValueError(f"Sample {entry.sample_id} has no container; run encode first")
        image = read_container(index.resolve(entry.container))
        labels = load_label_png(index.resolve(entry.label))
        data.append((image, labels))
    return data


def run_train(args: argparse.Namespace, config: PipelineConfig) -> list[Path]:
    index = DatasetIndex.read(_require(args.manifest, "Manifest"))
    if any(entry.split is not None for entry in index.entries):
        index = index.subset("train")
    result = train(_load_training_data(index), config.train)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    checkpoint = save_checkpoint(result.net, args.out)
    loss_path = save_loss_curve(result.losses, args.loss_csv or args.out.with_suffix(".loss.csv"))
    display_loss_summary(result.losses)
    return [checkpoint, loss_path]


# -- predict ------------------------------------------------------------------

def predict_sample(task: tuple[Path, Path, Path]) -> Path:
    checkpoint, container, out = task
    net = load_checkpoint(checkpoint)
    labels = predict_labels(net, prepare_input(read_container(container)))
    save_label_png(labels, out)
    return out


def run_predict(args: argparse.Namespace, config: PipelineConfig) -> list[Path]:
    checkpoint = _require(args.checkpoint, "Checkpoint")
    index = DatasetIndex.read(_require(args.manifest, "Manifest"))
    if args.split:
        index = index.subset(args.split)
    out_dir: Path = args.out
    out_dir.mkdir(parents=True, exist_ok=True)
    tasks = []
    for entry in index.entries:
        if entry.container is None:
            raise ValueError(f"Sample {entry.sample_id} has no container; run encode first")
        tasks.append((checkpoint, index.resolve(entry.container), out_dir / f"{entry.sample_id}.png"))
    return _map(predict_sample, tasks, config.jobs)


# -- eval ---------------------------------------------------------------------

def _label_pairs(args: argparse.Namespace) -> list[tuple[Path, Path]]:
    pred_dir = _require(args.pred, "Prediction directory")
    if args.manifest is not None:
        index = DatasetIndex.read(_require(args.manifest, "Manifest"))
        if args.split:
            index = index.subset(args.split)
        return [(pred_dir / f"{e.sample_id}.png", index.resolve(e.label)) for e in index.entries]
    gt_dir = _require(args.gt, "Ground-truth directory")
    return [(path, gt_dir / path.name) for path in sorted(pred_dir.glob("*.png"))]


def run_eval(args: argparse.Namespace, config: PipelineConfig) -> list[Path]:
    pairs = _label_pairs(args)
    if not pairs:
        raise FileNotFoundError(f"No prediction PNGs in {args.pred}")
    total = ConfusionMatrix.empty()
    for pred_path, gt_path in pairs:
        pred = load_label_png(_require(pred_path, "Prediction"))
        gt = load_label_png(_require(gt_path, "Ground-truth labels"))
        total = total + confusion_matrix(pred, gt)

    kind = config.kind or EncodingKind.RGB
    source = config.algorithm if kind.needs_stereo else None
    variant = args.variant or (kind.name if source is None else f"{kind.name} ({source.name})")
    report = MetricsReport.from_confusion(total, variant, kind.value, source.value if source else None)
    display_reports([report], per_class=True)
    written = export_reports_csv([report], args.out)
    confusion_path = args.out.with_suffix(CONFUSION_SUFFIX)
    np.savetxt(confusion_path, total.counts, fmt="%d", delimiter=",")
    return [written, confusion_path]


# -- report -------------------------------------------------------------------

def run_report(args: argparse.Namespace, config: PipelineConfig) -> list[Path]:
    reports: list[MetricsReport] = []
    for path in args.metrics:
        source = _require(path, "Metrics")
        reports.extend(load_all_reports_from_directory(source) if source.is_dir() else load_reports_csv(source))
    if not reports:
        raise FileNotFoundError("No metrics rows found")

    console.print(format_text_table(reports), markup=False, highlight=False)
    display_reports(reports)
    written: list[Path] = []
    if args.latex:
        args.latex.write_text(create_latex_table(reports) + "\n", encoding="utf-8")
        written.append(args.latex)
    if args.out:
        written.append(export_comparison(reports, args.out))
    return written


COMMANDS: dict[str, Callable[[argparse.Namespace, PipelineConfig], list[Path]]] = {
    "stereo": run_stereo,
    "encode": run_encode,
    "render-synthetic": run_render_synthetic,
    "split": run_split,
    "train": run_train,
    "predict": run_predict,
    "eval": run_eval,
    "report": run_report,
}
