"""
Command-line driver for the encoding pipeline.

Run with: rgbd-encodings [GLOBAL OPTIONS] <subcommand> [OPTIONS]
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

import logfire
from pydantic import ValidationError

from ..encodings import EncodingKind
from ..errors import RgbdError
from ..geometry import CameraRig
from ..model import DESK_SCALE_TRAINING, TrainConfig
from ..stereo import AswParams, SgbmParams, StereoAlgorithm
from .commands import COMMANDS, PipelineConfig

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _add_stereo_options(parser: argparse.ArgumentParser, required: bool = False) -> None:
    parser.add_argument(
        "--stereo",
        "--algorithm",
        dest="algorithm",
        choices=[a.value for a in StereoAlgorithm],
        required=required,
        help="Stereo matcher for the depth channels",
    )
    parser.add_argument(
        "--params",
        type=Path,
        metavar="FILE",
        help="JSON file with matcher parameters (SgbmParams or AswParams fields)",
    )


def _create_argument_parser() -> argparse.ArgumentParser:
    """
    Create and configure the argument parser for the CLI.

    Returns:
        Configured ArgumentParser instance with all subcommands.
    """
    parser = argparse.ArgumentParser(
        prog="rgbd-encodings",
        description="Stereo depth encodings for terrain segmentation",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Render a seeded synthetic data set of 40 scenes
  rgbd-encodings --rig rig.json render-synthetic --random 40 --out data/

  # Split it 80/20
  rgbd-encodings --seed 1 split --manifest data/manifest.csv --out data/

  # Encode every sample as RGBH with semi-global matching
  rgbd-encodings --rig rig.json --jobs 4 encode --manifest data/split.csv --kind rgbh --stereo sgbm --out enc/rgbh_sgbm

  # Train, predict and score
  rgbd-encodings train --manifest enc/rgbh_sgbm/manifest.csv --out runs/rgbh_sgbm.ckpt
  rgbd-encodings predict --checkpoint runs/rgbh_sgbm.ckpt --manifest enc/rgbh_sgbm/manifest.csv --split test --out pred/
  rgbd-encodings eval --pred pred/ --manifest enc/rgbh_sgbm/manifest.csv --split test \\
      --kind rgbh --stereo sgbm --out metrics/rgbh_sgbm.csv

  # Compare all variants
  rgbd-encodings report metrics/ --latex table.tex
        """,
    )

    parser.add_argument("--rig", type=Path, metavar="FILE", help="Camera rig JSON (default: built-in 480x360 rig)")
    parser.add_argument("--jobs", type=int, default=1, help="Worker processes for per-sample work (default: 1)")
    parser.add_argument("--seed", type=int, default=0, help="Seed for splits, scenes and training (default: 0)")
    parser.add_argument("-v", "--verbose", action="store_true", help="Log at DEBUG level")

    sub = parser.add_subparsers(dest="command", required=True, metavar="<subcommand>")

    stereo = sub.add_parser("stereo", help="Compute a disparity PNG from a rectified pair")
    stereo.add_argument("--left", type=Path, required=True, help="Left image")
    stereo.add_argument("--right", type=Path, required=True, help="Right image")
    stereo.add_argument("--out", type=Path, required=True, help="16-bit disparity PNG to write")
    stereo.add_argument("--visualize", type=Path, metavar="FILE", help="Also write a false-colour PNG")
    stereo.add_argument("--gt", type=Path, metavar="FILE", help="Ground-truth disparity PNG to score against")
    stereo.add_argument("--occluded", type=Path, metavar="FILE", help="Occlusion mask PNG left out of the score")
    _add_stereo_options(stereo, required=True)

    encode = sub.add_parser("encode", help="Encode pairs into multi-channel containers")
    encode.add_argument("--kind", required=True, choices=[k.value for k in EncodingKind], help="Encoding kind")
    _add_stereo_options(encode)
    encode.add_argument("--left", type=Path, help="Left image (single-pair mode)")
    encode.add_argument("--right", type=Path, help="Right image (single-pair mode)")
    encode.add_argument("--manifest", type=Path, help="Manifest of pairs to encode")
    encode.add_argument("--out", type=Path, required=True, help="Container file, or output directory with --manifest")
    encode.add_argument("--export-png", action="store_true", help="Also write the planes as PNGs")

    render = sub.add_parser("render-synthetic", help="Render synthetic stereo pairs with ground truth")
    source = render.add_mutually_exclusive_group(required=True)
    source.add_argument("--spec", type=Path, metavar="FILE", help="Scene spec JSON")
    source.add_argument("--random", type=int, metavar="N", help="Render N seeded six-class off-road scenes")
    render.add_argument("--out", type=Path, required=True, help="Output directory")

    split = sub.add_parser("split", help="Split a manifest into train and test manifests")
    split.add_argument("--manifest", type=Path, required=True, help="Manifest to split")
    split.add_argument("--ratio", type=float, default=0.8, help="Train fraction (default: 0.8)")
    split.add_argument("--out", type=Path, help="Output directory (default: next to the manifest)")

    train = sub.add_parser("train", help="Train the segmentation net on encoded containers")
    train.add_argument("--manifest", type=Path, required=True, help="Manifest with a container column")
    train.add_argument("--out", type=Path, required=True, help="Checkpoint to write")
    train.add_argument("--loss-csv", type=Path, help="Loss curve CSV (default: <out>.loss.csv)")
    train.add_argument("--config", type=Path, metavar="FILE", help="TrainConfig JSON")
    train.add_argument("--iterations", type=int, help="Override the number of iterations")
    train.add_argument("--lr", type=float, help="Override the learning rate")
    train.add_argument("--momentum", type=float, help="Override the momentum")

    predict = sub.add_parser("predict", help="Write predicted label PNGs")
    predict.add_argument("--checkpoint", type=Path, required=True, help="Trained checkpoint")
    predict.add_argument("--manifest", type=Path, required=True, help="Manifest with a container column")
    predict.add_argument("--split", choices=["train", "test"], help="Only predict one split")
    predict.add_argument("--out", type=Path, required=True, help="Output directory")

    evaluate = sub.add_parser("eval", help="Score predicted labels against ground truth")
    evaluate.add_argument("--pred", type=Path, required=True, help="Directory of predicted label PNGs")
    evaluate.add_argument("--gt", type=Path, help="Directory of ground-truth label PNGs with matching names")
    evaluate.add_argument("--manifest", type=Path, help="Take ground truth from a manifest instead of --gt")
    evaluate.add_argument("--split", choices=["train", "test"], help="Only score one split of the manifest")
    evaluate.add_argument("--kind", choices=[k.value for k in EncodingKind], help="Encoding kind being scored")
    _add_stereo_options(evaluate)
    evaluate.add_argument("--variant", help="Row label for the report (default: derived from kind and stereo)")
    evaluate.add_argument("--out", type=Path, required=True, help="Metrics CSV to write")

    report = sub.add_parser("report", help="Tabulate metrics CSVs with the best values marked")
    report.add_argument("metrics", type=Path, nargs="+", help="Metrics CSV files or directories")
    report.add_argument("--latex", type=Path, metavar="FILE", help="Also write a LaTeX table")
    report.add_argument("--out", type=Path, help="Also write the combined table (.csv, .json, .tex or .txt)")

    return parser


def _configure_logging(verbose: bool = False) -> None:
    """Configure stdlib logging and local-only logfire."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    logfire.configure(send_to_logfire=False, console=False, scrubbing=False)
    logging.getLogger("logfire._internal").setLevel(logging.ERROR)
    logging.getLogger("logfire").setLevel(logging.ERROR)


def _load_matcher(args: argparse.Namespace, algorithm: StereoAlgorithm | None) -> SgbmParams | AswParams | None:
    path = getattr(args, "params", None)
    if path is None or algorithm is None:
        return None
    if not path.exists():
        raise FileNotFoundError(f"Matcher params not found: {path}")
    model = SgbmParams if algorithm == StereoAlgorithm.SGBM else AswParams
    return model.model_validate_json(path.read_text(encoding="utf-8"))


def _load_train_config(args: argparse.Namespace, seed: int) -> TrainConfig:
    path = getattr(args, "config", None)
    if path is not None:
        if not path.exists():
            raise FileNotFoundError(f"Train config not found: {path}")
        base = TrainConfig.model_validate_json(path.read_text(encoding="utf-8"))
    else:
        base = DESK_SCALE_TRAINING.model_copy(update={"seed": seed})
    overrides = {
        "iterations": getattr(args, "iterations", None),
        "learning_rate": getattr(args, "lr", None),
        "momentum": getattr(args, "momentum", None),
    }
    update = {k: v for k, v in overrides.items() if v is not None}
    return TrainConfig.model_validate({**base.model_dump(), **update}) if update else base


def build_config(args: argparse.Namespace) -> PipelineConfig:
    """
    Resolve the parsed arguments into a PipelineConfig.

    Returns:
        PipelineConfig

    Raises:
        FileNotFoundError: If a referenced config file does not exist
        ValidationError: If a setting is invalid
    """
    rig = CameraRig.load(args.rig) if args.rig else CameraRig()
    algorithm = StereoAlgorithm(args.algorithm) if getattr(args, "algorithm", None) else None
    kind = EncodingKind.parse(args.kind) if getattr(args, "kind", None) else None
    return PipelineConfig(
        rig=rig,
        algorithm=algorithm,
        matcher=_load_matcher(args, algorithm),
        kind=kind,
        jobs=args.jobs,
        seed=args.seed,
        split_ratio=getattr(args, "ratio", 0.8),
        train=_load_train_config(args, args.seed),
    )


def _provenance(args: argparse.Namespace, config: PipelineConfig) -> dict[str, Any]:
    arguments = {k: str(v) if isinstance(v, Path) else v for k, v in vars(args).items()}
    if isinstance(arguments.get("metrics"), list):
        arguments["metrics"] = [str(p) for p in arguments["metrics"]]
    return {
        "arguments": arguments,
        "config": config.model_dump(mode="json"),
        "rig_hash": config.rig.rig_hash(),
    }


def run_command(argv: Sequence[str] | None = None) -> int:
    """
    Parse argv, run one subcommand and report the outcome as an exit status.

    Returns:
        0 on success, 2 on a usage error, 1 on any data, config or I/O error
    """
    parser = _create_argument_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    _configure_logging(args.verbose)
    try:
        config = build_config(args)
        provenance = _provenance(args, config)
        logger.info("Provenance: %s", json.dumps(provenance, sort_keys=True, default=str))
        with logfire.span("rgbd-encodings {command}", command=args.command, rig_hash=provenance["rig_hash"]):
            written = COMMANDS[args.command](args, config)
    except (RgbdError, ValidationError, ValueError, OSError, TypeError) as e:
        logger.error("%s failed: %s", args.command, e)
        return EXIT_FAILURE

    logger.info("%s wrote %d artefacts", args.command, len(written))
    return EXIT_OK


def main():
    """Console entry point."""
    sys.exit(run_command())


if __name__ == "__main__":
    main()
