"""
conversation-simulator command line

Subcommands:
    fit       Fit turn-taking parameters from RTTM or session manifests
    simulate  Generate a dataset from a config file
    stats     Report speech, overlap and transition statistics
    bench     Measure generation throughput against worker count
    rir       Write one image-method room impulse response

Examples:
    conversation-simulator fit data/train.rttm --out configs/fitted.env
    conversation-simulator simulate --config configs/simulation.example.env --workers 8 --seed 7
    conversation-simulator simulate --config run.env --set TT_RECIPE=callhome --boost-overlap 2
    conversation-simulator stats output/manifest.jsonl --json
    conversation-simulator bench --config run.env --workers 1,2,4,8 --out bench.csv
    conversation-simulator rir --room 6,5,3 --src 1,1,1.5 --mic 4,4,1.5 --out rir.wav

Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error,
130 interrupted.
"""

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from pydantic import ValidationError

from . import __version__
from .acoustics import RoomSpec, image_method_rir
from .config import SimulationConfig, load_simulation_config, parse_override
from .corpus_io import load_session_manifests, read_rttm, write_wav
from .errors import (
    ConfigError,
    EmptyCorpusError,
    FittingError,
    GeometryError,
    ManifestParseError,
    ManifestValidationError,
    SimulatorError,
)
from .orchestration import benchmark, generate_dataset
from .stats import compute_stats, format_report_table
from .turntaking import (
    TRANSITION_ORDER,
    TurnTakingMode,
    boost_overlap,
    classify_transitions,
    fit_params_from_sessions,
    save_params_file,
)
from .turntaking.params_file import describe_params

logger = logging.getLogger(__name__)

# RTTM times carry three decimals
RTTM_TOLERANCE = 1e-3

USAGE_ERRORS = (
    ConfigError,
    EmptyCorpusError,
    FileNotFoundError,
    FittingError,
    GeometryError,
    ManifestParseError,
    ManifestValidationError,
)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_INTERRUPTED = 130


def setup_logging(verbose: bool = False) -> None:
    """Configure logging"""
    level = logging.DEBUG if verbose else os.getenv("LOG_LEVEL", "INFO").upper()
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        stream=sys.stderr,
    )


def _vector3(text: str) -> List[float]:
    parts = [p for p in text.replace(" ", "").split(",") if p]
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected X,Y,Z in meters, got {text!r}") from None
    if len(values) != 3:
        raise argparse.ArgumentTypeError(f"expected 3 comma-separated values, got {text!r}")
    return values


def _int_list(text: str) -> List[int]:
    try:
        values = [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError(f"worker counts must be positive integers, got {text!r}")
    return values


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text!r}")
    return value


def _overrides(args: argparse.Namespace, flag_keys: Dict[str, str]) -> Dict[str, str]:
    """--set KEY=VALUE pairs, then dedicated flags on top."""
    overrides = dict(parse_override(item) for item in (args.set or []))
    for attr, key in flag_keys.items():
        value = getattr(args, attr, None)
        if value is not None:
            overrides[key] = str(value)
    return overrides


def _load_config(args: argparse.Namespace, flag_keys: Dict[str, str]) -> SimulationConfig:
    config = load_simulation_config(args.config, overrides=_overrides(args, flag_keys))
    if getattr(args, "boost_overlap", None) is not None:
        boosted = boost_overlap(config.turntaking, args.boost_overlap)
        logger.info(f"Boosted IR/BC by {args.boost_overlap:g}: {describe_params(boosted)}")
        config = config.model_copy(update={"turntaking": boosted})
    return config


def _timelines_from_annotations(path: Path, annotation_format: str) -> Dict[str, List[tuple]]:
    if annotation_format == "rttm":
        return dict(read_rttm(path))
    return {
        m.session_id: sorted(m.timeline(), key=lambda t: (t[1], t[0]))
        for m in load_session_manifests(path)
    }


def cmd_fit(args: argparse.Namespace) -> int:
    """Fit turn-taking parameters and write them as a params file."""
    annotation_format = args.format
    if annotation_format == "auto":
        annotation_format = "rttm" if args.annotations.suffix.lower() == ".rttm" else "session-manifest"

    timelines = _timelines_from_annotations(args.annotations, annotation_format)
    if not timelines:
        raise EmptyCorpusError(f"No annotated sessions in {args.annotations}")

    tolerance = RTTM_TOLERANCE if annotation_format == "rttm" else 1e-9
    sessions = [
        classify_transitions(timeline, args.bc_max_duration, record_id=session_id, tolerance=tolerance)
        for session_id, timeline in sorted(timelines.items())
    ]
    params = fit_params_from_sessions(sessions, mode=TurnTakingMode(args.mode), bc_max_duration=args.bc_max_duration)
    save_params_file(params, args.out, header=f"Fitted from {args.annotations} ({len(sessions)} sessions)")

    counts = {t.name: 0 for t in TRANSITION_ORDER}
    for session in sessions:
        for event in session:
            counts[event.type.name] += 1
    total = sum(counts.values())

    print("=" * 60)
    print(f"Turn-taking fit: {args.annotations}")
    print("=" * 60)
    print(f"Sessions:      {len(sessions)}")
    print(f"Transitions:   {total}")
    for name, count in counts.items():
        print(f"  {name}: {count:>8}  ({count / total:.4f})")
    print(f"beta_TH:       {params.beta_th:.4f}  (mean gap {1.0 / params.beta_th:.3f} s)")
    print(f"beta_TS:       {params.beta_ts:.4f}  (mean gap {1.0 / params.beta_ts:.3f} s)")
    print(f"beta_IR:       {params.beta_ir:.4f}")
    print(f"Written to:    {args.out}")
    return EXIT_OK


SIMULATE_FLAGS = {
    "workers": "SIM_NUM_WORKERS",
    "seed": "SIM_SEED",
    "num_conversations": "SIM_NUM_CONVERSATIONS",
    "output_dir": "SIM_OUTPUT_DIR",
    "recipe": "TT_RECIPE",
}


def cmd_simulate(args: argparse.Namespace) -> int:
    """Generate a dataset."""
    config = _load_config(args, SIMULATE_FLAGS)
    logger.info(
        f"Simulating {config.num_conversations} conversations of {config.target_duration:g}s "
        f"into {config.output_dir} with {config.num_workers} workers (seed {config.seed})"
    )
    logger.info(f"Turn-taking: {describe_params(config.turntaking)}")
    summary = generate_dataset(config)

    print("=" * 60)
    print("Simulation complete")
    print("=" * 60)
    print(f"Conversations: {summary.num_conversations}")
    print(f"Audio:         {summary.total_hours:.3f} h")
    print(f"Wall time:     {summary.wall_time_s:.2f} s")
    print(f"Manifest:      {summary.manifest_path}")
    print(f"RTTM:          {summary.rttm_path}")
    return EXIT_OK


def cmd_stats(args: argparse.Namespace) -> int:
    """Print statistics of one or more session manifests."""
    manifests = [m for path in args.manifests for m in load_session_manifests(path)]
    if not manifests:
        raise EmptyCorpusError(f"No sessions in {', '.join(str(p) for p in args.manifests)}")
    report = compute_stats(manifests, bc_max_duration=args.bc_max_duration)
    if args.json:
        print(report.model_dump_json(indent=2))
    else:
        print(format_report_table(report))
    return EXIT_OK


BENCH_FLAGS = {
    "num_conversations": "SIM_NUM_CONVERSATIONS",
    "output_dir": "SIM_OUTPUT_DIR",
}


def cmd_bench(args: argparse.Namespace) -> int:
    """Run the throughput benchmark and emit its CSV."""
    config = _load_config(args, BENCH_FLAGS)
    out = args.out if args.out is not None else Path(config.output_dir) / "benchmark.csv"
    table = benchmark(config, args.workers, repetitions=args.repetitions, output_csv=out)
    print(table.to_csv(index=False), end="")
    return EXIT_OK


def cmd_rir(args: argparse.Namespace) -> int:
    """Write a single room impulse response as a float WAV."""
    try:
        room = RoomSpec(
            dimensions=tuple(args.room),
            absorption=args.absorption,
            max_order=args.max_order,
            speed_of_sound=args.speed_of_sound,
        )
    except ValidationError as e:
        raise ConfigError(f"Invalid room: {e}") from e
    rir = image_method_rir(room, args.src, args.mic, args.sample_rate)
    write_wav(args.out, rir.taps, rir.sample_rate, subtype="FLOAT")
    print(f"Wrote {rir.length} taps ({rir.length / rir.sample_rate:.3f} s) to {args.out}")
    return EXIT_OK


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-v", "--verbose", action="store_true", help="Enable debug logging")


def _add_config_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, required=True, help="KEY=value simulation config file")
    parser.add_argument(
        "--set",
        action="append",
        metavar="KEY=VALUE",
        help="Override a config key (repeatable; applied after the config file)",
    )
    parser.add_argument("--num-conversations", type=int, help="Override SIM_NUM_CONVERSATIONS")
    parser.add_argument("--output-dir", type=Path, help="Override SIM_OUTPUT_DIR")
    parser.add_argument(
        "--boost-overlap",
        type=_positive_float,
        metavar="FACTOR",
        help="Scale IR and BC probabilities by FACTOR and renormalize",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conversation-simulator",
        description="Multi-talker conversation simulator",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    fit = subparsers.add_parser("fit", help="Fit turn-taking parameters from annotations")
    fit.add_argument("annotations", type=Path, help="RTTM file or session manifest")
    fit.add_argument(
        "--format",
        choices=["auto", "rttm", "session-manifest"],
        default="auto",
        help="Annotation format (default: by file extension)",
    )
    fit.add_argument("--out", type=Path, required=True, help="Params file to write")
    fit.add_argument(
        "--mode",
        choices=[m.value for m in TurnTakingMode],
        default=TurnTakingMode.CATEGORICAL.value,
        help="Transition model to fit (default: categorical)",
    )
    fit.add_argument(
        "--bc-max-duration",
        type=_positive_float,
        default=1.0,
        help="Longest utterance classified as a backchannel, seconds (default: 1.0)",
    )
    _add_common(fit)
    fit.set_defaults(func=cmd_fit)

    simulate = subparsers.add_parser("simulate", help="Generate a dataset")
    _add_config_args(simulate)
    simulate.add_argument("--workers", type=int, help="Override SIM_NUM_WORKERS")
    simulate.add_argument("--seed", type=int, help="Override SIM_SEED")
    simulate.add_argument("--recipe", help="Override TT_RECIPE (flat, nsf1, callhome, callhome-ov)")
    _add_common(simulate)
    simulate.set_defaults(func=cmd_simulate)

    stats = subparsers.add_parser("stats", help="Statistics of session manifests")
    stats.add_argument("manifests", type=Path, nargs="+", help="Session manifest files")
    stats.add_argument(
        "--bc-max-duration",
        type=_positive_float,
        default=1.0,
        help="Backchannel threshold used for classification (default: 1.0)",
    )
    stats.add_argument("--json", action="store_true", help="Print the report as JSON")
    _add_common(stats)
    stats.set_defaults(func=cmd_stats)

    bench = subparsers.add_parser("bench", help="Throughput against worker count")
    _add_config_args(bench)
    bench.add_argument("--workers", type=_int_list, required=True, help="Comma-separated worker counts, e.g. 1,2,4")
    bench.add_argument("--repetitions", type=int, default=1, help="Runs per worker count (default: 1)")
    bench.add_argument("--out", type=Path, help="CSV path (default: <output_dir>/benchmark.csv)")
    _add_common(bench)
    bench.set_defaults(func=cmd_bench)

    rir = subparsers.add_parser("rir", help="Write an image-method room impulse response")
    rir.add_argument("--room", type=_vector3, required=True, help="Room size X,Y,Z (m)")
    rir.add_argument("--src", type=_vector3, required=True, help="Source position X,Y,Z (m)")
    rir.add_argument("--mic", type=_vector3, required=True, help="Microphone position X,Y,Z (m)")
    rir.add_argument("--out", type=Path, required=True, help="WAV file to write")
    rir.add_argument("--absorption", type=float, default=0.3, help="Wall absorption in (0, 1) (default: 0.3)")
    rir.add_argument("--max-order", type=int, default=6, help="Highest reflection order (default: 6)")
    rir.add_argument("--sample-rate", type=int, default=16000, help="Sample rate in Hz (default: 16000)")
    rir.add_argument("--speed-of-sound", type=float, default=343.0, help="m/s (default: 343)")
    _add_common(rir)
    rir.set_defaults(func=cmd_rir)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.verbose)

    try:
        return args.func(args)
    except KeyboardInterrupt:
        logger.warning("Interrupted")
        return EXIT_INTERRUPTED
    except USAGE_ERRORS as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_USAGE
    except SimulatorError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_FAILURE
    except Exception as e:
        logger.exception(f"Unexpected error: {e}")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
