"""Command-line interface tests.

Drive main() in-process and check exit codes, printed output and files.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from conversation_simulator.cli import EXIT_FAILURE, EXIT_INTERRUPTED, EXIT_OK, EXIT_USAGE, main
from conversation_simulator.corpus_io import load_session_manifests, read_wav
from conversation_simulator.errors import GenerationError
from conversation_simulator.orchestration import generate_dataset
from conversation_simulator.turntaking import TransitionType, get_recipe, load_params_file

RTTM_LINE = "SPEAKER {session} 1 {onset:.3f} {duration:.3f} <NA> <NA> {speaker} <NA> <NA>\n"


def write_rttm_text(path: Path, sessions) -> Path:
    with path.open("w", encoding="utf-8") as f:
        for session, segments in sessions.items():
            for speaker, onset, duration in segments:
                f.write(RTTM_LINE.format(session=session, onset=onset, duration=duration, speaker=speaker))
    return path


@pytest.fixture
def config_file(tmp_path: Path, synthetic_corpus: Path) -> Path:
    path = tmp_path / "run.env"
    path.write_text(
        "\n".join(
            [
                f"SIM_SOURCE_MANIFEST={synthetic_corpus}",
                "SIM_OUTPUT_DIR=out",
                "SIM_NUM_CONVERSATIONS=3",
                "SIM_TARGET_DURATION=15",
                "SIM_EXECUTOR=thread",
                "SIM_SEED=3",
                "TT_RECIPE=callhome",
                "ACOUSTIC_GAIN_RANGE_DB=[0, 0]",
            ]
        )
        + "\n"
    )
    return path


@pytest.mark.integration
@pytest.mark.cli
class TestFitCommand:
    """Tests for the fit subcommand."""

    def test_fit_from_rttm(self, tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
        """Test fitting rates and the prior from rounded RTTM times."""
        rttm = write_rttm_text(
            tmp_path / "train.rttm",
            {
                "s1": [("A", 0.0, 2.0), ("A", 2.5, 1.0), ("B", 4.0, 2.0), ("A", 5.5, 2.0)],
                "s2": [("A", 0.0, 4.0), ("B", 1.0, 0.8), ("A", 5.5, 1.0), ("B", 6.75, 1.0)],
            },
        )
        out = tmp_path / "fitted.env"

        assert main(["fit", str(rttm), "--out", str(out)]) == EXIT_OK

        params = load_params_file(out)
        # s1: TH 0.5, TS 0.5, IR; s2: BC, TH 1.5, TS 0.25
        assert params.prior == pytest.approx((2 / 6, 2 / 6, 1 / 6, 1 / 6))
        assert params.beta_th == pytest.approx(1.0)
        assert params.beta_ts == pytest.approx(1.0 / 0.375)
        assert "Sessions:      2" in capsys.readouterr().out

    def test_fit_from_session_manifest(self, tmp_path: Path, simulation_config) -> None:
        """Test fitting from generated session manifests in Markov mode."""
        config = simulation_config.model_copy(
            update={
                "write_audio": False,
                "num_conversations": 12,
                "target_duration": 60.0,
                "turntaking": get_recipe("flat"),
            }
        )
        summary = generate_dataset(config)
        out = tmp_path / "markov.env"

        assert main(["fit", str(summary.manifest_path), "--out", str(out), "--mode", "markov"]) == EXIT_OK
        assert load_params_file(out).mode.value == "markov"

    def test_fit_empty_input(self, tmp_path: Path) -> None:
        """Test that an empty RTTM is a usage error."""
        rttm = tmp_path / "empty.rttm"
        rttm.write_text("")

        assert main(["fit", str(rttm), "--out", str(tmp_path / "x.env")]) == EXIT_USAGE

    def test_fit_without_interruptions(self, tmp_path: Path) -> None:
        """Test that missing IR samples are a usage error."""
        rttm = write_rttm_text(tmp_path / "calm.rttm", {"s": [("A", 0.0, 1.0), ("A", 1.5, 1.0), ("B", 3.0, 1.0)]})

        assert main(["fit", str(rttm), "--out", str(tmp_path / "x.env")]) == EXIT_USAGE

    def test_fit_missing_file(self, tmp_path: Path) -> None:
        """Test a missing annotation file."""
        assert main(["fit", str(tmp_path / "absent.rttm"), "--out", str(tmp_path / "x.env")]) == EXIT_USAGE

    def test_fit_malformed_rttm(self, tmp_path: Path) -> None:
        """Test a malformed RTTM line."""
        rttm = tmp_path / "bad.rttm"
        rttm.write_text("SPEAKER s 1 0.0\n")

        assert main(["fit", str(rttm), "--out", str(tmp_path / "x.env")]) == EXIT_USAGE


@pytest.mark.integration
@pytest.mark.cli
class TestSimulateCommand:
    """Tests for simulate and stats."""

    def test_simulate_then_stats(self, config_file: Path, capsys: pytest.CaptureFixture) -> None:
        """Test a small simulation and the JSON statistics of its manifest."""
        assert main(["simulate", "--config", str(config_file), "--workers", "2"]) == EXIT_OK
        assert "Simulation complete" in capsys.readouterr().out

        manifest = config_file.parent / "out" / "manifest.jsonl"
        sessions = load_session_manifests(manifest)
        assert len(sessions) == 3
        assert all(s.seed is not None for s in sessions)

        assert main(["stats", str(manifest), "--json"]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["sessions"] == 3
        assert report["total_speech"] > 0

    def test_flags_override_config(self, config_file: Path, tmp_path: Path) -> None:
        """Test --seed, --num-conversations, --output-dir and --boost-overlap."""
        out = tmp_path / "flags"

        code = main(
            [
                "simulate",
                "--config",
                str(config_file),
                "--num-conversations",
                "2",
                "--output-dir",
                str(out),
                "--seed",
                "11",
                "--boost-overlap",
                "2",
                "--set",
                "SIM_WRITE_AUDIO=false",
            ]
        )

        assert code == EXIT_OK
        sessions = load_session_manifests(out / "manifest.jsonl")
        assert len(sessions) == 2
        assert all(s.audio_path is None for s in sessions)

    def test_stats_table(self, tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
        """Test the table output of stats."""
        manifest = tmp_path / "sessions.jsonl"
        manifest.write_text(
            json.dumps(
                {
                    "session_id": "s",
                    "duration": 6.0,
                    "sample_rate": 16000,
                    "supervisions": [
                        {"speaker": "A", "onset": 0.0, "duration": 4.0},
                        {"speaker": "B", "onset": 3.0, "duration": 3.0, "transition": int(TransitionType.IR)},
                    ],
                }
            )
            + "\n"
        )

        assert main(["stats", str(manifest)]) == EXIT_OK
        assert "Overlap time:                  1.000 s" in capsys.readouterr().out

    def test_stats_missing_manifest(self, tmp_path: Path) -> None:
        """Test stats on a missing file."""
        assert main(["stats", str(tmp_path / "absent.jsonl")]) == EXIT_USAGE

    def test_missing_config_file(self, tmp_path: Path) -> None:
        """Test a config path that does not exist."""
        assert main(["simulate", "--config", str(tmp_path / "absent.env")]) == EXIT_USAGE

    def test_unknown_config_key(self, tmp_path: Path) -> None:
        """Test a typo in the config file."""
        path = tmp_path / "typo.env"
        path.write_text("SIM_NUM_CONVERSATION=3\n")

        assert main(["simulate", "--config", str(path)]) == EXIT_USAGE

    def test_config_flag_required(self) -> None:
        """Test that argparse rejects simulate without --config."""
        with pytest.raises(SystemExit) as exc_info:
            main(["simulate"])

        assert exc_info.value.code == 2

    def test_generation_failure(self, config_file: Path, mocker) -> None:
        """Test that a worker failure exits with 1."""
        mocker.patch("conversation_simulator.cli.generate_dataset", side_effect=GenerationError(4, "boom"))

        assert main(["simulate", "--config", str(config_file)]) == EXIT_FAILURE

    def test_unexpected_error(self, config_file: Path, mocker) -> None:
        """Test that unexpected exceptions exit with 1."""
        mocker.patch("conversation_simulator.cli.generate_dataset", side_effect=RuntimeError("bug"))

        assert main(["simulate", "--config", str(config_file)]) == EXIT_FAILURE

    def test_interrupted(self, config_file: Path, mocker) -> None:
        """Test Ctrl-C handling."""
        mocker.patch("conversation_simulator.cli.generate_dataset", side_effect=KeyboardInterrupt)

        assert main(["simulate", "--config", str(config_file)]) == EXIT_INTERRUPTED


@pytest.mark.integration
@pytest.mark.cli
class TestBenchCommand:
    """Tests for bench."""

    def test_two_worker_counts(self, config_file: Path, tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
        """Test a two-row benchmark CSV."""
        out = tmp_path / "bench.csv"

        code = main(
            ["bench", "--config", str(config_file), "--workers", "1,2", "--num-conversations", "2", "--out", str(out)]
        )

        assert code == EXIT_OK
        table = pd.read_csv(out)
        assert list(table.columns) == ["workers", "wall_s", "hours_per_min"]
        assert table["workers"].tolist() == [1, 2]
        assert capsys.readouterr().out.startswith("workers,wall_s,hours_per_min")

    def test_invalid_worker_list(self, config_file: Path) -> None:
        """Test that argparse rejects non-positive worker counts."""
        with pytest.raises(SystemExit):
            main(["bench", "--config", str(config_file), "--workers", "0,2"])


@pytest.mark.integration
@pytest.mark.cli
class TestRirCommand:
    """Tests for rir."""

    def test_direct_path_sample(self, tmp_path: Path) -> None:
        """Test the direct-path tap at sample 160 for 3.43 m."""
        out = tmp_path / "rir.wav"

        code = main(
            ["rir", "--room", "10,10,10", "--src", "2,5,5", "--mic", "5.43,5,5", "--max-order", "0", "--out", str(out)]
        )

        assert code == EXIT_OK
        taps, rate = read_wav(out)
        assert rate == 16000
        assert int(np.argmax(np.abs(taps))) == 160
        assert np.count_nonzero(taps) == 1

    def test_source_outside_room(self, tmp_path: Path) -> None:
        """Test that bad geometry is a usage error."""
        code = main(["rir", "--room", "4,4,3", "--src", "5,1,1", "--mic", "2,2,1", "--out", str(tmp_path / "x.wav")])

        assert code == EXIT_USAGE

    def test_invalid_absorption(self, tmp_path: Path) -> None:
        """Test that absorption outside (0, 1) is a usage error."""
        code = main(
            ["rir", "--room", "4,4,3", "--src", "1,1,1", "--mic", "2,2,1", "--absorption", "1.5", "--out", str(tmp_path / "x.wav")]
        )

        assert code == EXIT_USAGE

    def test_malformed_vector(self, tmp_path: Path) -> None:
        """Test that argparse rejects a two-component room."""
        with pytest.raises(SystemExit):
            main(["rir", "--room", "4,4", "--src", "1,1,1", "--mic", "2,2,1", "--out", str(tmp_path / "x.wav")])


@pytest.mark.integration
@pytest.mark.cli
class TestVersion:
    """Tests for --version."""

    def test_version(self, capsys: pytest.CaptureFixture) -> None:
        """Test the version flag."""
        with pytest.raises(SystemExit) as exc_info:
            main(["--version"])

        assert exc_info.value.code == 0
        assert "conversation-simulator" in capsys.readouterr().out
