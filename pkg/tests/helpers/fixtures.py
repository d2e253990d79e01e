"""Test data fixtures and factory functions."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import soundfile as sf

from conversation_simulator.models import (
    AudioRef,
    PlacedUtterance,
    SessionManifest,
    SourceUtterance,
    SpeakerPool,
    Supervision,
)
from conversation_simulator.turntaking import TransitionType

SAMPLE_RATE = 16000


def create_tone(
    duration: float,
    sample_rate: int = SAMPLE_RATE,
    frequency: float = 220.0,
    amplitude: float = 0.3,
) -> np.ndarray:
    """
    A sine tone with a whole number of samples.

    Args:
        duration: Length in seconds (rounded to the sample grid)
        sample_rate: Sample rate in Hz
        frequency: Tone frequency in Hz
        amplitude: Peak amplitude

    Returns:
        float64 samples
    """
    n = int(round(duration * sample_rate))
    t = np.arange(n) / sample_rate
    return amplitude * np.sin(2 * np.pi * frequency * t)


def write_test_wav(path: Path, samples: np.ndarray, sample_rate: int = SAMPLE_RATE) -> Path:
    """Write samples as a 32-bit float WAV so reads are exact."""
    path.parent.mkdir(parents=True, exist_ok=True)
    sf.write(str(path), samples.astype(np.float32), sample_rate, subtype="FLOAT")
    return path


def create_sample_utterance(
    utt_id: str = "utt-1",
    speaker: str = "A",
    path: str = "a.wav",
    offset: float = 0.0,
    duration: float = 2.0,
    words: Optional[List[Tuple[str, float, float]]] = None,
    text: Optional[str] = None,
    sample_rate: int = SAMPLE_RATE,
) -> SourceUtterance:
    return SourceUtterance(
        id=utt_id,
        speaker_id=speaker,
        audio=AudioRef(path=path, offset=offset, duration=duration),
        sample_rate=sample_rate,
        words=words,
        text=text,
    )


def create_speaker_pools(
    durations: Dict[str, Sequence[float]],
    sample_rate: int = SAMPLE_RATE,
) -> List[SpeakerPool]:
    """
    In-memory pools for planner tests; no audio behind them.

    Args:
        durations: speaker id -> utterance durations
    """
    pools = []
    for speaker, values in durations.items():
        utterances = [
            create_sample_utterance(
                utt_id=f"{speaker}-{i:03d}",
                speaker=speaker,
                path=f"{speaker}.wav",
                duration=d,
                sample_rate=sample_rate,
            )
            for i, d in enumerate(values)
        ]
        pools.append(SpeakerPool(speaker_id=speaker, utterances=utterances))
    return pools


def create_synthetic_corpus(
    directory: Path,
    num_speakers: int = 4,
    utterances_per_speaker: int = 8,
    sample_rate: int = SAMPLE_RATE,
    short_fraction: float = 0.2,
    seed: int = 0,
    with_words: bool = False,
) -> Path:
    """
    Write a seed corpus of tones and its utterance manifest.

    Each speaker gets one WAV holding all of their utterances back to back,
    each at its own frequency. About `short_fraction` of the utterances are
    0.2-0.8 s (backchannel candidates), the rest 2-8 s.

    Returns:
        Path of the manifest (audio paths inside are relative to it)
    """
    rng = np.random.default_rng(seed)
    directory.mkdir(parents=True, exist_ok=True)
    records = []
    for s in range(num_speakers):
        speaker = f"spk{s:02d}"
        chunks = []
        offset_samples = 0
        for u in range(utterances_per_speaker):
            short = rng.random() < short_fraction
            duration = rng.uniform(0.2, 0.8) if short else rng.uniform(2.0, 8.0)
            n = int(round(duration * sample_rate))
            samples = create_tone(n / sample_rate, sample_rate, frequency=150.0 + 40.0 * s + 5.0 * u)
            chunks.append(samples)
            record = {
                "id": f"{speaker}-utt{u:03d}",
                "speaker": speaker,
                "audio": {
                    "path": f"audio/{speaker}.wav",
                    "offset": offset_samples / sample_rate,
                    "duration": n / sample_rate,
                },
                "sample_rate": sample_rate,
                "text": f"utterance {u} of {speaker}",
            }
            if with_words and n / sample_rate > 1.5:
                mid = n / sample_rate / 2
                record["words"] = [["first", 0.05, mid - 0.25], ["second", mid + 0.25, n / sample_rate - 0.05]]
            records.append(record)
            offset_samples += n
        write_test_wav(directory / "audio" / f"{speaker}.wav", np.concatenate(chunks), sample_rate)

    manifest = directory / "utterances.jsonl"
    with manifest.open("w", encoding="utf-8") as f:
        for record in records:
            f.write(json.dumps(record) + "\n")
    return manifest


def create_noise_corpus(
    directory: Path,
    count: int = 2,
    duration: float = 3.0,
    sample_rate: int = SAMPLE_RATE,
    seed: int = 1,
) -> Path:
    """White-noise clips and their noise manifest."""
    rng = np.random.default_rng(seed)
    directory.mkdir(parents=True, exist_ok=True)
    manifest = directory / "noise.jsonl"
    with manifest.open("w", encoding="utf-8") as f:
        for i in range(count):
            samples = 0.1 * rng.standard_normal(int(round(duration * sample_rate)))
            write_test_wav(directory / "noise" / f"noise{i}.wav", samples, sample_rate)
            record = {
                "id": f"noise{i}",
                "audio": {"path": f"noise/noise{i}.wav", "offset": 0.0, "duration": duration},
                "sample_rate": sample_rate,
            }
            f.write(json.dumps(record) + "\n")
    return manifest


def create_session_manifest(
    segments: Sequence[Tuple[str, float, float]],
    session_id: str = "session-1",
    duration: Optional[float] = None,
    sample_rate: int = SAMPLE_RATE,
) -> SessionManifest:
    """
    A session from (speaker, onset, duration) triples.

    Args:
        segments: Supervisions in order
        duration: Session length; defaults to the last supervision end
    """
    supervisions = [Supervision(speaker_id=s, onset=o, duration=d) for s, o, d in segments]
    end = max((s.end for s in supervisions), default=0.0)
    return SessionManifest(
        session_id=session_id,
        duration=end if duration is None else duration,
        sample_rate=sample_rate,
        supervisions=supervisions,
    )


def create_placement(
    speaker: str,
    onset: float,
    duration: float,
    transition: Optional[TransitionType] = None,
    source_id: Optional[str] = None,
    gain_db: float = 0.0,
) -> PlacedUtterance:
    return PlacedUtterance(
        source_id=source_id or f"{speaker}-{onset:g}",
        speaker_id=speaker,
        onset=onset,
        duration=duration,
        transition=transition,
        gain_db=gain_db,
    )
