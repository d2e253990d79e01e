"""
Dataset Generation Pipeline

Conversations 0..N-1 are dealt round-robin to workers. Every worker loads
the seed corpus itself, then plans, renders and writes its conversations
end-to-end. Audio lands in a shared directory under per-session names,
manifests in per-worker shard directories; after a barrier the shard
manifests are merged in conversation-index order.

Output tree:

    <output_dir>/audio/<session_id>.wav
    <output_dir>/rttm/<session_id>.rttm
    <output_dir>/shards/worker_<k>/manifest.jsonl (+ _SUCCESS)
    <output_dir>/manifest.jsonl
    <output_dir>/all.rttm
"""

import logging
import time
from concurrent.futures import Executor, ProcessPoolExecutor, ThreadPoolExecutor, as_completed
from pathlib import Path
from threading import Lock
from typing import Dict, List, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field

from ..config import ExecutorKind, SimulationConfig
from ..corpus_io import (
    SourceAudioLoader,
    group_by_speaker,
    load_noise_manifest,
    load_session_manifests,
    load_utterances,
    merge_speaker_pools,
    resolve_audio_paths,
    split_corpus,
    write_rttm,
    write_rttm_file,
    write_session_manifests,
    write_wav,
)
from ..errors import ConfigError, EmptyCorpusError, GenerationError
from ..models import NoiseRecording, SessionManifest, SourceUtterance, SpeakerPool
from ..planner import build_plan
from ..renderer import render
from .seeding import conversation_seed

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.jsonl"
RTTM_NAME = "all.rttm"
SUCCESS_MARKER = "_SUCCESS"
PROGRESS_EVERY = 10


class Shard(BaseModel):
    """Conversations owned by one worker, and the files it alone writes."""

    worker_index: int = Field(..., ge=0)
    conversation_indices: List[int] = Field(default_factory=list)
    manifest_path: Path
    audio_dir: Path
    rttm_dir: Path

    @property
    def shard_dir(self) -> Path:
        return self.manifest_path.parent

    @property
    def success_marker(self) -> Path:
        return self.shard_dir / SUCCESS_MARKER


class ShardResult(BaseModel):
    worker_index: int
    conversations: int = 0
    audio_seconds: float = 0.0
    fallbacks: Dict[str, int] = Field(default_factory=dict)
    wall_time_s: float = 0.0


class DatasetSummary(BaseModel):
    """Outcome of one generate_dataset run."""

    num_conversations: int = Field(..., ge=0)
    num_workers: int = Field(..., ge=1)
    total_duration_s: float = Field(0.0, ge=0, description="Sum of session durations")
    wall_time_s: float = Field(0.0, ge=0)
    output_dir: Path
    manifest_path: Path
    rttm_path: Path
    fallbacks: Dict[str, int] = Field(default_factory=dict)

    @property
    def total_hours(self) -> float:
        return self.total_duration_s / 3600.0

    @property
    def hours_per_minute(self) -> float:
        return self.total_hours / (self.wall_time_s / 60.0) if self.wall_time_s > 0 else 0.0


class CorpusContext:
    """Seed speakers, audio loaders and noise pool of one worker."""

    def __init__(
        self,
        pools: List[SpeakerPool],
        loader: SourceAudioLoader,
        noises: List[NoiseRecording],
        noise_loader: SourceAudioLoader,
    ):
        self.pools = pools
        self.loader = loader
        self.noises = noises
        self.noise_loader = noise_loader


def session_id_for(config: SimulationConfig, index: int) -> str:
    return f"{config.session_prefix}{index:06d}"


def load_corpus(config: SimulationConfig) -> CorpusContext:
    """
    Load every source manifest (and the noise manifest when noise is on).

    Raises:
        ConfigError: No source manifest configured
        EmptyCorpusError: The manifests hold no utterances
    """
    if config.source_manifest is None:
        raise ConfigError("SIM_SOURCE_MANIFEST is not set")

    pool_sets: List[List[SpeakerPool]] = []
    utterances: List[SourceUtterance] = []
    for path in [config.source_manifest, *config.extra_source_manifests]:
        loaded = resolve_audio_paths(load_utterances(path, sample_rate=config.sample_rate), Path(path).parent)
        if config.split_at_pauses:
            loaded = split_corpus(loaded, config.min_pause)
        pool_sets.append(group_by_speaker(loaded))
        utterances.extend(loaded)
    pools = merge_speaker_pools(*pool_sets)
    if not pools:
        raise EmptyCorpusError(f"No seed utterances in {config.source_manifest}")

    noises: List[NoiseRecording] = []
    if config.acoustic.enable_noise:
        if config.acoustic.noise_manifest is None:
            logger.warning("Noise is enabled but ACOUSTIC_NOISE_MANIFEST is not set; rendering without noise")
        else:
            noises = resolve_audio_paths(
                load_noise_manifest(config.acoustic.noise_manifest, sample_rate=config.sample_rate),
                Path(config.acoustic.noise_manifest).parent,
            )

    logger.debug(f"Corpus: {len(utterances)} utterances, {len(pools)} speakers, {len(noises)} noises")
    return CorpusContext(
        pools=pools,
        loader=SourceAudioLoader(utterances, config.sample_rate),
        noises=noises,
        noise_loader=SourceAudioLoader([], config.sample_rate),
    )


def generate_conversation(
    config: SimulationConfig,
    corpus: CorpusContext,
    index: int,
    audio_dir: Path,
    rttm_dir: Path,
) -> Tuple[SessionManifest, Dict[str, int]]:
    """
    Plan, render and write conversation `index`.

    Everything random derives from conversation_seed(config.seed, index).
    """
    seed = conversation_seed(config.seed, index)
    rng = np.random.default_rng(seed)
    session_id = session_id_for(config, index)

    counts, probabilities = config.speaker_counts()
    num_speakers = counts[int(rng.choice(len(counts), p=probabilities))]
    plan = build_plan(
        config.turntaking,
        corpus.pools,
        num_speakers,
        config.target_duration,
        gain_range_db=config.acoustic.gain_range_db,
        rng=rng,
        session_id=session_id,
        seed=seed,
    )

    audio_path = audio_dir / f"{session_id}.wav"
    result = render(
        plan,
        config.acoustic,
        corpus.loader,
        rng,
        noises=corpus.noises,
        noise_loader=corpus.noise_loader.load_ref,
        audio_path=audio_path.relative_to(config.output_dir).as_posix() if config.write_audio else None,
        conversation_index=index,
    )
    if config.write_audio:
        write_wav(audio_path, result.samples, result.sample_rate, subtype=config.audio_subtype.value)
    with (rttm_dir / f"{session_id}.rttm").open("w", encoding="utf-8") as f:
        write_rttm(result.manifest, f)
    return result.manifest, plan.fallbacks


def run_shard(shard: Shard, config: SimulationConfig) -> ShardResult:
    """
    Generate every conversation of a shard.

    Runs inside a worker process or thread; the shard manifest and its
    _SUCCESS marker are written only after the last conversation succeeds.

    Raises:
        GenerationError: Names the conversation that failed
    """
    start = time.perf_counter()
    first_index = shard.conversation_indices[0] if shard.conversation_indices else -1
    try:
        corpus = load_corpus(config)
    except Exception as e:
        raise GenerationError(first_index, f"worker {shard.worker_index} could not load the corpus: {e}") from e

    shard.shard_dir.mkdir(parents=True, exist_ok=True)
    shard.audio_dir.mkdir(parents=True, exist_ok=True)
    shard.rttm_dir.mkdir(parents=True, exist_ok=True)

    result = ShardResult(worker_index=shard.worker_index, fallbacks={"bc_to_ir": 0, "ir_to_ts": 0})
    manifests: List[SessionManifest] = []
    total = len(shard.conversation_indices)
    for done, index in enumerate(shard.conversation_indices, start=1):
        try:
            manifest, fallbacks = generate_conversation(config, corpus, index, shard.audio_dir, shard.rttm_dir)
        except Exception as e:
            raise GenerationError(index, f"{type(e).__name__}: {e}") from e
        manifests.append(manifest)
        result.audio_seconds += manifest.duration
        for key, count in fallbacks.items():
            result.fallbacks[key] = result.fallbacks.get(key, 0) + count
        if done % PROGRESS_EVERY == 0:
            logger.info(f"Worker {shard.worker_index}: {done}/{total} conversations")

    write_session_manifests(manifests, shard.manifest_path)
    shard.success_marker.touch()
    result.conversations = len(manifests)
    result.wall_time_s = time.perf_counter() - start
    return result


def plan_shards(config: SimulationConfig) -> List[Shard]:
    """Round-robin split of conversation indices over config.num_workers shards."""
    output_dir = Path(config.output_dir)
    indices = list(range(config.num_conversations))
    return [
        Shard(
            worker_index=worker,
            conversation_indices=indices[worker :: config.num_workers],
            manifest_path=output_dir / "shards" / f"worker_{worker:03d}" / MANIFEST_NAME,
            audio_dir=output_dir / "audio",
            rttm_dir=output_dir / "rttm",
        )
        for worker in range(config.num_workers)
    ]


def merge_shards(shards: Sequence[Shard], output_dir: Path) -> Tuple[List[SessionManifest], Path, Path]:
    """
    Merge shard manifests into <output_dir>/manifest.jsonl and all.rttm.

    Raises:
        GenerationError: A shard has no _SUCCESS marker
    """
    manifests: List[SessionManifest] = []
    for shard in shards:
        if not shard.conversation_indices:
            continue
        if not shard.success_marker.exists():
            raise GenerationError(shard.conversation_indices[0], f"shard {shard.shard_dir} is incomplete")
        manifests.extend(load_session_manifests(shard.manifest_path))
    manifests.sort(key=lambda m: m.conversation_index if m.conversation_index is not None else -1)

    manifest_path = output_dir / MANIFEST_NAME
    rttm_path = output_dir / RTTM_NAME
    write_session_manifests(manifests, manifest_path)
    write_rttm_file(manifests, rttm_path)
    return manifests, manifest_path, rttm_path


class DatasetGenerator:
    """
    Runs one dataset generation.

    Shards execute on a process pool by default (SIM_EXECUTOR=thread
    switches to threads); results are tallied as they complete.
    """

    def __init__(self, config: SimulationConfig):
        self.config = config
        self.output_dir = Path(config.output_dir)
        self.stats = {
            "shards_completed": 0,
            "conversations": 0,
            "audio_seconds": 0.0,
            "bc_to_ir": 0,
            "ir_to_ts": 0,
            "errors": 0,
        }
        self.stats_lock = Lock()

    def _executor(self, workers: int) -> Executor:
        if self.config.executor == ExecutorKind.THREAD:
            return ThreadPoolExecutor(max_workers=workers)
        return ProcessPoolExecutor(max_workers=workers)

    def _record(self, result: ShardResult) -> None:
        with self.stats_lock:
            self.stats["shards_completed"] += 1
            self.stats["conversations"] += result.conversations
            self.stats["audio_seconds"] += result.audio_seconds
            self.stats["bc_to_ir"] += result.fallbacks.get("bc_to_ir", 0)
            self.stats["ir_to_ts"] += result.fallbacks.get("ir_to_ts", 0)
            logger.info(
                f"Progress: worker {result.worker_index} finished {result.conversations} conversations "
                f"in {result.wall_time_s:.1f}s ({self.stats['conversations']}/{self.config.num_conversations} total)"
            )

    def _run_shards(self, shards: List[Shard]) -> None:
        active = [s for s in shards if s.conversation_indices]
        if not active:
            return
        if len(active) == 1:
            self._record(run_shard(active[0], self.config))
            return

        logger.info(f"Generating {self.config.num_conversations} conversations with {len(active)} workers")
        with self._executor(len(active)) as executor:
            future_to_shard = {executor.submit(run_shard, shard, self.config): shard for shard in active}
            for future in as_completed(future_to_shard):
                shard = future_to_shard[future]
                try:
                    self._record(future.result())
                except Exception as e:
                    with self.stats_lock:
                        self.stats["errors"] += 1
                    for pending in future_to_shard:
                        pending.cancel()
                    if isinstance(e, GenerationError):
                        logger.error(f"Worker {shard.worker_index} failed: {e}")
                        raise
                    first = shard.conversation_indices[0]
                    logger.error(f"Worker {shard.worker_index} failed: {e}")
                    raise GenerationError(first, f"worker {shard.worker_index} crashed: {e}") from e

    def run(self) -> DatasetSummary:
        """
        Generate the dataset.

        Returns:
            DatasetSummary of the merged output

        Raises:
            ConfigError: No source manifest
            EmptyCorpusError: Empty seed corpus
            GenerationError: A conversation failed; shards stay on disk
        """
        start = time.perf_counter()
        # Fail fast on corpus problems before any worker starts.
        load_corpus(self.config)

        self.output_dir.mkdir(parents=True, exist_ok=True)
        shards = plan_shards(self.config)
        self._run_shards(shards)
        manifests, manifest_path, rttm_path = merge_shards(shards, self.output_dir)

        summary = DatasetSummary(
            num_conversations=len(manifests),
            num_workers=self.config.num_workers,
            total_duration_s=sum(m.duration for m in manifests),
            wall_time_s=time.perf_counter() - start,
            output_dir=self.output_dir,
            manifest_path=manifest_path,
            rttm_path=rttm_path,
            fallbacks={"bc_to_ir": self.stats["bc_to_ir"], "ir_to_ts": self.stats["ir_to_ts"]},
        )
        self._log_stats(summary)
        return summary

    def _log_stats(self, summary: DatasetSummary) -> None:
        logger.info("=" * 60)
        logger.info("Dataset Generation Statistics")
        logger.info("=" * 60)
        logger.info(f"Conversations generated:       {summary.num_conversations}")
        logger.info(f"Workers:                       {summary.num_workers}")
        logger.info(f"Audio generated:               {summary.total_hours:.3f} h")
        logger.info(f"Wall time:                     {summary.wall_time_s:.2f} s")
        logger.info(f"Throughput:                    {summary.hours_per_minute:.3f} h/min")
        logger.info(f"BC demoted to IR:              {self.stats['bc_to_ir']}")
        logger.info(f"IR demoted to TS:              {self.stats['ir_to_ts']}")
        logger.info(f"Errors encountered:            {self.stats['errors']}")
        logger.info(f"Manifest:                      {summary.manifest_path}")
        logger.info("=" * 60)

    def get_stats(self) -> Dict[str, float]:
        with self.stats_lock:
            return dict(self.stats)


def generate_dataset(config: SimulationConfig) -> DatasetSummary:
    """Generate config.num_conversations conversations under config.output_dir."""
    return DatasetGenerator(config).run()

