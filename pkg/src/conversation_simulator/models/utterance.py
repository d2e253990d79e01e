"""
Seed Utterance Models

Single-speaker source recordings consumed by the simulator, grouped into
per-speaker pools, plus noise recordings used for augmentation.
"""

from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

# Word alignments may overrun the utterance end by up to one millisecond.
ALIGNMENT_TOLERANCE = 1e-3

WordAlignment = Tuple[str, float, float]


class AudioRef(BaseModel):
    """A span of an audio file on disk."""

    model_config = ConfigDict(frozen=True)

    path: str = Field(..., min_length=1, description="Audio file path")
    offset: float = Field(0.0, ge=0, description="Start of the span within the file (s)")
    duration: float = Field(..., gt=0, description="Length of the span (s)")


class SourceUtterance(BaseModel):
    """
    One single-speaker seed utterance.

    Word times are relative to the utterance start (audio.offset).
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    id: str = Field(..., min_length=1, description="Unique utterance id")
    speaker_id: str = Field(..., alias="speaker", min_length=1, description="Speaker identity")
    audio: AudioRef = Field(..., description="Where the samples live")
    sample_rate: int = Field(..., gt=0, description="Sample rate in Hz")
    words: Optional[List[WordAlignment]] = Field(None, description="Ordered (token, start, end) alignments")
    text: Optional[str] = Field(None, description="Transcript")

    @property
    def duration(self) -> float:
        return self.audio.duration

    @field_validator("words")
    @classmethod
    def validate_word_order(cls, v: Optional[List[WordAlignment]]) -> Optional[List[WordAlignment]]:
        if v is None:
            return v
        previous_end = 0.0
        for index, (token, start, end) in enumerate(v):
            if start < 0:
                raise ValueError(f"word {index} '{token}' starts before the utterance ({start})")
            if end < start:
                raise ValueError(f"word {index} '{token}' ends before it starts ({start} > {end})")
            if start < previous_end - ALIGNMENT_TOLERANCE:
                raise ValueError(f"word {index} '{token}' overlaps the previous word")
            previous_end = end
        return v

    @model_validator(mode="after")
    def check_words_inside_audio(self) -> "SourceUtterance":
        if self.words and self.words[-1][2] > self.audio.duration + ALIGNMENT_TOLERANCE:
            raise ValueError(
                f"last word ends at {self.words[-1][2]} beyond duration {self.audio.duration}"
            )
        return self


class SpeakerPool(BaseModel):
    """All seed utterances of one speaker."""

    speaker_id: str
    utterances: List[SourceUtterance] = Field(..., min_length=1)

    @model_validator(mode="after")
    def check_single_speaker(self) -> "SpeakerPool":
        for utt in self.utterances:
            if utt.speaker_id != self.speaker_id:
                raise ValueError(
                    f"utterance '{utt.id}' belongs to '{utt.speaker_id}', not '{self.speaker_id}'"
                )
        return self


class NoiseRecording(BaseModel):
    """A noise clip from the noise manifest."""

    model_config = ConfigDict(frozen=True)

    id: str = Field(..., min_length=1)
    audio: AudioRef
    sample_rate: int = Field(..., gt=0)
