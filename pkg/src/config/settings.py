from enum import Enum

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from src.config.constants import DEFAULT_MAX_ROUNDS, MIN_MAX_ROUNDS


class NmiAverage(str, Enum):
    ARITHMETIC = "arithmetic"
    GEOMETRIC = "geometric"


class LocalEntropyVariant(str, Enum):
    # child_cut sums each child's own cut; parent_cut uses the apex cut for every child term
    CHILD_CUT = "child_cut"
    PARENT_CUT = "parent_cut"


class StretchOrder(str, Enum):
    # insertion ranks pairs by the gain of the new node alone; flattened also charges
    # for pooling both sides into one group, so a grown cluster absorbs its stragglers first
    INSERTION = "insertion"
    FLATTENED = "flattened"


class TreeMode(str, Enum):
    BINARY = "binary"
    MULTIFURCATING = "multifurcating"


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="HCSE_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore"
    )

    # Stratification
    max_rounds: int = Field(default=DEFAULT_MAX_ROUNDS, ge=MIN_MAX_ROUNDS)
    local_entropy_variant: LocalEntropyVariant = Field(default=LocalEntropyVariant.CHILD_CUT)
    stretch_order: StretchOrder = Field(default=StretchOrder.FLATTENED)
    allow_height_two: bool = Field(default=False)
    validation_mode: bool = Field(default=False)

    # Evaluation
    nmi_average: NmiAverage = Field(default=NmiAverage.ARITHMETIC)

    # Output
    output_dir: str = Field(default="output")

    # Logging
    log_level: str = Field(default="INFO")
    log_file: str = Field(default="logs/hcse.log")
    log_to_file: bool = Field(default=False)

    @field_validator("log_level")
    def validate_log_level(cls, v):
        level = v.upper()
        if level not in {"TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"Unknown log level: {v}")
        return level


def get_settings() -> Settings:
    return Settings()
