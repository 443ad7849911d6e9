import logging
import os
import sys
from pathlib import Path
from typing import Optional

try:
    from typing import Self
except ImportError:  # Python < 3.11
    from typing_extensions import Self
from pydantic import BaseModel, Field, field_validator
from models.errors import PreconditionError


DEFAULT_FIXTURE_DIR = Path(__file__).resolve().parent.parent / "data" / "fixtures"
DEFAULT_MAX_DEGREE = 4
DEFAULT_MAX_MORPHISMS = 10_000


def _level_names_mapping():
    # logging.getLevelNamesMapping() is Python 3.11+; it returns a copy of _nameToLevel
    if hasattr(logging, "getLevelNamesMapping"):
        return logging.getLevelNamesMapping()
    return dict(logging._nameToLevel)


def setup_logger(root, level: str = "INFO") -> None:
    """
    Set up consistent logging
    Messages go to stderr so that report bodies on stdout stay byte-stable
    """
    root.setLevel(level)
    handler = logging.StreamHandler(sys.stderr)
    handler.setLevel(level)
    formatter = logging.Formatter(
        "[%(asctime)s] [%(levelname)s] [%(name)s] %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S %z",
    )
    handler.setFormatter(formatter)
    root.handlers.clear()
    root.addHandler(handler)


class Settings(BaseModel):
    """
    Runtime limits and locations, read from the environment (after load_dotenv)
    """

    max_degree: int = Field(default=DEFAULT_MAX_DEGREE, ge=0)
    max_morphisms: int = Field(default=DEFAULT_MAX_MORPHISMS, ge=1)
    fixture_dir: Path = DEFAULT_FIXTURE_DIR
    log_level: str = "INFO"

    @field_validator("log_level")
    @classmethod
    def upper_level(cls, value: str) -> str:
        level = value.upper()
        if level not in _level_names_mapping():
            raise ValueError(f"unknown log level {value}")
        return level

    @classmethod
    def from_env(cls, **overrides) -> Self:
        """
        Build settings from TRIVHOM_* environment variables, then apply explicit overrides
        :param overrides: values that win over the environment, None entries are ignored
        :return: the settings
        """
        values = {
            "max_degree": os.getenv("TRIVHOM_MAX_DEGREE", DEFAULT_MAX_DEGREE),
            "max_morphisms": os.getenv("TRIVHOM_MAX_MORPHISMS", DEFAULT_MAX_MORPHISMS),
            "fixture_dir": os.getenv("TRIVHOM_FIXTURE_DIR", DEFAULT_FIXTURE_DIR),
            "log_level": os.getenv("TRIVHOM_LOG_LEVEL", "INFO"),
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)


def max_degree(override: Optional[int] = None, slack: int = 0) -> int:
    """
    The chain-enumeration degree cap in force
    :param override: a smaller cap asked for by the caller
    :param slack: how far the override may go past the configured cap
    :return: the cap
    :raises PreconditionError: when the override leaves 0..cap+slack
    """
    cap = Settings.from_env().max_degree
    if override is None:
        return cap
    if not 0 <= override <= cap + slack:
        raise PreconditionError(f"degree {override} exceeds the cap {cap}", witness=str(override))
    return override


def max_morphisms() -> int:
    return Settings.from_env().max_morphisms
