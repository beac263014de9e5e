"""
Configuration loaded from the environment (.env supported)
"""

import os
from typing import Any, Dict

from dotenv import load_dotenv
from pydantic import BaseModel, Field
from typing_extensions import Literal, Self

load_dotenv()

Strategy = Literal["auto", "simple", "group", "monoid"]


def _env_int(name: str, default: int) -> int:
    value = os.getenv(name)
    if value is None or not value.strip():
        return default
    return int(value)


def _env_bool(name: str, default: bool) -> bool:
    value = os.getenv(name)
    if value is None:
        return default
    return value.strip().lower() in ("1", "true", "yes", "on")


class SynthesisOptions(BaseModel):
    """Knobs shared by synthesis, verification and the command line"""

    strategy: Strategy = "auto"
    max_rules: int = Field(default=100_000, ge=1, description="Largest system any stage may emit")
    max_irr: int = Field(default=1_000_000, ge=1, description="Largest irreducible set enumerated")
    retries: int = Field(default=3, ge=0, description="t_Omega doublings after a failed verification")
    check_length: int = Field(default=10, ge=0, description="Exhaustive DFA cross-check length")
    max_balance_weight: int = Field(default=10_000, ge=1, description="Weight bound for equal-weight representatives")
    workers: int = Field(default=1, ge=1, description="Threads joining critical pairs")
    verbose: bool = False

    @classmethod
    def from_env(cls, **overrides: Any) -> Self:
        """Defaults from CRSYNTH_* variables, then explicit overrides"""
        values: Dict[str, Any] = {
            "strategy": os.getenv("CRSYNTH_STRATEGY", "auto"),
            "max_rules": _env_int("CRSYNTH_MAX_RULES", 100_000),
            "max_irr": _env_int("CRSYNTH_MAX_IRR", 1_000_000),
            "retries": _env_int("CRSYNTH_RETRIES", 3),
            "check_length": _env_int("CRSYNTH_CHECK_LENGTH", 10),
            "max_balance_weight": _env_int("CRSYNTH_MAX_BALANCE_WEIGHT", 10_000),
            "workers": _env_int("CRSYNTH_WORKERS", 1),
            "verbose": _env_bool("CRSYNTH_VERBOSE", False),
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)


class WebSettings(BaseModel):
    """Settings for the Flask API"""

    secret_key: str = "dev-secret-key"
    host: str = "127.0.0.1"
    port: int = 5000
    debug: bool = False

    @classmethod
    def from_env(cls) -> Self:
        return cls(
            secret_key=os.getenv("SECRET_KEY", "dev-secret-key"),
            host=os.getenv("CRSYNTH_HOST", "127.0.0.1"),
            port=_env_int("CRSYNTH_PORT", 5000),
            debug=_env_bool("FLASK_DEBUG", False),
        )
