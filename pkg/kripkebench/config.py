import os
import logging
from dotenv import load_dotenv
from pydantic import BaseModel, Field

load_dotenv()

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


class Settings(BaseModel):
    threads: int = Field(default=1, ge=1)
    # Upper bound on assignment evaluations a single validity search may plan.
    ceiling: int = Field(default=50_000_000, ge=1)
    batch_size: int = Field(default=65536, ge=1)
    log_level: str = "WARNING"


def load_settings() -> Settings:
    """Read KRIPKE_* variables (a .env file in the working directory is honoured)."""
    env = {
        "threads": os.getenv("KRIPKE_THREADS"),
        "ceiling": os.getenv("KRIPKE_CEILING"),
        "batch_size": os.getenv("KRIPKE_BATCH_SIZE"),
        "log_level": os.getenv("KRIPKE_LOG_LEVEL"),
    }
    return Settings(**{key: value for key, value in env.items() if value is not None})


settings = load_settings()

_configured = False


def configure_logging(level: str | None = None) -> None:
    global _configured
    if _configured:
        return
    logging.basicConfig(level=(level or settings.log_level).upper(), format=LOG_FORMAT)
    _configured = True
