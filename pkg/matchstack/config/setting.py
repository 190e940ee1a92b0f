import os
from functools import lru_cache
from typing import ClassVar, Optional

from pydantic import Field
from pydantic_settings import SettingsConfigDict, BaseSettings

class Settings(BaseSettings):
    # common
    app_env: str = "local"
    threads: Optional[int] = Field(default=None, ge=1, description="Cap on sweep worker processes, unset means all cores.")

    # logging
    log_level: str = "INFO"
    log_dir: str = "log"
    log_to_file: bool = False

    # oracle guards
    state_guard: int = Field(default=30, ge=1, description="Max vertices for spin enumeration.")
    edge_guard: int = Field(default=45, ge=1, description="Max primal edges for intersecting-set backtracking.")
    matching_guard: int = Field(default=40, ge=2, description="Max dual vertices for matching counting.")

    # random sweeps
    seed: int = 0
    random_count: int = Field(default=500, ge=0)
    random_max_n: int = Field(default=60, ge=0)
    matching_random_count: int = Field(default=200, ge=0)
    matching_random_n: int = Field(default=8, ge=0)
    transfer_random_n: int = Field(default=10, ge=0, description="Growth steps of the second random matching sample.")

    # Determine the env file based on the ENV environment variable
    env_file: ClassVar[str] = (
        os.path.join(
            os.path.dirname(os.path.dirname(__file__)), f".env.{os.getenv('ENV')}"
        )
        if os.getenv("ENV")
        else ".env"
    )
    model_config = SettingsConfigDict(env_file=env_file, env_prefix="MATCHSTACK_", extra="ignore")

@lru_cache()
def get_settings() -> Settings:
    return Settings()
