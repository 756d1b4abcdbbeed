from functools import lru_cache
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource


class Settings(BaseSettings):
    """Runtime settings. Built from command-line flags only."""

    # Numerics
    tol: float = Field(1e-9, gt=0, description="Absolute tolerance on the return integral")
    ode_rtol: float = Field(1e-10, gt=0)
    ode_atol: float = Field(1e-12, gt=0)

    # Enumeration
    r_bound: int = Field(9, ge=0, description="Largest r the brute-force oracle enumerates")

    # Plotting
    plot_size: int = Field(600, gt=0)
    plot_trajectories: int = Field(24, ge=0)
    plot_horizon: float = Field(40.0, gt=0)

    # Output
    output_format: Literal["text", "json"] = "text"
    log_level: str = "WARNING"
    log_format: Literal["console", "json"] = "console"

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        # Flags only: no environment variables, no dotenv.
        return (init_settings,)


@lru_cache
def get_settings() -> Settings:
    """Get cached default settings instance."""
    return Settings()
