"""Application configuration using pydantic-settings."""
from functools import lru_cache

from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict


class Settings(BaseSettings):
    """Defaults and sample sizes for the HTTP service, overridable through B4_*
    environment variables or a .env file.

    They set the defaults for parameters a request leaves out and the sizes
    of randomised sweeps.
    """

    model_config = SettingsConfigDict(
        env_prefix="B4_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
    )

    # Application
    app_name: str = "Machine B4"
    debug: bool = False
    log_level: str = "WARNING"

    # HTTP service
    host: str = "0.0.0.0"
    port: int = 8000

    # Group computations
    order_cap: int = 4096
    xi_power_limit: int = 64

    # Verification suites
    verify_max: int = 10
    random_seed: int = 20180125
    lipschitz_samples: int = 500
    lipschitz_steps: int = 32
    lipschitz_word_len: int = 6
    density_random_starts: int = 20
    density_random_targets: int = 100
    density_random_n: int = 8
    transitivity_samples: int = 100
    transitivity_max_exp: int = 8


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()


class CommandLineSettings(Settings):
    """Built-in defaults only; the b4 command reads no environment or .env file."""

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        return (init_settings,)


@lru_cache
def get_cli_settings() -> CommandLineSettings:
    """Get cached command-line settings instance."""
    return CommandLineSettings()
