"""Application configuration."""

from typing import Literal

from pydantic import BaseModel, Field


class LoggingConfig(BaseModel):
    """Logging configuration."""
    level: str = "WARNING"


class EnumerationConfig(BaseModel):
    """Limits for block-subring enumeration."""
    max_ring_size: int = 12  # largest n enumerated without allow_large
    allow_large: bool = False


class OutputConfig(BaseModel):
    """Output rendering."""
    format: Literal["text", "structured"] = "text"
    width: int = 100  # console width for text tables


class AppConfig(BaseModel):
    """Top-level configuration, all sections optional."""
    logging: LoggingConfig = Field(default_factory=LoggingConfig)
    enumeration: EnumerationConfig = Field(default_factory=EnumerationConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)

    @classmethod
    def from_yaml(cls, yaml_config: dict) -> 'AppConfig':
        """Create config from a YAML dict.

        Args:
            yaml_config: Parsed config.yaml (may be empty or None)

        Returns:
            AppConfig instance
        """
        yaml_config = dict(yaml_config or {})

        # Accept the logger-style key as an alias
        if 'logging' in yaml_config:
            logging_section = dict(yaml_config['logging'] or {})
            if 'log_level' in logging_section and 'level' not in logging_section:
                logging_section['level'] = logging_section.pop('log_level')
            yaml_config['logging'] = logging_section

        return cls(**{k: v for k, v in yaml_config.items() if k in cls.model_fields})
