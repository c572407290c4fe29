"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid configuration value or combination (CLI exit code 1)."""
