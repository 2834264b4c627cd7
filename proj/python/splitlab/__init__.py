"""Spin/orbital splitting laboratory for Poincare particle bundles."""

from ._splitlab import (
    ConfigError,
    LangError,
    __version__,
    algebra_residuals,
    chern_number,
    evaluate,
    identity_suite,
    is_zero,
    parse_config,
    read_section,
    run,
    run_suite,
)

__all__ = [
    "ConfigError",
    "LangError",
    "__version__",
    "algebra_residuals",
    "chern_number",
    "evaluate",
    "identity_suite",
    "is_zero",
    "parse_config",
    "read_section",
    "run",
    "run_suite",
]
