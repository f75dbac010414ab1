"""Python front end of the thermoelastic Timoshenko beam lab."""

from ._core import (
    ConfigError,
    DomainError,
    InvalidKernel,
    ModelConfig,
    PronyKernel,
    ShapeError,
    System,
    __version__,
    apply_generator,
    assemble,
    dafermos_rate,
    dissipation,
    dominant_mode,
    eigenvalues,
    energy,
    evaluate_g,
    evaluate_mu,
    make_cattaneo,
    normalize_unit_mass,
    rescale,
    resolvent_norm,
    run_cli,
    simulate,
    spectral_abscissa,
    step_midpoint,
    total_mass,
)


def model(text: str) -> ModelConfig:
    """Parse a model from `key = value` configuration text."""
    return ModelConfig.parse(text)


__all__ = [name for name in dir() if not name.startswith("_")]
