"""Constants of motion and verification suites for chained separable Hamiltonians."""

from ._core import (
    ConfigError,
    DegenerateOrbit,
    DomainViolation,
    StepUnderflow,
    System,
    build_system,
    chain_values,
    families,
    flatness_verdict,
    flow_field,
    independence_rank,
    integrate,
    involution_matrix,
    poly_constant,
    suite_names,
    system_from_config,
    verify,
    version,
)

__version__ = version

__all__ = [
    "ConfigError",
    "DegenerateOrbit",
    "DomainViolation",
    "StepUnderflow",
    "System",
    "build_system",
    "chain_values",
    "families",
    "flatness_verdict",
    "flow_field",
    "independence_rank",
    "integrate",
    "involution_matrix",
    "poly_constant",
    "suite_names",
    "system_from_config",
    "verify",
    "version",
]
