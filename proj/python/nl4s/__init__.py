"""Spectral solver and experiment harness for the focusing fourth-order NLS."""

from ._core import (
    DomainError,
    Error,
    FormatError,
    Grid,
    GridMismatch,
    Params,
    __version__,
    apply_I,
    energy,
    evolve,
    gamma_pq,
    ground_state,
    i_multiplier,
    load_snapshot,
    mass,
    modified_energy,
    paper_exponents,
    run_experiment,
    save_snapshot,
    sobolev_norm,
    verify_manifest,
)

__all__ = [
    "DomainError",
    "Error",
    "FormatError",
    "Grid",
    "GridMismatch",
    "Params",
    "__version__",
    "apply_I",
    "energy",
    "evolve",
    "gamma_pq",
    "ground_state",
    "i_multiplier",
    "load_snapshot",
    "mass",
    "modified_energy",
    "paper_exponents",
    "run_experiment",
    "save_snapshot",
    "sobolev_norm",
    "verify_manifest",
]
