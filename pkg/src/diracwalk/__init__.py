"""Dirac quantum walk on periodic lattices in one, two and three dimensions."""
from .algebra import alpha_set, anticommutator, exp_hermitian, is_hermitian, is_unitary, kron, pauli, spinor_dim
from .analysis import (
    ConvergenceReport,
    ConvergenceRow,
    EndToEndResult,
    admissible_steps,
    consistency_error,
    convergence_study,
    end_to_end_error,
    fit_order,
    observation_probability,
    stability_check,
)
from .backend import BACKEND
from .errors import BoundViolation, ContractViolation, DegenerateInput, UnsupportedDimension
from .fields import (
    GridSpec,
    LatticeField,
    gaussian_state,
    inner_product,
    l2_norm,
    load_field,
    plane_wave_state,
    random_state,
    save_field,
    site_state,
    sobolev_norm,
)
from .sampling import DiscretizedState, discretize, low_pass, reconstruct, resample
from .spectral import (
    SpectralField,
    dirac_symbol,
    exact_evolve,
    exact_symbol,
    forward_transform,
    gamma,
    inverse_transform,
    walk_symbol,
)
from .walk import (
    CoinFactor,
    ShiftFactor,
    WalkOperator,
    apply_walk,
    apply_walk_steps,
    build_dirac_walk,
    build_general_walk,
    build_product_walk,
)

__version__ = "0.1.0"
