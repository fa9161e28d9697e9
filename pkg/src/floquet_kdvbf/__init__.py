"""Small-amplitude periodic waves of the KdV-Burgers-Fisher equation and their Floquet spectra."""

__version__ = "0.1.0"

from .errors import (
    CollapsedToZero,
    EigFailure,
    FloquetError,
    NoConvergence,
    NoCrossing,
    PairLost,
    ThetaOutOfRange,
)
from .model import Params, StateVec, char_poly_eval, char_roots, jacobian, vector_field
from .hopf import detect_hopf, track_complex_pair
from .orbit import (
    WaveProfile,
    continue_family,
    evaluate_profile,
    initial_guess,
    load_profile,
    save_profile,
    solve_orbit,
)
from .bloch import assemble_bloch, linearized_coeffs, perturbation_split, quasi_periodic_reconstruct
from .spectrum import convergence_study, eig_dense, floquet_sweep, verdict

__all__ = [
    "CollapsedToZero", "EigFailure", "FloquetError", "NoConvergence", "NoCrossing", "PairLost",
    "ThetaOutOfRange", "Params", "StateVec", "char_poly_eval", "char_roots", "jacobian",
    "vector_field", "detect_hopf", "track_complex_pair", "WaveProfile", "continue_family",
    "evaluate_profile", "initial_guess", "load_profile", "save_profile", "solve_orbit",
    "assemble_bloch", "linearized_coeffs", "perturbation_split", "quasi_periodic_reconstruct",
    "convergence_study", "eig_dense", "floquet_sweep", "verdict",
]
