"""Local (Euclidean) approximation of wiretap-channel secrecy capacity."""

from .channel import Channel, Dtm, GramMatrix, bsc, dtm, gram, gram_of, mutual_information, output_distribution
from .policy import DEFAULT_POLICY, NumericPolicy
from .prob_core import (
    AdditivePerturbation,
    Distribution,
    PerturbationFamily,
    SphericalPerturbation,
    chi_squared,
    kl_divergence,
    kl_local_approx,
    max_valid_epsilon,
    perturb,
    to_bits,
    to_spherical,
    from_spherical,
    validate_family,
)

__version__ = "0.1.0"

__all__ = [
    "AdditivePerturbation",
    "Channel",
    "DEFAULT_POLICY",
    "Distribution",
    "Dtm",
    "GramMatrix",
    "NumericPolicy",
    "PerturbationFamily",
    "SphericalPerturbation",
    "bsc",
    "chi_squared",
    "dtm",
    "from_spherical",
    "gram",
    "gram_of",
    "kl_divergence",
    "kl_local_approx",
    "max_valid_epsilon",
    "mutual_information",
    "output_distribution",
    "perturb",
    "to_bits",
    "to_spherical",
    "validate_family",
]
