"""Two dipole-dipole coupled S0 <-> P1 atoms: couplings, spectra, dynamics and few-level truncations."""

__version__ = "0.1.0"

from .coupling import (
    CouplingSet,
    Geometry,
    GeometryError,
    chi_tensor,
    coupling_closed_form,
    coupling_from_tensor,
)
from .dynamics import (
    SUBSPACE_S,
    SUBSPACE_V,
    Subspace,
    Trajectory,
    evolve,
    ground_state,
    subspace_population,
    verify_evolution_equivalence,
)
from .fewlevel import (
    TruncationScheme,
    breakdown_report,
    large_delta_decoupling_check,
    two_level_splitting,
)
from .operators import SystemParams, rotation_operator
from .spectra import spectrum_dipole, spectrum_full

__all__ = [
    "CouplingSet",
    "Geometry",
    "GeometryError",
    "chi_tensor",
    "coupling_closed_form",
    "coupling_from_tensor",
    "SUBSPACE_S",
    "SUBSPACE_V",
    "Subspace",
    "Trajectory",
    "evolve",
    "ground_state",
    "subspace_population",
    "verify_evolution_equivalence",
    "TruncationScheme",
    "breakdown_report",
    "large_delta_decoupling_check",
    "two_level_splitting",
    "SystemParams",
    "rotation_operator",
    "spectrum_dipole",
    "spectrum_full",
]
