"""Discrete screw dislocations in SC and BCC lattices: section phases, spring
energies and truncated Epstein-Hurwitz zeta sums."""

from .energy import (
    EdgeElongations,
    EnergyReport,
    SpringConstants,
    continuum_annulus_energy,
    continuum_dipole_energy,
    dipole_convergence_scan,
    edge_deltas,
    edge_epsilons,
    energy_report,
    epsilon_leading_order,
    exact_energy,
    leading_order_energy,
    dipole_far_field_bound,
)
from .errors import (
    ConfigError,
    DislocationCenterHit,
    DislokitError,
    HypothesisViolated,
    StepTooCoarse,
    UnsupportedLattice,
)
from .fields import (
    Configuration,
    DislocationSet,
    LatticeLoop,
    generate_bcc_configuration,
    generate_sc_configuration,
    height_set,
    loop_monodromy,
    rectangle_loop,
    section_value,
)
from .lattice import (
    AnnulusRegion,
    ColumnIndex,
    LatticeKind,
    LatticeSpec,
    PlanePoint,
    annulus_members,
    bcc_sheet_height_offset,
    bcc_sheet_planar_coords,
    dipole_region_members,
)
from .zeta import ZetaParams, log_divergence_fit, shift_invariance_check, truncated_zeta, zeta_energy_approx

__version__ = "0.1.0"
