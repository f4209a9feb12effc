"""Gaussian quantum networks carved from a multimode squeezed comb.

The package models a multimode squeezed light source in a fixed measurement
basis and realises arbitrary passive networks on it purely by changing the
(simulated) homodyne local-oscillator shape: cluster states of any
connectivity, their nullifier variances, an optimiser for the orthogonal
freedom of the network unitary, and a five-player secret-sharing protocol
with Gaussian retrieval fidelities.
"""

from .cluster import (
    Graph,
    NullifierSet,
    OptimizerConfig,
    OrthogonalFreedom,
    builtin_graph,
    cluster_unitary,
    nullifier_lo,
    nullifier_matrix,
    nullifier_variances,
    optimize_orthogonal,
    vacuum_references,
)
from .gaussian import (
    CovarianceMatrix,
    EigenmodeDecomposition,
    ModeUnitary,
    SymplecticMatrix,
    apply_loss,
    apply_symplectic,
    db_to_variance,
    eigenmode_extract,
    omega,
    quadrature_variance,
    unitary_to_symplectic,
    variance_to_db,
)
from .homodyne import (
    LOShape,
    lo_from_network_row,
    measure_variance,
    phase_sweep,
    pixel_covariance_blocks,
)
from .resource import (
    ResourceSpec,
    SqueezingProfile,
    build_pixel_covariance,
    default_usqz,
    reference_profile,
)
from .secret import (
    AccessSolution,
    SharingNetwork,
    SingularSystem,
    access_party_solve,
    fidelity,
    pair_infeasibility,
    pentagon_dealer_unitary,
    protocol_run,
    reconstructed_covariance,
    sweep_fidelity,
)

__version__ = "0.1.0"
