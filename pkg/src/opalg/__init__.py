"""Finite-dimensional operator-algebra workbench.

Symbolic qudit Pauli algebra, states as functionals with the GNS
construction, projective measurement and quantum channels, stabilizer
error correction, and desk-scale classical shadows.
"""

__version__ = "0.1.0"

from .pauli import (
    AlgebraSpec,
    OperatorSum,
    PauliWord,
    QUBIT,
    bracket,
    op_combine,
    pauli_I,
    pauli_X,
    pauli_Y,
    pauli_Z,
    sigma,
    sigma_of_vector,
    to_dense,
    word_mul,
)
from .dense import (
    SpectralDecomposition,
    apply_function,
    eig_hermitian,
    is_positive,
    op_norm,
)
from .states import (
    GnsSpace,
    State,
    bloch_vector,
    conjugate_state,
    definite_set,
    gns_construct,
    is_pure,
    kernel_basis,
    mix_states,
    pauli_exponential,
    state_from_bloch,
)
from .composite import (
    FactorLayout,
    bell_state,
    commutant,
    devectorize,
    factor_check,
    partial_trace,
    tensor,
    vectorize,
)
from .measurement import (
    MeasurementRecord,
    measurement_square,
    ppm_measure,
    pvm_measure,
    rs_bound,
)
from .channels import (
    KrausSet,
    apply_operation,
    choi_of,
    kraus_from_choi,
    stinespring_dilate,
    validate_operation,
)
from .stabilizer import (
    StabilizerCode,
    StabilizerGroup,
    build_code,
    character_of,
    code_projector,
    coherent_repetition,
    distance_search,
    group_generate,
    kl_check,
    recovery_map,
    syndrome_classes,
)
from .shadows import (
    ShadowScheme,
    estimate,
    sample_shadows,
    shadow_channel,
)
from .expr import eval_expr, parse_expr, to_text
