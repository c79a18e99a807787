"""Two-qubit CHSH violation versus linear entropy."""
from ._backend import BACKEND
from .bell import (
    ChshSettings,
    CorrelationAnalysis,
    SettingsOptimum,
    build_chsh_operator,
    chsh_max,
    chsh_value,
    correlation_matrix,
    horodecki_m,
    optimize_settings,
    symmetric3_eigenvalues,
)
from .entanglement import (
    EntanglementReport,
    concurrence,
    entanglement_report,
    partial_transpose_min_eigenvalue,
    spin_flip,
    xstate_concurrence,
)
from .explorer import (
    ScanGrid,
    StateRecord,
    XStateParams,
    analyze,
    find_counterexamples,
    make_xstate,
    one_parameter_family,
    sample_random_state,
    scan_family,
)
from .fixtures import SANTOS_THRESHOLD, PaperFixtures
from .qstate import (
    DensityMatrix,
    MixednessReport,
    from_pure,
    hermitian_eigensystem,
    linear_entropy,
    purity,
    validate,
)

__version__ = "0.1.0"
