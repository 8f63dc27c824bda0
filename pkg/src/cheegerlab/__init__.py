"""Graph spectra, nodal domains, exact multi-way Cheeger constants, and a
verification harness for the spectral bounds relating them."""

from .bounds import (
    CheckRecord,
    CorpusConfig,
    HypothesisViolation,
    NonGenericError,
    Report,
    check_basics,
    check_lemma_nodal_cheeger,
    check_lower_bound,
    check_nodal_count_bounds,
    check_product_theorem,
    check_theorem_main,
    run_corpus,
)
from .cheeger import (
    BudgetExceededError,
    PartitionCertificate,
    SearchBudget,
    SweepResult,
    beta_signed,
    conductance,
    rho_exact,
    rho_profile,
    rho_signed_exact,
    rho_signed_profile,
    rho_upper_nodal_sweep,
)
from .graph import (
    Edge,
    GraphClassification,
    GraphFormatError,
    WeightedGraph,
    classify,
    cyclomatic,
    degree_profile,
    generate,
    load_graph,
    product,
    validate,
    with_random_signature,
)
from .nodal import NodalDecomposition, product_function, strong_nodal, weak_nodal
from .perturb import (
    FrequencyReport,
    GenericityReport,
    genericity_frequency,
    genericity_report,
    perturb,
)
from .rng import DEFAULT_SEED, SplitMix64, derive_seed
from .spectral import (
    EigenOptions,
    EtaResult,
    JacobiConvergenceError,
    Spectrum,
    adjacency_eta,
    eig_sym,
    laplacian_spectrum,
    normalized_laplacian_sym,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
