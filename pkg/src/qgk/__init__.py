"""Generator-kernel simulator and training toolkit.

Builds the complete Hermitian generator basis of su(2^eta), merges it into
variational generator groups, embeds data through Hamiltonian-exponential
unitaries, computes fidelity kernel matrices, trains an affine projection by
kernel-target alignment, classifies with a dual SVM, and reports diagnostic
metrics plus the classical-simulation break-even analysis.
"""

from .linalg import TOL, EigenDecomposition, expi_apply, hermitian_eig, partial_trace_single_qubit
from .generators import (
    Family,
    Generator,
    GeneratorSet,
    build_generator_set,
    generator_count,
    iter_generators,
    pauli_decompose,
    verify_basis,
)
from .grouping import (
    GroupScaling,
    GroupingConfig,
    VggSet,
    build_vgg_set,
    frobenius_weights,
    generators_per_group,
    group_count,
    grouping_rank,
)
from .embedding import (
    EmbeddedState,
    EmbeddingConfig,
    EmbeddingMode,
    InitialState,
    embed,
    embed_batch,
    embed_with_gradient,
    unitarity_check,
)
from .kernels import (
    KernelMatrix,
    TargetKernel,
    classical_kernel,
    cross_gram,
    gram,
    kta,
    spectral_concentration,
    target_kernel,
)
from .projection import (
    ProjectionParams,
    TrainConfig,
    TrainTrace,
    default_learning_rate,
    init_params,
    kta_gradient,
    project,
    train,
)
from .svm import SvmModel, fit, predict
from .metrics import (
    bound_report,
    entanglement_capability,
    expressibility,
    meyer_wallach,
    parameter_count,
)
from .complexity import breakeven_n, compression_bound, efficiency_bound, qgk_cost
from .datasets import Dataset, load_csv, make_circles, make_moons, split

__version__ = "0.1.0"
