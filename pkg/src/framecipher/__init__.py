"""framecipher: subband block ciphers over scaled-orthogonal integer matrices.

A private-key toolkit that hides each plaintext block next to a random
noise block behind an exactly orthogonal integer matrix, plus the
cryptanalysis side: exhaustive key search with ASCII frequency analysis,
wrong-key distortion formulas, and a chosen-plaintext attack that recovers
the message band.
"""

from .brute_force import (
    BruteForceConfig,
    BudgetExceededError,
    Histogram,
    ascii_frequency,
    brute_force_search,
    run_brute_force,
)
from .cpa import CpaResult, EncryptionOracle, cpa_attack
from .frame_analysis import (
    FrameMatrixView,
    are_orthogonal_frames,
    is_parseval,
    redundancy_bound_ok,
    scaled_parseval_scale,
    split_columns,
)
from .hadamard import (
    HadamardArrayKey,
    blow_up,
    dct_matrix,
    instantiate_array,
    sylvester_hadamard,
)
from .matrix_core import (
    MatrixError,
    ScaledOrthogonalMatrix,
    check_scaled_orthogonal,
    direct_sum,
    int_matrix,
    int_vector,
    matmul,
    tensor,
)
from .perturbation import (
    PerturbationReport,
    perturbation_bound_check,
    perturbed_decode,
)
from .rational_linalg import project_off_subspace
from .schemes import (
    CiphertextStream,
    CryptoError,
    GarbageSpec,
    Scheme1Key,
    Scheme2Key,
    Scheme3Key,
    Scheme4Key,
    Scheme5Key,
    SchemeKey,
    build_matrix,
    decode,
    encode,
    keygen,
    scheme1_decode,
    scheme1_encode,
    text_to_blocks,
)

__version__ = "0.1.0"
