"""Exact geometric rank of 3-tensors by finite-field point counting.

The main entry points are :func:`geometric_rank`, :func:`classify_gr2_tensor`
and :func:`combined_bound_report`; tensors come from :func:`catalog_make`,
:func:`build_tensor` or :func:`parse_tensor_file`.
"""

from .bounds import (
    Bound,
    BoundReport,
    BoundSource,
    combined_bound_report,
    compression_rank_bound,
    concise_floor,
    gr3_rank_bound,
    minrank_exclusion,
)
from .catalog import CATALOG_NAMES, CatalogInfo, catalog_info, catalog_make, identify, parse_catalog_id
from .classifier import (
    CompressionWitness,
    GR2Class,
    GR2Variant,
    Rank2SpaceKind,
    Rank2Variant,
    classify_gr2_tensor,
    classify_rank2_space,
    find_compression,
    verify_compression,
)
from .errors import (
    BadParams,
    BudgetExceeded,
    DimensionMismatch,
    DuplicateEntry,
    GeomRankError,
    Inconsistent,
    IndexOutOfRange,
    InsufficientPrimes,
    NotApplicable,
    NotPrime,
    ParseError,
    PreconditionFailed,
    SingularMatrix,
    UnknownName,
    Unresolved,
)
from .field import QQ, ExactMatrix, PrimeField, Rationals
from .fileformat import format_tensor, parse_tensor_file, read_tensor, write_tensor
from .genericity import (
    GenericityFlags,
    GenericRank,
    MlRanks,
    bounded_rank_test,
    generic_rank_report,
    generic_slice_rank,
    genericity_flags,
    is_concise,
    is_one_generic,
    multilinear_ranks,
)
from .grank import (
    BadPrimeWarning,
    DimFit,
    GRReport,
    StrataProfile,
    dimension_fit,
    geometric_rank,
    gr_stratified,
    sigma_hat_count,
    stratum_counts,
)
from .report import build_report, emit_report
from .tensor import (
    Axis,
    BasisChange,
    Tensor3,
    build_tensor,
    change_basis,
    direct_sum,
    kronecker,
    permute_factors,
    random_basis_change,
)

__version__ = "0.1.0"
