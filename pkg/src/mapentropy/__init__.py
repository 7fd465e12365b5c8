"""Map entropy and dynamical additivity of finite-dimensional quantum operations."""
from .additivity import (
    AdditivityReport,
    BiorthDecomposition,
    SaturationReport,
    biorthogonal_decomposition,
    certify_dynamical_additivity,
    conditional_mutual_information,
    is_biorthogonal,
    pinsker_gap,
    subadditivity_gap,
    verify_block_saturation,
)
from .channel import (
    KrausChannel,
    apply,
    canonicalize,
    choi_of,
    compose,
    dual,
    is_bistochastic,
    is_trace_preserving,
    is_unital,
    jamiolkowski_state,
    kraus_of,
    unitary_channel,
)
from .entropy import (
    entropy_preserving_extension,
    exchange_entropy,
    gamma_composite,
    gamma_state,
    map_entropy,
    shannon_entropy,
    von_neumann_entropy,
)
from .generators import BlockSpec, build_block_channel, random_sds_triple

__version__ = "0.1.0"

__all__ = [
    "AdditivityReport",
    "BiorthDecomposition",
    "SaturationReport",
    "biorthogonal_decomposition",
    "certify_dynamical_additivity",
    "conditional_mutual_information",
    "is_biorthogonal",
    "pinsker_gap",
    "subadditivity_gap",
    "verify_block_saturation",
    "KrausChannel",
    "apply",
    "canonicalize",
    "choi_of",
    "compose",
    "dual",
    "is_bistochastic",
    "is_trace_preserving",
    "is_unital",
    "jamiolkowski_state",
    "kraus_of",
    "unitary_channel",
    "entropy_preserving_extension",
    "exchange_entropy",
    "gamma_composite",
    "gamma_state",
    "map_entropy",
    "shannon_entropy",
    "von_neumann_entropy",
    "BlockSpec",
    "build_block_channel",
    "random_sds_triple",
]
