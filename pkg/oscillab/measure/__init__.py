"""
Measures on infinite strings, represented by cylinder values.
"""

from .measures import (
    ZERO_PROBABILITY,
    ENUMERATION_LIMIT,
    Alphabet,
    BINARY,
    Prefix,
    PrefixMeasure,
    IIDMeasure,
    MixtureMeasure,
    CallableMeasure,
    as_prefix,
    check_enumeration,
    bernoulli_measure,
    categorical_measure,
    mixture_measure,
    prefix_measure,
    cylinder_prob,
)
from .entropy import EntropyStatus, EntropyVerdict, verify_perpetual_entropy
from .sampling import (
    DEFAULT_CHUNK,
    SymbolStreams,
    trial_generator,
    cumulative_edges,
    symbols_from_uniforms,
    sample_symbols,
    sample_path,
)

__all__ = [
    "ZERO_PROBABILITY",
    "ENUMERATION_LIMIT",
    "Alphabet",
    "BINARY",
    "Prefix",
    "PrefixMeasure",
    "IIDMeasure",
    "MixtureMeasure",
    "CallableMeasure",
    "as_prefix",
    "check_enumeration",
    "bernoulli_measure",
    "categorical_measure",
    "mixture_measure",
    "prefix_measure",
    "cylinder_prob",
    "EntropyStatus",
    "EntropyVerdict",
    "verify_perpetual_entropy",
    "DEFAULT_CHUNK",
    "SymbolStreams",
    "trial_generator",
    "cumulative_edges",
    "symbols_from_uniforms",
    "sample_symbols",
    "sample_path",
]
