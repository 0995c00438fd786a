"""Python bindings for the glhs library."""

from ._glhs import (  # noqa: F401
    CorruptionError,
    DimensionError,
    DomainError,
    Error,
    FeasibilityError,
    FormatError,
    GadgetPair,
    LabelCoverInstance,
    TestSpec,
    build_pair,
    closed_form_d0_weights,
    critical_index,
    default_gamma,
    dict_test_sample,
    dictator_or_acceptance,
    dictator_or_agreement,
    gen_planted_unique,
    instance_from_json,
    make_test_spec,
    pair_feasible,
    paper_eps,
    paper_p,
    planted_decode_weak_fraction,
    read_instance,
    satisfaction_fractions,
    smoothness,
    solve_d0_weights,
    write_dict_stream,
)

__version__ = "0.1.0"
