"""Single-machine total weighted tardiness with step-deteriorating jobs."""

from .core import GenerationMeta, Instance, Job, Schedule, actual_processing_time, evaluate, objective
from .errors import (
    ContractViolation,
    DegenerateInput,
    DivisionUndefined,
    InvalidConfig,
    InvalidPermutation,
    SpecViolation,
    StepDetError,
    TooLarge,
    UnknownAlgorithm,
)
from .exact import ExactResult, solve_bnb, solve_brute_force
from .generator import (
    GeneratorConfig,
    ReductionSpec,
    cmax_prime,
    experiment_suite,
    generate,
    reduction_instance,
    z_star,
)
from .heuristics import (
    ALL_ALGORITHMS,
    BASE_ALGORITHMS,
    HeuristicConfig,
    atc,
    ca,
    edd,
    mswsp,
    pairwise_swap,
    run_algorithm,
    run_with_ps,
    wedd,
    wmdd,
    wspt,
)
from .instance_io import load_instance, save_instance
from .mip_export import check_against_model, export_lp

__version__ = "0.1.0"
