"""Cost analysis of weighted transition systems over dioids, with linear abstractions."""

from .dioid import (
    CapCup,
    CarrierError,
    CostDioid,
    CupCap,
    MaxMin,
    MaxPlus,
    MaxTimes,
    MinMax,
    MinPlus,
    MinPlusVec,
    StarDivergenceError,
    make_dioid,
)
from .galois import (
    FiniteLattice,
    GaloisLift,
    build_galois_lift,
    check_linearizability_counterexample,
    check_residuated_pair,
    encode_boolean,
    even_interval_lattice,
    even_interval_lift,
    powerset_lattice,
)
from .linear import (
    LinearAbstractionTriple,
    check_correct_linear,
    check_lemma_cycle,
    check_lemma_dev,
    check_lemma_iterate,
    check_lemma_path,
    check_theorems,
    random_correct_triple,
)
from .longrun import average_path_cost, long_run_cost, matrix_long_run_cost
from .moduloid import CostMatrix, CostVector, DimensionError, kleene_plus, mat_mul, mat_residual, mat_vec
from .oracle import RandomSystemSpec, enumerate_paths, greatest_subsolution, random_system
from .partition import best_abstract_system, check_correct_abstraction, lift_partition
from .semantics import ParseError, TransitionSystem, global_cost, load_system, parse_system

__version__ = "0.1.0"
