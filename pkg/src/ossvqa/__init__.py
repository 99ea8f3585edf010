"""Open-shop scheduling on one-hot bit strings: exact enumeration, the
feasibility-preserving permutation group, SWAP-rotation circuits on a
noiseless simulator, and seeded variational optimization."""

from .errors import CapabilityError, DomainError, VerificationError
from .groups import (
    ConstraintGraph,
    GroupElement,
    build_constraint_graph,
    bruteforce_feasibility_preservers,
    check_mixing_family,
    decompose_job_permutation,
    generate_group,
    generated_group_order,
    group_generators,
    group_order,
    orbit,
    verify_block_system,
    vertex_permutation,
)
from .instances import (
    LinearObjective,
    OsspInstance,
    TspObjective,
    enumerate_solutions,
    evaluate_objective,
    instance_to_dict,
    is_feasible,
    job_blocks,
    linear_from_rows,
    load_instance,
    load_instance_dict,
    optimal_solutions,
    position_blocks,
    solution_count,
)
from .presets import list_presets, load_preset, resolve_preset
from .simulator import (
    Circuit,
    MixerHamiltonian,
    ParameterVector,
    QuantumState,
    amplitude,
    apply_circuit,
    apply_mixer,
    apply_phase_separator,
    apply_simultaneous_mixer,
    apply_swap_rotation,
    basis_state,
    build_circuit,
    expectation,
    feasible_mass,
    fidelity,
    full_basis,
    mixer_hamiltonian,
    mixers,
    phase_separator,
    probabilities,
    pure_state,
    sample,
    subspace_basis,
    zero_params,
)
from .vqa import (
    OptimizerConfig,
    ReachPlan,
    RunRecord,
    compile_reach,
    initial_parameters,
    objective_value,
    optimize_sgd,
    optimize_trust_region,
    run_experiment,
    run_optimizer,
    sgd_minimize,
    trust_region_minimize,
)

__version__ = "0.1.0"

__all__ = [
    "CapabilityError",
    "Circuit",
    "ConstraintGraph",
    "DomainError",
    "GroupElement",
    "LinearObjective",
    "MixerHamiltonian",
    "OptimizerConfig",
    "OsspInstance",
    "ParameterVector",
    "QuantumState",
    "ReachPlan",
    "RunRecord",
    "TspObjective",
    "VerificationError",
    "amplitude",
    "apply_circuit",
    "apply_mixer",
    "apply_phase_separator",
    "apply_simultaneous_mixer",
    "apply_swap_rotation",
    "basis_state",
    "build_circuit",
    "build_constraint_graph",
    "bruteforce_feasibility_preservers",
    "check_mixing_family",
    "compile_reach",
    "decompose_job_permutation",
    "enumerate_solutions",
    "evaluate_objective",
    "expectation",
    "feasible_mass",
    "fidelity",
    "full_basis",
    "generate_group",
    "generated_group_order",
    "group_generators",
    "group_order",
    "initial_parameters",
    "instance_to_dict",
    "is_feasible",
    "job_blocks",
    "linear_from_rows",
    "list_presets",
    "load_instance",
    "load_instance_dict",
    "load_preset",
    "mixer_hamiltonian",
    "mixers",
    "objective_value",
    "optimal_solutions",
    "optimize_sgd",
    "optimize_trust_region",
    "orbit",
    "phase_separator",
    "position_blocks",
    "probabilities",
    "pure_state",
    "resolve_preset",
    "run_experiment",
    "run_optimizer",
    "sample",
    "sgd_minimize",
    "solution_count",
    "subspace_basis",
    "trust_region_minimize",
    "verify_block_system",
    "vertex_permutation",
    "zero_params",
]
