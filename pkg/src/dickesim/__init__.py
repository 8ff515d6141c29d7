"""Simulation and analysis of postselected photonic Dicke-state preparation.

Multi-photon states with internal qudit labels evolve through composable
transfer matrices by two independent engines (polynomial expansion and
permanent-based amplitudes); detection patterns, qudit extraction, Dicke
targets, closed-form success probabilities, and crossover analysis sit on
top, with a scheme catalog tying everything together.
"""

from .errors import (
    CapacityError,
    DegenerateStateError,
    DimensionMismatch,
    EncodingError,
    EntangledAncillaError,
    ModeCollisionError,
    ParameterError,
    RootBracketError,
    VerificationFailure,
)
from .evolve import (
    apply_transfer,
    bunching_check,
    monomial_to_basis_factor,
    prep_success,
    transition_amplitude,
)
from .fock import FockState, ModeLabel, Occupation, basis_state, vacuum
from .formulas import (
    ContourFit,
    CrossoverRow,
    SchemeProbability,
    contour_fit,
    crossover_point,
    crossover_table,
    family_profile,
    p_ancilla_final,
    p_ancilla_operator,
    p_ancilla_optical,
    p_ancilla_optical_max,
    p_op,
    p_opt,
    p_per_level,
    p_single_multiport,
    scheme_probability,
)
from .interferometer import (
    TransferMatrix,
    all_one,
    ancilla_transfer,
    beam_splitter,
    bs_tree,
    dft,
    identity,
    parallel,
    pbs,
    permutation,
    sequential,
)
from .permanent import PERMANENT_BACKEND, permanent, ryser_permanent_python
from .postselect import (
    CountConstraint,
    DickeSpec,
    PostselectionPattern,
    QuditState,
    apply_mode_phases,
    dicke,
    embed_qudits,
    extract_qudits,
    fidelity,
    phase_correction,
    project,
)
from .schemes import (
    SCHEME_NAMES,
    BuiltScheme,
    RunReport,
    SchemeSpec,
    build_scheme,
    run_scheme,
)
from .verify import CheckResult, SUITES, haar_unitary, verify_all

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "DegenerateStateError",
    "DimensionMismatch",
    "EncodingError",
    "EntangledAncillaError",
    "ModeCollisionError",
    "ParameterError",
    "RootBracketError",
    "VerificationFailure",
    "apply_transfer",
    "bunching_check",
    "monomial_to_basis_factor",
    "prep_success",
    "transition_amplitude",
    "FockState",
    "ModeLabel",
    "Occupation",
    "basis_state",
    "vacuum",
    "ContourFit",
    "CrossoverRow",
    "SchemeProbability",
    "contour_fit",
    "crossover_point",
    "crossover_table",
    "family_profile",
    "p_ancilla_final",
    "p_ancilla_operator",
    "p_ancilla_optical",
    "p_ancilla_optical_max",
    "p_op",
    "p_opt",
    "p_per_level",
    "p_single_multiport",
    "scheme_probability",
    "TransferMatrix",
    "all_one",
    "ancilla_transfer",
    "beam_splitter",
    "bs_tree",
    "dft",
    "identity",
    "parallel",
    "pbs",
    "permutation",
    "sequential",
    "PERMANENT_BACKEND",
    "permanent",
    "ryser_permanent_python",
    "CountConstraint",
    "DickeSpec",
    "PostselectionPattern",
    "QuditState",
    "apply_mode_phases",
    "dicke",
    "embed_qudits",
    "extract_qudits",
    "fidelity",
    "phase_correction",
    "project",
    "SCHEME_NAMES",
    "BuiltScheme",
    "RunReport",
    "SchemeSpec",
    "build_scheme",
    "run_scheme",
    "CheckResult",
    "SUITES",
    "haar_unitary",
    "verify_all",
    "__version__",
]
