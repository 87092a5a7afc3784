"""Dynamical Lie algebras of driven N-level ladder systems.

Typical use::

    from dynlie import SystemSpec, build_h0_prime, build_h1, lie_closure, classify

    spec = SystemSpec(energies=range(1, 8), dipoles=["sqrt(3)", "sqrt(5)", "sqrt(6)",
                                                      "sqrt(6)", "sqrt(5)", "sqrt(3)"])
    result = lie_closure([build_h0_prime(spec), build_h1(spec)])
    classify(result, spec).family      # PROPER_SUBALGEBRA, dim 3
"""

from .classifier import AlgebraFamily, Classification, FormEvidence, Symmetry, classify, invariant_form
from .closure import ClosureResult, lie_closure, membership
from .criteria import (
    BasisMap,
    CriteriaReport,
    DescentTrace,
    GenericCartanSystem,
    HypothesisError,
    SuiteVerdict,
    Verdict,
    criteria_report,
    descent_b1,
    descent_b2,
    descent_c1,
    descent_c2,
    lemma_reconstruct,
    omega_v_sequences,
    sigma_transform,
    theorem1_check,
    theorem_b_suite,
    theorem_c_suite,
    uniform_reconstruct,
)
from .hamiltonian import (
    EnergyOrderError,
    LengthMismatchError,
    SystemSpec,
    SystemSpecError,
    build_h0,
    build_h0_prime,
    build_h1,
    decomposability_flags,
    detect_symmetric_coupling,
    parse_coupling,
    transition_gaps,
)
from .linalg import OrthoBasis, commutator, extend_orthonormal, hs_inner, nullspace
from .pipeline import RunConfig, emit_system, emit_tables, parse_system_file, run_pipeline
from .tables import (
    Family,
    GeneratorTable,
    build_table,
    nn_entry_obstruction,
    so_even_basis,
    so_odd_basis,
    sp_basis,
    su_basis,
    verify_commutation_rules,
)

__version__ = "0.1.0"
