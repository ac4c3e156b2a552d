"""satgadget: compile SAT instances into quantum-circuit cost gadgets and
verify their structure with exact and numeric circuit analysis."""

from .boolfn import BoolExpr, WitnessPair, brute_sat, find_witness_pair, parse_dimacs, parse_expr, truth_table
from .circuit import Circuit, Gate, count, depth, emit_circuit, invert, parse_circuit
from .clifford import (
    CliffordTableau,
    canonical_circuit,
    enumerate_clifford_group,
    nearest_clifford_distance,
    tableau_simulate,
)
from .exact import (
    ExactUnitary,
    PauliOperator,
    RingElement,
    equal_up_to_phase,
    exact_simulate,
    is_clifford_exact,
    is_generalized_permutation,
    pauli_conjugate,
    phase_profile,
)
from .numeric import is_product_of_single_qubit, operator_norm, phase_min_distance
from .search import (
    SearchBudget,
    exact_min_hcount,
    exact_min_tcount,
    exact_min_tofcount,
    hfree_closure,
    is_linear_reversible,
)
from .sk import GateDefinition, base_net, load_gate_definition, sk_approximate, translate_circuit
from .synth import ReductionInstance, anf, build_reduction, decide_sat, synth_oracle

__version__ = "0.1.0"
