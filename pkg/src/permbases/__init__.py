"""Base sizes of permutation representations and subgroup-lattice invariants of small groups."""

from .perm import Permutation, format_cycles, parse_cycles
from .group import BudgetError, ElementTable, PermGroup
from .lattice import SubgroupLattice, enumerate_subgroups, get_lattice, hasse_dot, longest_chain
from .rep import Representation, coset_action, coset_union, natural_representation, union_representation
from .measures import (
    INVARIANTS,
    MeasureReport,
    SearchBudget,
    b1,
    b2,
    b3,
    compute,
    d,
    d_prime,
    max_irredundant_base,
    max_minimal_base,
    min_base,
    mu,
    mu_prime,
)
from .semilattice import (
    exists_lattice_embedding,
    hunt_gap,
    max_boolean_join,
    max_boolean_meet,
    verify_join_embedding,
    verify_meet_embedding,
)
from .catalog import make_alternating, make_cyclic, make_dihedral, make_psl27, make_quaternion8, make_symmetric

__version__ = "0.1.0"
