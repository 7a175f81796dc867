"""Isometry groups of even hyperbolic rank-2 lattices.

Pell equations, indefinite binary forms, discriminant groups, and the
classification of the (extended) chamber-preserving orthochronous group.
"""

from .classify import (
    GroupClass,
    GroupKind,
    LatticeReport,
    aut_general_guarantee,
    classify,
    classify_extended_group,
    classify_gram,
    extended_member,
    finiteness,
    orthochronous_group,
)
from .discgroup import (
    DiscGroup,
    ambiguous_disc_lemmas,
    check_sufficient_conditions,
    disc_group,
    induced_action,
    involution_search,
    min_power_pm_id,
)
from .exactmath import IntMatrix2, QuadNum, snf
from .forms import (
    BinaryForm,
    EvenLattice,
    Isometry,
    automorph_generator,
    content_split,
    discriminant,
    involution_generator,
    is_ambiguous,
    is_orthochronous,
    reduction_cycle,
    represents,
    roots_of_lattice,
)
from .pell import (
    PellSolution,
    PellTooLarge,
    convex_decomposition,
    epsilon_vector,
    pell_power,
    solve_pell4,
    solve_reduced,
)

__version__ = "0.1.0"
