"""Word maps on finite groups: exact counts, bounds, and normal forms."""

from .admissible import (
    AdmissibleFunction,
    admissible_count,
    build_admissible_word,
    canonical_subsets,
    distinctness_witness,
    enumerate_admissible,
    is_admissible,
)
from .groups import (
    ExpProfile,
    FiniteGroup,
    Subgroup,
    exp_profile,
    exp_r,
    from_multiplication_table,
    from_permutation_generators,
    lower_central_series,
    nested_commutator,
    nilpotency_class,
    subgroup_closure,
    unitriangular_group,
)
from .library import (
    BUILTIN_LIBRARY,
    cyclic_group,
    dihedral_group,
    direct_product,
    group_from_spec,
    load_group_file,
    quaternion_group,
    resolve_group,
    symmetric_group,
)
from .nilpotent import (
    FormalCommutator,
    HallBasis,
    NormalForm,
    catalan,
    commutator_as_word,
    count_formal_commutators,
    enumerate_formal_commutators,
    evaluate_normal_form,
    formal_commutator_count,
    hall_basis,
    leaf,
    normal_form,
    normal_form_to_word,
    pair,
    witt_count,
)
from .omega import (
    ClosureOutcome,
    GrowthProfile,
    OmegaReport,
    abelian_omega,
    growth_profile,
    log2_lower_binomial,
    omega_exact,
    omega_lower,
    omega_report,
    omega_upper_formal_count,
    omega_upper_nilpotent,
    trivial_upper_log2,
)
from .words import (
    Word,
    WordMapTable,
    commutator_word,
    concat,
    evaluate,
    generator_word,
    identity_word,
    invert,
    nested_commutator_word,
    parse_word,
    reduce_word,
    word_map_table,
    word_power,
)

__version__ = "0.1.0"
