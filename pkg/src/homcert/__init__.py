"""homcert: exact constructive homological algebra over QQ[x1..xn] and ZZ,
with a certifier for the projectivity of torsion-free factors of subdirect
products over a factor of grade at least two."""

from .rings import (
    RingDescriptor, Polynomial, ParseError, poly_ring, int_ring,
    poly_parse, parse_element, monomial_compare,
)
from .groebner import (
    ModuleOrder, GroebnerBasis, BudgetExceededError, buchberger, normal_form,
    lift, syzygies, submodule_intersect, submodule_equal, lt_dimension,
    spair_budget,
)
from .modules import (
    FPModule, Morphism, Submodule, ShortExactSequence, WitnessError,
    present, free_module, submodule, morphism, identity, zero_morphism,
    compose, kernel, cokernel, direct_sum, pullback, dual, evaluation_map,
    solve_lift, solve_extension, short_exact_sequence, prune,
)
from .homology import (
    GradeValue, INFINITE_GRADE, ResolutionComplex, TorsionError,
    free_resolution, ext, grade, annihilator, codimension, auslander_dual,
    torsion_submodule, torsionfree_factor, free_embedding,
    fitting_ideal, module_rank, invariants_agree, element_annihilator,
)
from .snf import (
    SmithDecomposition, OracleHomology, smith_normal_form, oracle_homology,
    oracle_homology_raw, oracle_splits,
)
from .subdirect import (
    SubdirectInstance, Certificate, ComplementResult, AppendixReport,
    make_instance, check_regular, interconnection_module, is_projective,
    split_surjection, complement_above, certify, appendix_equivalence_check,
    structured_instances, random_shear,
)

__version__ = "0.1.0"
