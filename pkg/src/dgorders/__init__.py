"""Exact arithmetic for differential graded orders.

Graded algebras with differentials, dg-modules, homology over Z and fields,
dg-radicals, orders and lattices, and desk-scale class group computations via
ideles and Mayer-Vietoris sequences.
"""

from .rings import QQ, ZZ, GF, Zloc, CoefficientRing, RingError
from .linalg import Matrix, hermite_normal_form, smith_normal_form, integer_kernel
from .lattice import ZLattice, localize, globalize, patch, preimage_lattice
from .algebra import (
    GradedAlgebra,
    Differential,
    VerificationReport,
    verify_dg_algebra,
    cycles_subalgebra,
    opposite_dg_algebra,
    central_homogeneous_idempotents,
    primitive_central_idempotents,
    block_decompose,
    is_semisimple_algebra,
)
from .dgmodules import (
    DgModule,
    Complex,
    verify_dg_module,
    shift,
    quotient_dg_module,
    submodule_dg_module,
    hom_complex,
    end_dg_algebra,
    endomorphism_dg_algebra,
    cone_tensor,
    find_dg_algebra_isomorphism,
)
from .homology import (
    HomologyPresentation,
    homology,
    homology_ring,
    homology_module,
    lattice_homology,
    order_homology_ring,
    semisimple_category_test,
    algebra_semisimplicity,
)
from .radicals import (
    spin,
    is_dg_simple,
    dg_maximal_left_ideals,
    annihilator,
    dg_radicals,
    check_nakayama,
    dg_semisimple_decomposition,
    is_dg_primitive,
)
from .orders import (
    DgOrder,
    is_dg_order,
    dg_lattice_in_module,
    left_order,
    right_order,
    dg_maximal_hull,
    classical_maximal_hull,
)
from .classgroups import (
    Idele,
    FractionalDgIdeal,
    FiniteAbelianGroup,
    ideal_from_idele,
    is_free_rank_one,
    class_group_conductor_square,
    dg_idele_class_group,
    unit_group,
    mv_data,
    mv_pullback_lattice,
    mv_exactness_check,
    homology_class_map,
    verify_idele_ses,
    unit_lifting_mod_radical,
    unit_lifting_cycles_to_homology,
)
from .finitering import FiniteRing, FiniteUnitGroup
from .catalog import build, CATALOG, BuiltExample
from .fileformat import parse_algebra_file, write_algebra_file, detect_blocks

__version__ = "0.1.0"
