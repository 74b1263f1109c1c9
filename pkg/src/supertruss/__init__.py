"""Exact verification of supercotruss presentations, their points and Yang-Baxter maps."""

__version__ = "0.1.0"

from .errors import (
    AmbientMismatch,
    BudgetExceeded,
    GrassmannRelationViolation,
    InfiniteBase,
    InfinitePointSet,
    InvertibilityViolation,
    MissingCounit,
    MissingMap,
    NotGroupLike,
    NotInvertible,
    NotMultiplicative,
    ParityViolation,
    StxError,
    SupertrussError,
    WellDefinednessError,
)
from .superalg import (
    EVEN,
    GF,
    ODD,
    QQ,
    Field,
    Generator,
    GeneratorSet,
    GrassmannAlgebra,
    GrassmannElement,
    Monomial,
    PrimeField,
    SuperPoly,
    field_from_spec,
    grassmann_inverse,
)
from .tensor import TensorElement, collapse, koszul_permute, m135, m246, mult_collapse, outer, sigma13
from .homs import GenHom, TensorTarget, apply, check_well_defined, compose, identity, is_well_defined, tensor_hom
from .cotruss import (
    BUILTINS,
    AxiomReport,
    CotrussPresentation,
    builtin,
    check_axioms,
    check_counit,
    check_cozero,
    check_morphism,
    reduce,
    sign_mutations,
    trussify_hopf,
)
from .points import (
    Point,
    PointTable,
    TestAlgebraHom,
    brace_add,
    brace_neg,
    check_truss_at_points,
    enumerate_points,
    point_heap,
    point_mul,
    pushforward,
    sample_point,
    unit_point,
    zero_point,
)
from .ybe import YBMap, check_braid, check_components, check_nondegenerate, make_map, reduced_map

__all__ = [name for name in dir() if not name.startswith("_")]
