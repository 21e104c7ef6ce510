"""Branched covers of a torus, Prym lattices, and polarization arithmetic."""

from .bundles import (
    Atom,
    BundleExpr,
    StabilityFlags,
    UnsupportedTensor,
    bundle,
    degree,
    end,
    fr,
    h0,
    h0_sym3_twisted_split,
    line,
    moduli_closed_form,
    moduli_count,
    parse_bundle,
    rank,
    slope,
    stability,
    sym3_rank2,
    tensor,
    tschirnhausen_degree,
)
from .covers import (
    HomologyData,
    RibbonSurface,
    build_cover_surface,
    homology,
    kernel_sublattice,
    prym_lattice,
    prym_type,
    pushforward_cokernel,
    raw_prym_divisors,
)
from .hurwitz import (
    GuardExceeded,
    HurwitzTuple,
    TupleClass,
    ValidationReport,
    braid_orbits,
    enumerate_simple_classes,
    genus_of_cover,
    monodromy_group_order,
    sample_tuple,
    validate_tuple,
)
from .periods import (
    PeriodMatrix,
    RawPeriod,
    dual_period,
    gamma_action,
    hodge_riemann_bilinear,
    in_gamma_d,
    normalize,
    random_gamma_d,
    riemann_check,
    sample_siegel,
)
from .skewforms import (
    PolarizationType,
    SkewLattice,
    alternating_divisors,
    check_duality_relations,
    dual_form,
    normalize_smallest_divisor,
    standard_gram,
    symplectic_basis,
)

__version__ = "0.1.0"
