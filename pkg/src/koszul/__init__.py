"""Exact chain-level Koszul duality for augmented dg algebras.

Everything is computed on explicit degree windows with exact scalars
(rationals or a prime field); cohomology is only ever reported on degrees
where the window makes it trustworthy.
"""

__version__ = "0.1.0"

from .exactla import (  # noqa: F401
    Field, QQ, Window, SparseMatrix, CochainComplexSlice, CohomologyReport,
    EngineError, RefusalError, StructuralError, InvalidComplexError,
)
from .dga import (  # noqa: F401
    DgAlgebraSpec, FiniteDga, DgaMap, ValidationReport,
    algebra_slice, finite_dga_from_tables, base_field_algebra, square_zero,
    truncated_polynomial, free_assoc, opposite, tensor_algebra,
    full_cohomology, cohomology_ring, connective_cover,
)
from .bar import (  # noqa: F401
    ConvergenceError, weight_bound, bar_complex, bar_homology_dims,
    two_sided_bar, derived_tensor_dims,
)
from .dual import (  # noqa: F401
    koszul_dual_slice, dual_cohomology_dims, dual_cohomology_ring,
    check_power_generation, bidual_cohomology,
)
from .dgmod import (  # noqa: F401
    DgModuleSpec, trivial_module, zero_module, regular_module,
    laurent_module, koszul_complex, module_slice, validate_module,
    verify_free_filtration, strict_tensor, rhom_from_k_dims,
)
from .extres import (  # noqa: F401
    ResolutionState, minimal_resolution, ext_dims,
)
from .artin import (  # noqa: F401
    interval_algebra, k_slice, unit_inclusion, augmentation_map, path_object,
    PathObject, homotopy_fiber_product, ArtinReport, is_artin, SquareVerdict,
    verify_square, small_extension_square, CompositionSeries,
    radical_filtration, TowerStep, TowerSpec, TowerVerdict, verify_tower,
)
