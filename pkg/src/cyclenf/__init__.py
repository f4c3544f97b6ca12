"""cyclenf: small-divisor normal forms for neighborhoods of cycles of rational curves.

A numpy library for linearizing gluing data around cycles of rational
curves: order-by-order cocycle solving with one small divisor per order,
majorant-series convergence certification, the normal-form pipeline
carrying admissible gluing data to the standard model, and the surrounding
geometric calculators (nine-point normal-bundle constants, mapping-torus
homology, Levi-flat level sets).
"""

__version__ = "0.1.0"

from .cocycle import (
    CocycleRHS,
    CocycleSolution,
    CycleCocycleSolution,
    DomainGeometry,
    calibrate_K,
    correction_terms,
    order_zero_extension,
    reduce_to_vanishing,
    residual_cousin,
    residual_cousin_cycle,
    solve_cousin,
    solve_cousin_cycle,
    solve_order,
)
from .diophantine import (
    TOL_RESONANCE,
    CertificateReport,
    DiophantineAngle,
    UnitCircleConstant,
    certificate_from_cf,
    check_certificate,
    continued_fraction,
    convergents,
    small_divisor,
)
from .errors import (
    BandwidthOverflowError,
    BranchError,
    CyclenfError,
    NotAUnitError,
    NotExtendableError,
    SeriesKindError,
    TorsionError,
)
from .geometry import (
    GluingCheckReport,
    LeviFlatSample,
    MappingTorusClass,
    NinePointConfig,
    NinePointResult,
    OrbitDensityResult,
    h1_mapping_torus,
    hr_gluing_check,
    nine_point_t,
    orbit_density,
    smith_normal_form,
    solve_ninth_point,
    standard_model,
)
from .majorant import (
    DominationReport,
    MajorantSeries,
    check_domination,
    radius_estimate,
    solve_majorant,
)
from .normalform import (
    CycleGluingData,
    NodeGluingData,
    NormalFormResult,
    normalize_chain,
    normalize_cycle,
    normalize_node,
    two_form_factor,
    verify_conjugacy,
)
from .series import (
    ChartMap,
    LaurentPolynomial,
    LaurentSeries2,
    TruncatedSeries1,
    TruncatedSeries2,
    compose_chart,
    exp_laurent2,
    exp_series,
    invert_unit,
    log_unit,
    max_coeff_diff,
    sup_bound,
)
