"""chaoslab: exact computation with fractional Rademacher chaos.

Construct chaos systems over index sets, compute their exact laws and
norms in symmetric function spaces, measure combinatorial densities, and
certify the quantitative inequalities tying the two together.
"""

from .distribution import StepDistribution
from .errors import (
    ChaosLabError,
    DegenerateFitError,
    EmptyInputError,
    InvalidArgumentError,
    NumericFailureError,
    ResolutionError,
    ResourceLimitError,
)
from .walsh import (
    DyadicStep,
    IndexSet,
    MultiIndex,
    SignFunction,
    chaos_monomial,
    chaos_sum,
    distribution_exact,
    distribution_mc,
    evaluate_dyadic,
    rademacher,
    randomize_signs,
    unit_coefficients,
)
from .symspace import (
    ConcaveWeight,
    OrliczFunction,
    RearrangementStep,
    SpaceSpec,
    coincidence_check,
    decreasing_rearrangement,
    fubini_orlicz_check,
    fundamental_function,
    luxemburg_norm,
    norm,
)
from .combdim import (
    BlockChoice,
    DensityProfile,
    density_certificates,
    density_count,
    dump_index_set,
    estimate_dimension,
    gen_sum_set,
    gen_triangle,
    load_index_set,
    max_density,
)
from .chaos import (
    MomentTable,
    NormalizedSum,
    RudAverage,
    StarCounts,
    VerificationParams,
    averaged_sup_growth,
    blei_bound_check,
    clt_criteria,
    clt_sharp,
    clt_star,
    khintchine_check,
    lower_bound_check,
    moment_table,
    normalized_sum_cdf,
    rud_average,
    sign_concentration_check,
)
from .report import CertificateReport, Check, RunManifest, write_report

__version__ = "0.1.0"

__all__ = [
    "BlockChoice",
    "CertificateReport",
    "ChaosLabError",
    "Check",
    "ConcaveWeight",
    "DegenerateFitError",
    "DensityProfile",
    "DyadicStep",
    "EmptyInputError",
    "IndexSet",
    "InvalidArgumentError",
    "MomentTable",
    "MultiIndex",
    "NormalizedSum",
    "NumericFailureError",
    "OrliczFunction",
    "RearrangementStep",
    "ResolutionError",
    "ResourceLimitError",
    "RudAverage",
    "RunManifest",
    "SignFunction",
    "SpaceSpec",
    "StarCounts",
    "StepDistribution",
    "VerificationParams",
    "averaged_sup_growth",
    "blei_bound_check",
    "chaos_monomial",
    "chaos_sum",
    "clt_criteria",
    "clt_sharp",
    "clt_star",
    "coincidence_check",
    "decreasing_rearrangement",
    "density_certificates",
    "density_count",
    "distribution_exact",
    "distribution_mc",
    "dump_index_set",
    "estimate_dimension",
    "evaluate_dyadic",
    "fubini_orlicz_check",
    "fundamental_function",
    "gen_sum_set",
    "gen_triangle",
    "khintchine_check",
    "load_index_set",
    "lower_bound_check",
    "luxemburg_norm",
    "max_density",
    "moment_table",
    "norm",
    "normalized_sum_cdf",
    "rademacher",
    "randomize_signs",
    "rud_average",
    "sign_concentration_check",
    "unit_coefficients",
    "write_report",
]
