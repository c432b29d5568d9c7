"""Exact computational tools for Frobenius singularities of local rings
R = (F_p[x_1..x_n]/J) localized at the origin: Groebner engine, module
algebra, closure operations, and singularity verdicts with certificates.
"""

from .ring import (
    Block,
    DegreeCapExceeded,
    GREVLEX,
    Grevlex,
    LEX,
    Lex,
    ParseError,
    Polynomial,
    Ring,
    format_poly,
    parse_poly,
)
from .groebner import (
    Ideal,
    colon,
    colon_element,
    eliminate,
    endo_preimage,
    frobenius_power,
    intersect,
    krull_dimension,
    normal_form,
    saturate,
    standard_monomials,
    vs_dimension,
)
from .modules import (
    FpModule,
    NotFiniteAtOrigin,
    Submodule,
    annihilator,
    ext_module,
    free_resolution,
    frobenius_pushforward,
    koszul_homology_lengths,
    length,
    local_length_at_m,
    minimize_presentation,
    quotient_module,
    syzygies,
)
from .localring import (
    AssumptionMissing,
    LocalRing,
    RetriesExhausted,
    depth_and_codim_profile,
    is_d_sequence,
    is_filter_regular,
    is_parameter_element,
    is_system_of_parameters,
    local_dimension,
    local_membership,
    random_filter_regular_sop,
)
from .closure import (
    ClosureResult,
    PurityVerdict,
    fedder_is_f_pure,
    frobenius_closure,
    frobenius_closure_bruteforce,
    is_frobenius_closed,
    limit_closure,
    unmixed_component_approx,
)
from .verdicts import (
    CohomologyProfile,
    FInjectivityVerdict,
    NotReduced,
    buchsbaum_evidence,
    cohomology_profile,
    f_injective_duality,
    f_injective_ideal_evidence,
    finitedim_check,
    is_standard_sequence,
    parameter_f_closed_sampler,
    reducedness_screen,
)

__version__ = "0.1.0"
