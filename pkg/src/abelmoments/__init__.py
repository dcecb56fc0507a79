"""Power moments of the number of abelian groups of order n.

Exact sieves for prime-independent multiplicative functions, the Dirichlet
convolution reduction f = d((1, l, ..., l); .) * v, Euler-product constants
with tail bounds, and empirical remainder measurements.
"""
__version__ = "0.1.0"

from .errors import (
    ArtifactError, CapacityError, IllConditionedFit, InapplicableTheorem, MalformedProfile,
    NonUnitSeries, PoleAtOne, ProfileTooShort, ToleranceUnreachable, TruncationTooShort,
    UnknownFunction, UnsupportedDomain,
)
from .partitions import partition_bound_check, partition_table
from .profiles import PrimePowerProfile, TheoremParams, detect_params, eval_multiplicative, registry
from .sieve import CheckpointSeries, ValueTable, sieve_values, spf_sieve, summatory
from .dirichlet import (
    DivisorSignature, VCoefficients, convolution_identity_check, dirichlet_convolve,
    divisor_signature_values, expand_v, mu_ell_local, mu_local, v_from_formula, v_from_series,
)
from .zeta import EulerProductResult, a_constants, zeta_real
from .euler import euler_product, euler_product_direct, local_constant_series, zeta_factorize
from .asymptotics import (
    delta_measure, exact_divisor_sum, fit_main_term, reference_exponents,
    three_term_abelian_report,
)
