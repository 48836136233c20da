"""Exact positivity certificates for polynomials on intervals, strips and related sets."""

from .errors import (
    ArityError, CapabilityError, CertificateError, ConstructionError, NegativeOnSetError,
    NotDivisibleError, ParseError, PosicertError, PreconditionError,
)
from .poly import Poly, compose, exact_divide, parse_poly, substitute
from .roots import (
    IntervalUnion, IsolatingInterval, decide_nonneg_on_U, factor_low_degree, isolate_roots,
    square_free_decompose, sturm_count,
)
from .certificate import (
    MODULE, PREORDERING, Certificate, GeneratorSet, SOS, Verdict, expand, multiply,
    random_certificate, to_preordering, verify,
)
from .saturate import (
    bcj_gap_certificate, certify_nonneg_1d, lemma1_identities, module_form_single_interval,
    natural_generators,
)

__version__ = "0.1.0"
