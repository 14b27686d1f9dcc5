"""Lower previsions on finite partitions: consistency checks, natural
extension, Jensen-type and tail bounds, and an exact-envelope oracle."""

from .consistency import (
    ConsistencyReport,
    CredalPolytope,
    SublinearSum,
    check_2coherence,
    check_asl,
    check_coherence,
    natural_extension,
    sublinear_upper_sum,
    two_coherence_pair,
    upper_extension,
)
from .core import (
    Assessment,
    ConditionalGamble,
    Entry,
    Event,
    Gamble,
    HoleBracket,
    Partition,
    apply_function,
    bounds_of,
    conjugate_entry,
    hole_bracket,
    restrict,
)
from .document import AssessmentDocument, parse_document
from .expr import GambleExpression, parse_expression
from .jensen import (
    ImprovedJensenReport,
    JensenReport,
    improved_jensen,
    jensen_base,
    jensen_bounds,
    jensen_precise,
    lyapunov,
    moment_inference,
)
from .oracle import certify, exact_envelope
from .tailbounds import (
    ComparisonReport,
    TailBoundReport,
    VarianceReport,
    cantelli_coherent,
    cantelli_imprecise,
    cantelli_precise,
    cauchy_like_check,
    chebyshev_like,
    compare_markov_cantelli,
    conjugate_cantelli,
    markov_lower,
    markov_upper,
    variances,
)

__version__ = "0.1.0"
