"""Exact calculus of integral Wu classes for spin and spin^c bundles,
bordism verdicts from characteristic numbers, and finite-group homology."""

from .bordism import (
    ManifoldRecord,
    VerdictReport,
    bounding_verdict,
    check_almost_flat_consistency,
    integral_wu_numbers,
    spinc_index,
    sw_vanishing_report,
    wu_parity_check,
)
from .char_class import (
    GradedPoly,
    Partition,
    coefficient_of,
    multiplicative_class_chern,
    multiplicative_class_pontryagin,
    spin_wu_classes,
    spinc_wu_classes,
    wu_monomial,
)
from .exact_arith import IntMatrix, SNFResult, digit_sum_2, nu2, nu2_factorial, smith_normal_form
from .group_homology import (
    AbelianInvariants,
    FiniteGroup,
    bar_boundary,
    cohomology,
    holonomy_verdict,
    homology,
    named_group,
    recognize_2group,
    schur_multiplier,
    sylow_2,
)
from .series import (
    TruncSeries,
    series_div,
    series_mul,
    series_sqrt,
    spin_normal_series,
    spin_tangential_series,
    spinc_coefficient_series,
    substitute_neg,
    wu_normal_series,
    wu_tangential_series,
)

__version__ = "0.1.0"
