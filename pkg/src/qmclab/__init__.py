"""Error bounds for one-dimensional quasi-Monte Carlo integration.

Discrepancy of point sets, variation functionals of sampled integrands, and the
bounds that tie the two to the integration error.
"""

__version__ = "0.1.0"

from .bounds import BoundReport, bound_report, empirical_error, qmc_estimate
from .discrepancy import extreme_discrepancy, star_discrepancy
from .functions import SampledFunction, corpus, parse_function, reference_integral
from .sequences import PointSet, midpoint_set, random_uniform, van_der_corput, van_der_corput_set
from .variation import modulus_of_variation, nu_profile, total_p_variation

__all__ = [
    "BoundReport",
    "PointSet",
    "SampledFunction",
    "bound_report",
    "corpus",
    "empirical_error",
    "extreme_discrepancy",
    "midpoint_set",
    "modulus_of_variation",
    "nu_profile",
    "parse_function",
    "qmc_estimate",
    "random_uniform",
    "reference_integral",
    "star_discrepancy",
    "total_p_variation",
    "van_der_corput",
    "van_der_corput_set",
]
