"""Conditional plausibility spaces, independence and Bayesian networks over plausibility domains."""
__version__ = "0.1.0"

from .core import (AxiomReport, Cps, DomainError, MalformedCps, MalformedMeasure, PlausibilityError,
                   PreconditionError, UndefinedConditional, check_algebraic, check_cps_axioms, check_cpl5,
                   check_standard)
from .domains import KINDS, make_domain
from .conditioning import (binary_worlds, extend, possibility_measure, probability_measure, probability_set,
                           random_measure, ranking_function)
from .independence import check_semigraphoid, indep_events, indep_rv, noninteract_events, noninteract_rv
from .dag import Dag, d_separated
from .bayesnet import (QuantitativeBN, check_representable, compatible, construct_bn, dsep_counterexample,
                       extract_cpts, joint, random_bn, reconstruct)

__all__ = [
    "__version__", "AxiomReport", "Cps", "DomainError", "MalformedCps", "MalformedMeasure", "PlausibilityError",
    "PreconditionError", "UndefinedConditional", "check_algebraic", "check_cps_axioms", "check_cpl5",
    "check_standard", "KINDS", "make_domain", "binary_worlds", "extend", "possibility_measure",
    "probability_measure", "probability_set", "random_measure", "ranking_function", "check_semigraphoid",
    "indep_events", "indep_rv", "noninteract_events", "noninteract_rv", "Dag", "d_separated", "QuantitativeBN",
    "check_representable", "compatible", "construct_bn", "dsep_counterexample", "extract_cpts", "joint",
    "random_bn", "reconstruct",
]
