"""Counting polynomials for algebraic systems and counting sequences for differential systems."""

from .counting_ring import (
    ALEPH,
    INF,
    CountingPolynomial,
    CountingSequence,
    Decision,
    DifferentialCountingPolynomial,
    ExponentPolynomial,
    decide_sequences,
    decide_sets,
    estimate_witness,
)
from .diffalg import DifferentialRing, DifferentialSystem, OrderlyRanking, truncation_system
from .diffcount import (
    SimpleDifferentialSystem,
    Stratum,
    counting_sequence_simple,
    crosscheck_truncation,
    stratified_counting,
)
from .dimension import LeaderSet, dimension_function, dimension_polynomial
from .polyring import Polynomial, Ranking, RationalFunction, Variable
from .sigma_systems import SigmaSystem, SimpleSystem, count_simple, validate_simple
from .textio import load, parse_differential_system, parse_sigma_system
from .thomas import count_constructible, decompose

__version__ = "0.1.0"

__all__ = [
    "ALEPH",
    "INF",
    "CountingPolynomial",
    "CountingSequence",
    "Decision",
    "DifferentialCountingPolynomial",
    "ExponentPolynomial",
    "decide_sequences",
    "decide_sets",
    "estimate_witness",
    "DifferentialRing",
    "DifferentialSystem",
    "OrderlyRanking",
    "truncation_system",
    "SimpleDifferentialSystem",
    "Stratum",
    "counting_sequence_simple",
    "crosscheck_truncation",
    "stratified_counting",
    "LeaderSet",
    "dimension_function",
    "dimension_polynomial",
    "Polynomial",
    "Ranking",
    "RationalFunction",
    "Variable",
    "SigmaSystem",
    "SimpleSystem",
    "count_simple",
    "validate_simple",
    "load",
    "parse_differential_system",
    "parse_sigma_system",
    "count_constructible",
    "decompose",
]
