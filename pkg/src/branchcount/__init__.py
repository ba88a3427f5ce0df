"""Microstate counting on discretised parameter spaces.

Two ways of splitting a state into equally weighted branches are provided,
equal-volume cells and equal-amplitude cells, together with exact interval
probabilities for macrostates and cross-ensemble consistency checks.
"""

from .field import WaveField, born_quantity, inner_product, restrict, support, weight
from .hilbert import (
    EnsembleDecomposition,
    Projector,
    appendix_interval,
    appendix_theorem_check,
    classify_vector,
    equiamplitude_decompose,
)
from .iprob import IntervalProb, intersect_all
from .partitioning import (
    EQUIAMPLITUDE,
    EQUIVOLUME,
    Ensemble,
    equiamplitude_partition,
    equivolume_partition,
    validate,
)
from .rules import (
    RuleVariant,
    Tag,
    born_containment_check,
    classify_cell,
    consistency_check,
    generalized_additivity_check,
    graham_frequency,
    interval_probability,
)
from .space import Cell, ParameterSpace, Region, lambda_measure

__version__ = "0.1.0"
