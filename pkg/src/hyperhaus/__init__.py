"""Hausdorff and second-order Hausdorff distances between continua on model
surfaces, finite hyper-families, and numerical checks for linear Anosov maps."""

from .budget import ErrorBudget
from .continua import PolylineArc, SampledContinuum, diameter, length, resample, subarc
from .dynamics import CAT_MAP, PillowcaseSystem, PrecisionError, ToralAutomorphism, get_system, iterate_arc
from .hyper import FiniteHyperFamily, marked_hypercircle, stable_family, unstable_family
from .metrics import (
    directed_hausdorff,
    enumerate_iA,
    hausdorff,
    hyper_distance,
    second_order_distance,
    subarc_infimum,
)
from .spaces import CIRCLE, INTERVAL, PILLOWCASE, SQUARE, TORUS, ModelSpace, Point, UsageError, get_space

__version__ = "0.1.0"
