"""Exact window and summand computations for quotients of quasi-symmetric representations."""

from __future__ import annotations

from .bwb import BWBPresentation, BWBTerm, bwb_presentation, count_admissible
from .polytope import WeightPolytope
from .root_datum import RootDatum, gl_datum, torus_datum
from .sod import (
    LambdaData,
    QuadraticNorm,
    SODConfig,
    Window,
    check_full_faithfulness,
    check_semiorthogonality,
    enumerate_summands,
    lambda_data,
    locate,
    window,
)
from .weights import SignedWeightMultiset

__all__ = [
    "BWBPresentation",
    "BWBTerm",
    "LambdaData",
    "QuadraticNorm",
    "RootDatum",
    "SODConfig",
    "SignedWeightMultiset",
    "WeightPolytope",
    "Window",
    "bwb_presentation",
    "check_full_faithfulness",
    "check_semiorthogonality",
    "count_admissible",
    "enumerate_summands",
    "gl_datum",
    "lambda_data",
    "locate",
    "torus_datum",
    "window",
]
