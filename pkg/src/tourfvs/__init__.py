"""Weighted feedback vertex set in tournaments: a 7/3-approximation by
iterative LP rounding plus layering, with exact oracles for auditing."""

from .approx import (
    FvsResult,
    LayerDecomposition,
    cdz_t5free_fvs,
    iterative_rounding,
    layers_fvs,
    seven_thirds_fvs,
    three_approx,
    verify_fvs,
)
from .core import Tournament, paley_tournament, random_tournament
from .oracle import exact_min_fvs, max_fractional_packing

__version__ = "0.1.0"
