"""Numerics for Sidon constants of small frequency sets on the circle."""

from .bounds import chain_check, newman_queffelec_bound, shapiro_equality_witness
from .duality import (
    DiscreteMeasure,
    DualFunctional,
    NormBracket,
    apply,
    lift_to_roots,
    norm_bracket,
    real_unconditional_constant,
    sidon_constant_bracket,
    verify_representation,
)
from .extremal_family import critical_points, family_coefficients, phi
from .minimax import MinimaxConfig, minimax_optimize, sidon_estimate
from .trigpoly import FrequencySet, TrigPolynomial, evaluate, moduli_sum, sup_norm

__version__ = "0.1.0"
