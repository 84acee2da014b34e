"""Upper bound sqrt(|Lambda| - 1) for Sidon constants and its averaging chain."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .trigpoly import (
    FrequencySet,
    TrigPolynomial,
    evaluate,
    moduli_sum,
    refined_sup,
    residue_class_sum,
    roots_of_unity_average,
    sup_norm,
)

CHAIN_TOL = 1e-10
SHAPIRO_TOL = 1e-4


def newman_queffelec_bound(freqs: FrequencySet) -> float:
    n = len(freqs)
    if n < 2:
        raise ValueError(f"bound needs at least two frequencies, got {n}")
    return float(np.sqrt(n - 1))


@dataclass(frozen=True)
class ChainReport:
    """Quantities of the averaging chain at one angle ``theta``.

    ``sup_sq >= avg_sq = decomposed >= l1_sq_over`` for every polynomial;
    ``peak`` is the closed form ``(|c_0|+|c_N|)^2 + sum_{0<j<N} |c_j|^2``
    that ``avg_sq`` reaches at this ``theta``.
    """

    theta: float
    sup_sq: float
    avg_sq: float
    decomposed: float
    peak: float
    l1_sq_over: float

    @property
    def ordered(self) -> bool:
        return (
            self.sup_sq >= self.avg_sq - CHAIN_TOL
            and abs(self.avg_sq - self.decomposed) <= CHAIN_TOL
            and self.decomposed >= self.l1_sq_over - CHAIN_TOL
        )

    def to_dict(self) -> dict:
        return {**asdict(self), "ordered": self.ordered}


def chain_check(p: TrigPolynomial) -> ChainReport:
    p = p.normalize()
    N = p.support.frequencies[-1]
    n = len(p.support)
    if N < 1:
        raise ValueError("chain needs a nonconstant polynomial (max frequency >= 1)")
    c = p.coefficients
    c0, cN = c[0], c[-1]
    # Only the class 0 mod N holds two frequencies (0 and N); the average
    # peaks when c_0 and c_N e^{iN theta} line up.
    theta = float(np.angle(c0) - np.angle(cN)) / N if c0 != 0 and cN != 0 else 0.0
    rotated = np.abs(evaluate(p, theta + 2 * np.pi * np.arange(N) / N)) ** 2
    sup_sq = max(refined_sup(p)[0] ** 2, float(rotated.max()))
    mid = np.abs(c[1:-1]) ** 2
    return ChainReport(
        theta=theta,
        sup_sq=sup_sq,
        avg_sq=roots_of_unity_average(p, N, theta),
        decomposed=residue_class_sum(p, N, theta),
        peak=float((abs(c0) + abs(cN)) ** 2 + mid.sum()),
        l1_sq_over=moduli_sum(p) ** 2 / (n - 1),
    )


def shapiro_equality_witness(N: int, p: TrigPolynomial, grid_size: int = 1 << 20) -> bool:
    """Whether ``p`` attains ``||p|| = 1/sqrt(N)``, i.e. ``S({0..N}) = sqrt(N)``."""
    if any(f < 0 or f > N for f in p.support):
        raise ValueError(f"support {p.support.frequencies} not inside [0, {N}]")
    if abs(moduli_sum(p) - 1.0) > 1e-10:
        raise ValueError(f"moduli sum must be 1, got {moduli_sum(p)!r}")
    target = 1.0 / np.sqrt(N)
    cert = sup_norm(p, grid_size)
    return abs(cert.grid_max - target) <= SHAPIRO_TOL and cert.certified_upper <= target + SHAPIRO_TOL
