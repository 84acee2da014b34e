"""Minimize the sup norm over polynomials with moduli sum 1 on a given spectrum."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .duality import NormConfig, phase_ascent
from .trigpoly import TWO_PI, FrequencySet, TrigPolynomial, moduli_sum, sup_norm

DEFAULT_SEED = 20240101
SEED_ENV = "SIDONLAB_SEED"


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    return int(raw) if raw not in (None, "") else DEFAULT_SEED


@dataclass(frozen=True)
class MinimaxConfig:
    starts: int = 64
    seed: int = DEFAULT_SEED
    grid: int = 2048
    iters: int = 5000
    step: float = 0.05
    patience: int = 25
    refine_points: int = 200
    # Best subgradient starts handed to the convex phase-ascent polish.
    polish: int = 4
    polish_iters: int = 30
    certify_grid: int = 1 << 22


@dataclass
class MinimaxResult:
    polynomial: TrigPolynomial
    value: float
    per_start_values: list[float]
    polished_values: list[float] = field(default_factory=list)
    converged: list[bool] = field(default_factory=list)

    @property
    def sidon_lower(self) -> float:
        return 1.0 / self.value

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "sidon_lower": self.sidon_lower,
            "witness_polynomial": self.polynomial.to_dict(),
            "per_start_values": self.per_start_values,
            "polished_values": self.polished_values,
            "converged": self.converged,
        }


def _refined_max(C, E, offsets, shifts, k, grid):
    # Dense resample of [theta_k - h, theta_k + h] per start, using
    # e^{i lam (theta_k + d)} = E[k] * e^{i lam d}; returns the angle and
    # value of the local maximum.
    vals = (C * E[k]) @ shifts.T
    idx = np.abs(vals).argmax(axis=1)
    rows = np.arange(C.shape[0])
    return TWO_PI * k / grid + offsets[idx], vals[rows, idx]


def subgradient_descent(freqs: FrequencySet, config: MinimaxConfig):
    """Batched multi-start subgradient descent on ``max |f| / sum |c_j|``.

    Each start has its own step, halved after ``patience`` iterations
    without improvement.  Returns best coefficients per start, their
    refined objective values and the final steps.
    """
    lam = freqs.array
    n = lam.size
    S = config.starts
    C = np.empty((S, n), dtype=complex)
    for i in range(S):
        rng = np.random.default_rng(config.seed + i)
        C[i] = rng.dirichlet(np.ones(n)) * np.exp(TWO_PI * 1j * rng.random(n))
    E = np.exp(1j * np.outer(TWO_PI * np.arange(config.grid) / config.grid, lam))
    h = TWO_PI / config.grid
    offsets = np.linspace(-h, h, config.refine_points)
    shifts = np.exp(1j * np.outer(offsets, lam))
    rows = np.arange(S)
    step = np.full(S, config.step)
    best_c, best_v = C.copy(), np.full(S, np.inf)
    stale = np.zeros(S, dtype=int)
    for _ in range(config.iters):
        k = np.abs(C @ E.T).argmax(axis=1)
        theta, f = _refined_max(C, E, offsets, shifts, k, config.grid)
        v = np.abs(f)
        better = v < best_v - 1e-15
        best_c[better], best_v[better] = C[better], v[better]
        stale = np.where(better, 0, stale + 1)
        halve = stale >= config.patience
        step[halve] *= 0.5
        stale[halve] = 0
        # Subgradient of |f(theta)| in conj(c) minus the homogeneity
        # correction v * c/|c| (moduli sum is kept at 1).
        g = (f / np.maximum(v, 1e-300))[:, None] * np.exp(-1j * theta[:, None] * lam[None, :])
        mod = np.abs(C)
        g -= v[:, None] * np.where(mod > 0, C / np.where(mod > 0, mod, 1), 0)
        norm = np.linalg.norm(g, axis=1)
        norm[norm == 0] = 1
        C = C - (step / norm)[:, None] * g
        C /= np.abs(C).sum(axis=1, keepdims=True)
        if np.all(step < 1e-10):
            break
    return best_c, best_v, step


def _lex_key(value: float, coeffs: np.ndarray):
    return (round(value, 12),) + tuple(x for c in coeffs for x in (round(c.real, 12), round(c.imag, 12)))


def minimax_optimize(freqs: FrequencySet, config: MinimaxConfig = MinimaxConfig()) -> MinimaxResult:
    """Best polynomial found on ``freqs`` with moduli sum 1 and its certified sup norm.

    Subgradient starts are ranked, the best ``config.polish`` are refined by
    phase ascent of the dual norm, and every candidate is certified on
    ``config.certify_grid`` points; the reported value is an upper bound on
    the true minimax value.
    """
    base = freqs.normalize()
    if len(base) == 1:
        p = TrigPolynomial(freqs, [1.0])
        return MinimaxResult(p, 1.0, [1.0], [1.0], [True])
    best_c, best_v, step = subgradient_descent(base, config)
    order = sorted(range(config.starts), key=lambda i: _lex_key(best_v[i], best_c[i]))

    candidates = []
    for i in order[: max(config.polish, 1)]:
        c = best_c[i] / np.abs(best_c[i]).sum()
        candidates.append(TrigPolynomial(base, c))
        if config.polish > 0:
            phases = np.where(np.abs(c) > 0, np.exp(-1j * np.angle(c)), 1)
            p, _ = phase_ascent(base, phases, NormConfig(grid=config.grid), config.polish_iters)
            candidates.append(p)

    # Rank on a coarser certificate, then certify the winner finely.
    rank_grid = min(config.certify_grid, 1 << 16)
    scored = []
    for p in candidates:
        p = p.scaled(1.0 / moduli_sum(p))
        scored.append((sup_norm(p, rank_grid).certified_upper, p))
    scored.sort(key=lambda vp: _lex_key(vp[0], vp[1].coefficients))
    best = scored[0][1]
    value = sup_norm(best, config.certify_grid).certified_upper
    return MinimaxResult(
        polynomial=TrigPolynomial(freqs, best.coefficients),
        value=float(value),
        per_start_values=[float(v) for v in best_v],
        polished_values=[float(v) for v, _ in scored],
        converged=[bool(s < config.step * 2.0**-10) for s in step],
    )


def sidon_estimate(freqs: FrequencySet, config: MinimaxConfig = MinimaxConfig()) -> float:
    """Lower bound ``1 / value`` on the Sidon constant."""
    return minimax_optimize(freqs, config).sidon_lower
