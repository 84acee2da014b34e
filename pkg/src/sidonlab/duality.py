"""Functionals on C_Lambda(T), discrete measures representing them, and norm brackets.

A functional ``l`` is fixed by its values ``l(e_j)`` on characters
``e_j(z) = z**j``.  Any measure ``sum_k b_k delta_{z_k}`` with matching
moments bounds ``||l|| <= sum_k |b_k|``; any polynomial ``p`` bounds
``||l|| >= |l(p)| / ||p||``.  Both sides are computed here.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional, Sequence

import cvxpy as cp
import numpy as np

from .bounds import newman_queffelec_bound
from .trigpoly import TWO_PI, FrequencySet, TrigPolynomial, moduli_sum, refined_sup, sup_norm


class NormComputationError(RuntimeError):
    """A convex program did not reach an optimal status."""


class InconsistentFunctional(ValueError):
    """Two frequencies in one residue class carry different values."""

    def __init__(self, j: int, k: int, a: complex, b: complex, N: int):
        self.pair = (j, k)
        super().__init__(f"l(e_{j}) = {a} but l(e_{k}) = {b} with {j} = {k} mod {N}")


@dataclass(frozen=True)
class DualFunctional:
    support: FrequencySet
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex).reshape(-1)
        if vals.shape[0] != len(self.support):
            raise ValueError(f"{vals.shape[0]} values for {len(self.support)} frequencies")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def of(cls, freqs: Iterable[int], values: Sequence[complex]) -> "DualFunctional":
        return cls(FrequencySet(tuple(freqs)), np.asarray(values, dtype=complex))

    def is_unimodular(self, tol: float = 1e-12) -> bool:
        return bool(np.all(np.abs(np.abs(self.values) - 1) <= tol))

    def is_real_signed(self) -> bool:
        return bool(np.all((self.values == 1) | (self.values == -1)))

    def value_at(self, j: int) -> complex:
        return complex(self.values[self.support.frequencies.index(j)])

    def to_dict(self) -> dict:
        return {
            "frequencies": list(self.support.frequencies),
            "values": [[float(v.real), float(v.imag)] for v in self.values],
        }


@dataclass(frozen=True)
class DiscreteMeasure:
    """Weights ``b_k`` on the points ``exp(2 pi i k / modulus_N)``."""

    modulus_N: int
    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=complex).reshape(-1)
        if w.shape[0] != self.modulus_N:
            raise ValueError(f"{w.shape[0]} weights for modulus {self.modulus_N}")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def angles(self) -> np.ndarray:
        return TWO_PI * np.arange(self.modulus_N) / self.modulus_N

    @property
    def total_variation(self) -> float:
        return float(np.abs(self.weights).sum())

    def moments(self, freqs: Iterable[int]) -> np.ndarray:
        """``sum_k b_k e^{2 pi i j k / N}`` for each frequency ``j``."""
        j = np.asarray(list(freqs), dtype=float)
        return np.exp(1j * np.outer(j, self.angles)) @ self.weights

    def to_dict(self) -> dict:
        return {
            "N": self.modulus_N,
            "weights": [[float(b.real), float(b.imag)] for b in self.weights],
            "moduli": [float(abs(b)) for b in self.weights],
            "total_variation": self.total_variation,
        }


@dataclass
class NormBracket:
    lower: float
    upper: float
    witness: Optional[TrigPolynomial] = None
    measure: Optional[DiscreteMeasure] = None
    method: str = ""
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.lower > self.upper + 1e-9:
            raise NormComputationError(f"bracket inverted: lower {self.lower} > upper {self.upper}")

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, value: float, tol: float = 0.0) -> bool:
        return self.lower - tol <= value <= self.upper + tol

    def to_dict(self) -> dict:
        out = {"lower": self.lower, "upper": self.upper, "width": self.width, "method": self.method}
        if self.witness is not None:
            out["witness"] = self.witness.to_dict()
        out.update(self.details)
        return out


@dataclass(frozen=True)
class NormConfig:
    grid: int = 720
    certify_grid: int = 1 << 20
    solver: str = "CLARABEL"


def apply(l: DualFunctional, p: TrigPolynomial) -> complex:
    index = {j: i for i, j in enumerate(l.support.frequencies)}
    try:
        vals = np.array([l.values[index[j]] for j in p.support.frequencies])
    except KeyError as exc:
        raise ValueError(f"frequency {exc.args[0]} of p is outside the functional's support") from None
    return complex(np.dot(p.coefficients, vals))


def class_values(l: DualFunctional, N: int) -> np.ndarray:
    """Value of ``l`` on each residue class mod ``N`` (0 for absent classes)."""
    out = np.zeros(N, dtype=complex)
    owner: dict[int, int] = {}
    for j, v in zip(l.support.frequencies, l.values):
        r = j % N
        if r in owner:
            k = owner[r]
            if l.value_at(k) != v:
                raise InconsistentFunctional(k, j, l.value_at(k), v, N)
        else:
            owner[r] = j
            out[r] = v
    return out


def lift_to_roots(l: DualFunctional, N: int) -> DiscreteMeasure:
    """The explicit measure on the N-th roots of unity with moments ``l``."""
    if N <= 0:
        raise ValueError("N must be positive")
    v = class_values(l, N)
    r = np.arange(N)
    kernel = np.exp(-2j * np.pi * np.outer(r, r) / N)
    return DiscreteMeasure(N, kernel @ v / N)


def verify_representation(mu: DiscreteMeasure, l: DualFunctional, tol: float = 1e-10) -> bool:
    return bool(np.all(np.abs(mu.moments(l.support.frequencies) - l.values) <= tol))


def aligned_phases(mu: DiscreteMeasure) -> np.ndarray:
    """Unimodular ``u_k`` with ``u_k b_k = |b_k|`` (1 where ``b_k = 0``)."""
    b = mu.weights
    mod = np.abs(b)
    u = np.ones_like(b)
    nz = mod > 0
    # exp(-i arg) rather than conj/abs, which overflows for subnormal weights
    u[nz] = np.exp(-1j * np.angle(b[nz]))
    return u


# --- convex programs on an equispaced circle grid -------------------------


@lru_cache(maxsize=32)
def _measure_problem(freqs: tuple[int, ...], grid: int):
    theta = TWO_PI * np.arange(grid) / grid
    A = np.exp(1j * np.outer(np.asarray(freqs, dtype=float), theta))
    target = cp.Parameter(len(freqs), complex=True)
    b = cp.Variable(grid, complex=True)
    prob = cp.Problem(cp.Minimize(cp.sum(cp.abs(b))), [A @ b == target])
    return prob, target, b, A


@lru_cache(maxsize=32)
def _norm_problem(freqs: tuple[int, ...], grid: int):
    theta = TWO_PI * np.arange(grid) / grid
    E = np.exp(1j * np.outer(theta, np.asarray(freqs, dtype=float)))
    functional = cp.Parameter(len(freqs), complex=True)
    c = cp.Variable(len(freqs), complex=True)
    prob = cp.Problem(cp.Maximize(cp.real(functional @ c)), [cp.abs(E @ c) <= 1])
    return prob, functional, c


def _solve(prob: cp.Problem, solver: str, what: str):
    try:
        with warnings.catch_warnings():
            # OPTIMAL_INACCURATE is accepted: both bounds are re-certified.
            warnings.simplefilter("ignore", UserWarning)
            prob.solve(solver=solver)
    except cp.error.SolverError as exc:
        raise NormComputationError(f"{what}: solver failed ({exc})") from exc
    if prob.status not in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE):
        raise NormComputationError(f"{what}: status {prob.status}")


def measure_upper_bound(l: DualFunctional, config: NormConfig = NormConfig()) -> tuple[float, DiscreteMeasure]:
    """Minimal total variation of a grid measure reproducing ``l``.

    The solver's moment residual ``r`` is added back as ``sum_j |r_j|``
    (a functional with values ``r_j`` has norm at most that), so the bound
    is rigorous even at finite solver accuracy.
    """
    prob, target, b, A = _measure_problem(l.support.frequencies, config.grid)
    target.value = np.asarray(l.values)
    _solve(prob, config.solver, "measure program")
    mu = DiscreteMeasure(config.grid, np.asarray(b.value))
    residual = np.asarray(l.values) - A @ mu.weights
    return mu.total_variation + float(np.abs(residual).sum()), mu


def norm_program(l: DualFunctional, config: NormConfig = NormConfig()) -> TrigPolynomial:
    """Polynomial maximizing ``Re l(p)`` subject to ``|p| <= 1`` on the grid."""
    prob, functional, c = _norm_problem(l.support.frequencies, config.grid)
    functional.value = np.asarray(l.values)
    _solve(prob, config.solver, "norm program")
    return TrigPolynomial(l.support, np.asarray(c.value))


def ratio_lower(l: DualFunctional, p: TrigPolynomial, certify_grid: int = 1 << 20) -> float:
    """``|l(p)| / certified ||p||``, a rigorous lower bound on ``||l||``."""
    cert = sup_norm(p, certify_grid)
    if cert.certified_upper == 0:
        return 0.0
    return abs(apply(l, p)) / cert.certified_upper


def norm_bracket(
    l: DualFunctional,
    config: NormConfig = NormConfig(),
    candidates: Sequence[TrigPolynomial] = (),
) -> NormBracket:
    """Bracket ``||l||`` on ``C_Lambda(T)`` between a polynomial and a measure.

    ``candidates`` are extra polynomials tried for the lower bound next to
    the grid optimum.  When ``l`` is consistent modulo ``max - min`` of its
    support, the explicit lifting also competes for the upper bound.
    """
    freqs = l.support.frequencies
    if len(freqs) == 1:
        # A single character: ||l|| = |l(e_j)|, attained by e_j and a Dirac mass.
        v = abs(complex(l.values[0]))
        mu = DiscreteMeasure(1, [l.values[0]])
        return NormBracket(v, v, TrigPolynomial(l.support, [1.0]), mu, method="single-character")
    upper, mu = measure_upper_bound(l, config)
    method = "measure-program"
    N = freqs[-1] - freqs[0]
    shifted = DualFunctional(l.support.normalize(), l.values)
    try:
        lifted = lift_to_roots(shifted, N)
    except InconsistentFunctional:
        lifted = None
    if lifted is not None and lifted.total_variation < upper:
        # Rotation by the frequency shift leaves total variation unchanged.
        upper, mu, method = lifted.total_variation, lifted, "roots-of-unity lifting"

    grid_opt = norm_program(l, config)
    best_p, best = grid_opt, ratio_lower(l, grid_opt, config.certify_grid)
    for p in candidates:
        val = ratio_lower(l, p, config.certify_grid)
        if val > best:
            best_p, best = p, val
    return NormBracket(
        lower=best,
        upper=upper,
        witness=best_p,
        measure=mu,
        method=method,
        details={"grid": config.grid, "grid_value": float(np.real(apply(l, grid_opt)))},
    )


# --- sign patterns and the real unconditional constant --------------------


def sign_orbit(freqs: FrequencySet, signs: Sequence[int]) -> list[tuple[int, ...]]:
    """Images of a sign pattern under ``l -> -l`` and ``l(e_j) -> (-1)^j l(e_j)``."""
    s = np.asarray(signs, dtype=int)
    twist = np.where(np.asarray(freqs.frequencies) % 2 == 0, 1, -1)
    return sorted({tuple(int(x) for x in v) for v in (s, -s, twist * s, -twist * s)})


def canonical_sign_patterns(freqs: FrequencySet) -> list[tuple[int, ...]]:
    """One representative (the lexicographically largest) per orbit."""
    reps = set()
    for signs in itertools.product((1, -1), repeat=len(freqs)):
        reps.add(max(sign_orbit(freqs, signs)))
    return sorted(reps, reverse=True)


def reduced_patterns_0123() -> list[tuple[int, ...]]:
    """Sign patterns on {0,1,2,3} with ``l(e_0) = l(e_3) = 1``."""
    return [(1, a, b, 1) for a in (1, -1) for b in (1, -1)]


def _flagship_candidates() -> list[TrigPolynomial]:
    from .extremal_family import family_coefficients

    base = family_coefficients(np.pi / 2).coefficients.real
    twist = np.array([1, -1, 1, -1])
    support = FrequencySet((0, 1, 2, 3))
    return [TrigPolynomial(support, v) for v in (base, twist * base, base[::-1], (twist * base)[::-1])]


def real_unconditional_constant(freqs: FrequencySet, config: NormConfig = NormConfig()) -> NormBracket:
    """Supremum of ``||l||`` over ``l(e_j)`` in ``{-1, +1}``."""
    if len(freqs) > 16:
        raise ValueError("sign-pattern enumeration is limited to 16 frequencies")
    base = freqs.normalize()
    if base.frequencies == (0, 1, 2, 3):
        return _unconditional_0123(freqs)
    best_lower, best_upper, best = 0.0, 0.0, None
    per_pattern = {}
    for signs in canonical_sign_patterns(base):
        br = norm_bracket(DualFunctional(base, np.asarray(signs, dtype=complex)), config)
        per_pattern[",".join(map(str, signs))] = [br.lower, br.upper]
        best_upper = max(best_upper, br.upper)
        if br.lower > best_lower:
            best_lower, best = br.lower, br
    return NormBracket(
        lower=best_lower,
        upper=best_upper,
        witness=None if best is None else best.witness,
        method="sign-pattern enumeration",
        details={"patterns": per_pattern},
    )


def _unconditional_0123(freqs: FrequencySet) -> NormBracket:
    # Reduce to l(e_0) = l(e_3) = 1, lift to the cube roots of unity for the
    # upper bound, and use the aligned flagship polynomial for the lower bound.
    support = FrequencySet((0, 1, 2, 3))
    candidates = _flagship_candidates()
    lower, upper, witness = 0.0, 0.0, None
    per_pattern = {}
    for signs in reduced_patterns_0123():
        l = DualFunctional(support, np.asarray(signs, dtype=complex))
        tv = lift_to_roots(l, 3).total_variation
        lo = 0.0
        for p in candidates:
            val = abs(apply(l, p)) / refined_sup(p)[0]
            if val > lo:
                lo, best_p = val, p
        per_pattern[",".join(map(str, signs))] = {"lifting_total_variation": tv, "lower": lo}
        upper = max(upper, tv)
        if lo > lower:
            lower, witness = lo, best_p
    if freqs.frequencies[0] != 0:
        witness = TrigPolynomial(freqs, witness.coefficients)
    return NormBracket(lower, upper, witness, method="cube-root lifting", details={"patterns": per_pattern})


# --- Sidon constant ------------------------------------------------------


def phase_ascent(
    support: FrequencySet,
    phases: np.ndarray,
    config: NormConfig = NormConfig(),
    iters: int = 30,
    tol: float = 1e-8,
) -> tuple[TrigPolynomial, list[float]]:
    """Local ascent of ``||l_u||`` over unimodular ``u``.

    Each round solves the grid norm program for ``l(e_j) = u_j`` and then
    realigns ``u_j = conj(c_j)/|c_j|`` to the optimizer's phases, which can
    only increase ``sum |c_j| / max_grid |p|``.  Returns the last
    polynomial, scaled to moduli sum 1, and the grid ratios seen.
    """
    u = np.asarray(phases, dtype=complex)
    history: list[float] = []
    best = None
    for _ in range(iters):
        p = norm_program(DualFunctional(support, u), config)
        c = np.asarray(p.coefficients)
        mod = np.abs(c)
        history.append(float(mod.sum()))
        if best is None or history[-1] > max(history[:-1]):
            best = p
        u = np.where(mod > 0, np.exp(-1j * np.angle(c)), u)
        # Gains below tol are solver noise.
        if len(history) > 1 and history[-1] - history[-2] <= tol * history[-1]:
            break
    return best.scaled(1.0 / moduli_sum(best)), history


@dataclass(frozen=True)
class SidonConfig:
    starts: int = 8
    seed: int = 20240101
    ascent_iters: int = 30
    norm: NormConfig = NormConfig(grid=1024)
    # Only the winning witness is certified this finely.
    final_certify_grid: int = 1 << 25


def sidon_constant_bracket(
    freqs: FrequencySet,
    config: SidonConfig = SidonConfig(),
    minimax_value: Optional[float] = None,
) -> NormBracket:
    """``[best found ratio, sqrt(|Lambda| - 1)]`` for the Sidon constant.

    The lower end maximizes ``||l_u||`` over unimodular phase vectors by
    :func:`phase_ascent`; on {0,1,2,3} members of the extremal family also
    compete as witnesses.  ``minimax_value`` (a certified sup norm of a
    moduli-sum-1 polynomial) is folded in as ``1/value`` when given.
    """
    if len(freqs) > 6:
        raise ValueError("Sidon brackets are limited to 6 frequencies")
    if len(freqs) == 1:
        return NormBracket(1.0, 1.0, TrigPolynomial(freqs, [1.0]), method="single-character")
    upper = newman_queffelec_bound(freqs)
    base = freqs.normalize()
    rng = np.random.default_rng(config.seed)
    seeds = [np.ones(len(base), dtype=complex)]
    witnesses = []
    if base.frequencies == (0, 1, 2, 3):
        from .extremal_family import family_coefficients

        for tau in (np.pi / 2, np.pi / 4, 0.0):
            member = family_coefficients(tau)
            witnesses.append(member)
            c = member.coefficients
            seeds.append(np.exp(-1j * np.angle(c)))
    seeds += [np.exp(2j * np.pi * rng.random(len(base))) for _ in range(config.starts)]
    witnesses += [phase_ascent(base, u, config.norm, config.ascent_iters)[0] for u in seeds]

    scored = [(sup_norm(p, config.norm.certify_grid).certified_upper, i) for i, p in enumerate(witnesses)]
    witness = witnesses[min(scored)[1]]
    best = 1.0 / sup_norm(witness, config.final_certify_grid).certified_upper
    details = {"ascent_lower": best}
    if minimax_value is not None:
        details["minimax_lower"] = 1.0 / minimax_value
        best = max(best, 1.0 / minimax_value)
    witness = TrigPolynomial(freqs, witness.coefficients)
    return NormBracket(min(best, upper), upper, witness, method="phase ascent / Newman bound", details=details)
