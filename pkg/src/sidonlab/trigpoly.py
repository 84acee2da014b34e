"""Trigonometric polynomials with finite integer spectrum on the unit circle."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

TWO_PI = 2.0 * np.pi

# Points evaluated per chunk in grid scans; bounds memory for very fine grids.
_CHUNK = 1 << 18


def canonical_angle(theta: float) -> float:
    """Reduce an angle to [0, 2*pi)."""
    a = float(np.mod(theta, TWO_PI))
    return 0.0 if a >= TWO_PI else a


@dataclass(frozen=True)
class FrequencySet:
    frequencies: tuple[int, ...]

    def __post_init__(self):
        freqs = tuple(int(f) for f in self.frequencies)
        if any(b <= a for a, b in zip(freqs, freqs[1:])):
            raise ValueError(f"frequencies must be strictly increasing, got {freqs}")
        object.__setattr__(self, "frequencies", freqs)

    @classmethod
    def of(cls, freqs: Iterable[int]) -> "FrequencySet":
        """Build from any iterable of distinct integers (sorted here)."""
        freqs = [int(f) for f in freqs]
        if len(set(freqs)) != len(freqs):
            raise ValueError(f"duplicate frequencies in {freqs}")
        return cls(tuple(sorted(freqs)))

    @classmethod
    def parse(cls, text: str) -> "FrequencySet":
        """Parse a comma-separated list such as ``"0,1,2,3"``."""
        return cls.of(int(tok) for tok in text.split(",") if tok.strip())

    def __len__(self) -> int:
        return len(self.frequencies)

    def __iter__(self):
        return iter(self.frequencies)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.frequencies, dtype=float)

    @property
    def degree(self) -> int:
        """Largest absolute frequency (the Bernstein degree)."""
        return max((abs(f) for f in self.frequencies), default=0)

    @property
    def is_normalized(self) -> bool:
        return bool(self.frequencies) and self.frequencies[0] == 0

    def normalize(self) -> "FrequencySet":
        if not self.frequencies:
            return self
        lo = self.frequencies[0]
        return FrequencySet(tuple(f - lo for f in self.frequencies))


@dataclass(frozen=True)
class TrigPolynomial:
    """``f(z) = sum_j c_j z**lambda_j`` restricted to ``|z| = 1``."""

    support: FrequencySet
    coefficients: np.ndarray

    def __post_init__(self):
        coeffs = np.array(self.coefficients, dtype=complex).reshape(-1)
        if coeffs.shape[0] != len(self.support):
            raise ValueError(
                f"{coeffs.shape[0]} coefficients for {len(self.support)} frequencies"
            )
        coeffs.setflags(write=False)
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def from_coefficients(cls, freqs: Iterable[int], coeffs: Sequence[complex]) -> "TrigPolynomial":
        return cls(FrequencySet.of(freqs), np.asarray(coeffs, dtype=complex))

    @property
    def degree(self) -> int:
        return self.support.degree

    def normalize(self) -> "TrigPolynomial":
        """Shift the support so that its smallest frequency is 0.

        The modulus on the circle is unchanged."""
        return TrigPolynomial(self.support.normalize(), self.coefficients)

    def scaled(self, factor: complex) -> "TrigPolynomial":
        return TrigPolynomial(self.support, factor * self.coefficients)

    def __call__(self, theta):
        return evaluate(self, theta)

    def to_dict(self) -> dict:
        return {
            "frequencies": list(self.support.frequencies),
            "coefficients": [[float(c.real), float(c.imag)] for c in self.coefficients],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TrigPolynomial":
        coeffs = [complex(re, im) for re, im in data["coefficients"]]
        return cls(FrequencySet(tuple(data["frequencies"])), np.asarray(coeffs))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "TrigPolynomial":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class SupNormCertificate:
    grid_max: float
    certified_upper: float
    argmax_angle: float
    grid_size: int


def evaluate(p: TrigPolynomial, theta):
    """``f(e^{i theta})``; scalar in, complex out, arrays broadcast."""
    theta = np.asarray(theta, dtype=float)
    vals = np.exp(1j * np.multiply.outer(theta, p.support.array)) @ p.coefficients
    return complex(vals) if vals.ndim == 0 else vals


def moduli_sum(p: TrigPolynomial) -> float:
    return float(np.abs(p.coefficients).sum())


def grid_moduli(p: TrigPolynomial, grid_size: int) -> np.ndarray:
    """``|f|`` at the angles ``2*pi*k/grid_size``."""
    return np.concatenate(list(_grid_chunks(p, grid_size)))


def _grid_chunks(p: TrigPolynomial, grid_size: int):
    freqs = np.asarray(p.support.frequencies)
    if freqs.size == 0:
        yield np.zeros(grid_size)
        return
    # Evaluate z**lambda via multiplication by a unit root, not exp per term;
    # shift to a nonnegative exponent range first (|z|=1 keeps modulus).
    shifted = freqs - freqs.min()
    dense = np.zeros(shifted.max() + 1, dtype=complex)
    dense[shifted] = p.coefficients
    for start in range(0, grid_size, _CHUNK):
        k = np.arange(start, min(start + _CHUNK, grid_size))
        z = np.exp(1j * TWO_PI * k / grid_size)
        acc = np.zeros(k.shape, dtype=complex)
        for c in dense[::-1]:
            acc = acc * z + c
        yield np.abs(acc)


def sup_norm(p: TrigPolynomial, grid_size: int = 4096) -> SupNormCertificate:
    """Grid maximum of ``|f|`` with a Bernstein-certified upper bound.

    Every angle lies within ``h/2`` of a grid point, ``h = 2*pi/grid_size``,
    and ``|f'| <= N ||f||`` gives
    ``||f|| <= grid_max / (1 - N h / 2)``.
    """
    grid_size = int(grid_size)
    if grid_size <= 0:
        raise ValueError("grid_size must be positive")
    N = p.degree
    half_gap = N * np.pi / grid_size
    if half_gap >= 1.0:
        raise ValueError(
            f"grid_size={grid_size} too coarse to certify degree {N}; need > {np.pi * N:.1f}"
        )
    best, best_k, offset = -1.0, 0, 0
    for chunk in _grid_chunks(p, grid_size):
        k = int(chunk.argmax())
        if chunk[k] > best:
            best, best_k = float(chunk[k]), offset + k
        offset += chunk.shape[0]
    return SupNormCertificate(
        grid_max=best,
        certified_upper=best / (1.0 - half_gap),
        argmax_angle=canonical_angle(TWO_PI * best_k / grid_size),
        grid_size=grid_size,
    )


def refined_sup(p: TrigPolynomial, grid_size: int = 4096, polish: int = 8) -> tuple[float, float]:
    """Sup norm to near machine precision by local maximization.

    Scans the grid, then runs a bounded Brent search around the ``polish``
    largest local maxima. Not a certificate: a peak narrower than the grid
    spacing could be missed; pair with :func:`sup_norm` when rigor matters.
    Returns ``(value, angle)``.
    """
    vals = grid_moduli(p, grid_size)
    h = TWO_PI / grid_size
    is_peak = (vals >= np.roll(vals, 1)) & (vals >= np.roll(vals, -1))
    peaks = np.flatnonzero(is_peak)
    peaks = peaks[np.argsort(vals[peaks])[::-1][:polish]]
    best_val, best_theta = float(vals.max()), TWO_PI * int(vals.argmax()) / grid_size
    for k in peaks:
        center = TWO_PI * k / grid_size
        res = minimize_scalar(
            lambda th: -abs(evaluate(p, th)),
            bounds=(center - h, center + h),
            method="bounded",
            options={"xatol": 1e-13},
        )
        if -res.fun > best_val:
            best_val, best_theta = float(-res.fun), float(res.x)
    return best_val, canonical_angle(best_theta)


def roots_of_unity_average(p: TrigPolynomial, N: int, theta: float) -> float:
    """``(1/N) sum_{omega^N = 1} |f(e^{i theta} omega)|**2``."""
    if N <= 0:
        raise ValueError("N must be positive")
    angles = theta + TWO_PI * np.arange(N) / N
    return float(np.mean(np.abs(evaluate(p, angles)) ** 2))


def residue_class_sum(p: TrigPolynomial, N: int, theta: float) -> float:
    """``sum_r |sum_{lambda_j = r mod N} c_j e^{i lambda_j theta}|**2``.

    Equal to :func:`roots_of_unity_average` by Parseval on the N-th roots
    of unity; computed without ever sampling at the roots.
    """
    if N <= 0:
        raise ValueError("N must be positive")
    classes = np.zeros(N, dtype=complex)
    phases = np.exp(1j * p.support.array * theta)
    np.add.at(classes, np.mod(np.asarray(p.support.frequencies), N), p.coefficients * phases)
    return float(np.sum(np.abs(classes) ** 2))
