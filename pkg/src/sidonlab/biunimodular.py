"""Biunimodular sequences and circulant complex Hadamard matrices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .duality import DualFunctional


class BiunimodularError(ArithmeticError):
    pass


@dataclass(frozen=True)
class BiunimodularCandidate:
    n: int
    entries: np.ndarray

    def __post_init__(self):
        e = np.array(self.entries, dtype=complex).reshape(-1)
        if e.shape[0] != self.n:
            raise ValueError(f"{e.shape[0]} entries for n={self.n}")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @classmethod
    def of(cls, entries) -> "BiunimodularCandidate":
        e = np.asarray(entries, dtype=complex)
        return cls(e.shape[0], e)

    def is_unimodular(self, tol: float = 1e-12) -> bool:
        return bool(np.all(np.abs(np.abs(self.entries) - 1) <= tol))


def unitary_dft(u: np.ndarray) -> np.ndarray:
    """``(1/sqrt n) sum_j u_j e^{-2 pi i j k / n}``."""
    u = np.asarray(u, dtype=complex)
    return np.fft.fft(u) / np.sqrt(u.shape[0])


def is_biunimodular(u: BiunimodularCandidate, tol: float = 1e-10) -> bool:
    if not u.is_unimodular(tol):
        return False
    return bool(np.all(np.abs(np.abs(unitary_dft(u.entries)) - 1) <= tol))


def gauss_sequence(n: int, tol: float = 1e-10) -> BiunimodularCandidate:
    """Quadratic-phase sequence, verified biunimodular before returning.

    ``e^{2 pi i j^2/n}`` for odd ``n``, ``e^{pi i j^2/n}`` for even ``n``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    j = np.arange(n, dtype=float)
    # j**2 mod 2n keeps the phase argument small for large n.
    if n % 2:
        u = np.exp(2j * np.pi * np.mod(j * j, n) / n)
    else:
        u = np.exp(1j * np.pi * np.mod(j * j, 2 * n) / n)
    cand = BiunimodularCandidate(n, u)
    moduli = np.abs(unitary_dft(u))
    worst = int(np.argmax(np.abs(moduli - 1)))
    if abs(moduli[worst] - 1) > tol:
        raise BiunimodularError(f"n={n}: |u_hat[{worst}]| = {moduli[worst]!r}")
    return cand


def circulant(u: BiunimodularCandidate) -> np.ndarray:
    """``H[j, k] = u_{(j - k) mod n}``."""
    idx = np.subtract.outer(np.arange(u.n), np.arange(u.n)) % u.n
    return u.entries[idx]


def hadamard_residual(u: BiunimodularCandidate) -> float:
    H = circulant(u)
    return float(np.max(np.abs(H.conj().T @ H - u.n * np.eye(u.n))))


def circulant_hadamard_check(u: BiunimodularCandidate, tol: float = 1e-10) -> bool:
    return u.is_unimodular(tol) and hadamard_residual(u) < tol


def ytt_sums(l: DualFunctional, N: int) -> np.ndarray:
    """``|sum_{j<N} e^{-2 pi i j k/N} l(e_j)|`` for ``k = 0..N-1``."""
    if l.support.frequencies != tuple(range(N + 1)):
        raise ValueError(f"functional must live on {{0,...,{N}}}")
    if l.values[0] != l.values[N]:
        raise ValueError("need l(e_0) = l(e_N)")
    return np.abs(np.fft.fft(np.asarray(l.values[:N])))


def ytt_equality_check(l: DualFunctional, N: int, tol: float = 1e-9) -> bool:
    """Equality case of the arithmetic/quadratic mean step: all inner sums equal."""
    if not l.is_unimodular(1e-12):
        raise ValueError("functional must be unimodular")
    sums = ytt_sums(l, N)
    return bool(np.ptp(sums) <= tol)
