"""The degree-3 torus of polynomials with moduli sum 1 and sup norm 3/5.

``f(z, tau)`` has coefficients

    c0 = (2i sqrt2 cos tau - 1 - 3 sin tau) / 15,    c1 = (3 + sin tau) / 10,
    c2 = (3 - sin tau) / 10,    c3 = (2i sqrt2 cos tau - 1 + 3 sin tau) / 15,

and ``phi(t, tau) = |f(e^{it}, tau)|**2``.  Splitting

    phi = A(t) + cos(2 tau) B(t) + sin(2 tau) D(t)

makes both partial derivatives linear in ``(cos 2tau, sin 2tau)``, which is
where the 2x2 matrix ``matrix_M`` and the rational curve ``(C(t), S(t))``
come from.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import minimize

from .trigpoly import TWO_PI, FrequencySet, TrigPolynomial, canonical_angle, evaluate

SQRT2 = np.sqrt(2.0)
GLOBAL_MAX = 9 / 25
LOCAL_MIN_VALUE = 49 / 225
SADDLE_VALUE = 5 / 18
SADDLE_T = float(np.arccos(0.25))
SADDLE_TAU = float(np.arccos(17 / 37) / 2)
# cos t = -1/4 separates the second and third monotone branches of C.
BRANCH_T = float(np.arccos(-0.25))

SUPPORT = FrequencySet((0, 1, 2, 3))

KINDS = ("global-max", "global-min", "local-min", "saddle", "local-max", "degenerate")

GRAD_STEP = 1e-6
HESS_STEP = 1e-5
EIG_THRESHOLD = 1e-7
# cos t values where det M vanishes; the (C, S) system is undefined there.
DEGENERATE_COS = (-1.0, 0.25, 1.0)


@dataclass(frozen=True)
class FamilyParameter:
    """Family angle ``tau`` and its reduction to ``[0, pi/2]``.

    ``phi(t, tau + pi) = phi(t, tau)`` and ``phi(t, -tau) = phi(-t, tau)``, so
    any ``tau`` maps to a canonical one, possibly with ``t`` mirrored.
    """

    tau: float

    @property
    def reduced(self) -> tuple[float, bool]:
        r = float(np.mod(self.tau, np.pi))
        if r > np.pi / 2:
            return np.pi - r, True
        return r, False

    @property
    def canonical(self) -> float:
        return self.reduced[0]

    @property
    def mirrored(self) -> bool:
        return self.reduced[1]


@dataclass(frozen=True)
class CriticalPoint:
    t: float
    tau: float
    value: float
    kind: str
    gradient_norm: float = 0.0
    eigenvalues: tuple[float, float] = (0.0, 0.0)

    def as_row(self) -> dict:
        return {"tau": self.tau, "t": self.t, "phi": self.value, "kind": self.kind}


def family_coefficients(tau: float) -> TrigPolynomial:
    s, c = np.sin(tau), np.cos(tau)
    im = 2j * SQRT2 * c
    coeffs = [(im - 1 - 3 * s) / 15, (3 + s) / 10, (3 - s) / 10, (im - 1 + 3 * s) / 15]
    return TrigPolynomial(SUPPORT, np.asarray(coeffs))


def flagship_rational() -> tuple[Fraction, ...]:
    """Exact coefficients of the real member ``tau = pi/2``."""
    return (Fraction(-4, 15), Fraction(2, 5), Fraction(1, 5), Fraction(2, 15))


def phi(t, tau):
    """Closed form of ``|f(e^{it}, tau)|**2``; broadcasts over arrays."""
    t = np.asarray(t, dtype=float)
    tau = np.asarray(tau, dtype=float)
    c2 = np.cos(2 * tau)
    out = (
        2 * SQRT2 * np.sin(2 * tau) / 75 * (np.sin(t) - np.sin(2 * t) + 2 * np.sin(3 * t))
        + (247 - 13 * c2) / 900
        + (1 + c2) * (np.cos(t) / 20 - np.cos(2 * t) / 25)
        + (1 + 17 * c2) / 225 * np.cos(3 * t)
    )
    return float(out) if out.ndim == 0 else out


def phi_direct(t, tau):
    """``|f(e^{it}, tau)|**2`` by evaluating the polynomial (scalar ``tau``)."""
    return np.abs(evaluate(family_coefficients(tau), t)) ** 2


def _parts(t):
    # phi = A + cos2tau * B + sin2tau * D, and derivatives in t.
    s1, s2, s3 = np.sin(t), np.sin(2 * t), np.sin(3 * t)
    c1, c2, c3 = np.cos(t), np.cos(2 * t), np.cos(3 * t)
    k = 2 * SQRT2 / 75
    B = -13 / 900 + c1 / 20 - c2 / 25 + 17 * c3 / 225
    D = k * (s1 - s2 + 2 * s3)
    dA = -s1 / 20 + 2 * s2 / 25 - s3 / 75
    dB = -s1 / 20 + 2 * s2 / 25 - 17 * s3 / 75
    dD = k * (c1 - 2 * c2 + 6 * c3)
    return B, D, dA, dB, dD


def phi_gradient(t: float, tau: float) -> np.ndarray:
    """Analytic ``(d phi/dt, d phi/dtau)``."""
    B, D, dA, dB, dD = _parts(t)
    c, s = np.cos(2 * tau), np.sin(2 * tau)
    return np.array([dA + c * dB + s * dD, 2 * (c * D - s * B)])


def phi_gradient_fd(t: float, tau: float, h: float = GRAD_STEP) -> np.ndarray:
    """Central-difference gradient of the closed form."""
    return np.array(
        [
            (phi(t + h, tau) - phi(t - h, tau)) / (2 * h),
            (phi(t, tau + h) - phi(t, tau - h)) / (2 * h),
        ]
    )


def phi_hessian_fd(t: float, tau: float, h: float = HESS_STEP) -> np.ndarray:
    # Differencing the analytic gradient keeps roundoff near eps/h rather than
    # eps/h**2, well under the eigenvalue threshold.
    gt = (phi_gradient(t + h, tau) - phi_gradient(t - h, tau)) / (2 * h)
    gs = (phi_gradient(t, tau + h) - phi_gradient(t, tau - h)) / (2 * h)
    H = np.column_stack([gt, gs])
    return (H + H.T) / 2


def matrix_M(t: float) -> np.ndarray:
    s1, s2, s3 = np.sin(t), np.sin(2 * t), np.sin(3 * t)
    c1, c2, c3 = np.cos(t), np.cos(2 * t), np.cos(3 * t)
    k = 2 * SQRT2 / 75
    return np.array(
        [
            [2 * s2 / 25 - s1 / 20 - 17 * s3 / 75, k * (c1 - 2 * c2 + 6 * c3)],
            [k * (s1 - s2 + 2 * s3), 13 / 900 - c1 / 20 + c2 / 25 - 17 * c3 / 225],
        ]
    )


def critical_rhs(t: float) -> np.ndarray:
    """Right-hand side of ``M(t) (cos 2tau, sin 2tau) = rhs(t)``."""
    return np.array([np.sin(t) / 20 - 2 * np.sin(2 * t) / 25 + np.sin(3 * t) / 75, 0.0])


def det_M(t: float) -> float:
    """Factored determinant of :func:`matrix_M`.

    The normalising constant is 1/67500; with 1/6750 the product is ten
    times the determinant of the matrix.
    """
    c = np.cos(t)
    return float(np.sin(t) * (c - 0.25) * (4 * c - 11) * _cubic(c) / 67500)


def _cubic(c):
    return 16 * c**3 - 72 * c**2 + 33 * c - 41


def cs_rhs(t: float, strict: bool = True) -> tuple[float, float]:
    """``(C(t), S(t))`` solving the critical-point system off ``det M = 0``.

    The cubic denominator has no root with ``|cos t| <= 1``, so the curve
    itself is defined everywhere; ``strict`` rejects the angles where the
    system degenerates (``cos t`` in ``{-1, 1/4, 1}``) and the curve no
    longer describes critical points.
    """
    c = np.cos(t)
    if strict:
        for bad in DEGENERATE_COS:
            if abs(c - bad) < 1e-9:
                raise ValueError(f"cos t = {c!r} is a degenerate value of det M")
    den = _cubic(c)
    C = -(272 * c**3 - 72 * c**2 - 159 * c + 23) / den
    S = -24 * SQRT2 * np.sin(t) * (4 * c + 1) * (2 * c - 1) / den
    return float(C), float(S)


def _bisect(g, lo: float, hi: float, tol: float = 1e-12) -> float:
    glo, ghi = g(lo), g(hi)
    if abs(glo) < 1e-14:
        return lo
    if abs(ghi) < 1e-14:
        return hi
    if glo * ghi > 0:
        raise ArithmeticError(f"no sign change of C(t) - cos 2tau on [{lo}, {hi}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if gm == 0:
            return mid
        if (gm > 0) == (glo > 0):
            lo, glo = mid, gm
        else:
            hi = mid
    return 0.5 * (lo + hi)


# Monotone branches of C on [0, pi] and the sign of t that makes S(t) >= 0
# on that branch (S is odd in t and C is even).
_BRANCHES = ((0.0, np.pi / 3, 1.0), (np.pi / 3, BRANCH_T, -1.0), (BRANCH_T, np.pi, 1.0))


def curve_angle(t: float) -> float:
    """``atan2(|S(t)|, C(t))`` in ``[0, pi]``; monotone on each branch."""
    C, S = cs_rhs(t, strict=False)
    return float(np.arctan2(abs(S), C))


def generic_roots(tau: float) -> list[float]:
    """The three angles ``t`` with ``(C(t), S(t)) = (cos 2tau, sin 2tau)``.

    Only valid for canonical ``tau`` in ``[0, pi/2]``, where ``sin 2tau >= 0``.
    Bisection runs on the curve angle rather than on ``C - cos 2tau``: near
    the turning points ``C = +-1`` the latter is quadratic in ``t`` and
    loses half the digits.
    """
    target = 2 * tau
    return [sign * _bisect(lambda x: curve_angle(x) - target, lo, hi) for lo, hi, sign in _BRANCHES]


def gradient_norm(t: float, tau: float) -> float:
    return float(np.linalg.norm(phi_gradient_fd(t, tau)))


def classify(t: float, tau: float, return_eigenvalues: bool = False):
    """Kind of a critical point of ``phi`` from its Hessian eigenvalues.

    Values at the known global extremes (``9/25`` and ``0``) are labelled
    global directly: the maxima form curves in the torus, so their Hessian
    is singular along the curve and the eigenvalue test alone is degenerate.
    """
    g = np.linalg.norm(phi_gradient(t, tau))
    if g >= 1e-6:
        raise ValueError(f"({t}, {tau}) is not a critical point: |grad phi| = {g:.3e}")
    eig = np.linalg.eigvalsh(phi_hessian_fd(t, tau))
    value = phi(t, tau)
    if value >= GLOBAL_MAX - 1e-9:
        kind = "global-max"
    elif value <= 1e-12:
        kind = "global-min"
    elif np.any(np.abs(eig) < EIG_THRESHOLD):
        kind = "degenerate"
    elif np.all(eig > 0):
        kind = "local-min"
    elif np.all(eig < 0):
        kind = "local-max"
    else:
        kind = "saddle"
    if return_eigenvalues:
        return kind, (float(eig[0]), float(eig[1]))
    return kind


def _point(t: float, tau: float) -> CriticalPoint:
    kind, eig = classify(t, tau, return_eigenvalues=True)
    return CriticalPoint(
        t=canonical_angle(t),
        tau=float(tau),
        value=phi(t, tau),
        kind=kind,
        gradient_norm=gradient_norm(t, tau),
        eigenvalues=eig,
    )


def critical_points(tau: float) -> list[CriticalPoint]:
    """Critical points of ``phi`` lying on the slice ``{tau} x circle``.

    The generic three come from the (C, S) system; the degenerate angles
    ``cos t`` in ``{-1, 1/4, 1}`` are tested separately and kept when the
    gradient vanishes there.
    """
    param = FamilyParameter(tau)
    base, mirrored = param.reduced
    sign = -1.0 if mirrored else 1.0

    points: list[CriticalPoint] = []

    def seen(t):
        return any(
            abs(np.angle(np.exp(1j * (t - p.t)))) < 1e-9 for p in points
        )

    for t in generic_roots(base):
        C, S = cs_rhs(t, strict=False)
        if abs(S - np.sin(2 * base)) > 1e-9:
            raise ArithmeticError(f"branch sign mismatch at t={t}: S={S}, sin2tau={np.sin(2 * base)}")
        tt = canonical_angle(sign * t)
        if not seen(tt):
            points.append(_point(tt, tau))
    for t in (0.0, np.pi, SADDLE_T, TWO_PI - SADDLE_T):
        tt = canonical_angle(sign * t)
        if np.linalg.norm(phi_gradient(tt, tau)) < 1e-10 and not seen(tt):
            points.append(_point(tt, tau))
    return sorted(points, key=lambda p: p.t)


def special_points() -> list[CriticalPoint]:
    """The non-maximal critical points in the canonical range."""
    return [_point(np.pi, 0.0), _point(0.0, np.pi / 2), _point(SADDLE_T, SADDLE_TAU)]


def verify_symmetries(tau: float, theta: float) -> dict:
    """Residuals of ``f(z,-tau) = z^3 f(1/z,tau)`` and
    ``f(z,tau+pi) = z^3 conj f(z,tau)`` at ``z = e^{i theta}``."""
    z = np.exp(1j * theta)
    f = family_coefficients(tau)
    reflect = abs(evaluate(family_coefficients(-tau), theta) - z**3 * evaluate(f, -theta))
    shift = abs(evaluate(family_coefficients(tau + np.pi), theta) - z**3 * np.conj(evaluate(f, theta)))
    return {"tau": float(tau), "theta": float(theta), "reflection": float(reflect), "shift": float(shift)}


def _symmetry_images(c: np.ndarray):
    # z -> 1/z composed with z^3 reverses, and conjugating coefficients
    # mirrors the circle; both preserve sup norm and moduli sum.
    yield c
    yield c[::-1]
    yield np.conj(c)
    yield np.conj(c[::-1])


def family_distance(p: TrigPolynomial) -> tuple[float, float]:
    """Smallest coefficient distance from ``p`` to the family orbit.

    The orbit is taken under global phase, rotation ``z -> e^{ia} z``
    (``c_j -> e^{ija} c_j``), reversal and conjugation.  Returns
    ``(distance, tau)``.
    """
    if p.support.normalize() != SUPPORT:
        raise ValueError("family comparison needs support {0,1,2,3} up to translation")
    j = np.arange(4)
    best = (np.inf, 0.0)
    for c in _symmetry_images(np.asarray(p.coefficients)):

        def dist(x):
            tau, a = x
            rotated = c * np.exp(1j * j * a)
            target = family_coefficients(tau).coefficients
            inner = np.vdot(target, rotated)
            return float(np.sqrt(max(np.sum(np.abs(rotated) ** 2) + np.sum(np.abs(target) ** 2) - 2 * abs(inner), 0.0)))

        taus = np.linspace(0, TWO_PI, 25, endpoint=False)
        rots = np.linspace(0, TWO_PI, 25, endpoint=False)
        vals = [(dist((a, b)), a, b) for a in taus for b in rots]
        _, a0, b0 = min(vals)
        res = minimize(dist, x0=[a0, b0], method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-12})
        if res.fun < best[0]:
            best = (float(res.fun), float(np.mod(res.x[0], TWO_PI)))
    return best
