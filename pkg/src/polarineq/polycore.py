"""Complex polynomials on the disk: evaluation, derivatives, polar derivative,
conjugate-reciprocal transform, and root computation with residual certificates.

Coefficients are stored in ascending powers: ``coeffs[j]`` multiplies ``z**j``.
The zero polynomial is the empty-coefficient special case (degree ``-1``).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

# Residual certificate for returned roots, relative to max coefficient modulus.
ROOT_RESIDUAL_TOL = 1e-10
# Classification threshold for structural (lacunary) zero coefficients.
LACUNARY_ZERO_TOL = 1e-12
# Newton polish budget; degrees here are small, robustness beats speed.
_POLISH_SWEEPS = 200


class DegreeError(ValueError):
    """Operation applied to a polynomial of unsuitable degree."""


@dataclass(frozen=True)
class Polynomial:
    """Immutable complex polynomial, ascending coefficient order.

    Trailing zero coefficients are trimmed on construction, so the leading
    coefficient (last entry) is always nonzero; the zero polynomial has an
    empty coefficient tuple and degree -1.
    """

    coeffs: tuple[complex, ...]

    def __init__(self, coeffs: Iterable[complex]):
        cs = [complex(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> complex:
        if self.is_zero():
            raise DegreeError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def max_coeff_modulus(self) -> float:
        if self.is_zero():
            return 0.0
        return max(abs(c) for c in self.coeffs)

    # -- small arithmetic helpers (used by samplers, tests, oracles) --

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for j, c in enumerate(b):
            out[j] += c
        return Polynomial(out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-1) * other

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            if self.is_zero() or other.is_zero():
                return Polynomial(())
            out = [0j] * (len(self.coeffs) + len(other.coeffs) - 1)
            for j, a in enumerate(self.coeffs):
                for k, b in enumerate(other.coeffs):
                    out[j + k] += a * b
            return Polynomial(out)
        return Polynomial([other * c for c in self.coeffs])

    __rmul__ = __mul__

    def to_json_dict(self) -> dict:
        """Serialize as {"coeffs": [[re, im], ...]} in ascending order."""
        return {"coeffs": [[c.real, c.imag] for c in self.coeffs]}

    @staticmethod
    def from_json_dict(obj: dict) -> "Polynomial":
        return Polynomial(complex(re, im) for re, im in obj["coeffs"])


@dataclass(frozen=True)
class LacunaryShape:
    """Degree-n shape with coefficients of z^{n-1}..z^{n-mu+1} forced to zero.

    mu = 1 imposes no constraint.
    """

    n: int
    mu: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("shape degree must be positive")
        if not 1 <= self.mu <= self.n:
            raise ValueError(f"need 1 <= mu <= n, got mu={self.mu}, n={self.n}")


@dataclass(frozen=True)
class RootMultiset:
    """Roots with multiplicity, in no particular order."""

    roots: tuple[complex, ...]

    def moduli(self) -> np.ndarray:
        return np.abs(np.asarray(self.roots, dtype=complex))


def evaluate(P: Polynomial, z):
    """Evaluate P at a complex scalar or ndarray by Horner recurrence."""
    if isinstance(z, np.ndarray):
        acc = np.zeros_like(z, dtype=complex)
        for c in reversed(P.coeffs):
            acc = acc * z + c
        return acc
    acc = 0j
    for c in reversed(P.coeffs):
        acc = acc * z + c
    return acc


def eval_on_circle(P: Polynomial, theta: np.ndarray) -> np.ndarray:
    """Evaluate P at e^{i theta} for an array of angles."""
    return evaluate(P, np.exp(1j * np.asarray(theta, dtype=float)))


def derivative(P: Polynomial) -> Polynomial:
    """Coefficient-wise derivative; constants map to the zero polynomial."""
    return Polynomial(j * c for j, c in enumerate(P.coeffs) if j >= 1)


def polar_derivative(P: Polynomial, alpha: complex) -> Polynomial:
    """Polar derivative n*P(z) + (alpha - z)*P'(z) of degree at most n-1.

    The z^n coefficient is (n-n)*a_n = 0 by construction; the constructor
    trims it, so the result always has degree <= n-1.  Degree <= 0 input
    yields the zero polynomial.
    """
    n = P.degree()
    if n <= 0:
        return Polynomial(())
    c = P.coeffs
    out = [(n - j) * c[j] + alpha * (j + 1) * c[j + 1] for j in range(n)]
    out.append((n - n) * c[n])  # exact cancellation of the top term
    return Polynomial(out)


def conjugate_reciprocal(P: Polynomial) -> Polynomial:
    """Q(z) = z^n * conj(P(1/conj(z))): reverse and conjugate the coefficients.

    |Q| = |P| on the unit circle.  When P(0) = 0 the reversal drops degree;
    applying the transform twice recovers P whenever P(0) != 0.
    """
    return Polynomial(c.conjugate() for c in reversed(P.coeffs))


def from_roots(roots: Sequence[complex], leading: complex = 1.0) -> Polynomial:
    """Expand leading * prod (z - r_j)."""
    if leading == 0:
        raise ValueError("leading coefficient must be nonzero")
    coeffs = np.array([leading], dtype=complex)
    for r in roots:
        # multiply ascending-coefficient array by (z - r)
        coeffs = np.concatenate([[0], coeffs]) - r * np.concatenate([coeffs, [0]])
    return Polynomial(coeffs)


def _newton_polish(coeffs: np.ndarray, roots: np.ndarray) -> np.ndarray:
    """Safeguarded Newton sweeps; a step is kept only if the residual drops."""
    n = len(coeffs) - 1
    dcoeffs = coeffs[1:] * np.arange(1, n + 1)
    r = roots.astype(complex)

    def horner(cs, z):
        acc = np.zeros_like(z)
        for c in cs[::-1]:
            acc = acc * z + c
        return acc

    res = np.abs(horner(coeffs, r))
    for _ in range(_POLISH_SWEEPS):
        dp = horner(dcoeffs, r)
        safe = np.abs(dp) > 1e-300
        step = np.where(safe, horner(coeffs, r) / np.where(safe, dp, 1.0), 0.0)
        cand = r - step
        cres = np.abs(horner(coeffs, cand))
        better = cres < res
        if not better.any():
            break
        r = np.where(better, cand, r)
        res = np.where(better, cres, res)
    return r


def _roots_highprec(coeffs: np.ndarray) -> np.ndarray:
    """Arbitrary-precision Aberth-Ehrlich pass, seeded from the double roots.

    Resolves clustered multiple roots, which double-precision eigenvalues
    smear over an eps^(1/m) radius: at 160 digits an m-fold cluster contracts
    (linearly, rate (m-1)/m) down to ~10^(-160/m), so the 1e-16 step
    criterion is reachable for any multiplicity this package meets.
    """
    import mpmath

    n = len(coeffs) - 1
    with mpmath.workdps(160):
        c = [mpmath.mpc(x) for x in coeffs]
        dc = [k * c[k] for k in range(1, n + 1)]

        def val(cs, z):
            acc = mpmath.mpc(0)
            for a in reversed(cs):
                acc = acc * z + a
            return acc

        seed = np.roots(coeffs[::-1])
        # deterministic jitter so coincident seeds cannot lock the iteration
        z = [mpmath.mpc(w) + mpmath.mpf(10) ** -18 * (1 + 1j) * (k + 1)
             for k, w in enumerate(seed)]
        scale = max(1.0, max(abs(w) for w in seed))
        tol = mpmath.mpf(10) ** -16 * scale
        for _ in range(3000):
            max_step = mpmath.mpf(0)
            for i in range(n):
                pi = val(c, z[i])
                if pi == 0:
                    continue
                dpi = val(dc, z[i])
                newt = pi / dpi if dpi != 0 else mpmath.mpc(tol)
                rep = mpmath.mpc(0)
                for j in range(n):
                    if j != i:
                        diff = z[i] - z[j]
                        if diff == 0:
                            diff = mpmath.mpf(10) ** -150
                        rep += 1 / diff
                denom = 1 - newt * rep
                step = newt / denom if denom != 0 else newt
                z[i] -= step
                max_step = max(max_step, abs(step))
            if max_step < tol:
                break
        return np.array([complex(w) for w in z])


def roots(P: Polynomial, residual_tol: float = ROOT_RESIDUAL_TOL,
          high_precision: bool = False) -> RootMultiset:
    """All n roots with multiplicity, companion-matrix seeded, Newton polished.

    Contract: every returned root r has |P(r)| <= residual_tol * max|coeffs|.
    Falls back to arbitrary-precision polishing (mpmath) for the rare sample
    the double-precision path cannot certify; high_precision=True forces that
    path (needed when root LOCATIONS of multiple roots matter, not just
    residuals).
    """
    if P.degree() < 1:
        raise DegreeError("no roots of a nonzero constant")
    coeffs = np.asarray(P.coeffs, dtype=complex)
    bound = residual_tol * P.max_coeff_modulus()

    if not high_precision:
        polished = _newton_polish(coeffs, np.roots(coeffs[::-1]))
        if np.abs(evaluate(P, polished)).max() <= bound:
            return RootMultiset(tuple(polished))
    polished = _roots_highprec(coeffs)
    residuals = np.abs(evaluate(P, polished))
    if residuals.max() > bound:
        raise ArithmeticError(
            f"root residual {residuals.max():.3e} exceeds certificate bound {bound:.3e}"
        )
    return RootMultiset(tuple(polished))


def min_root_modulus(P: Polynomial, residual_tol: float = ROOT_RESIDUAL_TOL,
                     high_precision: bool = False) -> float:
    """Radius of the largest root-free disk centered at the origin."""
    return float(roots(P, residual_tol, high_precision).moduli().min())


def max_root_modulus(P: Polynomial, residual_tol: float = ROOT_RESIDUAL_TOL,
                     high_precision: bool = False) -> float:
    return float(roots(P, residual_tol, high_precision).moduli().max())


def matches_lacunary(P: Polynomial, shape: LacunaryShape) -> bool:
    """True iff coefficients of z^{n-1}..z^{n-mu+1} vanish (within tolerance).

    The tolerance LACUNARY_ZERO_TOL * max|coeffs| only guards file round-trips;
    generated families set these coefficients exactly to zero.
    """
    n = shape.n
    if P.degree() != n:
        raise DegreeError(f"degree {P.degree()} does not match shape degree {n}")
    tol = LACUNARY_ZERO_TOL * P.max_coeff_modulus()
    return all(abs(P.coeffs[n - j]) <= tol for j in range(1, shape.mu))


def match_multisets(a: Sequence[complex], b: Sequence[complex]) -> float:
    """Max pairing distance between two equal-size multisets under the optimal
    assignment (used to compare root sets regardless of ordering)."""
    if len(a) != len(b):
        raise ValueError("multisets must have equal size")
    if not a:
        return 0.0
    from scipy.optimize import linear_sum_assignment

    A = np.asarray(a, dtype=complex)
    B = np.asarray(b, dtype=complex)
    cost = np.abs(A[:, None] - B[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def parse_complex(text: str) -> complex:
    """Parse 'a+bi' / 'a+bj' / plain real forms into a complex scalar."""
    s = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(s)
    except ValueError as exc:
        raise ValueError(f"cannot parse complex scalar from {text!r}") from exc


def format_complex(z: complex) -> str:
    return f"{z.real:+.12g}{z.imag:+.12g}i"
