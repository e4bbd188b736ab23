"""Samplers and constructors for the constrained polynomial families the
inequality checks quantify over.

Every sampler is a deterministic function of (spec, count, seed): each call
owns a fresh ``numpy.random.default_rng(seed)``, so identical inputs give
bitwise-identical coefficient sequences.  Every emitted polynomial is
re-certified through the root finder before it enters a batch.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import polycore
from .polycore import LacunaryShape, Polynomial, from_roots, matches_lacunary

# Root-location certificates leave this much slack for root-finder residue.
CERT_TOL = 1e-8
# Fraction of outside-family roots pinned exactly to |z| = K: equality cases
# live on the boundary, and the search must be able to reach them.
BOUNDARY_FRAC = 0.25
# Per-power scale of the lacunary coefficient draw (coefficient of z^k gets
# sigma = LACUNARY_DECAY**k), chosen to keep zero-free-disk acceptance workable.
LACUNARY_DECAY = 0.75
# Default rejection budget multiplier for the lacunary sampler.
MAX_REJECTS_PER_SAMPLE = 10000


class Side(enum.Enum):
    ZEROS_OUTSIDE_OPEN_DISK = "outside"
    ZEROS_INSIDE_CLOSED_DISK = "inside"
    UNRESTRICTED = "unrestricted"


class FamilySamplingError(RuntimeError):
    """Sampler exhausted its rejection budget; carries the acceptance rate."""

    def __init__(self, message: str, acceptance_rate: float):
        super().__init__(message)
        self.acceptance_rate = acceptance_rate


@dataclass(frozen=True)
class FamilySpec:
    """Constraints on a sampled family: degree, disk radius, lacunary index,
    and which side of |z| = K the zeros live on."""

    n: int
    K: float = 1.0
    mu: int = 1
    side: Side = Side.UNRESTRICTED

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("degree must be positive")
        if not 0 < self.K <= 1:
            raise ValueError(f"need 0 < K <= 1, got K={self.K}")
        if not 1 <= self.mu <= self.n:
            raise ValueError(f"need 1 <= mu <= n, got mu={self.mu}")

    def to_json_dict(self) -> dict:
        return {"n": self.n, "K": self.K, "mu": self.mu, "side": self.side.value}

    @staticmethod
    def from_json_dict(obj: dict) -> "FamilySpec":
        return FamilySpec(n=int(obj["n"]), K=float(obj.get("K", 1.0)),
                          mu=int(obj.get("mu", 1)), side=Side(obj.get("side", "unrestricted")))


@dataclass(frozen=True)
class SampleBatch:
    polynomials: tuple[Polynomial, ...]
    spec: FamilySpec
    seed: int
    # construction roots, when the sampler worked in root space
    root_sets: Optional[tuple[tuple[complex, ...], ...]] = None
    # how many construction roots were pinned exactly to |z| = K
    boundary_root_count: int = 0
    acceptance_rate: Optional[float] = None

    def to_json_dict(self) -> dict:
        return {
            "spec": self.spec.to_json_dict(),
            "seed": self.seed,
            "polynomials": [p.to_json_dict() for p in self.polynomials],
        }


def _random_leading(rng: np.random.Generator) -> complex:
    # modulus uniform on [0.5, 2], phase uniform
    return rng.uniform(0.5, 2.0) * np.exp(1j * rng.uniform(0.0, 2 * np.pi))


def _complex_normal(rng: np.random.Generator, scale: float = 1.0) -> complex:
    return scale * (rng.standard_normal() + 1j * rng.standard_normal()) / np.sqrt(2)


def certify_outside(P: Polynomial, K: float, tol: float = CERT_TOL) -> bool:
    """Zero-free-disk certificate: no computed root has modulus < K - tol.
    Escalates to high-precision roots before failing, since clustered
    multiple roots blur double-precision locations."""
    if polycore.min_root_modulus(P) >= K - tol:
        return True
    return polycore.min_root_modulus(P, high_precision=True) >= K - tol


def certify_inside(P: Polynomial, K: float, tol: float = CERT_TOL) -> bool:
    """All computed roots have modulus <= K + tol."""
    if polycore.max_root_modulus(P) <= K + tol:
        return True
    return polycore.max_root_modulus(P, high_precision=True) <= K + tol


def sample_zeros_outside(spec: FamilySpec, count: int, seed: int) -> SampleBatch:
    """Polynomials of degree n with no zeros in |z| < K.

    Roots are m * e^{i psi} with m = K*(1+t^2), t standard normal (moduli
    concentrate near K, where the extremal configurations live) and psi
    uniform; a BOUNDARY_FRAC fraction of roots is pinned exactly to |z| = K.
    """
    if count <= 0:
        raise ValueError("count must be positive")
    rng = np.random.default_rng(seed)
    polys, rootsets = [], []
    pinned = 0
    for _ in range(count):
        t = rng.standard_normal(spec.n)
        m = spec.K * (1.0 + t * t)
        pin = rng.random(spec.n) < BOUNDARY_FRAC
        m[pin] = spec.K
        pinned += int(pin.sum())
        psi = rng.uniform(0.0, 2 * np.pi, spec.n)
        rts = m * np.exp(1j * psi)
        P = from_roots(rts, _random_leading(rng))
        if not certify_outside(P, spec.K):
            raise FamilySamplingError("constructed outside-sample failed its certificate", 0.0)
        polys.append(P)
        rootsets.append(tuple(rts))
    return SampleBatch(tuple(polys), spec, seed, tuple(rootsets), pinned)


def sample_zeros_inside(spec: FamilySpec, count: int, seed: int) -> SampleBatch:
    """Polynomials of degree n with all zeros in |z| <= K.

    Root moduli are K*sqrt(u) (area-uniform in the K-disk), phases uniform.
    z^n, the all-zeros-at-origin member, is always included first.
    """
    if count <= 0:
        raise ValueError("count must be positive")
    rng = np.random.default_rng(seed)
    zn = Polynomial([0] * spec.n + [1])
    polys = [zn]
    rootsets = [tuple([0j] * spec.n)]
    for _ in range(count - 1):
        m = spec.K * np.sqrt(rng.uniform(0.0, 1.0, spec.n))
        psi = rng.uniform(0.0, 2 * np.pi, spec.n)
        rts = m * np.exp(1j * psi)
        P = from_roots(rts, _random_leading(rng))
        if not certify_inside(P, spec.K):
            raise FamilySamplingError("constructed inside-sample failed its certificate", 0.0)
        polys.append(P)
        rootsets.append(tuple(rts))
    return SampleBatch(tuple(polys), spec, seed, tuple(rootsets), 0)


def _draw_lacunary_coeffs(rng: np.random.Generator, n: int, mu: int) -> Polynomial:
    coeffs = np.zeros(n + 1, dtype=complex)
    coeffs[n] = _random_leading(rng)
    for j in range(mu, n + 1):
        power = n - j
        coeffs[power] = _complex_normal(rng, LACUNARY_DECAY ** power)
    return Polynomial(coeffs)


def sample_lacunary_outside(spec: FamilySpec, count: int, seed: int,
                            max_rejects: Optional[int] = None) -> SampleBatch:
    """Lacunary polynomials (index mu) with no zeros in |z| < K, by rejection.

    Coefficients of z^{n-1}..z^{n-mu+1} are exactly zero; the rest are complex
    Gaussians whose scale decays per power of z, which keeps the zero-free draw
    acceptably likely.  mu = 1 delegates to the root-space outside sampler.
    """
    if count <= 0:
        raise ValueError("count must be positive")
    if spec.mu == 1:
        return sample_zeros_outside(spec, count, seed)
    budget = max_rejects if max_rejects is not None else MAX_REJECTS_PER_SAMPLE * count
    rng = np.random.default_rng(seed)
    polys = []
    draws = 0
    while len(polys) < count:
        if draws >= budget:
            rate = len(polys) / draws if draws else 0.0
            raise FamilySamplingError(
                f"lacunary sampler got {len(polys)}/{count} acceptances in "
                f"{draws} draws (acceptance rate {rate:.2%})", rate)
        P = _draw_lacunary_coeffs(rng, spec.n, spec.mu)
        draws += 1
        if polycore.min_root_modulus(P) >= spec.K:
            polys.append(P)
    return SampleBatch(tuple(polys), spec, seed, None, 0, acceptance_rate=count / draws)


def sample_lacunary_inside(spec: FamilySpec, count: int, seed: int) -> SampleBatch:
    """Lacunary polynomials with ALL zeros in |z| <= K, used by the bound
    comparison on the all-zeros-inside lemma.

    Draws a lacunary tail, then shrinks it below the leading term on |z| = K
    (Rouche: |a_n| K^n > sum |a_{n-j}| K^{n-j} forces every zero inside),
    so acceptance is constructive rather than by rejection.
    """
    if count <= 0:
        raise ValueError("count must be positive")
    rng = np.random.default_rng(seed)
    polys = [Polynomial([0] * spec.n + [1])]
    while len(polys) < count:
        P = _draw_lacunary_coeffs(rng, spec.n, spec.mu)
        c = np.asarray(P.coeffs, dtype=complex)
        if len(c) != spec.n + 1:
            continue
        tail = c.copy()
        tail[spec.n] = 0
        tail_mass = float(np.sum(np.abs(tail) * spec.K ** np.arange(spec.n + 1)))
        lead_mass = abs(c[spec.n]) * spec.K ** spec.n
        if tail_mass == 0.0:
            polys.append(Polynomial(c))
            continue
        shrink = rng.uniform(0.05, 0.95) * lead_mass / tail_mass
        c[:spec.n] *= shrink
        Q = Polynomial(c)
        if certify_inside(Q, spec.K):
            polys.append(Q)
    return SampleBatch(tuple(polys), spec, seed, None, 0)


def sample_unrestricted(spec: FamilySpec, count: int, seed: int) -> SampleBatch:
    """Degree-n polynomials with i.i.d. complex Gaussian coefficients and a
    leading coefficient on the [0.5, 2] annulus."""
    if count <= 0:
        raise ValueError("count must be positive")
    rng = np.random.default_rng(seed)
    polys = []
    for _ in range(count):
        coeffs = [(rng.standard_normal() + 1j * rng.standard_normal()) / np.sqrt(2)
                  for _ in range(spec.n)]
        coeffs.append(_random_leading(rng))
        polys.append(Polynomial(coeffs))
    return SampleBatch(tuple(polys), spec, seed, None, 0)


def sample_for_side(spec: FamilySpec, count: int, seed: int) -> SampleBatch:
    """Dispatch on spec.side (lacunary shaping applies to the outside case)."""
    if spec.side is Side.ZEROS_OUTSIDE_OPEN_DISK:
        if spec.mu >= 2:
            return sample_lacunary_outside(spec, count, seed)
        return sample_zeros_outside(spec, count, seed)
    if spec.side is Side.ZEROS_INSIDE_CLOSED_DISK:
        if spec.mu >= 2:
            return sample_lacunary_inside(spec, count, seed)
        return sample_zeros_inside(spec, count, seed)
    return sample_unrestricted(spec, count, seed)


def extremal_candidates(spec: FamilySpec) -> tuple[Polynomial, ...]:
    """Known and conjectured near-extremal members for the family.

    Inside families: z^n (all zeros at the origin).  Outside families:
    (z+K)^n and, when mu divides n, (z^mu + K^mu)^(n/mu) -- zeros exactly on
    |z| = K; 1 + z^n; and the binomial z^n + K^n sitting on the lacunary
    zero-free edge |a_0| = |a_n| K^n.
    """
    n, K, mu = spec.n, spec.K, spec.mu
    zn = Polynomial([0] * n + [1])
    if spec.side is Side.ZEROS_INSIDE_CLOSED_DISK:
        return (zn,)
    if spec.side is Side.UNRESTRICTED:
        return (zn, from_roots([-1.0] * n))
    cands = [from_roots([-K] * n)]
    if n % mu == 0:
        block = Polynomial([K ** mu] + [0] * (mu - 1) + [1])
        power = Polynomial([1])
        for _ in range(n // mu):
            power = power * block
        cands.append(power)
    cands.append(Polynomial([1] + [0] * (n - 1) + [1]))          # 1 + z^n
    cands.append(Polynomial([K ** n] + [0] * (n - 1) + [1]))     # z^n + K^n
    shape = LacunaryShape(n, mu)
    return tuple(c for c in cands if c.degree() == n and matches_lacunary(c, shape))
