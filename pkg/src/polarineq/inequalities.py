"""One checkable predicate per catalogued inequality.

Each check computes both sides at quadrature precision and returns an
InequalityReport.  A check refuses to run (raises HypothesisError) when the
result's hypotheses fail -- that is a different outcome from a violation,
which is only ever reported with every certified precondition re-verified
at tightened tolerance.

Conventions follow each inequality's own statement: sup-norm checks are
labelled "sup", 1/2pi-normalized L^p checks "mean", plain-integral L^p
checks "raw", pointwise-on-the-circle bounds "pointwise", and the double
integral comparison "raw_power" (it compares p-th powers, not norms).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import polycore
from .circlequad import (DEFAULT_SPEC, INF, QuadratureResult, QuadratureSpec,
                         circle_integral, cp_constant, double_circle_integral,
                         lp_norm, lp_norm_of, sup_norm)
from .polycore import (LacunaryShape, Polynomial, conjugate_reciprocal,
                       derivative, eval_on_circle, matches_lacunary,
                       polar_derivative)

# Satisfaction slack: quadrature rel_tol 1e-10 plus root-certificate slop.
SLACK = 1e-9
ABS_SLACK = 1e-12
# Root certificates re-run at this residual before a violation is reported.
TIGHT_RESIDUAL = 1e-12


class HypothesisError(ValueError):
    """A check's hypotheses (parameter ranges or zero-location certificates)
    do not hold for the supplied inputs."""


@dataclass(frozen=True)
class InequalityParams:
    alpha: complex = 0j
    beta: complex = 0j
    p: float = 2.0
    K: float = 1.0
    mu: int = 1

    def to_json_dict(self) -> dict:
        return {
            "alpha": [self.alpha.real, self.alpha.imag],
            "beta": [self.beta.real, self.beta.imag],
            "p": self.p if self.p != INF else "inf",
            "K": self.K,
            "mu": self.mu,
        }


@dataclass(frozen=True)
class InequalityReport:
    name: str
    lhs: float
    rhs: float
    ratio: float
    margin: float
    satisfied: bool
    params: InequalityParams
    polynomial: Polynomial
    quadrature: tuple[QuadratureResult, QuadratureResult]
    convention: str
    worst_theta: Optional[float] = None

    def to_json_dict(self) -> dict:
        d = {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "ratio": self.ratio,
            "margin": self.margin,
            "satisfied": self.satisfied,
            "params": self.params.to_json_dict(),
            "polynomial": self.polynomial.to_json_dict(),
            "quadrature": [q.to_json_dict() for q in self.quadrature],
            "convention": self.convention,
        }
        if self.worst_theta is not None:
            d["worst_theta"] = self.worst_theta
        return d


def _make_report(name: str, lhs: float, rhs: float, params: InequalityParams,
                 P: Polynomial, quad_pair, convention: str,
                 worst_theta: Optional[float] = None) -> InequalityReport:
    satisfied = lhs <= rhs * (1 + SLACK) + ABS_SLACK
    ratio = 0.0 if (rhs == 0 and lhs == 0) else (math.inf if rhs == 0 else lhs / rhs)
    return InequalityReport(name, lhs, rhs, ratio, rhs - lhs, satisfied,
                            params, P, quad_pair, convention, worst_theta)


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise HypothesisError(message)


def _require_degree(P: Polynomial, minimum: int = 1) -> int:
    n = P.degree()
    _require(n >= minimum, f"polynomial degree {n} below required {minimum}")
    return n


def _require_p(p: float, minimum: float = 1.0) -> None:
    _require(p == INF or p >= minimum, f"need p >= {minimum}, got {p}")


def _certify_no_zeros_inside(P: Polynomial, K: float) -> None:
    if polycore.min_root_modulus(P) >= K - 1e-8:
        return
    # multiple boundary roots blur double-precision locations; decide at
    # high precision before failing the certificate
    _require(polycore.min_root_modulus(P, high_precision=True) >= K - 1e-8,
             f"polynomial vanishes in |z| < {K} (zero-free certificate failed)")


def _certify_all_zeros_inside(P: Polynomial, K: float) -> None:
    if polycore.max_root_modulus(P) <= K + 1e-8:
        return
    _require(polycore.max_root_modulus(P, high_precision=True) <= K + 1e-8,
             f"polynomial has a zero outside |z| <= {K}")


def _recertify_outside_tight(P: Polynomial, K: float) -> bool:
    """Violation triage: re-run the zero-free certificate with the root
    residual bound tightened to TIGHT_RESIDUAL."""
    try:
        return polycore.min_root_modulus(P, residual_tol=TIGHT_RESIDUAL,
                                         high_precision=True) >= K - 1e-8
    except ArithmeticError:
        return False


def _grid_theta(spec: QuadratureSpec) -> np.ndarray:
    return 2 * np.pi * np.arange(spec.max_nodes) / spec.max_nodes


# ---------------------------------------------------------------------------
# sup-norm inequalities

def check_bernstein(P: Polynomial, spec: QuadratureSpec = DEFAULT_SPEC) -> InequalityReport:
    """max |P'| <= n * max |P| on the unit circle."""
    n = _require_degree(P)
    lhs = sup_norm(derivative(P), spec)
    m = sup_norm(P, spec)
    q = QuadratureResult(m, 0.0, spec.max_nodes, True)
    ql = QuadratureResult(lhs, 0.0, spec.max_nodes, True)
    return _make_report("bernstein", lhs, n * m, InequalityParams(), P, (ql, q), "sup")


def check_aziz_shah(P: Polynomial, alpha: complex,
                    spec: QuadratureSpec = DEFAULT_SPEC) -> InequalityReport:
    """max |D_alpha P| <= n * |alpha| * max |P| for |alpha| > 1."""
    n = _require_degree(P)
    _require(abs(alpha) > 1, f"need |alpha| > 1, got {abs(alpha)}")
    lhs = sup_norm(polar_derivative(P, alpha), spec)
    m = sup_norm(P, spec)
    params = InequalityParams(alpha=alpha)
    ql = QuadratureResult(lhs, 0.0, spec.max_nodes, True)
    qr = QuadratureResult(m, 0.0, spec.max_nodes, True)
    return _make_report("aziz_shah", lhs, n * abs(alpha) * m, params, P, (ql, qr), "sup")


# ---------------------------------------------------------------------------
# L^p inequalities for unrestricted polynomials

def check_zygmund(P: Polynomial, p: float,
                  spec: QuadratureSpec = DEFAULT_SPEC) -> InequalityReport:
    """mean-||P'||_p <= n * mean-||P||_p, p >= 1 (1/2pi-normalized)."""
    n = _require_degree(P)
    _require_p(p)
    ql = lp_norm(derivative(P), p, spec, mean=True)
    qr = lp_norm(P, p, spec, mean=True)
    params = InequalityParams(p=p)
    return _make_report("zygmund", ql.value, n * qr.value, params, P, (ql, qr), "mean")


def check_theorem_A(P: Polynomial, alpha: complex, p: float,
                    spec: QuadratureSpec = DEFAULT_SPEC) -> InequalityReport:
    """||D_alpha P||_p <= n (|alpha|+1) ||P||_p for |alpha| >= 1, p >= 1."""
    n = _require_degree(P)
    _require(abs(alpha) >= 1, f"need |alpha| >= 1, got {abs(alpha)}")
    _require_p(p)
    ql = lp_norm(polar_derivative(P, alpha), p, spec)
    qr = lp_norm(P, p, spec)
    params = InequalityParams(alpha=alpha, p=p)
    return _make_report("theorem_A", ql.value, n * (abs(alpha) + 1) * qr.value,
                        params, P, (ql, qr), "raw")


# ---------------------------------------------------------------------------
# zero-free-disk L^p inequalities

def check_debruijn(P: Polynomial, p: float,
                   spec: QuadratureSpec = DEFAULT_SPEC) -> InequalityReport:
    """||P'||_p <= n C_p ||P||_p for P with no zeros in |z| < 1."""
    n = _require_degree(P)
    _require_p(p)
    _certify_no_zeros_inside(P, 1.0)
    ql = lp_norm(derivative(P), p, spec)
    qr = lp_norm(P, p, spec)
    params = InequalityParams(p=p)
    report = _make_report("debruijn", ql.value, n * cp_constant(p) * qr.value,
                          params, P, (ql, qr), "raw")
    return _triaged(report, P, 1.0)


def check_theorem_B(P: Polynomial, alpha: complex, p: float,
                    spec: QuadratureSpec = DEFAULT_SPEC) -> InequalityReport:
    """||D_alpha P||_p <= n (|alpha|+1) C_p ||P||_p for zero-free P, |alpha| >= 1.

    This is the corrected right-hand side; the as-printed variant (which
    repeats ||D_alpha P||_p on the right) lives in check_theorem_B_printed.
    """
    n = _require_degree(P)
    _require(abs(alpha) >= 1, f"need |alpha| >= 1, got {abs(alpha)}")
    _require_p(p)
    _certify_no_zeros_inside(P, 1.0)
    ql = lp_norm(polar_derivative(P, alpha), p, spec)
    qr = lp_norm(P, p, spec)
    params = InequalityParams(alpha=alpha, p=p)
    report = _make_report("theorem_B", ql.value,
                          n * (abs(alpha) + 1) * cp_constant(p) * qr.value,
                          params, P, (ql, qr), "raw")
    return _triaged(report, P, 1.0)


def check_theorem_B_printed(P: Polynomial, alpha: complex, p: float,
                            spec: QuadratureSpec = DEFAULT_SPEC) -> InequalityReport:
    """The as-printed form with ||D_alpha P||_p on BOTH sides.

    Vacuous whenever the left side is positive: it reduces to
    1 <= n (|alpha|+1) C_p, which holds for every n >= 1, |alpha| >= 1,
    p >= 1 since C_p > 1/2.  Kept only as a documented artifact.
    """
    n = _require_degree(P)
    _require(abs(alpha) >= 1, f"need |alpha| >= 1, got {abs(alpha)}")
    _require_p(p)
    _certify_no_zeros_inside(P, 1.0)
    ql = lp_norm(polar_derivative(P, alpha), p, spec)
    params = InequalityParams(alpha=alpha, p=p)
    return _make_report("theorem_B_printed", ql.value,
                        n * (abs(alpha) + 1) * cp_constant(p) * ql.value,
                        params, P, (ql, ql), "raw")


# ---------------------------------------------------------------------------
# the combined polar checks (restricted zeros, beta term)

def _combined_lhs_fn(P: Polynomial, alpha: complex, beta: complex,
                     factor: float) -> Callable[[np.ndarray], np.ndarray]:
    """theta -> e^{i theta} D_alpha P(e^{i theta}) + n*factor*beta*P(e^{i theta}).

    The e^{i theta} weight is not a polynomial in z, so the combination is
    sampled pointwise at shared nodes, never assembled as a coefficient vector.
    """
    n = P.degree()
    D = polar_derivative(P, alpha)
    c = n * factor * beta

    def f(theta: np.ndarray) -> np.ndarray:
        w = np.exp(1j * theta)
        return w * polycore.evaluate(D, w) + c * polycore.evaluate(P, w)

    return f


def combined_sides(P: Polynomial, alpha: complex, beta: complex, p: float,
                   K: float, mu: int, spec: QuadratureSpec
                   ) -> tuple[QuadratureResult, QuadratureResult, float]:
    """Certificate-free arithmetic core of the combined polar checks:
    (lhs norm result, ||P||_p result, rhs value).  Used by the ratio
    optimizer, which enforces feasibility through a penalty instead."""
    n = P.degree()
    Kmu = K ** mu
    factor = (abs(alpha) - Kmu) / (Kmu + 1)
    ql = lp_norm_of(_combined_lhs_fn(P, alpha, beta, factor), p, spec)
    qr = lp_norm(P, p, spec)
    rhs = n * (1 + abs(alpha) + 2 * factor * abs(beta)) * cp_constant(p) * qr.value
    return ql, qr, rhs


def _check_combined(name: str, P: Polynomial, alpha: complex, beta: complex,
                    p: float, K: float, mu: int,
                    spec: QuadratureSpec) -> InequalityReport:
    _require_degree(P)
    _require(0 < K <= 1, f"need 0 < K <= 1, got {K}")
    _require(abs(alpha) >= K, f"need |alpha| >= K, got |alpha|={abs(alpha)}, K={K}")
    _require(abs(beta) <= 1, f"need |beta| <= 1, got {abs(beta)}")
    _require_p(p)
    _certify_no_zeros_inside(P, K)
    ql, qr, rhs = combined_sides(P, alpha, beta, p, K, mu, spec)
    params = InequalityParams(alpha=alpha, beta=beta, p=p, K=K, mu=mu)
    report = _make_report(name, ql.value, rhs, params, P, (ql, qr), "raw")
    return _triaged(report, P, K)


def check_theorem_C(P: Polynomial, alpha: complex, beta: complex, p: float,
                    K: float, spec: QuadratureSpec = DEFAULT_SPEC) -> InequalityReport:
    """||e^{i t} D_alpha P + n ((|alpha|-K)/(K+1)) beta P||_p <=
    n (1 + |alpha| + 2 ((|alpha|-K)/(K+1)) |beta|) C_p ||P||_p
    for P zero-free in |z| < K <= 1, |alpha| >= K, |beta| <= 1."""
    return _check_combined("theorem_C", P, alpha, beta, p, K, 1, spec)


def check_main_theorem(P: Polynomial, alpha: complex, beta: complex, p: float,
                       K: float, mu: int,
                       spec: QuadratureSpec = DEFAULT_SPEC) -> InequalityReport:
    """The lacunary refinement: K^mu replaces K in the combination factor.

    Requires P to match LacunaryShape(n, mu); with mu = 1 the report is
    bit-for-bit the theorem_C report on the same inputs.
    """
    n = _require_degree(P)
    shape = LacunaryShape(n, mu)
    _require(matches_lacunary(P, shape),
             f"polynomial is not lacunary of index mu={mu}")
    report = _check_combined("main_theorem", P, alpha, beta, p, K, mu, spec)
    return report


def _triaged(report: InequalityReport, P: Polynomial, K: float) -> InequalityReport:
    """A violation only stands if the zero-free certificate survives the
    tightened residual; otherwise the case is a hypothesis failure."""
    if report.satisfied:
        return report
    if not _recertify_outside_tight(P, K):
        raise HypothesisError(
            "apparent violation rejected: zero-free certificate fails at "
            f"tightened residual {TIGHT_RESIDUAL}")
    return report


# ---------------------------------------------------------------------------
# pointwise lemmas

def check_lemma1(P: Polynomial, alpha: complex, K: float, mu: int,
                 variant: str = "printed",
                 spec: QuadratureSpec = DEFAULT_SPEC) -> InequalityReport:
    """|D_alpha P(z)| >= n ((|alpha|-K^mu)/denom) |P(z)| on |z| = 1, for P
    lacunary of index mu with ALL zeros in |z| <= K <= 1 and |alpha| >= K.

    variant "printed" uses denom = K^mu (the lemma as stated); variant
    "proof" uses denom = K^mu + 1 (the form its proof actually invokes).
    The worst grid node is reported; lhs is the bound there, rhs is
    |D_alpha P| there, so satisfied means the lower bound held everywhere.
    """
    n = _require_degree(P)
    _require(0 < K <= 1, f"need 0 < K <= 1, got {K}")
    _require(abs(alpha) >= K, f"need |alpha| >= K, got {abs(alpha)}")
    shape = LacunaryShape(n, mu)
    _require(matches_lacunary(P, shape), f"polynomial is not lacunary of index mu={mu}")
    _certify_all_zeros_inside(P, K)
    if variant == "printed":
        denom = K ** mu
    elif variant == "proof":
        denom = K ** mu + 1
    else:
        raise ValueError(f"unknown lemma1 variant {variant!r}")
    bound = n * (abs(alpha) - K ** mu) / denom

    theta = _grid_theta(spec)
    big = np.abs(eval_on_circle(polar_derivative(P, alpha), theta))
    small = bound * np.abs(eval_on_circle(P, theta))
    k = int(np.argmin(big - small))
    params = InequalityParams(alpha=alpha, K=K, mu=mu)
    ql = QuadratureResult(float(small[k]), 0.0, spec.max_nodes, True)
    qr = QuadratureResult(float(big[k]), 0.0, spec.max_nodes, True)
    return _make_report(f"lemma1_{variant}", float(small[k]), float(big[k]),
                        params, P, (ql, qr), "pointwise", worst_theta=float(theta[k]))


def default_lemma2_majorant(P: Polynomial, K: float) -> Polynomial:
    """Q(z) = z^n conj(P(K^2 / conj(z))) / K^n: maps the zeros of a polynomial
    that is zero-free in |z| < K into |z| <= K and satisfies |Q| = |P| on
    |z| = K exactly."""
    n = P.degree()
    coeffs = [P.coeffs[n - m].conjugate() * K ** (n - 2 * m) for m in range(n + 1)]
    return Polynomial(coeffs)


def check_lemma2(P: Polynomial, Q: Polynomial, alpha: complex, beta: complex,
                 K: float, mu: int = 1,
                 spec: QuadratureSpec = DEFAULT_SPEC) -> InequalityReport:
    """|z D_alpha P + n ((|alpha|-K^mu)/(K^mu+1)) beta P| <= same with Q,
    pointwise on |z| = 1, given deg P <= deg Q = n, all zeros of Q in
    |z| <= K, and |P| <= |Q| on |z| = K.

    Hypothesis verification failures raise HypothesisError (they are not
    violations of the comparison itself).
    """
    n = _require_degree(Q)
    _require(P.degree() <= n, "deg P must not exceed deg Q")
    _require(0 < K <= 1, f"need 0 < K <= 1, got {K}")
    _require(abs(alpha) >= K, f"need |alpha| >= K, got {abs(alpha)}")
    _require(abs(beta) <= 1, f"need |beta| <= 1, got {abs(beta)}")
    _certify_all_zeros_inside(Q, K)

    theta = _grid_theta(spec)
    ring = K * np.exp(1j * theta)
    pv = np.abs(polycore.evaluate(P, ring))
    qv = np.abs(polycore.evaluate(Q, ring))
    scale = float(qv.max())
    _require(bool((pv <= qv + SLACK * scale + ABS_SLACK).all()),
             "|P| <= |Q| fails on |z| = K")

    Kmu = K ** mu
    factor = (abs(alpha) - Kmu) / (Kmu + 1)
    # the P side uses the majorant's n throughout: the comparison comes from
    # applying the lower bound to Q - lambda*P, which has degree n, so both
    # D_alpha and the beta term must be n-scaled for the argument to cohere
    cP = n * factor * beta
    DP = polar_derivative_general(P, alpha, n)

    def f_lhs(t: np.ndarray) -> np.ndarray:
        w = np.exp(1j * t)
        return w * polycore.evaluate(DP, w) + cP * polycore.evaluate(P, w)

    fQ = _combined_lhs_fn(Q, alpha, beta, factor)
    lhs_vals = np.abs(f_lhs(theta))
    rhs_vals = np.abs(fQ(theta))
    k = int(np.argmin(rhs_vals - lhs_vals))
    params = InequalityParams(alpha=alpha, beta=beta, K=K, mu=mu)
    ql = QuadratureResult(float(lhs_vals[k]), 0.0, spec.max_nodes, True)
    qr = QuadratureResult(float(rhs_vals[k]), 0.0, spec.max_nodes, True)
    return _make_report("lemma2", float(lhs_vals[k]), float(rhs_vals[k]),
                        params, P, (ql, qr), "pointwise", worst_theta=float(theta[k]))


def polar_derivative_general(P: Polynomial, alpha: complex, n: int) -> Polynomial:
    """n P + (alpha - z) P' with an externally imposed n (the lemma compares
    P of lower degree against a degree-n majorant)."""
    if P.is_zero():
        return Polynomial(())
    c = list(P.coeffs) + [0j] * (n + 1 - len(P.coeffs))
    out = [(n - j) * c[j] + alpha * (j + 1) * (c[j + 1] if j + 1 <= n else 0j)
           for j in range(n + 1)]
    return Polynomial(out)


def check_lemma3(P: Polynomial, p: float, with_two_pi: bool = True,
                 spec: QuadratureSpec = DEFAULT_SPEC) -> InequalityReport:
    """Double-integral bound for Q the conjugate-reciprocal of P, P(0) != 0:

        int int |Q'(e^{i t}) + e^{i s} P'(e^{i t})|^p dt ds
            <= 2 pi n^p int |P(e^{i t})|^p dt      (p >= 0)

    The phi-dependence of the integrand and the 2 pi factor follow the
    bound's actual downstream usage; with_two_pi=False reproduces the
    printed right-hand side for the typo-frequency experiment.
    """
    if P.is_zero() or abs(P.coeffs[0]) == 0.0:
        raise HypothesisError("lemma3 requires P(0) != 0")
    _require(p >= 0, f"need p >= 0, got {p}")
    n = P.degree()
    Q = conjugate_reciprocal(P)
    dP, dQ = derivative(P), derivative(Q)

    def g(theta, phi):
        w = np.exp(1j * theta)
        a = polycore.evaluate(dQ, w)
        b = polycore.evaluate(dP, w)
        return np.abs(a + np.exp(1j * phi) * b) ** p

    ql = double_circle_integral(g, spec)
    qr = circle_integral(lambda t: np.abs(eval_on_circle(P, t)) ** p, spec)
    rhs = (2 * np.pi if with_two_pi else 1.0) * n ** p * qr.value
    params = InequalityParams(p=p)
    name = "lemma3" if with_two_pi else "lemma3_printed"
    return _make_report(name, ql.value, rhs, params, P, (ql, qr), "raw_power")


# ---------------------------------------------------------------------------
# identities

def check_reciprocal_identity(P: Polynomial, nodes: int = 512,
                              tol: float = 1e-10) -> InequalityReport:
    """n P(e^{i t}) - e^{i t} P'(e^{i t}) = e^{i(n-1)t} conj(Q'(e^{i t})) and
    the mirrored identity with P and Q swapped, checked pointwise.

    lhs is the worst normalized deviation over the grid, rhs the tolerance.
    """
    n = P.degree()
    if n < 0:
        raise HypothesisError("identity check needs a nonzero polynomial")
    Q = conjugate_reciprocal(P)
    theta = 2 * np.pi * np.arange(nodes) / nodes
    w = np.exp(1j * theta)
    dP = polycore.evaluate(derivative(P), w)
    dQ = polycore.evaluate(derivative(Q), w)
    Pv = polycore.evaluate(P, w)
    Qv = polycore.evaluate(Q, w)
    rot = np.exp(1j * (n - 1) * theta)
    dev1 = np.abs(n * Pv - w * dP - rot * np.conj(dQ))
    dev2 = np.abs(n * Qv - w * dQ - rot * np.conj(dP))
    scale = 1.0 + max(float(np.abs(dP).max()), float(np.abs(dQ).max()))
    worst = float(max(dev1.max(), dev2.max()) / scale)
    k = int(np.argmax(np.maximum(dev1, dev2)))
    ql = QuadratureResult(worst, 0.0, nodes, True)
    qr = QuadratureResult(tol, 0.0, nodes, True)
    return _make_report("reciprocal_identity", worst, tol, InequalityParams(),
                        P, (ql, qr), "pointwise", worst_theta=float(theta[k]))


def circle_modulus_identity_margin(P: Polynomial, nodes: int = 512) -> float:
    """max relative deviation of |Q(e^{i t})| from |P(e^{i t})|."""
    theta = 2 * np.pi * np.arange(nodes) / nodes
    w = np.exp(1j * theta)
    a = np.abs(polycore.evaluate(P, w))
    b = np.abs(polycore.evaluate(conjugate_reciprocal(P), w))
    scale = max(float(a.max()), 1e-300)
    return float(np.abs(a - b).max() / scale)
