"""Parameter-grid scanning and derivative-free ratio maximization.

``scan`` walks a Cartesian parameter grid, drawing fresh certified family
samples per cell, and returns one InequalityReport per case.  ``maximize_ratio``
runs multistart Nelder-Mead over an unconstrained parameterization of the
family (roots or lacunary coefficients) plus any free scalars, hunting
near-extremal configurations; its result is always re-evaluated at full
quadrature precision before being recorded.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import minimize

from . import families, inequalities, polycore
from .circlequad import DEFAULT_SPEC, QuadratureSpec
from .families import FamilySpec, Side, extremal_candidates, sample_for_side
from .inequalities import (HypothesisError, InequalityParams, InequalityReport,
                           combined_sides)
from .polycore import Polynomial, from_roots

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# check catalog

@dataclass(frozen=True)
class CheckDef:
    """How a catalogued check plugs into scans and searches."""

    name: str
    side: Side
    uses_alpha: bool = False
    uses_beta: bool = False
    uses_p: bool = True
    uses_K: bool = False
    uses_mu: bool = False
    # |alpha| must be >= this bound; None encodes "strictly greater than 1"
    alpha_floor: Optional[float] = None
    alpha_strict: bool = False
    run: Callable[..., InequalityReport] = None  # type: ignore[assignment]

    def family(self, n: int, K: float, mu: int) -> FamilySpec:
        return FamilySpec(n=n, K=K if self.uses_K else 1.0,
                          mu=mu if self.uses_mu else 1, side=self.side)


def _run_lemma2(P: Polynomial, params: InequalityParams,
                spec: QuadratureSpec) -> InequalityReport:
    # scan-time instantiation: P is an inside-family majorant, the minorant
    # is a deterministic shrink of it (|eps*P| <= |P| everywhere)
    eps = 0.25 + 0.5 / (1.0 + abs(P.leading()))
    return inequalities.check_lemma2(eps * P, P, params.alpha, params.beta,
                                     params.K, params.mu, spec)


CATALOG: dict[str, CheckDef] = {}


def _register(defn: CheckDef) -> None:
    CATALOG[defn.name] = defn


_register(CheckDef("bernstein", Side.UNRESTRICTED, uses_p=False,
                   run=lambda P, pr, spec: inequalities.check_bernstein(P, spec)))
_register(CheckDef("zygmund", Side.UNRESTRICTED,
                   run=lambda P, pr, spec: inequalities.check_zygmund(P, pr.p, spec)))
_register(CheckDef("aziz_shah", Side.UNRESTRICTED, uses_alpha=True, uses_p=False,
                   alpha_floor=1.0, alpha_strict=True,
                   run=lambda P, pr, spec: inequalities.check_aziz_shah(P, pr.alpha, spec)))
_register(CheckDef("theorem_A", Side.UNRESTRICTED, uses_alpha=True, alpha_floor=1.0,
                   run=lambda P, pr, spec: inequalities.check_theorem_A(P, pr.alpha, pr.p, spec)))
_register(CheckDef("debruijn", Side.ZEROS_OUTSIDE_OPEN_DISK,
                   run=lambda P, pr, spec: inequalities.check_debruijn(P, pr.p, spec)))
_register(CheckDef("theorem_B", Side.ZEROS_OUTSIDE_OPEN_DISK, uses_alpha=True,
                   alpha_floor=1.0,
                   run=lambda P, pr, spec: inequalities.check_theorem_B(P, pr.alpha, pr.p, spec)))
_register(CheckDef("theorem_B_printed", Side.ZEROS_OUTSIDE_OPEN_DISK, uses_alpha=True,
                   alpha_floor=1.0,
                   run=lambda P, pr, spec: inequalities.check_theorem_B_printed(
                       P, pr.alpha, pr.p, spec)))
_register(CheckDef("theorem_C", Side.ZEROS_OUTSIDE_OPEN_DISK, uses_alpha=True,
                   uses_beta=True, uses_K=True, alpha_floor=0.0,
                   run=lambda P, pr, spec: inequalities.check_theorem_C(
                       P, pr.alpha, pr.beta, pr.p, pr.K, spec)))
_register(CheckDef("main_theorem", Side.ZEROS_OUTSIDE_OPEN_DISK, uses_alpha=True,
                   uses_beta=True, uses_K=True, uses_mu=True, alpha_floor=0.0,
                   run=lambda P, pr, spec: inequalities.check_main_theorem(
                       P, pr.alpha, pr.beta, pr.p, pr.K, pr.mu, spec)))
_register(CheckDef("lemma1_printed", Side.ZEROS_INSIDE_CLOSED_DISK, uses_alpha=True,
                   uses_p=False, uses_K=True, uses_mu=True, alpha_floor=0.0,
                   run=lambda P, pr, spec: inequalities.check_lemma1(
                       P, pr.alpha, pr.K, pr.mu, "printed", spec)))
_register(CheckDef("lemma1_proof", Side.ZEROS_INSIDE_CLOSED_DISK, uses_alpha=True,
                   uses_p=False, uses_K=True, uses_mu=True, alpha_floor=0.0,
                   run=lambda P, pr, spec: inequalities.check_lemma1(
                       P, pr.alpha, pr.K, pr.mu, "proof", spec)))
_register(CheckDef("lemma2", Side.ZEROS_INSIDE_CLOSED_DISK, uses_alpha=True,
                   uses_beta=True, uses_p=False, uses_K=True, uses_mu=True,
                   alpha_floor=0.0, run=_run_lemma2))
_register(CheckDef("lemma3", Side.UNRESTRICTED,
                   run=lambda P, pr, spec: inequalities.check_lemma3(P, pr.p, True, spec)))
_register(CheckDef("lemma3_printed", Side.UNRESTRICTED,
                   run=lambda P, pr, spec: inequalities.check_lemma3(P, pr.p, False, spec)))
_register(CheckDef("reciprocal_identity", Side.UNRESTRICTED, uses_p=False,
                   run=lambda P, pr, spec: inequalities.check_reciprocal_identity(P)))


# ---------------------------------------------------------------------------
# grid scanning

@dataclass(frozen=True)
class ScanGrid:
    p_values: tuple[float, ...] = (2.0,)
    alpha_moduli: tuple[float, ...] = (2.0,)
    alpha_phases: tuple[float, ...] = (0.0,)
    beta_values: tuple[complex, ...] = (0.5 + 0j,)
    K_values: tuple[float, ...] = (1.0,)
    mu_values: tuple[int, ...] = (1,)
    n_values: tuple[int, ...] = (4,)
    samples_per_cell: int = 5
    seed: int = 0

    def __post_init__(self):
        for name in ("p_values", "alpha_moduli", "alpha_phases", "beta_values",
                     "K_values", "mu_values", "n_values"):
            object.__setattr__(self, name, tuple(getattr(self, name)))

    def to_json_dict(self) -> dict:
        return {
            "p_values": list(self.p_values),
            "alpha_moduli": list(self.alpha_moduli),
            "alpha_phases": list(self.alpha_phases),
            "beta_values": [[b.real, b.imag] for b in map(complex, self.beta_values)],
            "K_values": list(self.K_values),
            "mu_values": list(self.mu_values),
            "n_values": list(self.n_values),
            "samples_per_cell": self.samples_per_cell,
            "seed": self.seed,
        }

    @staticmethod
    def from_json_dict(obj: dict) -> "ScanGrid":
        kw = dict(obj)
        if "beta_values" in kw:
            kw["beta_values"] = tuple(complex(re, im) for re, im in kw["beta_values"])
        for key in ("p_values", "alpha_moduli", "alpha_phases", "K_values",
                    "mu_values", "n_values"):
            if key in kw:
                kw[key] = tuple(kw[key])
        return ScanGrid(**kw)


def _cell_feasible(defn: CheckDef, n: int, K: float, mu: int,
                   a_mod: float, beta: complex, p: float) -> Optional[str]:
    """None when the cell respects the check's parameter constraints,
    otherwise the reason to skip it."""
    if mu > n:
        return f"mu={mu} exceeds n={n}"
    if defn.uses_p and p < 1:
        return f"p={p} below 1"
    if defn.uses_alpha and defn.alpha_floor is not None:
        floor = max(defn.alpha_floor, K if defn.uses_K else 0.0)
        if defn.alpha_strict and a_mod <= floor:
            return f"|alpha|={a_mod} not above {floor}"
        if a_mod < floor:
            return f"|alpha|={a_mod} below {floor}"
    if defn.uses_beta and abs(beta) > 1:
        return f"|beta|={abs(beta)} above 1"
    return None


def scan(check_name: str, grid: ScanGrid,
         spec: QuadratureSpec = DEFAULT_SPEC) -> list[InequalityReport]:
    """Run one check over the Cartesian product of the grid axes it uses.

    Each cell draws samples_per_cell fresh certified family samples from a
    cell-specific child seed, so a (check, grid) pair is fully reproducible.
    Cells whose parameters violate the check's preconditions are skipped with
    a logged record; sampling failures are likewise skipped, not fatal.
    """
    if check_name not in CATALOG:
        raise KeyError(f"unknown check {check_name!r}; known: {sorted(CATALOG)}")
    defn = CATALOG[check_name]
    axes = [
        grid.n_values,
        grid.K_values if defn.uses_K else (1.0,),
        grid.mu_values if defn.uses_mu else (1,),
        grid.p_values if defn.uses_p else (2.0,),
        grid.alpha_moduli if defn.uses_alpha else (2.0,),
        grid.alpha_phases if defn.uses_alpha else (0.0,),
        grid.beta_values if defn.uses_beta else (0j,),
    ]
    cells = [(n, K, mu, p, am, ap, b)
             for n in axes[0] for K in axes[1] for mu in axes[2] for p in axes[3]
             for am in axes[4] for ap in axes[5] for b in axes[6]]
    if not cells or grid.samples_per_cell <= 0:
        raise ValueError("empty scan grid")
    seeds = np.random.SeedSequence(grid.seed).generate_state(len(cells))
    reports: list[InequalityReport] = []
    for cell, cell_seed in zip(cells, seeds):
        n, K, mu, p, a_mod, a_phase, beta = cell
        why = _cell_feasible(defn, n, K, mu, a_mod, beta, p)
        if why is not None:
            logger.info("scan[%s]: skipping cell %s (%s)", check_name, cell, why)
            continue
        alpha = a_mod * complex(math.cos(a_phase), math.sin(a_phase))
        params = InequalityParams(alpha=alpha, beta=complex(beta), p=p, K=K, mu=mu)
        try:
            batch = sample_for_side(defn.family(n, K, mu), grid.samples_per_cell,
                                    int(cell_seed))
        except families.FamilySamplingError as exc:
            logger.info("scan[%s]: skipping cell %s (sampling: %s)", check_name, cell, exc)
            continue
        for P in batch.polynomials:
            try:
                reports.append(defn.run(P, params, spec))
            except HypothesisError as exc:
                logger.info("scan[%s]: case skipped, hypotheses failed: %s",
                            check_name, exc)
    return reports


# ---------------------------------------------------------------------------
# ratio maximization

@dataclass(frozen=True)
class SearchConfig:
    multistarts: int = 16
    max_iters: int = 400            # Nelder-Mead iterations per start
    init_scale: float = 0.1         # initial simplex edge length
    simplex_tol: float = 1e-10      # function-spread convergence threshold
    seed: int = 0
    search_rel_tol: float = 1e-7    # reduced quadrature tolerance during search
    penalty_sharpness: float = 1e4  # sigmoid steepness for the zero-free penalty

    def to_json_dict(self) -> dict:
        return {k: getattr(self, k) for k in
                ("multistarts", "max_iters", "init_scale", "simplex_tol",
                 "seed", "search_rel_tol", "penalty_sharpness")}


@dataclass(frozen=True)
class ExtremalRecord:
    check_name: str
    best_ratio: float
    polynomial: Polynomial
    params: InequalityParams
    iterations: int
    restarts: int
    trace_summary: tuple[tuple[int, float], ...]

    def to_json_dict(self) -> dict:
        return {
            "check_name": self.check_name,
            "best_ratio": self.best_ratio,
            "argmax": {
                "polynomial": self.polynomial.to_json_dict(),
                "params": self.params.to_json_dict(),
            },
            "iterations": self.iterations,
            "restarts": self.restarts,
            "trace_summary": [list(t) for t in self.trace_summary],
        }


class _Parameterization:
    """Maps an unconstrained real vector onto (Polynomial, InequalityParams).

    Root modes keep the family constraint structural: outside-disk moduli are
    K*(1+t^2), inside-disk moduli K*sin^2(t), unrestricted roots are Cartesian.
    The lacunary coefficient mode holds structural zeros exactly and relies on
    the zero-free penalty for feasibility.
    """

    def __init__(self, defn: CheckDef, spec: FamilySpec, fixed: dict):
        self.defn = defn
        self.spec = spec
        self.fixed = dict(fixed)
        self.coeff_mode = spec.mu >= 2
        n = spec.n
        self.n_root_params = 0 if self.coeff_mode else 2 * n
        self.n_coeff_params = 2 * (n - spec.mu + 1) if self.coeff_mode else 0
        self.free_alpha = defn.uses_alpha and "alpha" not in self.fixed
        self.free_beta = defn.uses_beta and "beta" not in self.fixed
        self.dim = (self.n_root_params + self.n_coeff_params + 1
                    + (2 if self.free_alpha else 0) + (2 if self.free_beta else 0))

    def _alpha_floor(self) -> float:
        floor = self.defn.alpha_floor if self.defn.alpha_floor is not None else 0.0
        if self.defn.uses_K:
            floor = max(floor, self.spec.K)
        return floor

    def split(self, x: np.ndarray) -> tuple[Polynomial, InequalityParams]:
        i = 0
        K, n = self.spec.K, self.spec.n
        if self.coeff_mode:
            m = n - self.spec.mu + 1
            re = x[i:i + m]; im = x[i + m:i + 2 * m]
            i += 2 * m
            coeffs = np.zeros(n + 1, dtype=complex)
            # free coefficients sit at powers 0..n-mu; the rest stay exactly zero
            coeffs[:m] = re + 1j * im
            lead_phase = x[i]; i += 1
            coeffs[n] = np.exp(1j * lead_phase)
            P = Polynomial(coeffs)
        else:
            rts = []
            for _ in range(n):
                if self.spec.side is Side.ZEROS_OUTSIDE_OPEN_DISK:
                    t, psi = x[i], x[i + 1]
                    rts.append(K * (1 + t * t) * complex(math.cos(psi), math.sin(psi)))
                elif self.spec.side is Side.ZEROS_INSIDE_CLOSED_DISK:
                    t, psi = x[i], x[i + 1]
                    rts.append(K * math.sin(t) ** 2 * complex(math.cos(psi), math.sin(psi)))
                else:
                    rts.append(complex(x[i], x[i + 1]))
                i += 2
            lead_phase = x[i]; i += 1
            P = from_roots(rts, complex(math.cos(lead_phase), math.sin(lead_phase)))
        if self.free_alpha:
            u, phase = x[i], x[i + 1]; i += 2
            alpha = (self._alpha_floor() + u * u) * complex(math.cos(phase), math.sin(phase))
        else:
            alpha = complex(self.fixed.get("alpha", 0j))
        if self.free_beta:
            v, phase = x[i], x[i + 1]; i += 2
            beta = math.sin(v) ** 2 * complex(math.cos(phase), math.sin(phase))
        else:
            beta = complex(self.fixed.get("beta", 0j))
        params = InequalityParams(alpha=alpha, beta=beta,
                                  p=float(self.fixed.get("p", 2.0)),
                                  K=K, mu=self.spec.mu)
        return P, params

    def embed_polynomial(self, P: Polynomial, rng: np.random.Generator) -> Optional[np.ndarray]:
        """Best-effort inverse of split() for a start candidate."""
        n, K = self.spec.n, self.spec.K
        if P.degree() != n:
            return None
        x = []
        if self.coeff_mode:
            shape = polycore.LacunaryShape(n, self.spec.mu)
            if not polycore.matches_lacunary(P, shape):
                return None
            lead = P.coeffs[n]
            scaled = [c / lead for c in P.coeffs]
            m = n - self.spec.mu + 1
            x.extend(c.real for c in scaled[:m])
            x.extend(c.imag for c in scaled[:m])
            x.append(0.0)  # leading phase folded into the rescale
        else:
            try:
                rts = polycore.roots(P).roots
            except (polycore.DegreeError, ArithmeticError):
                return None
            for r in rts:
                m_r = abs(r)
                psi = math.atan2(r.imag, r.real)
                if self.spec.side is Side.ZEROS_OUTSIDE_OPEN_DISK:
                    x.extend([math.sqrt(max(m_r / K - 1.0, 0.0)), psi])
                elif self.spec.side is Side.ZEROS_INSIDE_CLOSED_DISK:
                    s = min(math.sqrt(min(m_r / K, 1.0)), 1.0)
                    x.extend([math.asin(s), psi])
                else:
                    x.extend([r.real, r.imag])
            lead = P.leading()
            x.append(math.atan2(lead.imag, lead.real))
        if self.free_alpha:
            a = self.fixed.get("alpha_start")
            if a is None:
                a = (self._alpha_floor() + 1.0) * np.exp(1j * rng.uniform(0, 2 * np.pi))
            x.extend([math.sqrt(max(abs(a) - self._alpha_floor(), 0.0)),
                      math.atan2(a.imag, a.real)])
        if self.free_beta:
            b = self.fixed.get("beta_start")
            if b is None:
                b = rng.uniform(0, 1) * np.exp(1j * rng.uniform(0, 2 * np.pi))
            x.extend([math.asin(math.sqrt(min(abs(b), 1.0))),
                      math.atan2(b.imag, b.real)])
        return np.asarray(x, dtype=float)


def _search_ratio(defn: CheckDef, P: Polynomial, params: InequalityParams,
                  spec: QuadratureSpec) -> float:
    """Ratio for the optimizer; certificate-free for the combined checks so
    the penalty can see slightly-infeasible points."""
    if defn.name in ("theorem_C", "main_theorem"):
        ql, _, rhs = combined_sides(P, params.alpha, params.beta, params.p,
                                    params.K, params.mu, spec)
        return ql.value / rhs if rhs > 0 else 0.0
    report = defn.run(P, params, spec)
    return report.ratio


def maximize_ratio(check_name: str, spec: FamilySpec, fixed: dict,
                   config: SearchConfig = SearchConfig(),
                   quad_spec: QuadratureSpec = DEFAULT_SPEC) -> ExtremalRecord:
    """Multistart Nelder-Mead maximization of lhs/rhs for one check.

    Starts come from the known extremal candidates plus fresh family samples;
    the best point is re-evaluated at full precision (doubled node budget)
    and that re-evaluated ratio is what the record reports.
    """
    if check_name not in CATALOG:
        raise KeyError(f"unknown check {check_name!r}")
    if config.multistarts < 1:
        raise ValueError("need at least one multistart")
    defn = CATALOG[check_name]
    par = _Parameterization(defn, spec, fixed)
    rng = np.random.default_rng(config.seed)
    search_spec = QuadratureSpec(start_nodes=quad_spec.start_nodes,
                                 max_nodes=quad_spec.max_nodes,
                                 rel_tol=config.search_rel_tol)

    trace: list[tuple[int, float]] = []
    state = {"best": -math.inf, "best_x": None, "evals": 0}

    def objective(x: np.ndarray) -> float:
        state["evals"] += 1
        try:
            P, params = par.split(x)
            if P.degree() != spec.n:
                return 1e6
            ratio = _search_ratio(defn, P, params, search_spec)
            feasible = True
            if par.coeff_mode:
                dist = polycore.min_root_modulus(P) - spec.K
                feasible = dist >= 0
                ratio = ratio * _sigmoid(config.penalty_sharpness * dist)
        except (HypothesisError, ArithmeticError, polycore.DegreeError):
            return 1e6
        if feasible and ratio > state["best"]:
            state["best"] = ratio
            state["best_x"] = np.array(x)
            trace.append((state["evals"], ratio))
        return -ratio

    starts: list[np.ndarray] = []
    for cand in extremal_candidates(spec):
        x0 = par.embed_polynomial(cand, rng)
        if x0 is not None and len(starts) < config.multistarts:
            starts.append(x0)
    guard = 0
    while len(starts) < config.multistarts and guard < 20 * config.multistarts:
        guard += 1
        try:
            batch = sample_for_side(spec, 1, int(rng.integers(0, 2 ** 31)))
        except families.FamilySamplingError:
            continue
        x0 = par.embed_polynomial(batch.polynomials[0], rng)
        if x0 is not None:
            starts.append(x0)
    if not starts:
        raise ValueError("no feasible starting point could be constructed")

    total_iters = 0
    for x0 in starts:
        simplex = np.vstack([x0] + [x0 + config.init_scale * e
                                    for e in np.eye(len(x0))])
        res = minimize(objective, x0, method="Nelder-Mead",
                       options={"maxiter": config.max_iters,
                                "xatol": 1e-8, "fatol": config.simplex_tol,
                                "initial_simplex": simplex,
                                "disp": False})
        total_iters += int(res.nit)

    if state["best_x"] is None:
        raise ValueError("all starts were infeasible for the requested check")

    P, params = par.split(state["best_x"])
    polish_spec = QuadratureSpec(start_nodes=quad_spec.start_nodes * 2,
                                 max_nodes=quad_spec.max_nodes * 2,
                                 rel_tol=quad_spec.rel_tol)
    final = defn.run(P, params, polish_spec)
    return ExtremalRecord(check_name=check_name, best_ratio=final.ratio,
                          polynomial=P, params=params,
                          iterations=total_iters, restarts=len(starts) - 1,
                          trace_summary=tuple(trace))


def _sigmoid(t: float) -> float:
    if t >= 0:
        return 1.0 / (1.0 + math.exp(-min(t, 50.0)))
    return math.exp(max(t, -50.0)) / (1.0 + math.exp(max(t, -50.0)))


def replay(record: ExtremalRecord,
           quad_spec: QuadratureSpec = DEFAULT_SPEC) -> InequalityReport:
    """Re-verify a stored record's argmax at full precision."""
    defn = CATALOG[record.check_name]
    polish_spec = QuadratureSpec(start_nodes=quad_spec.start_nodes * 2,
                                 max_nodes=quad_spec.max_nodes * 2,
                                 rel_tol=quad_spec.rel_tol)
    return defn.run(record.polynomial, record.params, polish_spec)


# ---------------------------------------------------------------------------
# sharpness summary

@dataclass(frozen=True)
class SharpnessTable:
    rows: tuple[dict, ...]

    COLUMNS = ("check", "n", "K", "mu", "p", "best_ratio", "gap", "argmax")

    def to_csv(self) -> str:
        lines = [",".join(self.COLUMNS)]
        for r in self.rows:
            lines.append(",".join(str(r[c]) for c in self.COLUMNS))
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        if not self.rows:
            return "(no records)\n"
        widths = {c: max(len(c), max(len(str(r[c])) for r in self.rows))
                  for c in self.COLUMNS}
        header = "  ".join(c.ljust(widths[c]) for c in self.COLUMNS)
        sep = "  ".join("-" * widths[c] for c in self.COLUMNS)
        body = ["  ".join(str(r[c]).ljust(widths[c]) for c in self.COLUMNS)
                for r in self.rows]
        return "\n".join([header, sep] + body) + "\n"


def sharpness_report(records: Sequence[ExtremalRecord]) -> SharpnessTable:
    """Per-record best ratio and gap 1 - ratio, with the argmax polynomial."""
    rows = []
    for rec in records:
        coeffs = ", ".join(polycore.format_complex(c) for c in rec.polynomial.coeffs)
        rows.append({
            "check": rec.check_name,
            "n": rec.polynomial.degree(),
            "K": rec.params.K,
            "mu": rec.params.mu,
            "p": rec.params.p,
            "best_ratio": f"{rec.best_ratio:.12f}",
            "gap": f"{1.0 - rec.best_ratio:.3e}",
            "argmax": f"[{coeffs}]",
        })
    return SharpnessTable(tuple(rows))
