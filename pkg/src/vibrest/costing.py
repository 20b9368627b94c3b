"""Quantum phase estimation budgets for Trotterized Hamiltonian evolution.

QPE runs on ``H~ = (H + beta I) / (2 beta)`` whose spectrum lies in [0, 1];
``beta`` is the coefficient 1-norm.  The commutator scaling transforms as
``alpha(H~) = (2 beta)**-(p+1) alpha(H)``.  Two error accountings are offered:

* ``"A"`` (success probability): every controlled power ``U**(2**j)`` gets
  Trotter error ``eps_T = 1/(8n)`` and its own step count at ``t = 2**j``.
* ``"B"`` (effective Hamiltonian): one Trotterized ``U`` with
  ``eps_T = eps_nu / (2 beta)`` at ``t = 1``, repeated ``2**n - 1`` times.

Gate model for ``exp(-i theta P)`` with ``P`` of weight ``w``: a CNOT ladder
of ``2(w-1)`` two-qubit gates, one Z rotation, two basis-change Cliffords
per X or Y site, and one extra two-qubit gate for the ancilla control.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field
from typing import Literal

from .commutator import ScalingResult
from .errors import DegenerateInputError, ValidationError
from .pauli import PauliString, WeightedPauliHamiltonian

__all__ = [
    "QpeConfig",
    "GateCounts",
    "ResourceReport",
    "norm_beta",
    "ancilla_count",
    "trotter_steps",
    "exponentials_per_step",
    "exponential_gate_cost",
    "step_gate_counts",
    "qpe_budget",
    "reports_to_csv",
]

Approach = Literal["A", "B"]


@dataclass(frozen=True)
class QpeConfig:
    epsilon_nu: float = 1.0  # cm^-1
    p: int = 2
    approach: Approach = "A"
    prefactor: float = 1.0
    controlled: bool = True

    def __post_init__(self) -> None:
        if not self.epsilon_nu > 0:
            raise ValidationError(f"epsilon_nu must be positive, got {self.epsilon_nu}")
        if self.p < 1 or (self.p > 2 and self.p % 2):
            raise ValidationError(f"order must be 1 or even, got {self.p}")
        if self.approach not in ("A", "B"):
            raise ValidationError(f"approach must be 'A' or 'B', got {self.approach!r}")
        if not self.prefactor > 0:
            raise ValidationError(f"prefactor must be positive, got {self.prefactor}")


@dataclass(frozen=True)
class GateCounts:
    two_qubit: int = 0
    rotations: int = 0
    cliffords: int = 0

    @property
    def total(self) -> int:
        return self.two_qubit + self.rotations + self.cliffords

    def __add__(self, other: GateCounts) -> GateCounts:
        return GateCounts(
            self.two_qubit + other.two_qubit,
            self.rotations + other.rotations,
            self.cliffords + other.cliffords,
        )

    def __mul__(self, k: int) -> GateCounts:
        return GateCounts(self.two_qubit * k, self.rotations * k, self.cliffords * k)

    __rmul__ = __mul__

    def to_dict(self) -> dict:
        return {
            "two_qubit": self.two_qubit,
            "rotations": self.rotations,
            "cliffords": self.cliffords,
            "total": self.total,
        }


@dataclass
class ResourceReport:
    n_qubits: int
    n_ancilla: int
    beta: float
    approach: str
    p: int
    epsilon_nu: float
    epsilon_T: float
    alpha_lower: float
    alpha_upper: float
    alpha_scaled: float
    bound_mode: str
    r_per_power: list[int]
    R_total: int
    n_terms: int
    exponentials_per_step: int
    gates_per_step: GateCounts
    gates_total: GateCounts
    layering_ratio: float
    depth_estimate: int
    success_probability_floor: float | None
    assumptions: list[str] = field(default_factory=list)

    @property
    def total_qubits(self) -> int:
        return self.n_qubits + self.n_ancilla

    def to_dict(self) -> dict:
        d = asdict(self)
        d["gates_per_step"] = self.gates_per_step.to_dict()
        d["gates_total"] = self.gates_total.to_dict()
        d["total_qubits"] = self.total_qubits
        return d

    def to_table(self) -> str:
        rows = [
            ("system qubits", self.n_qubits),
            ("ancilla qubits", self.n_ancilla),
            ("total qubits", self.total_qubits),
            ("beta [cm^-1]", f"{self.beta:.6g}"),
            ("approach", self.approach),
            ("order p", self.p),
            ("epsilon_nu [cm^-1]", self.epsilon_nu),
            ("epsilon_T", f"{self.epsilon_T:.6g}"),
            ("alpha bound mode", self.bound_mode),
            ("alpha lower", f"{self.alpha_lower:.6g}"),
            ("alpha upper", f"{self.alpha_upper:.6g}"),
            ("Trotter steps per power", _short_list(self.r_per_power)),
            ("total Trotter steps R", self.R_total),
            ("Pauli terms", self.n_terms),
            ("exponentials per step", self.exponentials_per_step),
            ("two-qubit gates", self.gates_total.two_qubit),
            ("rotations", self.gates_total.rotations),
            ("single-qubit Cliffords", self.gates_total.cliffords),
            ("total gates", self.gates_total.total),
            ("layering ratio", f"{self.layering_ratio:.6g}"),
            ("depth estimate", self.depth_estimate),
        ]
        width = max(len(k) for k, _ in rows)
        lines = [f"{k:<{width}}  {v}" for k, v in rows]
        lines += [f"# {a}" for a in self.assumptions]
        return "\n".join(lines)

    CSV_FIELDS = (
        "approach", "p", "bound_mode", "epsilon_nu", "n_qubits", "n_ancilla", "beta",
        "alpha_lower", "alpha_upper", "R_total", "n_terms", "exponentials_per_step",
        "gates_total", "depth_estimate",
    )

    def csv_row(self) -> dict:
        d = self.to_dict()
        row = {k: d[k] for k in self.CSV_FIELDS}
        row["gates_total"] = self.gates_total.total
        return row


def _short_list(values: list[int], limit: int = 6) -> str:
    if len(values) <= limit:
        return str(values)
    head = ", ".join(str(v) for v in values[:3])
    tail = ", ".join(str(v) for v in values[-2:])
    return f"[{head}, ..., {tail}] ({len(values)} powers)"


def reports_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    fields = list(rows[0]) if rows else list(ResourceReport.CSV_FIELDS)
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def norm_beta(h: WeightedPauliHamiltonian) -> float:
    """Coefficient 1-norm, an upper bound on the spectral norm of ``h``."""
    if len(h) == 0:
        raise DegenerateInputError("norm of an empty Hamiltonian")
    return math.fsum(abs(c) for c in h.coeffs)


def ancilla_count(beta: float, epsilon_nu: float) -> int:
    """``ceil(log2(8 beta / epsilon_nu))``, floored at zero."""
    if not (beta > 0 and epsilon_nu > 0):
        raise ValueError("beta and epsilon_nu must be positive")
    ratio = 8.0 * beta / epsilon_nu
    if ratio <= 1.0:
        return 0
    mant, exp = math.frexp(ratio)  # ratio = mant * 2**exp, mant in [0.5, 1)
    return exp - 1 if mant == 0.5 else exp


def _ceil_snapped(v: float) -> int:
    r = round(v)
    if abs(v - r) <= 1e-9 * max(1.0, abs(v)):
        return int(r)
    return math.ceil(v)


def trotter_steps(alpha: float, t: float, epsilon_T: float, p: int, prefactor: float = 1.0) -> int:
    """``ceil(prefactor * alpha**(1/p) * t**(1+1/p) / epsilon_T**(1/p))``, at least 1.

    Values within a relative 1e-9 of an integer are snapped before the
    ceiling so that unit rescalings give identical counts.
    """
    if not t > 0 or not epsilon_T > 0:
        raise ValueError("evolution time and Trotter error must be positive")
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    if alpha == 0:
        return 1
    value = prefactor * (alpha * t ** (p + 1) / epsilon_T) ** (1.0 / p)
    return max(1, _ceil_snapped(value))


def exponentials_per_step(n_terms: int, p: int) -> int:
    """Pauli exponentials in one step of the order-``p`` product formula."""
    if p == 1:
        return n_terms
    if p == 2:
        return max(0, 2 * n_terms - 1)
    return 2 * 5 ** (p // 2 - 1) * n_terms


def exponential_gate_cost(pauli: PauliString, controlled: bool = True) -> GateCounts:
    """Gate counts of one (controlled) Pauli exponential."""
    w = pauli.weight
    if w == 0:
        # a global phase; under control it is a single phase rotation
        return GateCounts(0, 1 if controlled else 0, 0)
    xy_sites = pauli.x.bit_count()
    return GateCounts(2 * (w - 1) + (1 if controlled else 0), 1, 2 * xy_sites)


def step_gate_counts(h: WeightedPauliHamiltonian, p: int, controlled: bool = True) -> GateCounts:
    """Gates in one Trotter step.

    Second order runs the terms forward then backward with half angles and
    merges the two middle exponentials of the last term.
    """
    costs = [exponential_gate_cost(t.pauli, controlled) for t in h.terms]
    total = sum(costs, GateCounts())
    if not costs:
        return total
    if p == 1:
        return total
    if p == 2:
        doubled = total * 2
        last = costs[-1]
        return GateCounts(
            doubled.two_qubit - last.two_qubit,
            doubled.rotations - last.rotations,
            doubled.cliffords - last.cliffords,
        )
    return total * (2 * 5 ** (p // 2 - 1))


def qpe_budget(
    h: WeightedPauliHamiltonian,
    scaling: ScalingResult,
    cfg: QpeConfig,
    layering_ratio: float | None = None,
) -> ResourceReport:
    """Full resource report for QPE on ``h`` using the upper bound in ``scaling``."""
    if scaling.p != cfg.p:
        raise ValidationError(f"scaling computed for p={scaling.p}, config has p={cfg.p}")
    if not math.isfinite(scaling.upper):
        raise ValidationError("scaling upper bound must be finite")
    beta = norm_beta(h) if len(h) else 0.0
    if beta == 0:
        raise DegenerateInputError("Hamiltonian has zero norm; nothing to estimate")
    p = cfg.p
    assumptions = [
        "beta = sum |c_i| (coefficient 1-norm)",
        "alpha(H~) = (2 beta)^-(p+1) * alpha_upper",
        f"r = ceil({cfg.prefactor:g} * alpha^(1/p) t^(1+1/p) / eps_T^(1/p)), r >= 1",
    ]
    if not scaling.rigorous and scaling.mode != "exact":
        assumptions.append(
            "alpha cross terms use plain norm products without the commutator factor 2^p; "
            "use rigorous bounds for a guaranteed upper bound"
        )
    n = ancilla_count(beta, cfg.epsilon_nu)
    if n < 1:
        assumptions.append("8 beta / eps_nu <= 1: ancilla register clamped to 1 qubit")
        n = 1
    alpha_scaled = scaling.upper / (2.0 * beta) ** (p + 1)
    if cfg.approach == "A":
        eps_T = 1.0 / (8 * n)
        r = [trotter_steps(alpha_scaled, 2.0**j, eps_T, p, cfg.prefactor) for j in range(n)]
        R = sum(r)
        floor = 0.75 - 2 * n * eps_T
        assumptions.append("approach A: eps_T = 1/(8n), per-power t = 2^j, R = sum_j r_j")
    else:
        eps_T = cfg.epsilon_nu / (2.0 * beta)
        r = [trotter_steps(alpha_scaled, 1.0, eps_T, p, cfg.prefactor)]
        R = (2**n - 1) * r[0]
        floor = None
        assumptions.append("approach B: eps_T = eps_nu/(2 beta), t = 1, R = (2^n - 1) r")
    per_step = step_gate_counts(h, p, cfg.controlled)
    gates = per_step * R
    if p == 2:
        assumptions.append("second order: symmetric sweep, 2N-1 exponentials per step")
    elif p > 2:
        assumptions.append(f"order {p}: Suzuki recursion, {2 * 5 ** (p // 2 - 1)}N exponentials per step")
    assumptions.append(
        "gates per exponential of weight w: 2(w-1) CNOT + 1 Rz + 2 Cliffords per X/Y site"
        + (" + 1 two-qubit gate for ancilla control" if cfg.controlled else "")
    )
    ratio = 1.0 if layering_ratio is None else float(layering_ratio)
    if layering_ratio is None:
        assumptions.append("no layering ratio supplied: depth = gate count")
    depth = math.ceil(gates.total / ratio)
    return ResourceReport(
        n_qubits=h.n_qubits,
        n_ancilla=n,
        beta=beta,
        approach=cfg.approach,
        p=p,
        epsilon_nu=cfg.epsilon_nu,
        epsilon_T=eps_T,
        alpha_lower=scaling.lower,
        alpha_upper=scaling.upper,
        alpha_scaled=alpha_scaled,
        bound_mode=scaling.mode,
        r_per_power=r,
        R_total=R,
        n_terms=len(h),
        exponentials_per_step=exponentials_per_step(len(h), p),
        gates_per_step=per_step,
        gates_total=gates,
        layering_ratio=ratio,
        depth_estimate=depth,
        success_probability_floor=floor,
        assumptions=assumptions,
    )
