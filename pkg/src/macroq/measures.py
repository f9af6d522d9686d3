"""Operator-trace evaluation of the phase-space coherence measures.

Two quantities drive everything:

    I    = sum_m Tr[ (1/2) rho^2 n_m + (1/2) rho n_m rho - rho a_m rho a_m^dagger ]
    C    = sum_m Tr[ rho^2 q_m^2 + rho^2 p_m^2 - rho q_m rho q_m - rho p_m rho p_m ]

with n_m = a_m^dagger a_m, plus the purity P = Tr[rho^2]. They satisfy
I = (C - M*P)/2 and the structure measure is chi2 = 2C/P. At finite
truncation the identity carries a corner defect proportional to the
population of each mode's top Fock level (the truncated ladder commutator
is not quite the identity there), which is why states are required to keep
that level empty to within the tail tolerance. The redundancies are
checked, not assumed: I is evaluated both by the literal three-trace form
and by the cyclicity-reduced two-trace form, and the identity residual is
recomputed from independently evaluated I and (C, P).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .config import TOL
from .errors import ConsistencyError
from .fock import annihilation_op, creation_op, quadrature_p, quadrature_q
from .linalg import matmul, trace
from .states import DensityMatrix, PureState, as_density, purity

WIGNER_CONVENTION_NOTE = (
    "normalization: W integrates to 1 over phase space; "
    "C = sum_m (2pi)^M/2 * integral(|dW/dq_m|^2 + |dW/dp_m|^2), "
    "P = (2pi)^M * integral(W^2); no 2^M rescaling is applied"
)


@dataclass
class MeasureReport:
    """Bundle of I, C, P, chi2 for one state, with consistency diagnostics."""

    I: float
    C: float
    P: float
    chi2: float
    num_modes: int
    truncation: int
    identity_residual: float
    method: str = "operator"
    convention_note: str = WIGNER_CONVENTION_NOTE
    pure_relation_residual: float | None = None
    cross_deltas: dict[str, float] | None = None
    provenance: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "I": self.I,
            "C": self.C,
            "P": self.P,
            "chi2": self.chi2,
            "num_modes": self.num_modes,
            "truncation": self.truncation,
            "identity_residual": self.identity_residual,
            "method": self.method,
            "convention_note": self.convention_note,
        }
        if self.pure_relation_residual is not None:
            out["pure_relation_residual"] = self.pure_relation_residual
        if self.cross_deltas is not None:
            out["cross_deltas"] = self.cross_deltas
        if self.provenance:
            out["provenance"] = self.provenance
        return out

    def to_json(self, **extra) -> str:
        doc = self.to_dict()
        doc.update(extra)
        return json.dumps(doc, sort_keys=True, indent=2)


def _real_after_residue_check(value: complex, what: str) -> float:
    if abs(value.imag) > TOL.imag_residue_tol:
        raise ConsistencyError(
            f"{what} has imaginary residue {value.imag:.2e} "
            f"(allowed {TOL.imag_residue_tol:.0e})"
        )
    return value.real


def measure_I_forms(rho: DensityMatrix) -> tuple[float, float]:
    """Both evaluations of the coherence measure I.

    Returns the literal three-trace value and the cyclicity-reduced two-trace
    value sum_m (Tr[rho^2 n_m] - Tr[rho a_m rho a_m^dagger]); agreement
    between them is the caller's check.
    """
    spec = rho.spec
    mat = rho.matrix
    rho_sq = matmul(mat, mat)
    three = 0.0 + 0.0j
    two = 0.0 + 0.0j
    for mode in range(1, spec.num_modes + 1):
        a = annihilation_op(spec, mode).matrix
        adag = creation_op(spec, mode).matrix
        num = matmul(adag, a)
        three += 0.5 * trace(matmul(rho_sq, num))
        three += 0.5 * trace(matmul(matmul(mat, num), mat))
        three -= trace(matmul(matmul(mat, a), matmul(mat, adag)))
        two += trace(matmul(rho_sq, num))
        two -= trace(matmul(matmul(mat, a), matmul(mat, adag)))
    return (
        _real_after_residue_check(three, "measure I"),
        _real_after_residue_check(two, "measure I (two-term form)"),
    )


def measure_I(rho: DensityMatrix) -> float:
    """Negativity-capable coherence measure from the number/ladder traces.

    The three-term form is evaluated literally, then re-derived in the
    two-term form; the two must agree or the computation is rejected. The
    three-term value is the one reported.
    """
    value, value_two = measure_I_forms(rho)
    if abs(value - value_two) > TOL.three_two_term_tol:
        raise ConsistencyError(
            f"three-term and two-term evaluations of I disagree: "
            f"{value!r} vs {value_two!r}"
        )
    return value


def measure_C(rho: DensityMatrix) -> float:
    """Structure functional from quadrature traces."""
    spec = rho.spec
    mat = rho.matrix
    rho_sq = matmul(mat, mat)
    total = 0.0 + 0.0j
    for mode in range(1, spec.num_modes + 1):
        q = quadrature_q(spec, mode).matrix
        p = quadrature_p(spec, mode).matrix
        total += trace(matmul(rho_sq, matmul(q, q)))
        total += trace(matmul(rho_sq, matmul(p, p)))
        total -= trace(matmul(matmul(mat, q), matmul(mat, q)))
        total -= trace(matmul(matmul(mat, p), matmul(mat, p)))
    return _real_after_residue_check(total, "measure C")


def measure_chi2(rho: DensityMatrix) -> float:
    """Purity-normalized structure measure 2C/P; strictly positive."""
    value = 2.0 * measure_C(rho) / purity(rho)
    if value <= 0.0:
        raise ConsistencyError(f"chi2 must be positive, got {value!r}")
    return value


def measure_report(rho: DensityMatrix, provenance: dict | None = None) -> MeasureReport:
    """Full operator-path report.

    I comes from the ladder-operator route and (C, P) from the quadrature
    route with no shared intermediates, so the identity residual
    |I - (C - M*P)/2| is a genuine cross-check of both.
    """
    i_value = measure_I(rho)
    c_value = measure_C(rho)
    p_value = purity(rho)
    m = rho.spec.num_modes
    residual = abs(i_value - (c_value - m * p_value) / 2.0)
    if residual >= TOL.identity_tol:
        raise ConsistencyError(
            f"identity residual |I - (C - M*P)/2| = {residual:.2e} "
            f"(I={i_value!r}, C={c_value!r}, P={p_value!r}); "
            "truncation is inadequate or the build is broken"
        )
    chi2 = 2.0 * c_value / p_value
    return MeasureReport(
        I=i_value,
        C=c_value,
        P=p_value,
        chi2=chi2,
        num_modes=m,
        truncation=rho.spec.truncation,
        identity_residual=residual,
        method="operator",
        provenance=provenance or {},
    )


def pure_state_measures(psi: PureState, provenance: dict | None = None) -> MeasureReport:
    """Report for a pure state, asserting I = chi2/4 - M/2 on top.

    The relation follows from P = 1 and holds to rounding for any state
    that leaves the guard level empty; a violation beyond tolerance means
    inadequate truncation or a broken build.
    """
    report = measure_report(as_density(psi), provenance=provenance)
    m = psi.spec.num_modes
    residual = abs(report.I - (report.chi2 / 4.0 - m / 2.0))
    if residual >= TOL.pure_relation_tol:
        raise ConsistencyError(
            f"pure-state relation violated: |I - (chi2/4 - M/2)| = {residual:.2e}"
        )
    report.pure_relation_residual = residual
    return report
