"""Randomized certificates for the code identities.

Every suite is deterministic in ``(seed, trials)``: trial ``t`` draws from
its own generator seeded with ``[seed, t]``, so results do not depend on
scheduling or on how many trials ran before.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import channels, codes
from .su2 import collective, multiplicities, random_su2, rot, block_structure_residual
from .tensor import IDENTITY_TOL, STATE_TOL, dagger, fidelity, frob, kron_all, von_neumann_entropy

ZERO_KET = np.diag([1.0, 0.0]).astype(np.complex128)


@dataclass
class VerificationReport:
    suite: str
    seed: int
    trials: int
    tolerance: float
    max_residual: float
    passed: bool
    details: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        out = asdict(self)
        out["pass"] = out.pop("passed")
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    def summary(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return (
            f"{verdict} {self.suite}: trials={self.trials} seed={self.seed} "
            f"max_residual={self.max_residual:.3e} tol={self.tolerance:.0e}"
        )


def _report(suite: str, seed: int, trials: int, tol: float, details: list[dict]) -> VerificationReport:
    worst = max((d["residual"] for d in details), default=0.0)
    return VerificationReport(suite, seed, trials, tol, worst, bool(worst < tol), details)


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, trial])


def random_density(rng: np.random.Generator, dim: int, pure: bool = False) -> np.ndarray:
    """``G G^dag / tr`` for complex Gaussian G (a single column when ``pure``)."""
    cols = 1 if pure else dim
    g = rng.normal(size=(dim, cols)) + 1j * rng.normal(size=(dim, cols))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_probs(rng: np.random.Generator, total: float = 1.0) -> list[float]:
    return list(rng.dirichlet(np.ones(4)) * total)


def _floats(a) -> list:
    return [float(x) for x in a]


# --- NS3 identity ---------------------------------------------------------------


def theorem1_rhs(p, alpha, beta, gamma, rho_a, rho_data) -> np.ndarray:
    """``(sum_j p_j U_j rho_a U_j^dag) ⊗ |0><0| ⊗ rho_data`` with single-qubit U_j."""
    singles = [np.eye(2), rot("x", alpha), rot("y", beta), rot("z", gamma)]
    gauge = sum(pj * (u @ rho_a @ dagger(u)) for pj, u in zip(p, singles))
    return kron_all([gauge, ZERO_KET, rho_data])


def check_theorem1(p, alpha, beta, gamma, rho_a, rho_data, variant: str = "redefined") -> float:
    """Frobenius residual of ``U^dag Φ(U (ρ_a ⊗ |0><0| ⊗ ρ̂) U^dag) U`` against its product form."""
    u = codes.build_ue3(variant).encoder
    ch = channels.theorem1_channel(p, alpha, beta, gamma, n=3)
    encoded = u @ kron_all([rho_a, ZERO_KET, rho_data]) @ dagger(u)
    lhs = dagger(u) @ channels.apply(ch, encoded) @ u
    return frob(lhs - theorem1_rhs(p, alpha, beta, gamma, rho_a, rho_data))


def theorem1_suite(trials: int = 100, seed: int = 0, tol: float = IDENTITY_TOL) -> VerificationReport:
    """Random weights (summing to 1 or 0.8 on alternate trials), angles and states."""
    details = []
    for t in range(trials):
        rng = trial_rng(seed, t)
        total = 1.0 if t % 2 == 0 else 0.8
        p = random_probs(rng, total)
        alpha, beta, gamma = rng.uniform(-math.pi, math.pi, size=3)
        rho_a = random_density(rng, 2)
        rho_data = random_density(rng, 2)
        variant = codes.VARIANTS[t % 2]
        r = check_theorem1(p, alpha, beta, gamma, rho_a, rho_data, variant)
        details.append({"trial": t, "p": _floats(p), "angles": _floats((alpha, beta, gamma)),
                        "variant": variant, "residual": r})
    return _report("theorem1", seed, trials, tol, details)


# --- collective-W round trips -------------------------------------------------


def _round_trip(code, w, gauge, data) -> dict:
    noise = collective(w, code.n)
    encoded = codes.encode(code, gauge, data)
    out = codes.decode(code, noise @ encoded @ dagger(noise))
    f = fidelity(out.data, data)
    record = {"fidelity": f, "product_residual": out.product_residual}
    residual = max(1.0 - f, out.product_residual)
    if gauge is not None:
        # the gauge factor sees W itself
        record["gauge_residual"] = frob(out.gauge - w @ gauge @ dagger(w))
        residual = max(residual, record["gauge_residual"])
    record["residual"] = residual
    return record


def check_ns3(trials: int = 100, seed: int = 0, tol: float = IDENTITY_TOL) -> VerificationReport:
    """Haar-random ``W^{⊗3}`` on both NS3 basis variants."""
    details = []
    for variant in codes.VARIANTS:
        code = codes.build_ue3(variant)
        for t in range(trials):
            rng = trial_rng(seed, t)
            w = random_su2(rng)
            gauge = random_density(rng, 2)
            data = random_density(rng, 2, pure=t % 2 == 0)
            details.append({"trial": t, "variant": variant, **_round_trip(code, w, gauge, data)})
    return _report("ns3", seed, trials, tol, details)


def dfs4_invariance_residual(w, data, variant: str = "redefined") -> float:
    code = codes.build_ue4(variant)
    noise = collective(w, 4)
    encoded = codes.encode(code, None, data)
    return frob(noise @ encoded @ dagger(noise) - encoded)


def check_dfs4(trials: int = 100, seed: int = 0, tol: float = IDENTITY_TOL) -> VerificationReport:
    """Strict invariance of encoded DFS4 states under ``W^{⊗4}``, no phase allowance."""
    details = []
    for t in range(trials):
        rng = trial_rng(seed, t)
        w = random_su2(rng)
        data = random_density(rng, 2, pure=t % 2 == 0)
        details.append({"trial": t, "residual": dfs4_invariance_residual(w, data)})
    return _report("dfs4", seed, trials, tol, details)


def check_ns5(trials: int = 100, seed: int = 0, tol: float = IDENTITY_TOL) -> VerificationReport:
    """Two-qubit recovery through ``W^{⊗5}``; every fourth trial uses a maximally mixed gauge."""
    code = codes.build_ue5()
    details = []
    for t in range(trials):
        rng = trial_rng(seed, t)
        w = random_su2(rng)
        gauge = np.eye(2) / 2 if t % 4 == 0 else random_density(rng, 2, pure=t % 4 == 1)
        data = random_density(rng, 4, pure=t % 2 == 1)
        details.append({"trial": t, **_round_trip(code, w, gauge, data)})
    return _report("ns5", seed, trials, tol, details)


def check_blocks(trials: int = 100, seed: int = 0, tol: float = IDENTITY_TOL) -> VerificationReport:
    """``U^dag W^{⊗3} U`` has the spin-3/2 block plus two equal spin-1/2 blocks."""
    details = []
    for variant in codes.VARIANTS:
        code = codes.build_ue3(variant)
        for t in range(trials):
            w = random_su2(trial_rng(seed, t))
            r = block_structure_residual(code.encoder, w, code.block_layout())
            details.append({"trial": t, "variant": variant, "residual": r})
    return _report("blocks", seed, trials, tol, details)


# --- entropy and repetition -----------------------------------------------------


def entropy_change(p, alpha, beta, gamma, rho_a, rho_data, variant: str = "redefined") -> float:
    code = codes.build_ue3(variant)
    ch = channels.theorem1_channel(p, alpha, beta, gamma, n=3)
    encoded = codes.encode(code, rho_a, rho_data)
    return von_neumann_entropy(channels.apply(ch, encoded)) - von_neumann_entropy(encoded)


def check_entropy_constancy(
    trials: int = 100, seed: int = 0, tol: float = STATE_TOL, gauge_tol: float = IDENTITY_TOL
) -> VerificationReport:
    """Maximally mixed gauge: entropy unchanged and decoded gauge stays I/2.

    Each trial also records the contrast case of a pure gauge, where the
    entropy change must be non-negative.  The residual combines ``|ΔS|``
    with the gauge deviation rescaled to the entropy tolerance.
    """
    code = codes.build_ue3()
    mixed = np.eye(2) / 2
    details = []
    for t in range(trials):
        rng = trial_rng(seed, t)
        p = random_probs(rng)
        angles = rng.uniform(-math.pi, math.pi, size=3)
        data = random_density(rng, 2)
        ch = channels.theorem1_channel(p, *angles, n=3)
        encoded = codes.encode(code, mixed, data)
        after = channels.apply(ch, encoded)
        delta = von_neumann_entropy(after) - von_neumann_entropy(encoded)
        gauge_dev = frob(codes.decode(code, after).gauge - mixed)
        pure_delta = entropy_change(p, *angles, random_density(rng, 2, pure=True), data)
        details.append({
            "trial": t,
            "p": _floats(p),
            "angles": _floats(angles),
            "entropy_change": delta,
            "gauge_residual": gauge_dev,
            "pure_gauge_entropy_change": pure_delta,
            "residual": max(abs(delta), gauge_dev * tol / gauge_tol, max(-pure_delta, 0.0)),
        })
    return _report("entropy", seed, trials, tol, details)


def check_repetition(trials: int = 100, seed: int = 0, k_max: int = 5, tol: float = STATE_TOL) -> VerificationReport:
    """Data survives a random four-term collective channel applied ``k = 1..k_max`` times."""
    code = codes.build_ue3()
    details = []
    for t in range(trials):
        rng = trial_rng(seed, t)
        ch = channels.theorem1_channel(random_probs(rng), *rng.uniform(-math.pi, math.pi, size=3), n=3)
        gauge = random_density(rng, 2)
        data = random_density(rng, 2)
        rho = codes.encode(code, gauge, data)
        worst = 0.0
        for k in range(1, k_max + 1):
            rho = channels.apply(ch, rho)
            out = codes.decode(code, rho)
            worst = max(worst, 1.0 - fidelity(out.data, data), out.product_residual)
        details.append({"trial": t, "iterations": k_max, "residual": worst})
    return _report("repetition", seed, trials, tol, details)


# --- gate lists -------------------------------------------------------------------


def check_gatelist(trials: int = 1, seed: int = 0, tol: float = IDENTITY_TOL) -> VerificationReport:
    """Gate lists against their encoders; deterministic, so trials/seed are recorded only."""
    full = codes.build_ue3_gatelist()
    reduced = codes.build_ue3_gatelist(reduced=True)
    full_u = full.unitary()
    ns3_res, phases = codes.column_phase_residual(full_u, codes.build_ue3("redefined").encoder)
    slice_res = frob(reduced.unitary()[:, :4] - full_u[:, :4])
    dfs_res, _ = codes.column_phase_residual(codes.build_dfs4_gatelist().unitary(), codes.build_ue4().encoder)
    ue5 = codes.build_ue5()
    ns5_res, _ = codes.column_phase_residual(codes.build_ns5_gatelist().unitary(), ue5.encoder, ue5.code_columns())
    details = [
        {"check": "ns3_full", "gates": len(full), "residual": ns3_res,
         "max_phase_deviation": float(np.max(np.abs(phases - 1)))},
        {"check": "ns3_reduced_slice", "gates": len(reduced), "residual": slice_res},
        {"check": "dfs4", "residual": dfs_res},
        {"check": "ns5_code_columns", "residual": ns5_res},
    ]
    return _report("gatelist", seed, trials, tol, details)


# --- code rate -------------------------------------------------------------------


@dataclass(frozen=True)
class RateRow:
    n: int
    m: int
    dim_count: int
    k: int

    @property
    def exceeds_m(self) -> bool:
        return self.k > self.m


def code_rate_table(n_max: int = 21) -> list[RateRow]:
    """Odd ``n = 2m + 1`` up to ``n_max``: spin-1/2 multiplicity and ``k = floor(log2)`` of it."""
    if not 3 <= n_max <= 40:
        raise ValueError("n_max must lie in 3..40")
    rows = []
    for n in range(3, n_max + 1, 2):
        m = (n - 1) // 2
        count = math.comb(n, m) - math.comb(n, m - 1)
        rows.append(RateRow(n, m, count, count.bit_length() - 1))
    return rows


def check_rate(trials: int = 1, seed: int = 0, n_max: int = 21) -> VerificationReport:
    """Rate table rows agree with the irrep multiplicities; first k > m row is n = 9."""
    details = []
    for row in code_rate_table(n_max):
        r_half = {b.dim: b.multiplicity for b in multiplicities(row.n).blocks}[2]
        details.append({**asdict(row), "k_exceeds_m": row.exceeds_m,
                        "residual": float(r_half != row.dim_count)})
    first = next((d["n"] for d in details if d["k_exceeds_m"]), None)
    details.append({"check": "first_k_exceeds_m", "n": first, "residual": float(first != 9)})
    return _report("rate", seed, trials, 0.5, details)


SUITES: dict[str, Callable[..., VerificationReport]] = {
    "theorem1": theorem1_suite,
    "ns3": check_ns3,
    "dfs4": check_dfs4,
    "ns5": check_ns5,
    "blocks": check_blocks,
    "entropy": check_entropy_constancy,
    "repetition": check_repetition,
    "gatelist": check_gatelist,
    "rate": check_rate,
}


def run_suite(name: str, trials: int = 100, seed: int = 0) -> VerificationReport:
    try:
        suite = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}") from None
    return suite(trials=trials, seed=seed)
