"""Mixed-unitary collective noise channels in operator-sum form."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .su2 import EulerAngles, collective, euler_recompose, rot
from .tensor import CONSTRUCTION_TOL, as_matrix, dagger, frob, matrix_from_json, matrix_to_json

MAX_TERMS = 10_000
_SUBNORMAL_TOL = 1e-12


@dataclass(frozen=True)
class MixedUnitaryChannel:
    """``rho -> sum_i p_i u_i rho u_i^dag`` with Kraus operators ``sqrt(p_i) u_i``.

    Weights may sum to less than one; such channels are trace-decreasing
    and report ``subnormalized``.
    """

    n: int
    terms: tuple[tuple[float, np.ndarray], ...]

    def __post_init__(self):
        dim = 2**self.n
        clean = []
        for p, u in self.terms:
            p = float(p)
            u = as_matrix(u)
            if p < 0:
                raise ValueError(f"negative probability {p}")
            if u.shape != (dim, dim):
                raise ValueError(f"term has shape {u.shape}, expected {(dim, dim)}")
            if frob(dagger(u) @ u - np.eye(dim)) > CONSTRUCTION_TOL:
                raise ValueError("channel term is not unitary")
            u.setflags(write=False)
            clean.append((p, u))
        if not clean:
            raise ValueError("a channel needs at least one term")
        if self.total > 1 + _SUBNORMAL_TOL:
            raise ValueError(f"probabilities sum to {self.total} > 1")
        object.__setattr__(self, "terms", tuple(clean))

    @property
    def total(self) -> float:
        return float(sum(p for p, _ in self.terms))

    @property
    def subnormalized(self) -> bool:
        return self.total < 1 - _SUBNORMAL_TOL

    def kraus(self) -> list[np.ndarray]:
        return [np.sqrt(p) * u for p, u in self.terms]

    def __call__(self, rho) -> np.ndarray:
        return apply(self, rho)


def _check_probs(p: Sequence[float]) -> list[float]:
    p = [float(x) for x in p]
    if any(x < 0 for x in p) or sum(p) > 1 + _SUBNORMAL_TOL:
        raise ValueError(f"invalid probabilities {p}: need p_i >= 0 and sum <= 1")
    return p


def identity_channel(n: int) -> MixedUnitaryChannel:
    return MixedUnitaryChannel(n, ((1.0, np.eye(2**n)),))


def theorem1_channel(p: Sequence[float], alpha: float, beta: float, gamma: float, n: int = 3) -> MixedUnitaryChannel:
    """``p0 rho + p1 X rho X^dag + p2 Y rho Y^dag + p3 Z rho Z^dag``.

    X, Y, Z are the collective rotations ``exp(i angle sigma)^{⊗n}`` about
    x by ``alpha``, y by ``beta`` and z by ``gamma``.
    """
    if len(p) != 4:
        raise ValueError("need exactly four probabilities")
    if n not in (3, 4, 5):
        raise ValueError(f"n must be 3, 4 or 5, got {n}")
    p = _check_probs(p)
    unitaries = [
        np.eye(2**n),
        collective(rot("x", alpha), n),
        collective(rot("y", beta), n),
        collective(rot("z", gamma), n),
    ]
    return MixedUnitaryChannel(n, tuple(zip(p, unitaries)))


def collective_channel(entries: Iterable[tuple[float, EulerAngles | Sequence[float]]], n: int) -> MixedUnitaryChannel:
    """One collective term ``W^{⊗n}`` per ``(p, euler angles)`` entry."""
    entries = list(entries)
    probs = _check_probs([p for p, _ in entries])
    terms = tuple((p, collective(euler_recompose(angles), n)) for p, (_, angles) in zip(probs, entries))
    return MixedUnitaryChannel(n, terms)


def apply(ch: MixedUnitaryChannel, rho) -> np.ndarray:
    rho = as_matrix(rho)
    if rho.shape != (2**ch.n, 2**ch.n):
        raise ValueError(f"channel acts on {ch.n} qubits, state has shape {rho.shape}")
    out = np.zeros_like(rho)
    for p, u in ch.terms:
        out += p * (u @ rho @ u.conj().T)
    return out


def compose(a: MixedUnitaryChannel, b: MixedUnitaryChannel) -> MixedUnitaryChannel:
    """The channel ``a ∘ b`` (``b`` acts first), one term per pair."""
    if a.n != b.n:
        raise ValueError("cannot compose channels on different qubit counts")
    if len(a.terms) * len(b.terms) > MAX_TERMS:
        raise ValueError(f"composition would have more than {MAX_TERMS} terms")
    return MixedUnitaryChannel(
        a.n, tuple((p * q, u @ v) for p, u in a.terms for q, v in b.terms)
    )


def power(ch: MixedUnitaryChannel, k: int) -> MixedUnitaryChannel:
    if k < 1:
        raise ValueError("power needs k >= 1")
    out = ch
    for _ in range(k - 1):
        out = compose(ch, out)
    return out


def merged(ch: MixedUnitaryChannel, tol: float = CONSTRUCTION_TOL) -> MixedUnitaryChannel:
    """Combine terms with equal unitaries and drop zero-weight terms."""
    kept: list[list] = []
    for p, u in ch.terms:
        if p == 0:
            continue
        for entry in kept:
            if frob(entry[1] - u) <= tol:
                entry[0] += p
                break
        else:
            kept.append([p, u])
    if not kept:
        return MixedUnitaryChannel(ch.n, ((0.0, np.eye(2**ch.n)),))
    return MixedUnitaryChannel(ch.n, tuple((p, u) for p, u in kept))


# --- JSON -----------------------------------------------------------------------

_TERM_FIELDS = {
    "identity": {"p", "kind"},
    "x": {"p", "kind", "angle"},
    "y": {"p", "kind", "angle"},
    "z": {"p", "kind", "angle"},
    "euler": {"p", "kind", "angles"},
    "matrix": {"p", "kind", "u"},
}


def channel_from_json(obj: dict) -> MixedUnitaryChannel:
    """Parse ``{"n": 3, "terms": [{"p": .25, "kind": "x", "angle": .3}, ...]}``.

    ``kind`` is one of identity, x, y, z, euler (``"angles": [t1, t2, t3]``)
    or matrix (``"u"``: a full 2^n x 2^n matrix, not necessarily collective).
    Unknown fields are rejected.
    """
    extra = set(obj) - {"n", "terms"}
    if extra:
        raise ValueError(f"unknown channel fields {sorted(extra)}")
    try:
        n = int(obj["n"])
        raw_terms = list(obj["terms"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed channel JSON: {exc}") from exc
    if n < 1:
        raise ValueError("channel needs n >= 1")
    terms = []
    for t in raw_terms:
        kind = t.get("kind")
        if kind not in _TERM_FIELDS:
            raise ValueError(f"unknown channel term kind {kind!r}")
        extra = set(t) - _TERM_FIELDS[kind]
        missing = _TERM_FIELDS[kind] - set(t)
        if extra or missing:
            raise ValueError(f"{kind} term: unknown fields {sorted(extra)}, missing {sorted(missing)}")
        if kind == "identity":
            u = np.eye(2**n)
        elif kind == "euler":
            u = collective(euler_recompose([float(a) for a in t["angles"]]), n)
        elif kind == "matrix":
            u = matrix_from_json(t["u"])
        else:
            u = collective(rot(kind, float(t["angle"])), n)
        terms.append((float(t["p"]), u))
    _check_probs([p for p, _ in terms])
    return MixedUnitaryChannel(n, tuple(terms))


def channel_to_json(ch: MixedUnitaryChannel) -> dict:
    """Serialize every term as a raw matrix."""
    return {
        "n": ch.n,
        "terms": [{"p": p, "kind": "matrix", "u": matrix_to_json(u)} for p, u in ch.terms],
    }
