"""Encoders for the collective-noise codes NS3, DFS4 and NS5.

NS3 and NS5 are noiseless subsystems (3 qubits / 1 logical qubit and
5 qubits / 2 logical qubits); DFS4 is a 4-qubit decoherence-free subspace
built from two singlets.  All encoders are dense unitaries whose columns are
fixed explicitly, plus gate lists that are certified against them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache, reduce
from typing import Mapping, NamedTuple, Sequence

import numpy as np

from .su2 import I2, SIGMA_X, BlockLayout, collective, collective_lowering
from .tensor import (
    CONSTRUCTION_TOL,
    IDENTITY_TOL,
    as_matrix,
    dagger,
    frob,
    ket,
    kron_all,
    matrix_from_json,
    matrix_to_json,
    partial_trace,
    permute_qubits,
    projector,
    state_to_json,
)

VARIANTS = ("original", "redefined")
FAMILIES = ("NS3", "DFS4", "NS5")
GAUGE, ZERO, DATA = "gauge", "zero", "data"

_R2, _R3, _R6 = math.sqrt(2), math.sqrt(3), math.sqrt(6)

X3 = collective(SIGMA_X, 3)

# Input |q1 q2 q3> of U_E^(3) -> basis vector; index order 000, 001, ..., 111.
UE3_COLUMN_ORDER = ("ea1", "eb1", "e42", "e41", "ea2", "eb2", "e43", "e44")

# Column indices of U_E^(3) per irrep copy, listed from weight m = top down.
# Key 0 is the spin-3/2 irrep, key 1 the two spin-1/2 copies (a, b).
NS3_BLOCK_LAYOUT: dict[str, dict[int, list[list[int]]]] = {
    "original": {0: [[3, 2, 6, 7]], 1: [[0, 4], [1, 5]]},
    "redefined": {0: [[6, 3, 7, 2]], 1: [[0, 4], [1, 5]]},
}


class SynthesisError(RuntimeError):
    """A gate list does not reproduce the encoder it was built for."""


def _check_variant(variant: str) -> None:
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")


def basis3(variant: str = "original") -> dict[str, np.ndarray]:
    """The eight 3-qubit vectors spanning 4 ⊕ 2 ⊕ 2.

    ``original`` is the symmetric-group adapted basis; ``redefined`` is the
    relabelled set that makes the encoding circuit a short permutation-like
    network.
    """
    _check_variant(variant)
    if variant == "original":
        return {
            "e41": ket({"000": 1}),
            "e42": ket({"100": 1 / _R3, "010": 1 / _R3, "001": 1 / _R3}),
            "e43": ket({"011": 1 / _R3, "101": 1 / _R3, "110": 1 / _R3}),
            "e44": ket({"111": 1}),
            "ea1": ket({"100": 1 / _R2, "010": -1 / _R2}),
            "ea2": -ket({"011": 1 / _R2, "101": -1 / _R2}),
            "eb1": ket({"100": 1 / _R6, "010": 1 / _R6, "001": -2 / _R6}),
            "eb2": -ket({"011": 1 / _R6, "101": 1 / _R6, "110": -2 / _R6}),
        }
    ea1 = ket({"100": 1 / _R2, "001": -1 / _R2})
    eb1 = ket({"100": 1 / _R6, "001": 1 / _R6, "010": -2 / _R6})
    e42 = ket({"111": 1})
    e41 = ket({"100": 1 / _R3, "001": 1 / _R3, "010": 1 / _R3})
    return {
        "e41": e41,
        "e42": e42,
        "e43": -X3 @ e42,
        "e44": -X3 @ e41,
        "ea1": ea1,
        "ea2": -X3 @ ea1,
        "eb1": eb1,
        "eb2": -X3 @ eb1,
    }


# --- gate lists -------------------------------------------------------------

G1 = np.array([[1, _R2], [-_R2, 1]], dtype=np.complex128) / _R3
G2 = np.array([[1, 1], [-1, 1]], dtype=np.complex128) / _R2
HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / _R2

FIXED_GATES = {"H": HADAMARD, "X": SIGMA_X, "G1": G1, "G2": G2, "CNOT": SIGMA_X, "CNNN": SIGMA_X}
GATE_KINDS = tuple(FIXED_GATES) + ("controlled-U",)
FILLED, EMPTY = "filled", "empty"

_P0 = np.diag([1, 0]).astype(np.complex128)
_P1 = np.diag([0, 1]).astype(np.complex128)


@dataclass(frozen=True)
class Gate:
    """One gate: the same 2x2 payload on every target, gated by the controls.

    A filled control fires on |1>, an empty one on |0>.
    """

    kind: str
    targets: tuple[int, ...]
    controls: tuple[tuple[int, str], ...] = ()
    payload: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if self.kind == "controlled-U":
            if self.payload is None:
                raise ValueError("controlled-U needs a 2x2 payload")
            payload = as_matrix(self.payload)
            if payload.shape != (2, 2) or frob(dagger(payload) @ payload - I2) > CONSTRUCTION_TOL:
                raise ValueError("controlled-U payload must be a 2x2 unitary")
            object.__setattr__(self, "payload", payload)
        elif self.payload is not None:
            raise ValueError(f"{self.kind} has a fixed matrix; payload not allowed")
        if self.kind == "CNOT" and (len(self.controls) != 1 or len(self.targets) != 1):
            raise ValueError("CNOT has one control and one target")
        if self.kind == "CNNN" and (len(self.controls) != 1 or len(self.targets) != 3):
            raise ValueError("CNNN has one control and three targets")
        if any(p not in (FILLED, EMPTY) for _, p in self.controls):
            raise ValueError("control polarity must be 'filled' or 'empty'")
        wires = list(self.targets) + [w for w, _ in self.controls]
        if not self.targets or len(set(wires)) != len(wires):
            raise ValueError("gate wires must be distinct and include a target")

    @property
    def matrix2(self) -> np.ndarray:
        return self.payload if self.kind == "controlled-U" else FIXED_GATES[self.kind]

    def wires(self) -> list[int]:
        return list(self.targets) + [w for w, _ in self.controls]

    def unitary(self, n: int) -> np.ndarray:
        if any(w < 1 or w > n for w in self.wires()):
            raise ValueError(f"gate {self.kind} touches a wire outside 1..{n}")
        target_op = kron_all([self.matrix2 if q in self.targets else I2 for q in range(1, n + 1)])
        if not self.controls:
            return target_op
        polarity = dict(self.controls)
        proj = kron_all(
            [_P1 if polarity.get(q) == FILLED else _P0 if q in polarity else I2
             for q in range(1, n + 1)]
        )
        return target_op @ proj + (np.eye(2**n) - proj)

    def relabel(self, wire_map: Mapping[int, int]) -> "Gate":
        return Gate(
            self.kind,
            tuple(wire_map[t] for t in self.targets),
            tuple((wire_map[w], p) for w, p in self.controls),
            self.payload,
        )

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "controls": [{"wire": w, "polarity": p} for w, p in self.controls],
            "targets": list(self.targets),
        }
        if self.payload is not None:
            out["payload"] = matrix_to_json(self.payload)
        return out


@dataclass(frozen=True)
class GateList:
    n: int
    gates: tuple[Gate, ...]

    def __post_init__(self):
        for g in self.gates:
            if any(w < 1 or w > self.n for w in g.wires()):
                raise ValueError(f"gate {g.kind} touches a wire outside 1..{self.n}")

    def __len__(self) -> int:
        return len(self.gates)

    def unitary(self) -> np.ndarray:
        """Composite unitary; the first gate in the list acts first."""
        return reduce(lambda acc, g: g.unitary(self.n) @ acc, self.gates, np.eye(2**self.n, dtype=np.complex128))

    def embed(self, wires: Sequence[int], n: int) -> "GateList":
        """Place this list on ``wires`` (its wire k goes to ``wires[k-1]``) of an n-wire register."""
        if len(wires) != self.n:
            raise ValueError("need one destination wire per wire")
        wire_map = {k + 1: w for k, w in enumerate(wires)}
        return GateList(n, tuple(g.relabel(wire_map) for g in self.gates))

    def __add__(self, other: "GateList") -> "GateList":
        if self.n != other.n:
            raise ValueError("cannot concatenate gate lists over different wire counts")
        return GateList(self.n, self.gates + other.gates)

    def to_json(self) -> dict:
        return {"n": self.n, "gates": [g.to_json() for g in self.gates]}

    @classmethod
    def from_json(cls, obj: dict) -> "GateList":
        gates = []
        for g in obj["gates"]:
            extra = set(g) - {"kind", "controls", "targets", "payload"}
            if extra:
                raise ValueError(f"unknown gate fields {sorted(extra)}")
            payload = matrix_from_json(g["payload"]) if g.get("payload") is not None else None
            gates.append(
                Gate(
                    g["kind"],
                    tuple(int(t) for t in g["targets"]),
                    tuple((int(c["wire"]), c["polarity"]) for c in g.get("controls", [])),
                    payload,
                )
            )
        return cls(int(obj["n"]), tuple(gates))

    def to_text(self) -> str:
        lines = [f"# {self.n} wires, {len(self.gates)} gates"]
        for g in self.gates:
            ctrl = " ".join(f"{'@' if p == FILLED else 'o'}{w}" for w, p in g.controls)
            tgt = ",".join(str(t) for t in g.targets)
            lines.append(f"{g.kind} {ctrl + ' ' if ctrl else ''}-> {tgt}")
        return "\n".join(lines) + "\n"


def _cx(control: int, target: int, polarity: str = FILLED) -> Gate:
    return Gate("CNOT", (target,), ((control, polarity),))


def column_phase_residual(
    actual, reference, columns: Sequence[int] | None = None
) -> tuple[float, np.ndarray]:
    """Distance between two matrices after the best unit-modulus phase per column.

    Returns the Frobenius residual over ``columns`` (all by default) and the
    phases ``phi`` with ``actual[:, k] * phi[k] ≈ reference[:, k]``.
    """
    a = as_matrix(actual)
    b = as_matrix(reference)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    cols = list(range(a.shape[1])) if columns is None else list(columns)
    overlaps = np.einsum("ij,ij->j", a[:, cols].conj(), b[:, cols])
    mags = np.abs(overlaps)
    phases = np.where(mags > 1e-15, overlaps / np.where(mags > 1e-15, mags, 1.0), 1.0)
    return frob(a[:, cols] * phases - b[:, cols]), phases


def build_ue3_gatelist(reduced: bool = False) -> GateList:
    """Eight-gate circuit for the redefined U_E^(3) (six gates when ``reduced``).

    Wires 2, 3 are rotated into the amplitudes of the odd-parity image with
    G1 and G2; the two gates controlled on wire 1 produce the ``-(σ_x)^{⊗3}``
    partners and are dropped in the reduced list, which is valid only when
    wire 1 starts in |0>; the final three gates write the parity into wire 1.
    """
    amplitudes = [
        Gate("G1", (2,), ((3, FILLED),)),
        _cx(2, 3),
        Gate("G2", (3,), ((2, EMPTY),)),
    ]
    partner = [
        Gate("controlled-U", (2,), ((1, FILLED),), -SIGMA_X),
        _cx(1, 3),
    ]
    parity = [Gate("X", (1,)), _cx(2, 1), _cx(3, 1)]
    gates = amplitudes + ([] if reduced else partner) + parity
    gl = GateList(3, tuple(gates))

    reference = build_ue3("redefined").encoder
    cols = range(4) if reduced else range(8)
    residual, _ = column_phase_residual(gl.unitary(), reference, cols)
    if residual > IDENTITY_TOL:
        raise SynthesisError(f"U_E^(3) gate list misses its reference by {residual:.3e}")
    return gl


# --- code specifications ------------------------------------------------------


@dataclass(frozen=True)
class CodeSpec:
    family: str
    n: int
    logical_qubits: int
    encoder: np.ndarray = field(repr=False)
    layout: tuple[str, ...]
    logical_columns: Mapping[str, np.ndarray] = field(repr=False)
    variant: str = "redefined"

    def wires(self, role: str) -> list[int]:
        return [q + 1 for q, r in enumerate(self.layout) if r == role]

    @property
    def gauge_wires(self) -> list[int]:
        return self.wires(GAUGE)

    @property
    def zero_wires(self) -> list[int]:
        return self.wires(ZERO)

    @property
    def data_wires(self) -> list[int]:
        return self.wires(DATA)

    def input_index(self, gauge_bits: str, data_bits: str) -> int:
        """Encoder column fed by the given gauge and data bits (zeros elsewhere)."""
        bits = ["0"] * self.n
        for w, b in zip(self.gauge_wires, gauge_bits):
            bits[w - 1] = b
        for w, b in zip(self.data_wires, data_bits):
            bits[w - 1] = b
        return int("".join(bits), 2)

    def code_columns(self) -> list[int]:
        """Indices of the columns reachable with every zero-ancilla at |0>."""
        g = len(self.gauge_wires)
        d = len(self.data_wires)
        return sorted(
            self.input_index(format(gi, f"0{g}b") if g else "", format(di, f"0{d}b"))
            for gi in range(2**g)
            for di in range(2**d)
        )

    def block_layout(self) -> BlockLayout:
        if self.family != "NS3":
            raise ValueError("a full irrep layout is only available for NS3")
        return NS3_BLOCK_LAYOUT[self.variant]


def _checked(spec: CodeSpec) -> CodeSpec:
    u = spec.encoder
    if frob(dagger(u) @ u - np.eye(u.shape[0])) > CONSTRUCTION_TOL:
        raise SynthesisError(f"{spec.family} encoder is not unitary")
    vecs = np.array(list(spec.logical_columns.values())).T
    if frob(dagger(vecs) @ vecs - np.eye(vecs.shape[1])) > CONSTRUCTION_TOL:
        raise SynthesisError(f"{spec.family} logical columns are not orthonormal")
    spec.encoder.setflags(write=False)
    for v in spec.logical_columns.values():
        v.setflags(write=False)
    return spec


@lru_cache(maxsize=None)
def build_ue3(variant: str = "redefined") -> CodeSpec:
    """NS3 encoder: columns ``e_{a1}, e_{b1}, e_{4,2}, e_{4,1}, e_{a2}, e_{b2}, e_{4,3}, e_{4,4}``."""
    basis = basis3(variant)
    encoder = np.array([basis[label] for label in UE3_COLUMN_ORDER]).T
    return _checked(
        CodeSpec(
            family="NS3",
            n=3,
            logical_qubits=1,
            encoder=encoder,
            layout=(GAUGE, ZERO, DATA),
            logical_columns={"0": basis["ea1"], "1": basis["eb1"]},
            variant=variant,
        )
    )


def cnnn() -> np.ndarray:
    """Wire 1 controls a NOT on wires 2, 3 and 4."""
    return Gate("CNNN", (2, 3, 4), ((1, FILLED),)).unitary(4)


def dfs4_logical_states(variant: str = "redefined") -> dict[str, np.ndarray]:
    basis = basis3(variant)
    up, down = np.array([1, 0], dtype=np.complex128), np.array([0, 1], dtype=np.complex128)
    return {
        label: (np.kron(down, basis[e]) + np.kron(up, X3 @ basis[e])) / _R2
        for label, e in (("0", "ea1"), ("1", "eb1"))
    }


@lru_cache(maxsize=None)
def build_ue4(variant: str = "redefined") -> CodeSpec:
    """DFS4 encoder ``(X ⊗ I_8) · CNNN · (H ⊗ U_E^(3))``."""
    ue3 = build_ue3(variant).encoder
    encoder = np.kron(SIGMA_X, np.eye(8)) @ cnnn() @ np.kron(HADAMARD, ue3)
    return _checked(
        CodeSpec(
            family="DFS4",
            n=4,
            logical_qubits=1,
            encoder=encoder,
            layout=(ZERO, ZERO, ZERO, DATA),
            logical_columns=dfs4_logical_states(variant),
            variant=variant,
        )
    )


def logical_basis5(variant: str = "redefined") -> dict[str, np.ndarray]:
    """The four m = +1/2 vectors of the 5-qubit noiseless subsystem.

    The 1/sqrt(6) in ``|10>_L`` and ``|11>_L`` scales the whole expression.
    """
    basis = basis3(variant)
    singlet = ket({"01": 1, "10": -1}) / _R2
    triplet0 = ket({"01": 1, "10": 1})
    up_up = ket({"00": 1})
    return {
        "00": np.kron(singlet, basis["ea1"]),
        "01": np.kron(singlet, basis["eb1"]),
        "10": (np.kron(triplet0, basis["ea1"]) - 2 * np.kron(up_up, basis["ea2"])) / _R6,
        "11": (np.kron(triplet0, basis["eb1"]) - 2 * np.kron(up_up, basis["eb2"])) / _R6,
    }


def gauge_partner(vec, n: int) -> np.ndarray:
    """``S_- |v>`` normalized: the m = -1/2 partner of an m = +1/2 vector."""
    lowered = collective_lowering(n) @ np.asarray(vec, dtype=np.complex128)
    norm = np.linalg.norm(lowered)
    if norm < CONSTRUCTION_TOL:
        raise ValueError("vector is annihilated by the lowering operator")
    return lowered / norm


def complete_unitary(columns: Mapping[int, np.ndarray], dim: int) -> np.ndarray:
    """Fill unassigned columns by Gram-Schmidt over computational basis vectors.

    Candidates ``|0>, |1>, ...`` are taken in ascending order and placed in
    the free column slots in ascending order.
    """
    u = np.zeros((dim, dim), dtype=np.complex128)
    basis = []
    for k, v in columns.items():
        u[:, k] = v
        basis.append(np.asarray(v, dtype=np.complex128))
    free = [k for k in range(dim) if k not in columns]
    candidate = 0
    for k in free:
        while True:
            v = np.zeros(dim, dtype=np.complex128)
            v[candidate] = 1.0
            candidate += 1
            for _ in range(2):
                for b in basis:
                    v = v - np.vdot(b, v) * b
            norm = np.linalg.norm(v)
            if norm > 1e-8:
                break
        v = v / norm
        basis.append(v)
        u[:, k] = v
    return u


@lru_cache(maxsize=None)
def build_ue5(variant: str = "redefined") -> CodeSpec:
    """NS5 encoder on layout (gauge, zero, zero, data, data).

    Input ``|0>|00>|xy>`` maps to ``|xy>_L`` and ``|1>|00>|xy>`` to its
    gauge partner; the other 24 columns are a deterministic completion.
    """
    logical = logical_basis5(variant)
    layout = (GAUGE, ZERO, ZERO, DATA, DATA)
    columns = {}
    for label, vec in logical.items():
        x, y = int(label[0]), int(label[1])
        columns[2 * x + y] = vec
        columns[16 + 2 * x + y] = gauge_partner(vec, 5)
    encoder = complete_unitary(columns, 32)
    return _checked(
        CodeSpec(
            family="NS5",
            n=5,
            logical_qubits=2,
            encoder=encoder,
            layout=layout,
            logical_columns=logical,
            variant=variant,
        )
    )


def get_code(family: str, variant: str = "redefined") -> CodeSpec:
    builders = {"NS3": build_ue3, "DFS4": build_ue4, "NS5": build_ue5}
    try:
        return builders[family.upper()](variant)
    except KeyError:
        raise ValueError(f"unknown code family {family!r}; expected one of {FAMILIES}") from None


def build_dfs4_gatelist() -> GateList:
    """H on wire 1, U_E^(3) on wires 2-4, CNNN from wire 1, then X on wire 1."""
    gl = (
        GateList(4, (Gate("H", (1,)),))
        + build_ue3_gatelist().embed([2, 3, 4], 4)
        + GateList(4, (Gate("CNNN", (2, 3, 4), ((1, FILLED),)), Gate("X", (1,))))
    )
    residual, _ = column_phase_residual(gl.unitary(), build_ue4("redefined").encoder)
    if residual > IDENTITY_TOL:
        raise SynthesisError(f"DFS4 gate list misses its reference by {residual:.3e}")
    return gl


def build_ns5_gatelist() -> GateList:
    """Two U_E^(3) modules and a wire swap realizing the NS5 code columns.

    The outer module encodes data wire 4 against gauge wire 1 using wire 3
    as its spare; the inner module then expands wire 3 (now carrying the
    outer module's third output) together with zero wire 2 and data wire 5.
    Swapping wires 2 and 4 restores the logical-basis qubit order.  Only
    the eight code columns are certified, up to per-column phase.
    """
    ue3 = build_ue3_gatelist()
    swap = GateList(5, (_cx(2, 4), _cx(4, 2), _cx(2, 4)))
    gl = ue3.embed([1, 3, 4], 5) + ue3.embed([3, 2, 5], 5) + swap
    spec = build_ue5("redefined")
    residual, _ = column_phase_residual(gl.unitary(), spec.encoder, spec.code_columns())
    if residual > IDENTITY_TOL:
        raise SynthesisError(f"NS5 gate list misses its code columns by {residual:.3e}")
    return gl


def build_gatelist(family: str) -> GateList:
    builders = {"NS3": build_ue3_gatelist, "DFS4": build_dfs4_gatelist, "NS5": build_ns5_gatelist}
    try:
        return builders[family.upper()]()
    except KeyError:
        raise ValueError(f"unknown code family {family!r}") from None


# --- encode / decode ----------------------------------------------------------


def as_density(state) -> np.ndarray:
    """Accept a ket (1-d) or a density matrix (2-d)."""
    arr = np.asarray(state, dtype=np.complex128)
    if arr.ndim == 1:
        return projector(arr)
    return as_matrix(arr)


def _zero_state(k: int) -> np.ndarray:
    z = np.zeros((2**k, 2**k), dtype=np.complex128)
    z[0, 0] = 1.0
    return z


def _assemble(code: CodeSpec, gauge: np.ndarray, data: np.ndarray) -> np.ndarray:
    """Tensor the parts in (gauge, zero, data) order, then move them to their wires."""
    grouped = code.gauge_wires + code.zero_wires + code.data_wires
    joint = kron_all([gauge, _zero_state(len(code.zero_wires)), data])
    order = [grouped.index(q) + 1 for q in range(1, code.n + 1)]
    return permute_qubits(joint, order)


def encode(code: CodeSpec, gauge=None, data=None, *, ancilla=None) -> np.ndarray:
    """``U (gauge ⊗ |0..0><0..0| ⊗ data) U^dag`` with parts placed per the layout.

    ``gauge`` defaults to |0><0| for codes with a gauge wire and must be
    omitted for DFS4.  ``ancilla``, if given, must be the all-zero state.
    """
    if data is None:
        raise ValueError("a data state is required")
    data = as_density(data)
    n_gauge, n_data, n_zero = len(code.gauge_wires), len(code.data_wires), len(code.zero_wires)
    if data.shape != (2**n_data, 2**n_data):
        raise ValueError(f"{code.family} expects a {n_data}-qubit data state, got shape {data.shape}")
    if n_gauge == 0:
        if gauge is not None:
            raise ValueError(f"{code.family} has no gauge wire; its ancillas must all be |0>")
        gauge = np.ones((1, 1), dtype=np.complex128)
    else:
        gauge = _zero_state(n_gauge) if gauge is None else as_density(gauge)
        if gauge.shape != (2**n_gauge, 2**n_gauge):
            raise ValueError(f"{code.family} expects a {n_gauge}-qubit gauge state")
    if ancilla is not None:
        ancilla = as_density(ancilla)
        if ancilla.shape != (2**n_zero, 2**n_zero) or frob(ancilla - _zero_state(n_zero)) > CONSTRUCTION_TOL:
            raise ValueError(f"{code.family} zero-ancilla wires {code.zero_wires} must be |0>")
    rho = _assemble(code, gauge, data)
    u = code.encoder
    return u @ rho @ dagger(u)


class Decoded(NamedTuple):
    gauge: np.ndarray
    data: np.ndarray
    product_residual: float


def decode(code: CodeSpec, rho) -> Decoded:
    """Undo the encoder and split the result into gauge and data parts.

    ``data`` is normalized to unit trace; ``gauge`` carries the trace of
    ``rho`` (a 1x1 matrix when the code has no gauge wire).  The residual is
    the Frobenius distance between ``U^dag rho U`` and the product state
    rebuilt from the two parts with |0> on every zero-ancilla.
    """
    rho = as_matrix(rho)
    u = code.encoder
    if rho.shape != u.shape:
        raise ValueError(f"{code.family} expects a {u.shape[0]}-dim state, got {rho.shape}")
    sigma = dagger(u) @ rho @ u
    total = float(np.trace(sigma).real)
    if total < 1e-15:
        raise ValueError("cannot decode a state with zero trace")
    gauge = partial_trace(sigma, code.gauge_wires, code.n)
    data = partial_trace(sigma, code.data_wires, code.n) / total
    residual = frob(sigma - _assemble(code, gauge, data))
    return Decoded(gauge, data, residual)


def logical_basis_json(code: CodeSpec) -> dict:
    return {label: state_to_json(v) for label, v in code.logical_columns.items()}


__all__ = [
    "CodeSpec",
    "Decoded",
    "Gate",
    "GateList",
    "SynthesisError",
    "basis3",
    "build_dfs4_gatelist",
    "build_gatelist",
    "build_ns5_gatelist",
    "build_ue3",
    "build_ue3_gatelist",
    "build_ue4",
    "build_ue5",
    "column_phase_residual",
    "decode",
    "encode",
    "get_code",
    "logical_basis5",
]
