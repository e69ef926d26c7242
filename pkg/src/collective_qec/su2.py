"""SU(2) building blocks for collective noise on n qubits.

Convention: ``|0>`` is spin up (m = +1/2), so ``|000>`` is the top weight
of the spin-3/2 irrep and the lowering operator sends ``|0>`` to ``|1>``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .tensor import CONSTRUCTION_TOL, IDENTITY_TOL, as_matrix, dagger, frob, kron_all

I2 = np.eye(2, dtype=np.complex128)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
_PAULI = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}

# |1><0| : takes m = +1/2 to m = -1/2
LOWER = np.array([[0, 0], [1, 0]], dtype=np.complex128)

MAX_IRREP_QUBITS = 30


def pauli(axis: str) -> np.ndarray:
    try:
        return _PAULI[axis.lower()].copy()
    except KeyError:
        raise ValueError(f"unknown Pauli axis {axis!r}") from None


def rot(axis: str, theta: float) -> np.ndarray:
    """``exp(i theta sigma_axis) = cos(theta) I + i sin(theta) sigma_axis``."""
    return math.cos(theta) * I2 + 1j * math.sin(theta) * pauli(axis)


@dataclass(frozen=True)
class EulerAngles:
    """Angles of ``W = rot(x, theta1) @ rot(y, theta2) @ rot(x, theta3)``."""

    theta1: float
    theta2: float
    theta3: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.theta1, self.theta2, self.theta3)


def euler_recompose(angles: EulerAngles | Sequence[float]) -> np.ndarray:
    t1, t2, t3 = angles.as_tuple() if isinstance(angles, EulerAngles) else angles
    return rot("x", t1) @ rot("y", t2) @ rot("x", t3)


_HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2)


def euler_decompose(w, *, det_tol: float = IDENTITY_TOL) -> EulerAngles:
    """Angles with ``euler_recompose(angles) == w`` for ``w`` in SU(2).

    Branch: ``theta2`` in [0, pi/2] and ``theta1``, ``theta3`` in (-pi, pi].
    When ``theta2`` is 0 or pi/2 only one x-angle is determined; it goes to
    ``theta1`` and ``theta3`` is 0.
    """
    w = as_matrix(w)
    if w.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got {w.shape}")
    if abs(np.linalg.det(w) - 1.0) > det_tol:
        raise ValueError("euler_decompose needs det(w) = 1; use to_su2 first")

    # H rot(x, t) H = rot(z, t) and H rot(y, t) H = rot(y, -t), so
    # v = H w H = [[c e^{i(t1+t3)}, -s e^{i(t1-t3)}], [s e^{-i(t1-t3)}, c e^{-i(t1+t3)}]]
    v = _HADAMARD @ w @ _HADAMARD
    c, s = abs(v[0, 0]), abs(v[1, 0])
    theta2 = math.atan2(s, c)
    if s < 1e-14:
        return EulerAngles(cmath.phase(v[0, 0]), 0.0, 0.0)
    if c < 1e-14:
        return EulerAngles(-cmath.phase(v[1, 0]), math.pi / 2, 0.0)
    total = cmath.phase(v[0, 0])
    diff = -cmath.phase(v[1, 0])
    return EulerAngles((total + diff) / 2, theta2, (total - diff) / 2)


def to_su2(w) -> np.ndarray:
    """Divide out the global phase ``sqrt(det w)`` (principal root)."""
    w = as_matrix(w)
    return w / np.sqrt(np.linalg.det(w))


def random_su2(rng: np.random.Generator) -> np.ndarray:
    """Haar-random SU(2) element from a normalized pair of complex Gaussians."""
    z = rng.normal(size=2) + 1j * rng.normal(size=2)
    a, b = z / np.linalg.norm(z)
    return np.array([[a, -b.conjugate()], [b, a.conjugate()]], dtype=np.complex128)


@dataclass(frozen=True)
class CollectiveUnitary:
    w: np.ndarray
    n: int

    def __post_init__(self):
        w = as_matrix(self.w)
        if w.shape != (2, 2) or abs(np.linalg.det(w) - 1.0) > CONSTRUCTION_TOL:
            raise ValueError("collective unitary needs w in SU(2)")
        if frob(dagger(w) @ w - I2) > CONSTRUCTION_TOL:
            raise ValueError("w is not unitary")
        if self.n < 1:
            raise ValueError("replication count must be positive")
        object.__setattr__(self, "w", w)

    def matrix(self) -> np.ndarray:
        return collective(self.w, self.n)


def collective(w, n: int) -> np.ndarray:
    """``w`` tensored with itself ``n`` times."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return kron_all([w] * n)


def single_site(op, site: int, n: int) -> np.ndarray:
    """Embed a 2x2 operator on qubit ``site`` (1-based) of ``n``."""
    return kron_all([op if q == site else I2 for q in range(1, n + 1)])


def collective_sum(op, n: int) -> np.ndarray:
    """``sum_i op^(i)`` over all n sites."""
    return sum(single_site(op, q, n) for q in range(1, n + 1))


def collective_lowering(n: int) -> np.ndarray:
    """Total lowering operator ``S_-`` on n qubits."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return collective_sum(LOWER, n)


# --- irreducible-representation content of 2^{⊗n} ------------------------


@dataclass(frozen=True)
class IrrepBlock:
    j: int  # block index 0..n//2
    multiplicity: int
    dim: int

    @property
    def spin(self) -> float:
        return (self.dim - 1) / 2


@dataclass(frozen=True)
class IrrepDecomposition:
    n: int
    blocks: tuple[IrrepBlock, ...]

    def pairs(self) -> list[tuple[int, int]]:
        return [(b.multiplicity, b.dim) for b in self.blocks]

    def total_dim(self) -> int:
        return sum(b.multiplicity * b.dim for b in self.blocks)

    def to_csv(self) -> str:
        lines = ["n,j,r,dim"]
        lines += [f"{self.n},{b.j},{b.multiplicity},{b.dim}" for b in self.blocks]
        return "\n".join(lines) + "\n"


def multiplicities(n: int) -> IrrepDecomposition:
    """Multiplicity ``r_j`` and dimension ``n_j`` of each irrep in 2^{⊗n}.

    ``r_j = C(n, j) - C(n, j - 1)`` and ``n_j = n + 1 - 2j`` for
    ``0 <= j <= n/2``.
    """
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_IRREP_QUBITS:
        raise ValueError(f"n must be an integer in 1..{MAX_IRREP_QUBITS}, got {n!r}")
    blocks = []
    for j in range(n // 2 + 1):
        r = math.comb(n, j) - (math.comb(n, j - 1) if j > 0 else 0)
        blocks.append(IrrepBlock(j, r, n + 1 - 2 * j))
    dec = IrrepDecomposition(int(n), tuple(blocks))
    assert dec.total_dim() == 2**n
    return dec


# --- block-structure certification ----------------------------------------

BlockLayout = Mapping[int, Sequence[Sequence[int]]]


def _check_layout(layout: BlockLayout, n: int) -> None:
    dec = {b.j: b for b in multiplicities(n).blocks}
    seen: list[int] = []
    for j, copies in layout.items():
        if j not in dec:
            raise ValueError(f"layout names unknown irrep index {j}")
        if len(copies) != dec[j].multiplicity:
            raise ValueError(
                f"irrep {j} needs {dec[j].multiplicity} copies, layout gives {len(copies)}"
            )
        for cols in copies:
            if len(cols) != dec[j].dim:
                raise ValueError(f"irrep {j} copy has {len(cols)} columns, expected {dec[j].dim}")
            seen.extend(cols)
    if sorted(seen) != list(range(2**n)):
        raise ValueError("layout must assign every column exactly once")


def _basis_change(t) -> np.ndarray:
    t = as_matrix(t)
    if t.shape[0] != t.shape[1] or frob(dagger(t) @ t - np.eye(t.shape[0])) > IDENTITY_TOL:
        raise ValueError("basis change must be a unitary matrix")
    return t


def irrep_blocks(t, w, layout: BlockLayout) -> dict[int, list[np.ndarray]]:
    """Diagonal blocks of ``t^dag w^{⊗n} t`` for every irrep copy in ``layout``."""
    t = _basis_change(t)
    n = int(round(math.log2(t.shape[0])))
    _check_layout(layout, n)
    m = dagger(t) @ collective(w, n) @ t
    return {j: [m[np.ix_(cols, cols)] for cols in copies] for j, copies in layout.items()}


def block_structure_residual(t, w, layout: BlockLayout) -> float:
    """Largest Frobenius deviation from the claimed ``⊕_j (I_{r_j} ⊗ V_j)`` form.

    Measures (a) the spread between copies of the same irrep and (b) the
    weight outside the diagonal blocks.
    """
    t = _basis_change(t)
    n = int(round(math.log2(t.shape[0])))
    _check_layout(layout, n)
    m = dagger(t) @ collective(w, n) @ t
    off = m.copy()
    worst = 0.0
    for copies in layout.values():
        ref = m[np.ix_(copies[0], copies[0])]
        for cols in copies:
            worst = max(worst, frob(m[np.ix_(cols, cols)] - ref))
            off[np.ix_(cols, cols)] = 0.0
    return max(worst, frob(off))


def verify_block_structure(t, w, layout: BlockLayout, tol: float = IDENTITY_TOL) -> bool:
    return block_structure_residual(t, w, layout) < tol
