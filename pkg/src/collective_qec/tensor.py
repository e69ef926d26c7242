"""Dense complex linear algebra for small qubit registers.

Matrices, state vectors and density matrices are plain ``numpy`` arrays of
dtype ``complex128``.  Qubits are numbered from 1; qubit 1 is the leftmost
tensor factor and the most significant bit of a basis index.
"""

from __future__ import annotations

from functools import reduce
from typing import Iterable, Sequence

import numpy as np

CONSTRUCTION_TOL = 1e-12
IDENTITY_TOL = 1e-10
STATE_TOL = 1e-9


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {m.shape}")
    return m


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(factors: Iterable) -> np.ndarray:
    """Left-folded Kronecker product ``((f0 ⊗ f1) ⊗ f2) ⊗ ...``."""
    factors = [as_matrix(f) for f in factors]
    if not factors:
        return np.ones((1, 1), dtype=np.complex128)
    return reduce(np.kron, factors)


def dagger(a) -> np.ndarray:
    return as_matrix(a).conj().T


def frob(a) -> float:
    return float(np.linalg.norm(np.asarray(a)))


def is_unitary(a, tol: float = CONSTRUCTION_TOL) -> bool:
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"is_unitary needs a square matrix, got {m.shape}")
    return frob(m.conj().T @ m - np.eye(m.shape[0])) <= tol


def basis_state(bits: str | int, n: int | None = None) -> np.ndarray:
    """Computational basis ket ``|bits>`` as a 1-d amplitude vector."""
    if isinstance(bits, str):
        n = len(bits)
        index = int(bits, 2)
    else:
        if n is None:
            raise ValueError("integer basis index needs an explicit qubit count")
        index = bits
    vec = np.zeros(2**n, dtype=np.complex128)
    vec[index] = 1.0
    return vec


def ket(amplitudes: dict[str, complex]) -> np.ndarray:
    """Build a ket from a ``{bitstring: amplitude}`` map (not normalized)."""
    n = len(next(iter(amplitudes)))
    vec = np.zeros(2**n, dtype=np.complex128)
    for bits, amp in amplitudes.items():
        if len(bits) != n:
            raise ValueError("bitstrings of mixed length")
        vec[int(bits, 2)] += amp
    return vec


def projector(vec) -> np.ndarray:
    v = np.asarray(vec, dtype=np.complex128).reshape(-1)
    return np.outer(v, v.conj())


def num_qubits(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 1 or 2**n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


def validate_density(rho, *, require_unit_trace: bool = True, tol: float = STATE_TOL) -> np.ndarray:
    """Return ``rho`` as an array after checking it is a valid state.

    Hermitian within ``IDENTITY_TOL``, eigenvalues >= ``-tol`` and, unless
    ``require_unit_trace`` is false (sub-normalized channel outputs), unit
    trace within ``tol``.
    """
    m = as_matrix(rho)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"density matrix must be square, got {m.shape}")
    if frob(m - m.conj().T) > IDENTITY_TOL:
        raise ValueError("density matrix is not Hermitian")
    evals = np.linalg.eigvalsh(m)
    if evals.min() < -tol:
        raise ValueError(f"density matrix has negative eigenvalue {evals.min():.3e}")
    if require_unit_trace and abs(np.trace(m).real - 1.0) > tol:
        raise ValueError(f"density matrix trace {np.trace(m).real!r} != 1")
    return m


def _clamped_eigvalsh(rho) -> np.ndarray:
    evals = np.linalg.eigvalsh(as_matrix(rho))
    if evals.min() < -STATE_TOL:
        raise ValueError(f"state is not positive semidefinite (eigenvalue {evals.min():.3e})")
    return np.clip(evals, 0.0, None)


def partial_trace(rho, keep: Iterable[int], n: int | None = None) -> np.ndarray:
    """Reduce ``rho`` onto the qubits in ``keep`` (1-based).

    The kept qubits appear in ascending order in the result.  Keeping no
    qubits returns the trace as a 1x1 matrix.
    """
    m = as_matrix(rho)
    if n is None:
        n = num_qubits(m.shape[0])
    if m.shape != (2**n, 2**n):
        raise ValueError(f"expected a {2**n}x{2**n} matrix, got {m.shape}")
    keep = sorted(set(keep))
    if any(q < 1 or q > n for q in keep):
        raise ValueError(f"qubit indices {keep} out of range 1..{n}")

    tensor = m.reshape((2,) * (2 * n))
    row = list(range(n))
    col = [n + q for q in range(n)]
    for q in range(n):
        if q + 1 not in keep:
            col[q] = row[q]
    out = [row[q - 1] for q in keep] + [col[q - 1] for q in keep]
    reduced = np.einsum(tensor, row + col, out)
    d = 2 ** len(keep)
    return np.asarray(reduced, dtype=np.complex128).reshape(d, d)


def permute_qubits(op, order: Sequence[int]) -> np.ndarray:
    """Relabel qubits of a 2^n x 2^n operator.

    ``order[k]`` is the (1-based) qubit of the input that becomes qubit
    ``k + 1`` of the output.
    """
    m = as_matrix(op)
    n = num_qubits(m.shape[0])
    if sorted(order) != list(range(1, n + 1)):
        raise ValueError(f"{order} is not a permutation of 1..{n}")
    axes = [q - 1 for q in order]
    tensor = m.reshape((2,) * (2 * n))
    tensor = tensor.transpose(axes + [n + a for a in axes])
    return tensor.reshape(2**n, 2**n)


def fidelity(a, b) -> float:
    """Uhlmann fidelity ``(tr sqrt(sqrt(a) b sqrt(a)))**2`` clipped to [0, 1]."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    evals, vecs = np.linalg.eigh(a)
    root_a = (vecs * np.sqrt(np.clip(evals, 0.0, None))) @ vecs.conj().T
    inner = root_a @ b @ root_a
    inner = (inner + inner.conj().T) / 2
    f = float(np.sum(np.sqrt(_clamped_eigvalsh(inner))) ** 2)
    return min(max(f, 0.0), 1.0)


def von_neumann_entropy(rho) -> float:
    """Entropy in bits; eigenvalues in [-1e-9, 0) count as zero."""
    evals = _clamped_eigvalsh(rho)
    evals = evals[evals > 0]
    return float(max(-np.sum(evals * np.log2(evals)), 0.0))


# --- JSON wire format -----------------------------------------------------


def _pair(z: complex) -> list[float]:
    # 0.0 instead of -0.0 keeps text output stable across platforms
    return [float(z.real) + 0.0, float(z.imag) + 0.0]


def matrix_to_json(a) -> dict:
    m = as_matrix(a)
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "data": [_pair(z) for z in m.reshape(-1)],
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed matrix JSON: {exc}") from exc
    if rows < 1 or cols < 1 or len(data) != rows * cols:
        raise ValueError(f"matrix JSON has {len(data)} entries for shape {rows}x{cols}")
    flat = np.array([complex(re, im) for re, im in data], dtype=np.complex128)
    return flat.reshape(rows, cols)


def state_to_json(vec) -> dict:
    v = np.asarray(vec, dtype=np.complex128).reshape(-1)
    return {"dim": int(v.size), "amplitudes": [_pair(z) for z in v]}


def state_from_json(obj: dict) -> np.ndarray:
    try:
        dim, amps = int(obj["dim"]), obj["amplitudes"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed state JSON: {exc}") from exc
    if len(amps) != dim:
        raise ValueError(f"state JSON has {len(amps)} amplitudes for dim {dim}")
    return np.array([complex(re, im) for re, im in amps], dtype=np.complex128)
