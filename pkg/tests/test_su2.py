import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from collective_qec import su2
from collective_qec.codes import build_ue3, basis3, NS3_BLOCK_LAYOUT
from collective_qec.su2 import SIGMA_X, SIGMA_Y, SIGMA_Z, rot
from collective_qec.tensor import basis_state, frob, ket


def test_pauli_examples():
    assert np.array_equal(su2.pauli("x") @ [1, 0], [0, 1])
    assert np.array_equal(np.diag(su2.pauli("z")), [1, -1])
    assert np.allclose(su2.pauli("x") @ su2.pauli("y"), 1j * su2.pauli("z"))
    with pytest.raises(ValueError):
        su2.pauli("w")


def test_rot_examples():
    assert np.allclose(rot("x", 0), np.eye(2))
    assert np.allclose(rot("x", math.pi / 2), 1j * SIGMA_X)
    g = 0.37
    assert np.allclose(np.diag(rot("z", g)), [np.exp(1j * g), np.exp(-1j * g)])
    assert abs(np.linalg.det(rot("y", 2.1)) - 1) < 1e-15


def test_euler_recompose_examples():
    assert np.allclose(su2.euler_recompose((0, 0, 0)), np.eye(2))
    assert np.allclose(su2.euler_recompose(su2.EulerAngles(0.8, 0, 0)), rot("x", 0.8))
    w = su2.euler_recompose((0.3, -1.2, 2.5))
    assert abs(np.linalg.det(w) - 1) < 1e-12
    assert frob(w.conj().T @ w - np.eye(2)) < 1e-12


def test_euler_decompose_examples():
    assert su2.euler_decompose(np.eye(2)).as_tuple() == (0.0, 0.0, 0.0)
    a = su2.euler_decompose(rot("y", 0.7))
    assert a.as_tuple() == pytest.approx((0, 0.7, 0), abs=1e-14)
    a = su2.euler_decompose(rot("x", -1.1))
    assert a.as_tuple() == pytest.approx((-1.1, 0, 0), abs=1e-14)


def test_euler_decompose_branch_and_rejects_phase():
    rng = np.random.default_rng(5)
    for _ in range(200):
        a = su2.euler_decompose(su2.random_su2(rng))
        assert 0 <= a.theta2 <= math.pi / 2
        assert -math.pi < a.theta1 <= math.pi and -math.pi < a.theta3 <= math.pi
    with pytest.raises(ValueError):
        su2.euler_decompose(1j * np.eye(2))


def test_euler_degenerate_half_pi():
    w = rot("x", 0.4) @ rot("y", math.pi / 2) @ rot("x", 0.9)
    a = su2.euler_decompose(w)
    assert a.theta2 == pytest.approx(math.pi / 2)
    assert a.theta3 == 0.0
    assert frob(su2.euler_recompose(a) - w) < 1e-12


def test_euler_round_trip_1000_seeded():
    rng = np.random.default_rng(1000)
    worst = 0.0
    for _ in range(1000):
        w = su2.random_su2(rng)
        worst = max(worst, frob(su2.euler_recompose(su2.euler_decompose(w)) - w))
    assert worst < 1e-9


def test_to_su2_strips_global_phase():
    w = np.exp(0.7j) * rot("y", 0.3) @ rot("z", 1.0)
    v = su2.to_su2(w)
    assert abs(np.linalg.det(v) - 1) < 1e-12
    assert frob(su2.euler_recompose(su2.euler_decompose(v)) - v) < 1e-12


def test_collective_examples():
    assert np.allclose(su2.collective(np.eye(2), 3), np.eye(8))
    assert np.allclose(su2.collective(SIGMA_X, 3) @ basis_state("000"), basis_state("111"))
    a = 0.45
    x_alpha = np.kron(np.kron(rot("x", a), rot("x", a)), rot("x", a))
    assert np.allclose(su2.collective(rot("x", a), 3), x_alpha)
    with pytest.raises(ValueError):
        su2.collective(SIGMA_X, 0)


def test_collective_unitary_type():
    w = su2.random_su2(np.random.default_rng(2))
    cu = su2.CollectiveUnitary(w, 4)
    assert cu.matrix().shape == (16, 16)
    with pytest.raises(ValueError):
        su2.CollectiveUnitary(1j * np.eye(2), 2)


@pytest.mark.parametrize(
    "n, pairs",
    [
        (3, [(1, 4), (2, 2)]),
        (4, [(1, 5), (3, 3), (2, 1)]),
        (5, [(1, 6), (4, 4), (5, 2)]),
        (1, [(1, 2)]),
    ],
)
def test_multiplicities_displayed(n, pairs):
    assert su2.multiplicities(n).pairs() == pairs


def test_multiplicities_dimension_count_and_positivity():
    for n in range(1, 21):
        dec = su2.multiplicities(n)
        assert sum(b.multiplicity * b.dim for b in dec.blocks) == 2**n
        assert all(b.multiplicity > 0 for b in dec.blocks)
        assert [b.dim for b in dec.blocks] == [n + 1 - 2 * j for j in range(n // 2 + 1)]


@pytest.mark.parametrize("bad", [0, 31, -2, 2.5])
def test_multiplicities_range(bad):
    with pytest.raises(ValueError):
        su2.multiplicities(bad)


def test_multiplicities_csv():
    assert su2.multiplicities(3).to_csv() == "n,j,r,dim\n3,0,1,4\n3,1,2,2\n"
    assert su2.multiplicities(4).blocks[-1].spin == 0


def test_lowering_examples():
    assert np.allclose(su2.collective_lowering(1) @ [1, 0], [0, 1])
    assert np.allclose(su2.collective_lowering(4) @ basis_state("1111"), 0)
    # S-(|100> - |010>)/sqrt2 = (|110> + |101> - |110> - |011>)/sqrt2
    expected = ket({"101": 1, "011": -1}) / math.sqrt(2)
    orig = basis3("original")
    assert np.allclose(su2.collective_lowering(3) @ orig["ea1"], expected, atol=1e-15)
    assert np.allclose(expected, orig["ea2"], atol=1e-15)


def _swap_matrix(n, i, j):
    """Permutation matrix exchanging qubits i and j, built bit by bit."""
    dim = 2**n
    p = np.zeros((dim, dim))
    for idx in range(dim):
        bits = list(format(idx, f"0{n}b"))
        bits[i - 1], bits[j - 1] = bits[j - 1], bits[i - 1]
        p[int("".join(bits), 2), idx] = 1
    return p


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 5))
def test_collective_permutation_invariance(seed, n):
    rng = np.random.default_rng(seed)
    w = su2.random_su2(rng)
    i, j = rng.choice(np.arange(1, n + 1), size=2, replace=False)
    p = _swap_matrix(n, i, j)
    cw = su2.collective(w, n)
    assert frob(p @ cw - cw @ p) < 1e-12


@pytest.mark.parametrize("variant", ["original", "redefined"])
def test_sum_sigma_x_equals_minus_x3_on_spin_half(variant):
    b = basis3(variant)
    sx_sum = su2.collective_sum(SIGMA_X, 3)
    x3 = su2.collective(SIGMA_X, 3)
    for label in ("ea1", "eb1", "ea2", "eb2"):
        assert frob(sx_sum @ b[label] + x3 @ b[label]) < 1e-12


def test_block_structure_identity_and_z():
    u = build_ue3("original").encoder
    layout = NS3_BLOCK_LAYOUT["original"]
    assert su2.verify_block_structure(u, np.eye(2), layout)
    g = 0.61
    blocks = su2.irrep_blocks(u, rot("z", g), layout)
    # rot(z, g)^{⊗3} is diagonal: |000> -> e^{3ig}, one flip -> e^{ig}, ...
    expected = np.diag(np.exp(1j * g * np.array([3, 1, -1, -3])))
    assert frob(blocks[0][0] - expected) < 1e-12
    a, b = blocks[1]
    assert frob(a - rot("z", g)) < 1e-12 and frob(b - rot("z", g)) < 1e-12


@pytest.mark.parametrize("variant", ["original", "redefined"])
def test_block_structure_random_w(variant):
    code = build_ue3(variant)
    rng = np.random.default_rng(11)
    for _ in range(20):
        w = su2.random_su2(rng)
        assert su2.verify_block_structure(code.encoder, w, code.block_layout())
        a, b = su2.irrep_blocks(code.encoder, w, code.block_layout())[1]
        assert frob(a - b) < 1e-12
        # the spin-1/2 copies carry W itself
        assert frob(a - w) < 1e-12


def test_block_structure_detects_wrong_layout():
    u = build_ue3("original").encoder
    w = su2.random_su2(np.random.default_rng(1))
    swapped = {0: [[3, 2, 6, 7]], 1: [[0, 5], [1, 4]]}
    assert not su2.verify_block_structure(u, w, swapped)
    # a generic unitary basis has no such structure
    q, _ = np.linalg.qr(np.random.default_rng(2).normal(size=(8, 8)))
    assert not su2.verify_block_structure(q, w, NS3_BLOCK_LAYOUT["original"])


@pytest.mark.parametrize(
    "layout",
    [
        {0: [[3, 2, 6, 7]], 1: [[0, 4]]},  # missing a copy
        {0: [[3, 2, 6]], 1: [[0, 4], [1, 5]]},  # short block
        {0: [[3, 2, 6, 6]], 1: [[0, 4], [1, 5]]},  # repeated column
        {2: [[3, 2, 6, 7]], 1: [[0, 4], [1, 5]]},  # unknown irrep
    ],
)
def test_block_structure_malformed_layout(layout):
    with pytest.raises(ValueError):
        su2.verify_block_structure(build_ue3("original").encoder, np.eye(2), layout)


def test_random_su2_is_special_unitary():
    rng = np.random.default_rng(0)
    for _ in range(50):
        w = su2.random_su2(rng)
        assert abs(np.linalg.det(w) - 1) < 1e-12
        assert frob(w.conj().T @ w - np.eye(2)) < 1e-12


def test_pauli_constants_hermitian():
    for s in (SIGMA_X, SIGMA_Y, SIGMA_Z):
        assert np.array_equal(s, s.conj().T)
