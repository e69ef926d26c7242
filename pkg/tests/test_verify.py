import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from collective_qec import channels, codes, verify
from collective_qec.su2 import collective, rot
from collective_qec.tensor import dagger, frob, kron_all, projector, basis_state
from collective_qec.verify import random_density, random_probs

ZERO = np.diag([1.0, 0.0])

# Entropy gain of |0><0| mixed half-and-half with its e^{i(pi/4)sigma_x} image.
# The two pure states overlap with |<a|b>|^2 = 1/2, so the mixture has
# eigenvalues (1 +- 1/sqrt2)/2; value computed with mpmath at 30 digits.
ENTROPY_GAIN_QUARTER_PI = 0.60087603669285610084


def _binary_entropy(x):
    return -(x * math.log2(x) + (1 - x) * math.log2(1 - x))


def test_entropy_oracle_closed_form():
    lam = (1 + 1 / math.sqrt(2)) / 2
    assert _binary_entropy(lam) == pytest.approx(ENTROPY_GAIN_QUARTER_PI, abs=1e-15)


def test_theorem1_identity_channel(rand_rho):
    assert verify.check_theorem1((1, 0, 0, 0), 0.2, 0.3, 0.4, rand_rho(2), rand_rho(2)) < 1e-12


def test_theorem1_half_pi_flips_ancilla(rand_rho):
    rhs = verify.theorem1_rhs((0, 1, 0, 0), math.pi / 2, 0, 0, ZERO, ZERO)
    # e^{i(pi/2)sigma_x} = i sigma_x maps |0><0| to |1><1|
    assert frob(rhs - kron_all([np.diag([0, 1]), ZERO, ZERO])) < 1e-15
    data = rand_rho(2)
    assert verify.check_theorem1((0, 1, 0, 0), math.pi / 2, 0, 0, ZERO, data) < 1e-10


@pytest.mark.parametrize("variant", codes.VARIANTS)
def test_theorem1_random(variant):
    rng = np.random.default_rng(31)
    for total in (1.0, 0.8):
        for _ in range(20):
            p = random_probs(rng, total)
            angles = rng.uniform(-math.pi, math.pi, size=3)
            r = verify.check_theorem1(p, *angles, random_density(rng, 2), random_density(rng, 2), variant)
            assert r < 1e-10


def _residual_for(ch, rho_a, rho_hat, rhs):
    u = codes.build_ue3().encoder
    enc = u @ kron_all([rho_a, ZERO, rho_hat]) @ dagger(u)
    return frob(dagger(u) @ ch(enc) @ u - rhs)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.permutations([1, 2, 3]))
def test_theorem1_term_order_immaterial(seed, order):
    rng = np.random.default_rng(seed)
    p = random_probs(rng)
    angles = rng.uniform(-math.pi, math.pi, size=3)
    rho_a, rho_hat = random_density(rng, 2), random_density(rng, 2)
    ch = channels.theorem1_channel(p, *angles)
    shuffled = channels.MixedUnitaryChannel(3, (ch.terms[0],) + tuple(ch.terms[i] for i in order))
    rhs = verify.theorem1_rhs(p, *angles, rho_a, rho_hat)
    base = _residual_for(ch, rho_a, rho_hat, rhs)
    assert base < 1e-10
    assert abs(_residual_for(shuffled, rho_a, rho_hat, rhs) - base) < 1e-12


def test_dfs4_examples():
    assert verify.dfs4_invariance_residual(np.eye(2), ZERO) == 0.0
    iy = rot("y", math.pi / 2)
    assert verify.dfs4_invariance_residual(iy, ZERO) < 1e-10
    assert verify.dfs4_invariance_residual(iy, np.eye(2) / 2) < 1e-10


def test_dfs4_residual_is_float_noise():
    report = verify.check_dfs4(100, 3)
    assert report.passed and report.max_residual < 1e-12


def test_ns5_x_rotation_example():
    code = codes.build_ue5()
    data = projector(basis_state("01"))
    noise = collective(rot("x", 0.9), 5)
    out = codes.decode(code, noise @ codes.encode(code, ZERO, data) @ dagger(noise))
    assert frob(out.data - data) < 1e-10


def test_entropy_examples(rand_rho):
    assert verify.entropy_change((1, 0, 0, 0), 1, 2, 3, rand_rho(2), rand_rho(2)) == pytest.approx(0, abs=1e-9)
    rng = np.random.default_rng(2)
    mixed = np.eye(2) / 2
    d = verify.entropy_change([0.25] * 4, *rng.uniform(-3, 3, size=3), mixed, rand_rho(2))
    assert abs(d) < 1e-9


@pytest.mark.parametrize("data_pure", [True, False])
def test_entropy_strictly_increases_for_pure_gauge(rand_rho, data_pure):
    d = verify.entropy_change((0.5, 0.5, 0, 0), math.pi / 4, 0, 0, ZERO, rand_rho(2, pure=data_pure))
    assert d == pytest.approx(ENTROPY_GAIN_QUARTER_PI, abs=1e-9)


def test_rate_table_rows():
    rows = {r.n: r for r in verify.code_rate_table(21)}
    assert (rows[3].m, rows[3].dim_count, rows[3].k) == (1, 2, 1)
    assert (rows[5].m, rows[5].dim_count, rows[5].k) == (2, 5, 2)
    assert (rows[9].m, rows[9].dim_count, rows[9].k) == (4, math.comb(9, 4) - math.comb(9, 3), 5)
    assert [n for n, r in rows.items() if r.exceeds_m][0] == 9
    assert all(rows[n].exceeds_m for n in range(9, 22, 2))
    with pytest.raises(ValueError):
        verify.code_rate_table(41)


@pytest.mark.parametrize("name", sorted(verify.SUITES))
def test_every_suite_passes(name):
    report = verify.run_suite(name, trials=20, seed=7)
    assert report.passed, report.summary()
    assert report.max_residual < report.tolerance


@pytest.mark.parametrize("name", ["theorem1", "ns5", "entropy"])
def test_reports_are_byte_identical(name):
    a = verify.run_suite(name, trials=10, seed=11).dumps()
    b = verify.run_suite(name, trials=10, seed=11).dumps()
    assert a == b
    assert verify.run_suite(name, trials=10, seed=12).dumps() != a


def test_trials_are_schedule_independent():
    long = verify.run_suite("theorem1", trials=10, seed=5).details
    short = verify.run_suite("theorem1", trials=4, seed=5).details
    assert long[:4] == short


def test_report_schema():
    obj = json.loads(verify.run_suite("dfs4", trials=3, seed=1).dumps())
    assert {"suite", "seed", "trials", "max_residual", "pass", "details"} <= set(obj)
    assert obj["pass"] is True and len(obj["details"]) == 3


def test_report_fails_above_tolerance():
    report = verify._report("x", 0, 1, 1e-10, [{"residual": 1e-9}])
    assert not report.passed
    assert report.summary().startswith("FAIL x")


def test_unknown_suite():
    with pytest.raises(ValueError):
        verify.run_suite("nope")


def test_random_density_is_valid():
    rng = np.random.default_rng(0)
    rho = random_density(rng, 4)
    assert abs(np.trace(rho) - 1) < 1e-12
    assert np.linalg.eigvalsh(rho).min() > -1e-12
    pure = random_density(rng, 2, pure=True)
    assert abs(np.trace(pure @ pure) - 1) < 1e-12
