import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hankelspec import dense_linalg
from hankelspec.cauchy_kernel import (
    InterlacedSpectrum,
    apply_explicit_inverse,
    build_C,
    build_F,
    build_T,
    build_V,
    certify_invertibility,
    explicit_inverse,
    random_spectrum,
    solve_C,
    weights,
)
from hankelspec.errors import DegenerateSpectrum, InvalidSpectrum, OutOfDisk

spectra = st.builds(
    lambda n, seed: random_spectrum(n, np.random.default_rng(seed)),
    st.integers(1, 12),
    st.integers(0, 2**32 - 1),
)


def test_build_T_trivial():
    assert np.array_equal(build_T(InterlacedSpectrum((1.0,), (0.0,))), [[1.0]])


def test_build_T_example(spec_31):
    expected = [[0.2, 1 / 8.75], [-1 / 3, 4 / 3]]
    assert np.allclose(build_T(spec_31), expected, atol=1e-15)


def test_weights_example(spec_31):
    w = weights(spec_31)
    assert np.allclose(w.tau_sq, [5.46875, 0.28125], rtol=1e-14)
    assert np.allclose(w.kappa_sq, [4.0, 1.75], rtol=1e-14)
    assert np.allclose(build_T(spec_31).T @ w.tau_sq, 1.0, atol=1e-14)


def test_weights_trivial():
    w = weights(InterlacedSpectrum((1.0,), (0.0,)))
    assert w.tau_sq.tolist() == [1.0] and w.kappa_sq.tolist() == [1.0]


def test_partial_fractions_at_poles(spec_31):
    # A(s_j^2) = 0, so 1 = sum_k kappa_k^2 / (s_j^2 - s~_k^2)
    w = weights(spec_31)
    assert np.allclose(build_T(spec_31) @ w.kappa_sq, 1.0, atol=1e-14)


def test_log_space_agrees_with_direct():
    spec = random_spectrum(12, np.random.default_rng(5))
    w = weights(spec)
    s2, t2 = spec.s_arr**2, spec.s_tilde_arr**2
    direct = [np.prod(s2[j] - t2) / np.prod(s2[j] - np.delete(s2, j)) for j in range(12)]
    assert np.allclose(w.tau_sq, direct, rtol=1e-12)


def test_weights_underflow():
    levels = 2e-9 * np.arange(80, 0, -1)
    spec = InterlacedSpectrum(tuple(levels[0::2]), tuple(levels[1::2]))
    with pytest.raises(DegenerateSpectrum):
        weights(spec)


@pytest.mark.parametrize(
    "s, st_",
    [((1.0,), (1.0,)), ((1.0, 2.0), (0.5, 0.1)), ((2.0,), (-0.1,)), ((), ()), ((1.0,), (0.5, 0.1))],
)
def test_invalid_spectrum(s, st_):
    with pytest.raises(InvalidSpectrum):
        InterlacedSpectrum(s, st_)


def test_explicit_inverse_examples(spec_31, rng):
    w = weights(spec_31)
    T = build_T(spec_31)
    assert np.allclose(apply_explicit_inverse(spec_31, w, T @ np.ones(2)), 1.0, atol=1e-14)
    trivial = InterlacedSpectrum((1.0,), (0.0,))
    assert np.allclose(apply_explicit_inverse(trivial, weights(trivial), [5.0]), [5.0])
    spec = random_spectrum(4, rng)
    y = rng.normal(size=4) + 1j * rng.normal(size=4)
    assert np.allclose(apply_explicit_inverse(spec, weights(spec), y), dense_linalg.lu_solve(build_T(spec), y), rtol=1e-10)


def test_V_examples(spec_31):
    assert np.allclose(build_V(InterlacedSpectrum((1.0,), (0.0,)), weights(InterlacedSpectrum((1.0,), (0.0,)))), [[1.0]])
    w = weights(spec_31)
    V = build_V(spec_31, w)
    assert np.max(np.abs(V.T @ V - np.eye(2))) <= 1e-12
    lhs = V.T @ np.diag(spec_31.s_arr**2) @ V
    rhs = np.diag(spec_31.s_tilde_arr**2) + np.outer(w.kappa, w.kappa)
    assert np.max(np.abs(lhs - rhs)) <= 1e-10


@settings(max_examples=60, deadline=None)
@given(spec=spectra)
def test_cauchy_invariants(spec):
    w = weights(spec)
    T = build_T(spec)
    n = spec.n
    assert np.all(w.tau_sq > 0) and np.all(w.kappa_sq > 0)
    assert np.max(np.abs(T @ explicit_inverse(spec, w) - np.eye(n))) <= 1e-9
    assert np.max(np.abs(T.T @ w.tau_sq - 1)) <= 1e-10
    V = build_V(spec, w)
    assert np.max(np.abs(V.T @ V - np.eye(n))) <= 1e-10
    comm = (spec.s_arr**2)[:, None] * T - T * (spec.s_tilde_arr**2)[None, :]
    assert np.max(np.abs(comm - 1)) <= 1e-11
    contraction = (1 / spec.s_arr)[:, None] * V * spec.s_tilde_arr[None, :]
    assert np.linalg.norm(contraction, 2) <= 1 + 1e-10
    # sign structure
    assert np.array_equal(T > 0, spec.s_arr[:, None] > spec.s_tilde_arr[None, :])


@settings(max_examples=30, deadline=None)
@given(spec=spectra, seed=st.integers(0, 2**32 - 1))
def test_partial_fractions(spec, seed):
    w = weights(spec)
    s2, t2 = spec.s_arr**2, spec.s_tilde_arr**2
    z = np.random.default_rng(seed).uniform(-1, 2 * s2[0] + 1, 100)
    z = z[np.min(np.abs(z[:, None] - np.concatenate([s2, t2])[None, :]), axis=1) > 1e-3]
    A = np.prod(z[:, None] - s2, axis=1)
    B = np.prod(z[:, None] - t2, axis=1)
    ab = 1 - np.sum(w.kappa_sq / (z[:, None] - t2), axis=1)
    ba = 1 + np.sum(w.tau_sq / (z[:, None] - s2), axis=1)
    assert np.max(np.abs(ab - A / B) / np.maximum(np.abs(A / B), 1)) <= 1e-9
    assert np.max(np.abs(ba - B / A) / np.maximum(np.abs(B / A), 1)) <= 1e-9


def test_scaling_homogeneity(spec_31):
    w, w2 = weights(spec_31), weights(spec_31.scaled(2.0))
    assert np.allclose(w2.tau_sq, 4 * w.tau_sq) and np.allclose(w2.kappa_sq, 4 * w.kappa_sq)


def test_build_C_classical(spec_31):
    C = build_C(spec_31, 1.0, np.ones(2), np.ones(2))
    assert np.allclose(C, 1 / (spec_31.s_arr[:, None] + spec_31.s_tilde_arr[None, :]), atol=1e-15)


def test_build_C_at_origin(spec_31, rng):
    zeta = np.exp(1j * rng.uniform(0, 6, 2))
    assert np.allclose(build_C(spec_31, 0.0, zeta, zeta), spec_31.s_arr[:, None] * build_T(spec_31))


def test_build_C_trivial(rng):
    spec = InterlacedSpectrum((1.0,), (0.0,))
    assert np.allclose(build_C(spec, 0.3 + 0.2j, [1j], [-1]), [[1.0]])


def test_build_C_decomposition(spec_31, rng):
    z = 0.7 * np.exp(0.4j)
    zeta, zt = np.exp(1j * rng.uniform(0, 6, 2)), 0.5 * np.exp(1j * rng.uniform(0, 6, 2))
    T = build_T(spec_31)
    expected = spec_31.s_arr[:, None] * T - z * np.diag(zeta) @ T @ np.diag(spec_31.s_tilde_arr * zt)
    assert np.max(np.abs(build_C(spec_31, z, zeta, zt) - expected)) <= 1e-12


def test_build_C_out_of_disk(spec_31):
    with pytest.raises(OutOfDisk):
        build_C(spec_31, 1.01, np.ones(2), np.ones(2))


def test_solve_C(spec_31, rng):
    trivial = InterlacedSpectrum((1.0,), (0.0,))
    assert np.allclose(solve_C(trivial, 0.5, [1], [1], [1.0]), [1.0])
    z = np.exp(1j * rng.uniform(0, 6))
    zeta, zt = np.exp(1j * rng.uniform(0, 6, 2)), np.exp(1j * rng.uniform(0, 6, 2))
    rhs = rng.normal(size=2) + 1j * rng.normal(size=2)
    x = solve_C(spec_31, z, zeta, zt, rhs)
    assert np.max(np.abs(build_C(spec_31, z, zeta, zt) @ x - rhs)) <= 1e-10 * np.max(np.abs(rhs))
    h = solve_C(spec_31, z, zeta, zt, np.ones(2), transposed=True)
    assert np.sum(zeta * h) == pytest.approx(np.sum(solve_C(spec_31, z, zeta, zt, zeta)), abs=1e-12)


def test_certify_scalar_bound():
    spec = InterlacedSpectrum((2.0,), (1.5,))
    rep = certify_invertibility(spec, 2000, 0)
    assert rep.min_sigma >= (2.0 - 1.5) / (4 - 2.25) - 1e-15
    assert rep.samples == 4000


def test_certify_example(spec_31):
    rep = certify_invertibility(spec_31, 10_000, 1)
    assert rep.min_sigma > 0 and rep.n == 2
    assert set(rep.to_json()) == {"n", "min_sigma", "samples", "worst_point"}


def test_certify_rejects_zero_samples(spec_31):
    with pytest.raises(ValueError):
        certify_invertibility(spec_31, 0)


def test_F_example():
    a = np.array([2 * np.exp(0.3j), np.exp(1.1j)])
    b = np.array([1.5 * np.exp(0.7j), 0.5])
    assert abs(np.linalg.det(build_F(a, b))) > 0


def test_F_real_reduces_to_cauchy():
    a, b = np.array([3.0, 1.0]), np.array([2.0, 0.5])
    assert np.allclose(build_F(a, b), 1 / (a[:, None] + b[None, :]))
