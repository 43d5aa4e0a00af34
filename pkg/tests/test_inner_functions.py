import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hankelspec.errors import AtomSingularity, GridHitsAtom, InvalidInnerFunction, OutOfDisk
from hankelspec.inner_functions import InnerFunction, boundary_samples, evaluate, random_inner


def test_identity_at_half():
    assert evaluate(InnerFunction.identity(), 0.5) == pytest.approx(0.5, abs=1e-16)


def test_vanishes_at_zero():
    a = 0.3 - 0.4j
    assert abs(evaluate(InnerFunction(zeros=(a,)), a)) == 0.0


def test_atom_at_origin_gives_exp_minus_mass():
    theta = InnerFunction(atoms=((0.0, 1.0),))
    assert evaluate(theta, 0.0) == pytest.approx(0.3678794411714423, abs=1e-15)


def test_atom_singularity():
    theta = InnerFunction(atoms=((math.pi / 2, 0.5),))
    with pytest.raises(AtomSingularity):
        evaluate(theta, 1j)


def test_out_of_disk():
    with pytest.raises(OutOfDisk):
        evaluate(InnerFunction.identity(), 1.1)


def test_boundary_samples_identity():
    assert np.allclose(boundary_samples(InnerFunction.identity(), 4), [1, 1j, -1, -1j], atol=1e-15)


def test_boundary_samples_constant_phase():
    assert np.allclose(boundary_samples(InnerFunction.constant(math.pi), 6), -1, atol=1e-15)


def test_boundary_samples_unimodular():
    vals = boundary_samples(InnerFunction(zeros=(0.5,)), 8)
    assert vals.shape == (8,)
    assert np.max(np.abs(np.abs(vals) - 1)) <= 1e-10


def test_grid_hits_atom():
    theta = InnerFunction(atoms=((math.pi / 2, 1.0),))
    with pytest.raises(GridHitsAtom):
        boundary_samples(theta, 8)
    boundary_samples(theta, 8, rotation=math.pi / 8)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"zeros": (1.0,)},
        {"zeros": (0.5 + 0.9j,)},
        {"atoms": ((0.0, 0.0),)},
        {"atoms": ((0.0, -1.0),)},
        {"atoms": ((0.0, 1.0), (2 * math.pi, 1.0))},
        {"phase": float("nan")},
    ],
)
def test_invalid(kwargs):
    with pytest.raises(InvalidInnerFunction):
        InnerFunction(**kwargs)


def test_random_inner_degree_zero_is_unimodular_constant():
    theta = random_inner(0, False, 3)
    assert theta.degree == 0 and not theta.atoms
    assert abs(abs(theta(0.3j)) - 1) < 1e-15


def test_random_inner_deterministic():
    assert random_inner(3, True, 11) == random_inner(3, True, 11)


def test_json_roundtrip():
    theta = InnerFunction(0.7, (0.1 + 0.2j, -0.5), ((1.0, 0.3),))
    assert InnerFunction.from_json(theta.to_json()) == theta


inner = st.builds(
    lambda seed, deg, sing: random_inner(deg, sing, seed),
    st.integers(0, 2**32 - 1),
    st.integers(0, 3),
    st.booleans(),
)


@settings(max_examples=60, deadline=None)
@given(theta=inner, seed=st.integers(0, 2**32 - 1))
def test_random_inner_invariants(theta, seed):
    assert theta.degree <= 3 and len(theta.atoms) <= 1
    assert all(abs(a) <= 0.9 for a in theta.zeros)
    assert all(0.1 <= m <= 2.0 for _, m in theta.atoms)
    rng = np.random.default_rng(seed)
    z = 0.99 * np.sqrt(rng.uniform(size=1000)) * np.exp(2j * np.pi * rng.uniform(size=1000))
    assert np.max(np.abs(theta(z))) <= 1 + 1e-12
    t = rng.uniform(0, 2 * np.pi, 200)
    w = np.exp(1j * t)
    if theta.atoms:
        w = w[np.abs(w - theta.atom_points[0]) > 1e-3]
    assert np.max(np.abs(np.abs(theta(w)) - 1)) <= 1e-10


@settings(max_examples=40, deadline=None)
@given(a=inner, b=inner, seed=st.integers(0, 2**32 - 1))
def test_multiplicative(a, b, seed):
    rng = np.random.default_rng(seed)
    z = 0.95 * np.sqrt(rng.uniform(size=100)) * np.exp(2j * np.pi * rng.uniform(size=100))
    assert np.max(np.abs((a * b)(z) - a(z) * b(z))) <= 1e-12


def test_product_merges_atoms():
    a = InnerFunction(atoms=((0.5, 1.0),))
    prod = a * InnerFunction(atoms=((0.5, 0.25),))
    assert prod.atoms == ((0.5, 1.25),)
