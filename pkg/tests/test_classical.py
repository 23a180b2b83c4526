import itertools
import json

import numpy as np
import pytest

from jointexo import AssumptionSet, ace_bounds
from jointexo.classical import (
    ResponseFunctionModel,
    SampledDataset,
    classical_observed,
    classical_true_ace,
    f_response,
    g_response,
    random_model,
    sample_dataset,
)
from jointexo.errors import ValidationError

X_EQ_Z, X_0 = 2, 0
Y_0, Y_1, Y_EQ_X = 0, 1, 2
UNIFORM = ResponseFunctionModel(np.full(16, 1 / 16))


def test_point_mass_complier():
    p = classical_observed(ResponseFunctionModel.point_mass(X_EQ_Z, Y_EQ_X)).p
    for z in (0, 1):
        assert p[z, z, z] == 1
    assert p.sum() == 2


def test_point_mass_constant():
    p = classical_observed(ResponseFunctionModel.point_mass(X_0, Y_1)).p
    assert p[0, 0, 1] == 1 and p[1, 0, 1] == 1 and p.sum() == 2


def test_uniform_observed_by_enumeration():
    # each (z, x, y) cell collects exactly 4 of the 16 types
    counts = np.zeros((2, 2, 2))
    for z, f, g in itertools.product((0, 1), range(4), range(4)):
        x = f_response(f, z)
        counts[z, x, g_response(g, x)] += 1
    assert np.all(counts == 4)
    assert np.allclose(classical_observed(UNIFORM).p, 0.25, atol=1e-15)


def test_true_ace_examples():
    for f in range(4):
        assert classical_true_ace(ResponseFunctionModel.point_mass(f, Y_EQ_X)) == 1.0
        assert classical_true_ace(ResponseFunctionModel.point_mass(f, Y_1)) == 0.0
    assert classical_true_ace(UNIFORM) == pytest.approx(0.0, abs=1e-15)


def test_true_ace_against_type_enumeration():
    m = random_model(5)
    brute = sum(m.weight(f, g) * (g_response(g, 1) - g_response(g, 0)) for f in range(4) for g in range(4))
    assert classical_true_ace(m) == pytest.approx(brute, abs=1e-15)


def test_random_model_deterministic():
    assert np.array_equal(random_model(42).weights, random_model(42).weights)
    assert not np.array_equal(random_model(42).weights, random_model(43).weights)


def test_random_model_normalized():
    for seed in range(1000):
        w = random_model(seed).weights
        assert abs(w.sum() - 1) <= 1e-12 and w.min() >= 0


def test_random_model_uniform_on_simplex():
    # each coordinate of a flat Dirichlet(1,...,1) has mean 1/16 and sd ~0.06
    mean = np.mean([random_model(seed).weights for seed in range(10_000)], axis=0)
    assert np.max(np.abs(mean - 1 / 16)) <= 0.005


def test_model_validation():
    with pytest.raises(ValidationError):
        ResponseFunctionModel(np.full(16, 0.1))
    with pytest.raises(ValidationError):
        ResponseFunctionModel(np.full(15, 1 / 15))
    w = np.full(16, 1 / 16)
    w[0], w[1] = -1 / 16, 3 / 16
    with pytest.raises(ValidationError):
        ResponseFunctionModel(w)


def test_observed_invariants_exact():
    for seed in range(200):
        p = classical_observed(random_model(seed)).p
        assert p.min() >= 0
        assert np.max(np.abs(p.sum(axis=(1, 2)) - 1)) <= 1e-12


# -- sampling ---------------------------------------------------------------

def test_single_sample():
    d = sample_dataset(random_model(1), 1, seed=9)
    assert np.count_nonzero(d.counts) == 1 and d.n == 1


def test_point_mass_sampling_support():
    d = sample_dataset(ResponseFunctionModel.point_mass(X_EQ_Z, Y_EQ_X), 1000, seed=3)
    support = {tuple(i) for i in np.argwhere(d.counts)}
    assert support <= {(0, 0, 0), (1, 1, 1)}
    assert d.counts.sum() == 1000


def test_sampling_deterministic():
    a = sample_dataset(random_model(2), 500, seed=11)
    b = sample_dataset(random_model(2), 500, seed=11)
    assert np.array_equal(a.counts, b.counts)


def test_uniform_sampling_concentrates():
    # sd of an empirical cell is ~sqrt(.25*.75/5e5) ~ 6e-4, so 0.003 is a ~5-6 sigma band
    p = sample_dataset(UNIFORM, 1_000_000, seed=2026).empirical().p
    assert np.max(np.abs(p - 0.25)) <= 0.003


def test_empirical_requires_both_arms():
    d = SampledDataset(np.array([[[1, 0], [0, 0]], [[0, 0], [0, 0]]]), 1, 0)
    with pytest.raises(ValidationError):
        d.empirical()


@pytest.mark.parametrize("seed", range(20))
def test_empirical_bounds_converge(seed):
    m = random_model(seed)
    exact = classical_observed(m)
    emp = sample_dataset(m, 1_000_000, seed=seed).empirical()
    for a in AssumptionSet:
        e, x = ace_bounds(emp, a), ace_bounds(exact, a)
        if e.optimal and x.optimal:
            assert abs(e.lower - x.lower) <= 0.01 and abs(e.upper - x.upper) <= 0.01
        else:
            # finite samples can leave the feasible set only when the exact
            # distribution sits on its boundary
            assert a is not AssumptionSet.JE_ONLY


def test_model_and_dataset_json():
    m = random_model(8)
    assert np.array_equal(ResponseFunctionModel.from_json(json.loads(json.dumps(m.to_json()))).weights, m.weights)
    d = sample_dataset(m, 100, seed=4)
    doc = json.loads(json.dumps(d.to_json()))
    assert set(doc) == {"n", "seed", "counts"}
    back = SampledDataset.from_json(doc)
    assert np.array_equal(back.counts, d.counts) and back.seed == 4


# -- containment ------------------------------------------------------------

def test_containment(model_bounds):
    assert len(model_bounds) == 500
    for m, _, bounds in model_bounds:
        ace = classical_true_ace(m)
        for r in bounds.values():
            assert r.contains(ace, slack=1e-7)
