import itertools

import numpy as np
import pytest
from lp_fixtures import reference_bounds

from jointexo import classical
from jointexo.errors import ValidationError
from jointexo.lp import (
    ALL_CELLS,
    AssumptionSet,
    BoundsResult,
    CounterfactualIndex,
    ace_bounds,
    ace_objective,
    build_lp,
    decode_index,
    encode_index,
    observation_rows,
)
from jointexo.quantum import ObservedDistribution, born_distribution, random_scenario
from jointexo.simplex import Sense, Status

A = AssumptionSet

# regression values from the independent HiGHS program in lp_fixtures
BELL_BOUNDS = {
    A.JE_ONLY: (-0.14644660940672616, 0.8535533905932736),
    A.JE_STRATIFIED_ER: (0.13388347648318444, 0.5),
    A.JE_INDIVIDUAL_ER: (0.13388347648318466, 0.5),
}
SHORT = {A.JE_ONLY: "je", A.JE_STRATIFIED_ER: "strat", A.JE_INDIVIDUAL_ER: "indiv"}


def test_index_examples():
    assert encode_index(CounterfactualIndex(0, 0, 0, 0, 0, 0)) == 0
    assert encode_index(CounterfactualIndex(1, 1, 1, 1, 1, 1)) == 63
    assert encode_index(CounterfactualIndex(0, 0, 0, 1, 0, 1)) == 5


def test_index_bijection():
    assert [encode_index(decode_index(c)) for c in range(64)] == list(range(64))
    cells = [CounterfactualIndex(*bits) for bits in itertools.product((0, 1), repeat=6)]
    assert sorted(encode_index(c) for c in cells) == list(range(64))
    assert all(decode_index(encode_index(c)) == c for c in cells)


@pytest.mark.parametrize("bad", [-1, 64])
def test_index_range(bad):
    with pytest.raises(IndexError):
        decode_index(bad)


@pytest.mark.parametrize("assumptions,rows", [(A.JE_ONLY, 26), (A.JE_STRATIFIED_ER, 34), (A.JE_INDIVIDUAL_ER, 82)])
def test_row_counts(bell_obs, assumptions, rows):
    lp = build_lp(bell_obs, assumptions)
    assert lp.eq_matrix.shape == (rows, 64)
    assert len(lp.row_labels) == rows


def test_row_order(bell_obs):
    labels = build_lp(bell_obs, A.JE_INDIVIDUAL_ER).row_labels
    assert all(label.startswith("je[") for label in labels[:16])
    assert all(label.startswith("ser[") for label in labels[16:24])
    assert labels[24:26] == ["norm[z=0]", "norm[z=1]"]
    assert all(label.startswith("obs[") for label in labels[26:34])
    assert all(label.startswith("ier[") for label in labels[34:])


def test_objective_coefficients():
    c = ace_objective()
    for col, cell in enumerate(ALL_CELLS):
        expected = 0 if cell.z == 1 else (cell.y10 == 1) - (cell.y00 == 1)
        assert c[col] == expected
    assert np.count_nonzero(c) == 16


def test_observation_rows_follow_consistency(bell_obs):
    rows, rhs = observation_rows(bell_obs)
    # z=0,x=1 reveals Y(1,0); z=1,x=0 reveals Y(0,1)
    r = rows[2]  # (z=0, x=1, y=0)
    for col, cell in enumerate(ALL_CELLS):
        assert r[col] == float(cell.z == 0 and cell.x == 1 and cell.y10 == 0)
    r = rows[5]  # (z=1, x=0, y=1)
    for col, cell in enumerate(ALL_CELLS):
        assert r[col] == float(cell.z == 1 and cell.x == 0 and cell.y01 == 1)
    assert np.max(np.abs(rhs - bell_obs.p.reshape(-1))) <= 1e-15


def test_individual_er_zero_columns(bell_obs):
    lp = build_lp(bell_obs, A.JE_INDIVIDUAL_ER)
    zero_rows = lp.eq_matrix[34:]
    cols = sorted(int(np.argmax(r)) for r in zero_rows)
    expected = [c for c, k in enumerate(ALL_CELLS) if k.y00 != k.y01 or k.y10 != k.y11]
    assert cols == expected and len(cols) == 48


def test_build_lp_deterministic(bell_obs):
    a, b = build_lp(bell_obs, A.JE_INDIVIDUAL_ER, Sense.MAX), build_lp(bell_obs, A.JE_INDIVIDUAL_ER, Sense.MAX)
    assert np.array_equal(a.eq_matrix, b.eq_matrix) and np.array_equal(a.eq_rhs, b.eq_rhs)
    assert np.array_equal(a.objective, b.objective) and a.row_labels == b.row_labels


def test_build_lp_rejects_non_distribution():
    with pytest.raises(ValidationError):
        build_lp(np.full((2, 2, 2), 0.25), A.JE_ONLY)


def test_bell_lower_bound(bell_obs):
    assert abs(ace_bounds(bell_obs, A.JE_STRATIFIED_ER).lower - 0.1339) <= 5e-4


@pytest.mark.parametrize("assumptions", list(A))
def test_bell_regression_bounds(bell_obs, assumptions):
    r = ace_bounds(bell_obs, assumptions)
    lo, hi = BELL_BOUNDS[assumptions]
    assert r.optimal
    assert abs(r.lower - lo) <= 1e-9 and abs(r.upper - hi) <= 1e-9


def _brute_force_classical_aces(p):
    """ACE of each deterministic response type whose predictions carry mass in ``p``.

    A distribution with a point mass per arm is only reproduced by mixtures
    of types that agree with it, so the admissible ACE set is exact.
    """
    aces = set()
    for f, g in itertools.product(range(4), repeat=2):
        ok = all(p[z, classical.f_response(f, z), classical.g_response(g, classical.f_response(f, z))] == 1
                 for z in (0, 1))
        if ok:
            aces.add(classical.g_response(g, 1) - classical.g_response(g, 0))
    return aces


def test_perfect_compliance():
    p = np.zeros((2, 2, 2))
    p[0, 0, 0] = p[1, 1, 1] = 1.0
    assert _brute_force_classical_aces(p) == {1}
    r = ace_bounds(ObservedDistribution(p), A.JE_INDIVIDUAL_ER)
    assert r.lower == pytest.approx(1.0, abs=1e-9) and r.upper == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("assumptions", list(A))
def test_uniform_distribution_symmetric(assumptions):
    obs = ObservedDistribution(np.full((2, 2, 2), 0.25))
    r = ace_bounds(obs, assumptions)
    assert abs(r.lower + r.upper) <= 1e-9
    ref_lo, ref_hi, *_ = reference_bounds(obs.p, SHORT[assumptions])
    assert abs(r.lower - ref_lo) <= 1e-8 and abs(r.upper - ref_hi) <= 1e-8
    assert r.upper == pytest.approx(0.5, abs=1e-9)


@pytest.mark.parametrize("seed", range(20))
@pytest.mark.parametrize("assumptions", list(A))
def test_matches_independent_program_on_quantum_data(seed, assumptions):
    obs = born_distribution(random_scenario(seed))
    r = ace_bounds(obs, assumptions)
    lo, hi, lo_status, hi_status = reference_bounds(obs.p, SHORT[assumptions])
    assert (r.lower_status is Status.OPTIMAL) == (lo_status == 0)
    if r.optimal:
        assert abs(r.lower - lo) <= 1e-7 and abs(r.upper - hi) <= 1e-7


def test_infeasible_distribution_reports_status():
    # X ignores Z yet Y flips with Z: no potential-outcome model with stratified ER reproduces it
    p = np.zeros((2, 2, 2))
    p[0, 0, 0] = p[1, 0, 1] = 1.0
    r = ace_bounds(ObservedDistribution(p), A.JE_STRATIFIED_ER)
    assert r.lower_status is Status.INFEASIBLE and r.upper_status is Status.INFEASIBLE
    assert r.lower is None and r.lower_witness is None
    assert reference_bounds(p, "strat")[2] == 2
    # joint exogeneity alone has no exclusion restriction and stays feasible
    assert ace_bounds(ObservedDistribution(p), A.JE_ONLY).optimal


def test_bounds_json_round_trip(bell_obs):
    import json

    r = ace_bounds(bell_obs, A.JE_STRATIFIED_ER)
    doc = json.loads(json.dumps(r.to_json()))
    assert set(doc) == {"assumptions", "lower", "upper", "lowerStatus", "upperStatus", "rows",
                        "witnessLower", "witnessUpper"}
    assert doc["assumptions"] == "JE_STRATIFIED_ER" and doc["rows"] == 34
    back = BoundsResult.from_json(doc)
    assert back.lower == r.lower and np.array_equal(back.upper_witness, r.upper_witness)


# -- properties over the shared classical models ----------------------------

def test_proposition1_equivalence(proposition_bounds):
    assert len(proposition_bounds) == 200
    for _, _, b in proposition_bounds:
        s, i = b[A.JE_STRATIFIED_ER], b[A.JE_INDIVIDUAL_ER]
        assert (s.lower_status, s.upper_status) == (i.lower_status, i.upper_status)
        assert abs(s.lower - i.lower) <= 1e-7 and abs(s.upper - i.upper) <= 1e-7


def test_assumption_monotonicity(proposition_bounds):
    for _, _, b in proposition_bounds:
        je, s, i = b[A.JE_ONLY], b[A.JE_STRATIFIED_ER], b[A.JE_INDIVIDUAL_ER]
        assert je.lower <= s.lower + 1e-9 and s.upper <= je.upper + 1e-9
        assert s.lower <= i.lower + 1e-9 and i.upper <= s.upper + 1e-9


def test_witnesses(model_bounds):
    for _, obs, b in model_bounds:
        for a, r in b.items():
            assert r.optimal and r.lower <= r.upper + 1e-9
            lp = build_lp(obs, a)
            rows, rhs = observation_rows(obs)
            for w, value in ((r.lower_witness, r.lower), (r.upper_witness, r.upper)):
                assert np.max(np.abs(lp.eq_matrix @ w - lp.eq_rhs)) <= 1e-8
                assert np.max(np.abs(rows @ w - obs.p.reshape(-1))) <= 1e-8
                assert -1 - 1e-9 <= ace_objective() @ w <= 1 + 1e-9
                assert abs(ace_objective() @ w - value) <= 1e-9
