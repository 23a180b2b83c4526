import time
from collections import defaultdict

import pytest

from jointexo import bell_preset, born_distribution, random_model


@pytest.fixture(scope="session")
def bell():
    return bell_preset()


@pytest.fixture(scope="session")
def bell_obs(bell):
    return born_distribution(bell)


# wall time spent bounding the Proposition-1 models, per assumption set
SOLVE_SECONDS: dict = defaultdict(float)

CONTAINMENT_SEEDS = list(range(1000, 1500))
PROPOSITION_SEEDS = CONTAINMENT_SEEDS[:200]


@pytest.fixture(scope="session")
def model_seeds():
    """Seeds for the 500-model containment check; the first 200 also serve the
    Proposition-1 and monotonicity checks."""
    return CONTAINMENT_SEEDS


@pytest.fixture(scope="session")
def random_models(model_seeds):
    return [random_model(s) for s in model_seeds]


@pytest.fixture(scope="session")
def model_bounds(random_models):
    """``[(model, observed, {assumptions: BoundsResult})]`` for every shared seed."""
    from jointexo import AssumptionSet, ace_bounds, classical_observed

    out = []
    for k, m in enumerate(random_models):
        obs = classical_observed(m)
        bounds = {}
        for a in AssumptionSet:
            start = time.perf_counter()
            bounds[a] = ace_bounds(obs, a)
            if k < len(PROPOSITION_SEEDS):
                SOLVE_SECONDS[a] += time.perf_counter() - start
        out.append((m, obs, bounds))
    return out


@pytest.fixture(scope="session")
def proposition_bounds(model_bounds):
    return model_bounds[: len(PROPOSITION_SEEDS)]


# -- acceptance summary ------------------------------------------------------

_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        number, title = marker.args
        _CRITERIA[number] = (title, "PASS" if rep.passed else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, verdict = _CRITERIA[number]
        terminalreporter.write_line(f"{verdict}  criterion {number}: {title}")
