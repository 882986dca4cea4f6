import pytest

from strippack.binpack import SuperHarmonicParams, harmonic_params, toy_params

# (criterion, passed, detail) rows filled in by test_acceptance.py
ACCEPTANCE: list[tuple[str, bool, str]] = []


def two_space_params() -> SuperHarmonicParams:
    """Two reserved spaces; type 2 hosts red items in the larger one."""
    return SuperHarmonicParams.build(
        t=[1.0, 0.55, 0.4, 0.3, 0.2], alpha=[0.0, 0.0, 0.25, 0.4],
        Delta=[0.3, 0.45], phi=[0, 2, 0, 0], name="two-space")


PARAM_SETS = {
    "harmonic:1": lambda: harmonic_params(1),
    "harmonic:3": lambda: harmonic_params(3),
    "harmonic:6": lambda: harmonic_params(6),
    "toy": toy_params,
    "two-space": two_space_params,
}


@pytest.fixture(params=sorted(PARAM_SETS))
def any_params(request):
    return PARAM_SETS[request.param]()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in sorted(ACCEPTANCE, key=lambda row: (int(row[0].rstrip("ab")), row[0])):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {label}: {detail}")
