import pytest

from oracles import random_corpus
from petriflow.casebook import casebook_net


@pytest.fixture(scope="session")
def corpus():
    return random_corpus()


@pytest.fixture(scope="session")
def named_nets():
    return {
        "tn2": casebook_net("tn", {"k": 2}),
        "tn3": casebook_net("tn", {"k": 3}),
        "tel": casebook_net("tel"),
        "tel2": casebook_net("tel2"),
        "twocycles": casebook_net("twocycles"),
    }


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[n])
