import random
from fractions import Fraction

import pytest

from gentaylor.modulus import NodeSet
from gentaylor.poly import Polynomial
from gentaylor.scalar import EXACT


def random_fraction(rng, num=20, den=9):
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


def random_poly(rng, max_degree, domain=EXACT):
    deg = rng.randint(0, max_degree)
    return Polynomial([random_fraction(rng) for _ in range(deg + 1)], domain)


def random_nodeset(rng, max_r=4, max_m=4, max_n=None, lo=-3, hi=3):
    """Distinct rational nodes; optional cap on n = sum m_i."""
    while True:
        r = rng.randint(1, max_r)
        xs = set()
        while len(xs) < r:
            xs.add(Fraction(rng.randint(lo * 8, hi * 8), 8))
        ms = [rng.randint(1, max_m) for _ in range(r)]
        if max_n is None or sum(ms) <= max_n:
            return NodeSet(list(zip(sorted(xs), ms)))


@pytest.fixture
def rng():
    return random.Random(20261016)


_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion check")


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None or (report.when != "call" and report.passed):
        return
    number, title = marker
    detail = dict(report.user_properties).get("detail", "")
    if report.failed:
        detail = report.longrepr.reprcrash.message.splitlines()[0] if hasattr(report.longrepr, "reprcrash") else "failed"
    _CRITERIA[number] = (title, "PASS" if report.passed else "FAIL", detail)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = tuple(marker.args)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, status, detail = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number}: {status}  {title}  [{detail}]")
