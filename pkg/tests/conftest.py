import math

import numpy as np
import pytest

from trackexperts.paths import SwitchLaw

ALL_LAWS = [SwitchLaw.hw(0.3), SwitchLaw.hs(), SwitchLaw.kt(), SwitchLaw.l1(0.5), SwitchLaw.l2(0.5)]


class ZeroLossLearner:
    """Predicts a fixed value and never suffers any loss."""

    def __init__(self, start=1, value=0.5):
        self.start = start
        self.value = value
        self.last_loss = math.nan

    def predict(self, t):
        return self.value

    def update(self, y):
        self.last_loss = 0.0


class ConstLearner:
    """Predicts ``value`` regardless of data; loss is whatever the loss function says."""

    def __init__(self, value, loss, start=1):
        self.value = value
        self.loss = loss
        self.start = start
        self.last_loss = math.nan

    def predict(self, t):
        return self.value

    def update(self, y):
        self.last_loss = self.loss(self.value, y)


def zeta_bracket(epsilon, J):
    """Partial sum to J plus the midpoint of the integral tail bracket; also returns the half-width."""
    s = 1.0 + epsilon
    j = np.arange(J, 0, -1, dtype=float)
    partial = math.fsum(j ** -s)
    # sum_{j>J} j^-s lies between int_{J+1}^inf and int_J^inf of x^-s
    lo = (J + 1) ** -epsilon / epsilon
    hi = J ** -epsilon / epsilon
    return partial + 0.5 * (lo + hi), 0.5 * (hi - lo)


@pytest.fixture(params=ALL_LAWS, ids=lambda l: l.label)
def law(request):
    return request.param


# acceptance verdicts, one line per criterion, echoed at the end of the run
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
