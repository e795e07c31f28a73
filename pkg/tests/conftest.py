from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from coercivity_kit.scalar import ExactScalar

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

small_ints = st.integers(-40, 40)
fractions = st.builds(Fraction, small_ints, st.integers(1, 12))
radicands = st.sampled_from([2, 3, 5, 10])


@st.composite
def surds(draw, d=None):
    d = draw(radicands) if d is None else d
    return ExactScalar(draw(small_ints), draw(small_ints), d, draw(st.integers(1, 12)))


# one line per acceptance criterion, echoed again in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
