import sys
from fractions import Fraction

from hypothesis import settings, strategies as st

settings.register_profile("default", derandomize=True, deadline=None, max_examples=60)
settings.load_profile("default")

small_fraction = st.fractions(min_value=-20, max_value=20, max_denominator=12)
positive_fraction = st.fractions(min_value=Fraction(1, 12), max_value=20, max_denominator=12)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(results):
        terminalreporter.write_line(results[k])
