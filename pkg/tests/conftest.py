import numpy as np

from tropeig.matpoly import MatrixPolynomial

# the 2x2 quadratic with coefficient norms spread over 36 orders of magnitude
INTRO = MatrixPolynomial([
    1e-18 * np.array([[12, 15], [34, 28]]),
    np.array([[-3, 10], [16, 45]]),
    1e-18 * np.array([[1, 2], [3, 4]]),
])

# one line per acceptance criterion, echoed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
