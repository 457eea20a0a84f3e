"""Shared pytest wiring: one summary line per acceptance criterion."""

import re

CRITERIA = {
    1: "bare sheet is an exact identity (A = B, C = 0, enhancement 1)",
    2: "interface conditions hold to 1e-9 on randomized scenes",
    3: "energy balance: lossless sheets conserve, passive sheets absorb",
    4: "default sweeps reach enhancement >= 100 (TM and TE), refined >= 316",
    5: "resonance orders {0, 3} present, interior boost > 100, lobed profile",
    6: "Bessel layer: Wronskian residual < 1e-12, series agreement 1e-10",
    7: "secrecy outage closed form matches 1e7-sample Monte Carlo",
    8: "safe-distance anchors: ratio 1 at 40 dB, x10 per +30 dB, monotone in rate",
    9: "equal-distance ring secure fraction strictly inside (0, 0.5)",
    10: "CLI presets produce byte-identical delimited output on repeat runs",
}

_PATTERN = re.compile(r"test_acceptance\.py::.*test_c(\d{2})_")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    failed_by_criterion = {}
    for key, failed in (("passed", False), ("failed", True), ("error", True)):
        for rep in terminalreporter.stats.get(key, ()):
            match = _PATTERN.search(getattr(rep, "nodeid", ""))
            if match:
                number = int(match.group(1))
                failed_by_criterion[number] = (
                    failed_by_criterion.get(number, False) or failed)
    if not failed_by_criterion:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for number in sorted(failed_by_criterion):
        status = "FAIL" if failed_by_criterion[number] else "PASS"
        terminalreporter.write_line(
            f"[C{number} {status}] {CRITERIA.get(number, '')}")
