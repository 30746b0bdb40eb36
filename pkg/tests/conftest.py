import time

import pytest

from kinkwell import spectral
from kinkwell.wells import WellKind, WellSpec, solve_spectrum

# the three benchmark wells with their reference eigenvalues
BENCHMARKS = {
    "triangular": (WellKind.TRIANGULAR, 5.0, [2.9789, 6.8366]),
    "convexp": (WellKind.CONV_EXP, 15.0, [-7.3460, -1.0622]),
    "divexp": (WellKind.DIV_EXP, 5.0, [6.4646, 17.5365]),
}


@pytest.fixture(scope="session")
def benchmark():
    """Solved + normalized first-two states of the three benchmark wells."""
    data = {}
    t0 = time.perf_counter()
    for name, (kind, v0, reference) in BENCHMARKS.items():
        well = WellSpec(kind, v0, 1.0)
        states = solve_spectrum(well, 2)
        data[name] = {"well": well, "states": states, "reference": reference}
    solve_seconds = time.perf_counter() - t0
    for name in data:
        data[name]["normalized"] = [spectral.normalize(s)
                                    for s in data[name]["states"]]
    data["solve_seconds"] = solve_seconds
    return data
