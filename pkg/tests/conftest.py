import sys

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None:
        return
    ran = {r.nodeid.split("::")[-1][:7].upper().replace("TEST_", "") for r in terminalreporter.getreports("")}
    terminalreporter.section("acceptance criteria")
    for k in range(1, 10):
        name = f"A{k}"
        if name in mod.RESULTS:
            ok, detail = mod.RESULTS[name]
            terminalreporter.write_line(f"{name} {'PASS' if ok else 'FAIL'} {detail}")
        elif name in ran:
            terminalreporter.write_line(f"{name} FAIL (raised before reporting)")
