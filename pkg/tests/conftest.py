import sys

import pytest
from hypothesis import settings

from bcjulia import kernels

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")


@pytest.fixture(params=kernels.available_backends())
def backend(request, monkeypatch):
    """Run a test once per kernel backend."""
    mod = kernels.load_backend(request.param)
    monkeypatch.setattr(kernels, "escape_time", mod.escape_time)
    monkeypatch.setattr(kernels, "raymarch", mod.raymarch)
    monkeypatch.setattr(kernels, "BACKEND", request.param)
    return request.param


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
