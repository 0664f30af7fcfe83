import pytest

from datalimit import _backend, _kernels_py
from datalimit.link_model import LinkBudget, MobilityProfile

try:
    from datalimit import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKENDS = ["python"] + (["cython"] if _compiled is not None else [])
_MODULES = {"python": _kernels_py, "cython": _compiled}


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Route every kernel call through one backend for the duration of a test."""
    mod = _MODULES[request.param]
    for name in ("alternating_series", "integrate_span", "shannon_integrand"):
        monkeypatch.setattr(_backend, name, getattr(mod, name))
    return request.param


@pytest.fixture
def table1():
    return LinkBudget()


@pytest.fixture
def line_start():
    return MobilityProfile(x0_m=1.0, z0_m=0.0, speed_mps=5.0)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for key in ("passed", "failed"):
        for rep in terminalreporter.stats.get(key, []):
            if rep.when != "call":
                continue
            lines.extend(v for k, v in rep.user_properties if k == "acceptance")
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
