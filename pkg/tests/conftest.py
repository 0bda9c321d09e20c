import pytest
from hypothesis import HealthCheck, settings

from ffbias.ffpoly import FieldSpec, parse_poly

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")

# (q, modulus text) of the worked examples used throughout the suite
Q5_CUBIC = (5, "T^3+T+4")
Q3_CUBIC = (3, "T^3-T+1")
Q3_DEG5 = (3, "(T^2+1)(T^3+2T+1)")

_ACCEPTANCE = pytest.StashKey[list]()


def modulus(q: int, text: str):
    spec = FieldSpec(q)
    return spec, parse_poly(text, spec, reduce=True)


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("FFBIAS_CACHE_DIR", str(tmp_path / "cache"))


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line per acceptance criterion for the terminal summary."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    def record(criterion: int, ok: bool, detail: str):
        lines.append((criterion, f"criterion {criterion:2d}: {'PASS' if ok else 'FAIL'}  {detail}"))
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(lines):
        terminalreporter.write_line(line)
