import functools
import time

from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# (criterion, title, passed, seconds, detail) collected by test_acceptance
ACCEPTANCE_LINES = []


def criterion(number, title):
    """Record pass/fail and wall time of an acceptance test for the summary."""
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            t0 = time.perf_counter()
            detail = ""
            try:
                detail = fn(*args, **kwargs) or ""
            except BaseException as exc:
                ACCEPTANCE_LINES.append((number, title, False, time.perf_counter() - t0, f"{type(exc).__name__}: {exc}"))
                raise
            ACCEPTANCE_LINES.append((number, title, True, time.perf_counter() - t0, detail))
        return wrapper
    return deco


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, secs, detail in sorted(ACCEPTANCE_LINES, key=lambda x: str(x[0])):
        status = "PASS" if ok else "FAIL"
        line = f"[{status}] criterion {number}: {title} ({secs:.2f}s)"
        if detail:
            line += f" - {str(detail).splitlines()[0][:160]}"
        terminalreporter.write_line(line)
