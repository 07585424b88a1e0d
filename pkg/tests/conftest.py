"""Shared test configuration.

Numerics tests run at whatever precision each case requests explicitly;
nothing here depends on the ambient mpmath context surviving between tests.
"""

from hypothesis import HealthCheck, settings

# quadrature-backed properties can take seconds per example; wall-clock
# deadlines would turn slow-but-correct into flaky
settings.register_profile(
    "numerics",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("numerics")
