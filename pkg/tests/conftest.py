from hypothesis import HealthCheck, settings

# LAPACK warmup on first call makes per-example deadlines flaky
settings.register_profile(
    "cwlab",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("cwlab")
