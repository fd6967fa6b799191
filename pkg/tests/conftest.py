from hypothesis import settings

# Frozen-seed property testing: reruns of the suite are reproducible.
settings.register_profile("deterministic", derandomize=True)
settings.load_profile("deterministic")
