from hypothesis import settings

# property tests must not inject run-to-run randomness into CI
settings.register_profile("ci", derandomize=True, max_examples=60)
settings.load_profile("ci")
