import hypothesis

hypothesis.settings.register_profile(
    "suite", deadline=None, derandomize=True, max_examples=150
)
hypothesis.settings.load_profile("suite")
