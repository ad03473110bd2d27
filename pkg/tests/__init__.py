"""mopbnb tests."""
