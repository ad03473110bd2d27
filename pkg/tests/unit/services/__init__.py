"""Services unit tests."""
