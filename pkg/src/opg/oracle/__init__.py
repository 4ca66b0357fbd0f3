"""Independent reference implementations used for differential testing."""
