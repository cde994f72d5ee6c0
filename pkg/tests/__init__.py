# Tests for the weak quantum algebra engine
