"""notematch: match app release-note sentences with user-review sentences."""

__version__ = "0.1.0"
