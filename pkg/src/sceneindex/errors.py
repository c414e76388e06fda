"""Shared error base so callers (notably the CLI) can catch one family."""


class SceneIndexError(Exception):
    """Base class for all errors raised by this package."""
