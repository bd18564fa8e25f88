"""Exceptions raised by the numerical routines."""


class SolverError(RuntimeError):
    """A linear solve or factorisation broke down numerically."""
