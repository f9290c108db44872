"""bundlebench: verifiable checks for Lax operators of non-trivial bundles over elliptic curves."""

__version__ = "0.1.0"
