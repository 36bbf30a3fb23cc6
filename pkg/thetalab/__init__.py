"""
Theta-Iwasawa Lab

Seeded experiments and element inspection over the iwasawa library.
"""

__version__ = "0.1.0"


def __getattr__(name):
    """Lazy imports so that python -m thetalab does not import the CLI twice."""
    if name == "main":
        from .cli import main
        return main
    elif name == "ExperimentConfig":
        from .config import ExperimentConfig
        return ExperimentConfig
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


__all__ = ["ExperimentConfig", "main"]
