"""4-state quantum walk equivalent to a 2-state walk with one-step memory."""

__version__ = "0.1.0"
