"""Lower bounds for the growth rate of 1324-avoiding permutations."""

__version__ = "0.1.0"
