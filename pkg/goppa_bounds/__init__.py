"""Upper bounds on extended irreducible Goppa codes, with an exhaustive orbit oracle."""

__version__ = "0.1.0"
