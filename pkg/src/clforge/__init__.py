"""Cameron-Liebler line classes of PG(3, q) with parameter (q+1)^2/3, q = 2 (mod 3)."""

__version__ = "0.1.0"
