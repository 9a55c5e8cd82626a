"""BCS to Ginzburg-Landau numerics for delta-shell interactions."""

__version__ = '0.1.0'
