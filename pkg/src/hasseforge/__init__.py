"""hasseforge: exact Hasse-type invariants for semilinear module data over ramified chain rings."""

__version__ = "0.1.0"
