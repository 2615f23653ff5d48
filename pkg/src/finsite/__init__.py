"""finsite: finite commutative semirings, their spectra, finite locales and
Stone duality, sheaf checks over principal-open covers, and space gluing.

Everything is exhaustive and deterministic: inputs are immutable table-backed
values, outputs come in canonical order, and checks either verify or produce
a concrete witness.
"""

__version__ = "0.1.0"
