"""Construction and verification of Kochen-Specker sets for three qubits."""

__version__ = "0.1.0"
