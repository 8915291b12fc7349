"""Lambda-bracket engine and the quantum Hamiltonian reduction of D(2,1;a)."""

__version__ = "0.1.0"
