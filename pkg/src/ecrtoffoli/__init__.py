"""Toffoli decompositions over echoed cross-resonance gates.

Circuit IR, a Toffoli decomposition catalog, rewriting into the
{ecr, rz, sx} basis, and a numerical model of the echoed cross-resonance pulse.
"""

__version__ = "0.1.0"
