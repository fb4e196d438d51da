"""
Riccati-Evans stability toolkit for haptotaxis travelling waves.

Travelling waves of the tumour-invasion model are computed by boundary value
continuation from their singular limit, and their point spectrum is located
through the Riccati-Evans function, a meromorphic Evans function evaluated
on a chart of the Grassmannian of planes in C^4.
"""

__version__ = "0.1.0"
