"""Dimer model on square-hexagon tower graphs.

Modules:
- lattice: coordinates, towers, signed edge weights, faces
- kasteleyn: exact rational determinants, inverses, enumeration
- interlacing: particle arrays, the matching bijection, height functions
- shuffle: the exact Markov-chain sampler
- kernels: finite and full-plane correlation kernels
- limitshape: critical points, slopes, arctic curve, limiting height
- isoradial: the z0-driven embedding of the dual lattice
- verify: the acceptance harness
- render, cli: figures, tables and the command-line front end
"""

__version__ = "0.1.0"
