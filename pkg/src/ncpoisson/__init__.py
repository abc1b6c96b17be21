"""Exact symbolic computation for noncommutative Poisson structures on quiver
path algebras: double brackets, moment maps and Hamiltonian reduction, shifted
cotangent bivectors, Poisson extensions, representation schemes and trace
maps, and bar/cobar based brackets on reduced cyclic homology."""

__version__ = "0.1.0"
