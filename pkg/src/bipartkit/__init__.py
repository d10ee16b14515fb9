"""Exact bipartition polynomials of multigraphs."""
