"""Graph-Laplacian dimensionality reduction and clustering.

Data matrices are ``(d, n)`` with one sample per column. Submodules:

``linalg``           deterministic symmetric and generalized eigensolvers
``graph``            neighborhood graphs and weight matrices
``laplacian``        Laplacian variants and component counting
``clustering``       ratio-cut spectral clustering and k-means
``eigenmap``         Laplacian eigenmap with out-of-sample extension
``lpp``              locality preserving projection, plain and kernel
``graph_embedding``  unified direct / linearized / kernelized solver
``diffusion``        diffusion maps and diffusion distance
``datasets``, ``io``, ``plotting``, ``cli``
"""
__version__ = "0.1.0"

from .errors import SpectralLapError  # noqa: E402,F401
