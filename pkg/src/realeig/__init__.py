"""Probability of real eigenvalues of random matrices and their products.

Subpackages:

* distributions -- symmetric entry-law families (density, sampler, cf).
* analytic      -- closed-form self-convolutions and the exact-value registry.
* quadrature    -- deterministic integration of the two master formulas.
* matrixlab     -- Monte Carlo engine for matrix products.
* cli           -- batch front-end producing CSV tables.
"""

__version__ = "1.0.0"
