"""Package-wide knobs: construction checks, dense budgets, kernel backend.

Everything here is a plain module-level value so scripts can flip it
before building operators.  ``CATOTOC_NO_NUMBA=1`` in the environment
selects the pure-numpy kernel fallbacks (see ``_kernels``).
"""

import os

VERSION = "0.1.0"

# Operator constructors assert claimed properties (unitary/hermitian) at
# build time.  Cheap at the dimensions this package targets; flip off for
# hot loops that rebuild many operators.
construction_checks = True

# Max-norm tolerance for those construction-time assertions.
CONSTRUCTION_TOL = 1e-10

# Dense-matrix budget: largest total dimension for which n^2 x n^2
# matrices may be materialized (one degree of freedom capped at 128).
MAX_DENSE_DIM = 128 * 128

# Two-degree-of-freedom Wigner grids scale as (2n)^4; keep them small.
WIGNER_2DOF_MAX_N = 8

USE_NUMBA = os.environ.get("CATOTOC_NO_NUMBA", "0") not in ("1", "true", "yes")
