"""Selects the compiled kernel when available, else the pure-Python fallback.

Set FFM_KERNEL=python (or =cython) to force a lane; the benchmark uses this
to compare both.  `active_kernel()` reports which lane is live.
"""

from __future__ import annotations

import os

from . import _pykernel

_FORCE = os.environ.get("FFM_KERNEL", "").strip().lower()

_impl = None
if _FORCE in ("", "cython", "c"):
    try:
        from . import _ckernel as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = None
    if _impl is None and _FORCE:
        raise ImportError("FFM_KERNEL=cython requested but the compiled kernel is not built")
if _impl is None:
    _impl = _pykernel

jacobi = _impl.jacobi
sieve_primes = _impl.sieve_primes
squarefree_encodings = _impl.squarefree_encodings
lcoeffs_for_encodings = _impl.lcoeffs_for_encodings
chi_prime_values = _impl.chi_prime_values
KERNEL_NAME = _impl.KERNEL_NAME


def active_kernel() -> str:
    """Name of the kernel lane selected at import ("cython" or "python")."""
    return KERNEL_NAME
