"""Pick the compiled kernels when available, else the pure-Python ones.

Set ``DATALIMIT_PURE_PYTHON=1`` to force the fallback.
"""
import os

BACKEND = "python"

if os.environ.get("DATALIMIT_PURE_PYTHON", "") not in ("", "0"):
    from ._kernels_py import alternating_series, integrate_span, shannon_integrand
else:
    try:
        from ._kernels import alternating_series, integrate_span, shannon_integrand

        BACKEND = "cython"
    except ImportError:
        from ._kernels_py import alternating_series, integrate_span, shannon_integrand

__all__ = ["BACKEND", "alternating_series", "integrate_span", "shannon_integrand"]
