"""Budget-DP kernel selection.

The per-class dynamic-programming round is the hot loop of the exact
capacity oracle.  A compiled Cython kernel is used when available, with a
vectorized numpy fallback; both share the same contract and are compared in
benchmarks/bench_dp.py.
"""

from .dp_python import dp_round as _dp_round_python

try:
    from .dp_core import dp_round as _dp_round_compiled

    dp_round = _dp_round_compiled
    BACKEND = "cython"
except ImportError:  # extension not built
    dp_round = _dp_round_python
    BACKEND = "python"

dp_round_python = _dp_round_python

__all__ = ["dp_round", "dp_round_python", "BACKEND"]
