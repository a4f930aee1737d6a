"""Pure-Python (numpy) fallback for the per-class DP round."""

import numpy as np


def dp_round(dp_in, dp_out, choice, costs, vals):
    """One class of the budget DP.

    dp_in[b] is the best scaled value achievable with budget <= b using the
    classes processed so far; exactly one option (cost, value) from this
    class is applied on top.  Option 0 must be the free option (cost 0,
    value 0).  dp_out and choice are written in place.
    """
    n = dp_in.shape[0]
    dp_out[:] = dp_in
    choice[:] = 0
    for opt in range(1, costs.shape[0]):
        c = int(costs[opt])
        if c >= n:
            continue
        cand = dp_in[: n - c] + vals[opt]
        better = cand > dp_out[c:]
        dp_out[c:][better] = cand[better]
        choice[c:][better] = opt
    return dp_out
