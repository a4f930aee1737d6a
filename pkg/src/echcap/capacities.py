"""Capacity engines: ball closed form, ellipsoid lattice counting, and the
weight-multiset optimizer (exact budget DP plus a relaxation-certified fast
solver).

The weight formulation: a multiset with n_i copies of weight a_i has

    c_k = max { sum d_{i,j} a_i  :  sum (d_{i,j}^2 + d_{i,j}) <= 2k }

over nonnegative integer levels d_{i,j}, one per copy.  Within a class of
equal weights an exchange argument lets levels differ by at most one
("convexity-normal form"), so a class is described by a base level d and a
promoted count r: cost n(d^2+d) + 2r(d+1), value (nd+r)a.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from ._kernels import dp_round, dp_round_python
from .errors import ResourceLimitError
from .geometry import Ellipsoid, MomentProfile, Region, area, as_profile
from .scalars import Scalar
from .weights import WeightMultiset, ellipsoid_weights, weight_expansion

DEFAULT_ORACLE_LIMIT = 4 * 10**5  # on the DP budget 2k
DEFAULT_ELLIPSOID_LIMIT = 10**6  # on the capacity index k
_INT64_SAFE = 2**62


@dataclass(frozen=True)
class ClassAssignment:
    """Normal-form levels for one weight class: n copies at level d, r of
    them promoted to d+1."""

    weight: Scalar
    copies: int
    level: int
    promoted: int

    @property
    def cost(self) -> int:
        d, r = self.level, self.promoted
        return self.copies * (d * d + d) + 2 * r * (d + 1)

    @property
    def value(self) -> Scalar:
        return (self.copies * self.level + self.promoted) * self.weight

    @property
    def units(self) -> int:
        return self.copies * self.level + self.promoted


@dataclass(frozen=True)
class CandidateAssignment:
    classes: tuple
    budget: int  # 2k this assignment answers

    @property
    def cost(self) -> int:
        return sum(c.cost for c in self.classes)

    @property
    def value(self) -> Scalar:
        return sum((c.value for c in self.classes), Fraction(0))


@dataclass(frozen=True)
class CapacityResult:
    best: Scalar
    upper: Scalar
    exact: bool
    witness: Optional[CandidateAssignment] = None

    @property
    def value(self) -> Scalar:
        if not self.exact:
            raise ValueError("capacity is only certified as an interval")
        return self.best

    @property
    def gap(self) -> Scalar:
        if self.best == 0:
            return Fraction(0)
        return (self.upper - self.best) / self.best


def ball_capacity(a, k: int) -> Scalar:
    """c_k(B(a)) = d*a with d the largest integer with d(d+1)/2 <= k."""
    a = Fraction(a)
    if a <= 0:
        raise ValueError("ball size must be positive")
    if k < 0:
        raise ValueError("capacity index must be >= 0")
    d = (math.isqrt(8 * k + 1) - 1) // 2
    return d * a


def ellipsoid_capacity(e: Ellipsoid, k: int, k_limit: int = DEFAULT_ELLIPSOID_LIMIT) -> Scalar:
    """(k+1)-st smallest element, with multiplicity, of {ma + nb : m, n >= 0}.

    Binary search on t with the lattice counting function
    N(t) = sum_{n=0}^{floor(t/b)} (floor((t - nb)/a) + 1); the smallest t
    with N(t) >= k+1 is itself a lattice value.
    """
    if k < 0:
        raise ValueError("capacity index must be >= 0")
    if k > k_limit:
        raise ResourceLimitError(
            f"k={k} above the configured ellipsoid counting range {k_limit}"
        )
    if k == 0:
        return Fraction(0)
    lcm = math.lcm(e.a.denominator, e.b.denominator)
    av = int(e.a * lcm)
    bv = int(e.b * lcm)

    def count(t: int) -> int:
        total = 0
        for n in range(t // bv + 1):
            total += (t - n * bv) // av + 1
        return total

    lo, hi = 0, av * k
    while lo < hi:
        mid = (lo + hi) // 2
        if count(mid) >= k + 1:
            hi = mid
        else:
            lo = mid + 1
    return Fraction(lo, lcm)


class _ScaledClasses:
    """Weight classes with values scaled to a common integer denominator."""

    def __init__(self, w: WeightMultiset):
        self.weights = [wt for wt, _ in w.entries]
        self.copies = [m for _, m in w.entries]
        self.denominator = math.lcm(*(wt.denominator for wt in self.weights)) if self.weights else 1
        self.scaled = [int(wt * self.denominator) for wt in self.weights]

    def __len__(self):
        return len(self.weights)


def _class_options(scaled_weight: int, copies: int, budget: int):
    """All (cost, scaled value, d, r) choices for one class within budget.
    Option 0 is always the free option."""
    costs, vals, levels = [0], [0], [(0, 0)]
    d = 0
    while True:
        base = copies * (d * d + d)
        if base > budget:
            break
        r_max = min(copies - 1, (budget - base) // (2 * (d + 1)))
        for r in range(r_max + 1):
            if d == 0 and r == 0:
                continue
            costs.append(base + 2 * r * (d + 1))
            vals.append((copies * d + r) * scaled_weight)
            levels.append((d, r))
        d += 1
    return costs, vals, levels


def _run_dp(classes: _ScaledClasses, budget: int, keep_choices: bool):
    """Budget DP over all classes.  Returns (dp array, per-class choice
    arrays or None, per-class option levels)."""
    all_options = [
        _class_options(s, n, budget)
        for s, n in zip(classes.scaled, classes.copies)
    ]
    value_bound = sum(max(vals) for _, vals, _ in all_options)
    int64_ok = value_bound < _INT64_SAFE
    dtype = np.int64 if int64_ok else object
    kernel = dp_round if int64_ok else dp_round_python

    dp = np.zeros(budget + 1, dtype=dtype)
    scratch = np.zeros(budget + 1, dtype=dtype)
    choices = [] if keep_choices else None
    for costs, vals, _ in all_options:
        choice = np.zeros(budget + 1, dtype=np.int32)
        kernel(
            dp,
            scratch,
            choice,
            np.asarray(costs, dtype=dtype),
            np.asarray(vals, dtype=dtype),
        )
        dp, scratch = scratch, dp
        if keep_choices:
            choices.append(choice)
    return dp, choices, all_options


def multiset_capacity_oracle(
    w: WeightMultiset, k: int, oracle_limit: int = DEFAULT_ORACLE_LIMIT
) -> CapacityResult:
    """Exact optimum of the weight formulation by dynamic programming over
    the budget 2k, with the optimizing assignment as witness."""
    budget = 2 * k
    if budget > oracle_limit:
        raise ResourceLimitError(
            f"DP budget {budget} exceeds the oracle limit {oracle_limit}; "
            "use multiset_capacity_fast"
        )
    if k < 0:
        raise ValueError("capacity index must be >= 0")
    classes = _ScaledClasses(w)
    dp, choices, all_options = _run_dp(classes, budget, keep_choices=True)

    b = budget
    picked = []
    for i in range(len(classes) - 1, -1, -1):
        opt = int(choices[i][b])
        costs, _, levels = all_options[i]
        d, r = levels[opt]
        picked.append(
            ClassAssignment(classes.weights[i], classes.copies[i], d, r)
        )
        b -= costs[opt]
    witness = CandidateAssignment(tuple(reversed(picked)), budget)
    value = Fraction(int(dp[budget]), classes.denominator)
    assert witness.value == value and witness.cost <= budget
    return CapacityResult(best=value, upper=value, exact=True, witness=witness)


def multiset_capacity_sweep(
    w: WeightMultiset, k_max: int, oracle_limit: int = DEFAULT_ORACLE_LIMIT
) -> list:
    """Exact c_k for every k in 0..k_max from a single DP run."""
    budget = 2 * k_max
    if budget > oracle_limit:
        raise ResourceLimitError(
            f"DP budget {budget} exceeds the oracle limit {oracle_limit}"
        )
    classes = _ScaledClasses(w)
    dp, _, _ = _run_dp(classes, budget, keep_choices=False)
    den = classes.denominator
    return [Fraction(int(dp[2 * k]), den) for k in range(k_max + 1)]


# ---------------------------------------------------------------------------
# Fast solver: continuous-relaxation seed + greedy + local exchange, with a
# Lagrangian-dual upper bound.  Never touches the DP oracle.
# ---------------------------------------------------------------------------


class _Solution:
    """Mutable normal-form assignment used by the fast solver."""

    __slots__ = ("classes", "levels", "promoted", "cost")

    def __init__(self, classes: _ScaledClasses, levels=None, promoted=None):
        self.classes = classes
        self.levels = list(levels) if levels else [0] * len(classes)
        self.promoted = list(promoted) if promoted else [0] * len(classes)
        self.cost = sum(
            n * (d * d + d) + 2 * r * (d + 1)
            for n, d, r in zip(classes.copies, self.levels, self.promoted)
        )

    def clone(self) -> "_Solution":
        return _Solution(self.classes, self.levels, self.promoted)

    def scaled_value(self) -> int:
        return sum(
            (n * d + r) * s
            for n, d, r, s in zip(
                self.classes.copies, self.levels, self.promoted, self.classes.scaled
            )
        )

    def promote_cost(self, i: int) -> int:
        return 2 * (self.levels[i] + 1)

    def promote(self, i: int, count: int = 1):
        n = self.classes.copies[i]
        while count > 0:
            room = n - self.promoted[i]
            step = min(count, room)
            self.cost += step * 2 * (self.levels[i] + 1)
            self.promoted[i] += step
            count -= step
            if self.promoted[i] == n:
                self.promoted[i] = 0
                self.levels[i] += 1

    def demote(self, i: int, count: int = 1) -> bool:
        n = self.classes.copies[i]
        while count > 0:
            if self.promoted[i] > 0:
                step = min(count, self.promoted[i])
                self.cost -= step * 2 * (self.levels[i] + 1)
                self.promoted[i] -= step
                count -= step
            elif self.levels[i] > 0:
                self.levels[i] -= 1
                self.promoted[i] = n - 1
                self.cost -= 2 * (self.levels[i] + 1)
                count -= 1
            else:
                return False
        return True

    def greedy_fill(self, budget: int, forbid: int = -1):
        """Spend residual budget on the promotion with the best marginal
        gain per unit cost, in bulk per level tier.  ``forbid`` excludes one
        class so that exchange moves cannot undo their own demotion."""
        while True:
            best_i = -1
            best_num = best_den = 0
            for i, s in enumerate(self.classes.scaled):
                if i == forbid:
                    continue
                c = self.promote_cost(i)
                if c > budget - self.cost:
                    continue
                # compare s/c > best_num/best_den
                if best_i < 0 or s * best_den > best_num * c:
                    best_i, best_num, best_den = i, s, c
            if best_i < 0:
                return
            c = self.promote_cost(best_i)
            room = self.classes.copies[best_i] - self.promoted[best_i]
            bulk = min(room, (budget - self.cost) // c)
            self.promote(best_i, max(bulk, 1))

    def assignment(self, budget: int) -> CandidateAssignment:
        return CandidateAssignment(
            tuple(
                ClassAssignment(wt, n, d, r)
                for wt, n, d, r in zip(
                    self.classes.weights,
                    self.classes.copies,
                    self.levels,
                    self.promoted,
                )
            ),
            budget,
        )


def _relaxation_mu(classes: _ScaledClasses, k: int) -> float:
    """Float multiplier mu with sum n_i (d^2 + d) ~ 2k at
    d_i = max(a_i/mu - 1/2, 0)."""
    a = [float(wt) for wt in classes.weights]
    n = classes.copies

    def spent(mu: float) -> float:
        total = 0.0
        for ai, ni in zip(a, n):
            d = ai / mu - 0.5
            if d > 0:
                total += ni * (d * d + d)
        return total

    hi = 2.0 * max(a)  # all d_i = 0
    lo = hi
    while spent(lo) < 2 * k:
        lo /= 2.0
        if lo < 1e-300:
            break
    for _ in range(200):
        mid = (lo + hi) / 2
        if spent(mid) > 2 * k:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def _dual_bound(classes: _ScaledClasses, k: int, mu: Fraction) -> Fraction:
    """Lagrangian dual value: mu*k + sum n_i max_d (d a_i - mu(d^2+d)/2),
    a valid upper bound for every mu > 0."""
    total = mu * k
    for wt, n in zip(classes.weights, classes.copies):
        if wt > mu / 2:
            total += n * (wt - mu / 2) ** 2 / (2 * mu)
    return total


_POLISH_BUDGET_LIMIT = 4 * 10**5
_POLISH_COST_LIMIT = 4 * 10**8  # budget * total option count


def _polish_options(classes: _ScaledClasses, sol: "_Solution", budget: int, window: int):
    """Restricted per-class option tables: levels within ``window`` of the
    incumbent (plus the empty option), promotions free within budget."""
    all_options = []
    for i, (s, n) in enumerate(zip(classes.scaled, classes.copies)):
        costs, vals, levels = [0], [0], [(0, 0)]
        d_inc = sol.levels[i]
        for d in range(max(0, d_inc - window), d_inc + window + 1):
            base = n * (d * d + d)
            if base > budget:
                break
            r_max = min(n - 1, (budget - base) // (2 * (d + 1)))
            for r in range(r_max + 1):
                if d == 0 and r == 0:
                    continue
                costs.append(base + 2 * r * (d + 1))
                vals.append((n * d + r) * s)
                levels.append((d, r))
        all_options.append((costs, vals, levels))
    return all_options


def _polish(classes: _ScaledClasses, sol: "_Solution", budget: int, window: int):
    """Trust-region DP around the incumbent; returns an improved solution or
    None when the restricted instance is too large for the policy limits."""
    if budget > _POLISH_BUDGET_LIMIT:
        return None
    all_options = _polish_options(classes, sol, budget, window)
    total_options = sum(len(c) for c, _, _ in all_options)
    if budget * total_options > _POLISH_COST_LIMIT:
        return None
    value_bound = sum(max(vals) for _, vals, _ in all_options)
    int64_ok = value_bound < _INT64_SAFE
    dtype = np.int64 if int64_ok else object
    kernel = dp_round if int64_ok else dp_round_python
    dp = np.zeros(budget + 1, dtype=dtype)
    scratch = np.zeros(budget + 1, dtype=dtype)
    choices = []
    for costs, vals, _ in all_options:
        choice = np.zeros(budget + 1, dtype=np.int32)
        kernel(
            dp,
            scratch,
            choice,
            np.asarray(costs, dtype=dtype),
            np.asarray(vals, dtype=dtype),
        )
        dp, scratch = scratch, dp
        choices.append(choice)
    if int(dp[budget]) <= sol.scaled_value():
        return sol
    b = budget
    levels = [0] * len(classes)
    promoted = [0] * len(classes)
    for i in range(len(classes) - 1, -1, -1):
        opt = int(choices[i][b])
        costs, _, option_levels = all_options[i]
        levels[i], promoted[i] = option_levels[opt]
        b -= costs[opt]
    return _Solution(classes, levels, promoted)


def multiset_capacity_fast(
    w: WeightMultiset,
    k: int,
    exchange_window: int = 3,
    max_rounds: int = 100,
    polish_window: int = 4,
) -> CapacityResult:
    """Interval-certified capacity: incumbent from relaxation seeding,
    greedy budget fill and bounded exchange search; upper bound from the
    Lagrangian dual of the continuous relaxation."""
    if len(w) > 64:
        raise ResourceLimitError("fast solver supports at most 64 weight classes")
    if k < 0:
        raise ValueError("capacity index must be >= 0")
    if k == 0:
        return CapacityResult(Fraction(0), Fraction(0), True, None)
    budget = 2 * k
    classes = _ScaledClasses(w)

    mu_f = _relaxation_mu(classes, k)
    sol = _Solution(classes)
    for i, wt in enumerate(classes.weights):
        d = int(float(wt) / mu_f - 0.5)
        if d > 0:
            # floor of the continuous level keeps the seed under budget
            sol.levels[i] = d
    sol = _Solution(classes, sol.levels, sol.promoted)
    while sol.cost > budget:  # float roundoff guard
        worst = max(range(len(classes)), key=lambda i: sol.levels[i])
        sol.demote(worst)
    sol.greedy_fill(budget)

    for _ in range(max_rounds):
        improved = False
        base_value = sol.scaled_value()
        for j in range(len(classes)):
            for delta in range(1, exchange_window + 1):
                trial = sol.clone()
                if not trial.demote(j, delta):
                    break
                trial.greedy_fill(budget, forbid=j)
                trial.greedy_fill(budget)
                if trial.scaled_value() > base_value:
                    sol = trial
                    base_value = trial.scaled_value()
                    improved = True
        if not improved:
            break

    if polish_window > 0:
        # Re-center the trust region after each improvement so the polish
        # can walk further than one window from the incumbent.
        for _ in range(8):
            polished = _polish(classes, sol, budget, polish_window)
            if polished is None or polished.scaled_value() <= sol.scaled_value():
                break
            sol = polished

    best = Fraction(sol.scaled_value(), classes.denominator)

    # Dual candidates: the float minimizer plus the kink multipliers of the
    # incumbent's levels, where the dual often matches the optimum exactly.
    candidates = []
    if mu_f > 0 and math.isfinite(mu_f):
        candidates.append(Fraction(mu_f).limit_denominator(10**12))
    for i, wt in enumerate(classes.weights):
        d = sol.levels[i]
        for shift in (-1, 0, 1):
            den = Fraction(2 * (d + shift) + 1, 2)
            if den > 0:
                candidates.append(wt / den)
    upper = min(_dual_bound(classes, k, mu) for mu in candidates if mu > 0)
    if upper < best:  # weak duality guarantees this never triggers
        upper = best
    return CapacityResult(
        best=best,
        upper=upper,
        exact=(best == upper),
        witness=sol.assignment(budget),
    )


# ---------------------------------------------------------------------------
# Generic dispatch and Weyl-law diagnostics
# ---------------------------------------------------------------------------


def exact_capacity(domain, k: int, oracle_limit: int = DEFAULT_ORACLE_LIMIT) -> Scalar:
    """Exact c_k for a ball/ellipsoid/profile/weight multiset."""
    if isinstance(domain, Ellipsoid):
        if domain.a == domain.b:
            return ball_capacity(domain.a, k)
        return ellipsoid_capacity(domain, k)
    if isinstance(domain, MomentProfile):
        domain, _ = weight_expansion(domain)
    if isinstance(domain, WeightMultiset):
        return multiset_capacity_oracle(domain, k, oracle_limit=oracle_limit).best
    raise TypeError(f"unsupported domain type {type(domain)!r}")


def capacity_interval(
    domain, k: int, oracle_limit: int = DEFAULT_ORACLE_LIMIT
) -> tuple:
    """(lower, upper) bounds on c_k; equal when an exact engine applies."""
    if isinstance(domain, (Ellipsoid,)):
        c = exact_capacity(domain, k)
        return c, c
    if isinstance(domain, MomentProfile):
        domain, _ = weight_expansion(domain)
    if isinstance(domain, WeightMultiset):
        if 2 * k <= oracle_limit:
            c = multiset_capacity_oracle(domain, k, oracle_limit=oracle_limit).best
            return c, c
        result = multiset_capacity_fast(domain, k)
        return result.best, result.upper
    raise TypeError(f"unsupported domain type {type(domain)!r}")


def domain_volume(domain) -> Scalar:
    if isinstance(domain, (Ellipsoid, MomentProfile)):
        return area(domain)
    if isinstance(domain, WeightMultiset):
        return domain.total_area()
    raise TypeError(f"unsupported domain type {type(domain)!r}")


def weyl_ratio(domain, k: int, oracle_limit: int = DEFAULT_ORACLE_LIMIT) -> Scalar:
    """c_k^2 / (4 k vol), an exact rational converging to 1 as k grows."""
    if k <= 0:
        raise ValueError("Weyl ratio is undefined at k = 0")
    c = exact_capacity(domain, k, oracle_limit=oracle_limit)
    return c * c / (4 * k * domain_volume(domain))
