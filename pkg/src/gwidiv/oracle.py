"""Independent desk-scale ground truth: truncated path-space enumeration and MC.

Everything here deliberately avoids the recursion/bound machinery: Hellinger
integrals come from dynamic programming over the lambda-weighted transition
kernel, Bayes risks and Neyman-Pearson errors from exact enumeration of
(state, likelihood-ratio) atoms under the hypothesis law, and a Monte-Carlo
estimator simulates the process directly.  Truncation points are chosen
from Poisson tails so that the total discarded mass stays within a budget,
which yields certified two-sided enclosures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import poisson

from .decisions import DecisionConfig
from .params import GWIError, ParamSet, phi_eval, validate_order, varphi_value

__all__ = [
    "PathLaw",
    "TruncationPolicy",
    "path_law_atoms",
    "enum_log_hellinger",
    "enum_log_hellinger_profile",
    "mc_log_hellinger",
    "enum_bayes_risk",
    "enum_np_type2",
    "enum_relative_entropy",
]

#: Monte-Carlo block size; fixed so results are deterministic given the seed
_MC_BLOCK = 100_000

#: relative cushion added to certified errors against float summation rounding
_ROUNDING_CUSHION = 1e-12


@dataclass(frozen=True)
class PathLaw:
    """Atoms (state, log Z_n, P_H-probability) of the truncated n-step path law.

    ``trimmed_h``/``trimmed_a`` are the discarded masses under the two laws;
    ``trimmed_logz_mass`` is the first-overshoot estimate of the discarded
    |log Z| mass used by the entropy oracle.
    """

    states: np.ndarray
    log_z: np.ndarray
    prob_h: np.ndarray
    trimmed_h: float
    trimmed_a: float
    trimmed_logz_mass: float

    def prob_a(self) -> np.ndarray:
        return self.prob_h * np.exp(self.log_z)


@dataclass(frozen=True)
class TruncationPolicy:
    """Total discarded-mass budget and a hard cap on the state space."""

    tail_budget: float = 1e-9
    max_state: int = 5000

    def __post_init__(self) -> None:
        if self.tail_budget <= 0.0:
            raise GWIError("tail_budget must be > 0")
        if self.max_state < 10:
            raise GWIError("max_state must be >= 10")


def _poisson_cutoff(rate: float, eps: float, max_state: int) -> int:
    """Smallest y with P(Poisson(rate) > y) <= eps, capped at max_state."""
    if rate == 0.0:
        return 0
    y = poisson.isf(eps, rate)
    if not np.isfinite(y):
        # scipy's inverse survival gives nan below ~1e-16; scan the sf instead
        y = math.ceil(rate + 10.0 * math.sqrt(rate) + 10.0)
        while poisson.sf(y, rate) > eps and y < max_state:
            y = 2 * y + 1
    y = int(y)
    if y + 1 > max_state:
        raise GWIError(
            f"state-space blowup (needed {y + 1} states, cap {max_state}); "
            "reduce the horizon or loosen the tail budget"
        )
    return y


def enum_log_hellinger_profile(
    params: ParamSet,
    lam: float,
    omega0: int,
    n: int,
    policy: TruncationPolicy = TruncationPolicy(),
) -> list[tuple[float, float]]:
    """Enumeration values for every horizon k = 0..n in one forward pass.

    Entry k is (log_value, error_bound) with the certified enclosure
    exp(log_value) <= H_k <= exp(log_value) + error_bound.
    """
    lam = validate_order(lam)
    if omega0 < 1 or n < 0:
        raise GWIError("need omega0 >= 1 and n >= 0")
    cap = policy.max_state
    weights = np.zeros(cap + 1)
    weights[omega0] = 1.0
    trimmed = 0.0
    out = [(0.0, 0.0)]
    for _step in range(n):
        live = np.nonzero(weights)[0]
        eps = policy.tail_budget / (max(n, 1) * max(len(live), 1))
        new_weights = np.zeros(cap + 1)
        for x in live:
            w = weights[x]
            rate = varphi_value(params, lam, float(x))
            total = math.exp(phi_eval(params, lam, float(x)).phi)
            if rate == 0.0:
                # extinct no-immigration state: kernel is a point mass at 0
                new_weights[0] += w * total
                continue
            y_max = _poisson_cutoff(rate, eps, cap)
            row = total * poisson.pmf(np.arange(y_max + 1), rate)
            kept = row.sum()
            trimmed += w * max(total - kept, 0.0)
            new_weights[: y_max + 1] += w * row
        weights = new_weights
        kept = weights.sum()
        # the cushion absorbs float rounding of the kept-mass summation, so
        # the enclosure stays valid beyond the exact-arithmetic argument
        out.append((float(np.log(kept)), float(trimmed + _ROUNDING_CUSHION * kept)))
    return out


def enum_log_hellinger(
    params: ParamSet,
    lam: float,
    omega0: int,
    n: int,
    policy: TruncationPolicy = TruncationPolicy(),
) -> tuple[float, float]:
    """Truncated-exact log Hellinger integral with a certified error bound.

    Returns (log_value, error_bound): all kept path mass is exactly summed,
    so exp(log_value) is a lower bound for H_n and every trimmed branch can
    contribute at most its own kernel mass, giving
    H_n <= exp(log_value) + error_bound.
    """
    return enum_log_hellinger_profile(params, lam, omega0, n, policy)[n]


def mc_log_hellinger(
    params: ParamSet, lam: float, omega0: int, n: int, reps: int, seed: int
) -> tuple[float, float]:
    """Monte-Carlo estimate of log H_n via H = E_H[Z_n^lambda].

    Paths are simulated under the hypothesis law in fixed-size blocks, each
    driven by its own counter-based Philox stream keyed by (seed, block), so
    the result is bit-reproducible for a given seed.  Returns the log-scale
    estimate and its delta-method log-scale standard error.
    """
    lam = validate_order(lam)
    if reps < 1000:
        raise GWIError("need reps >= 1000")
    if omega0 < 1 or n < 1:
        raise GWIError("need omega0 >= 1 and n >= 1")
    scores = np.empty(reps)
    done = 0
    block_index = 0
    while done < reps:
        size = min(_MC_BLOCK, reps - done)
        rng = np.random.Generator(np.random.Philox(key=[seed, block_index]))
        state = np.full(size, omega0, dtype=np.int64)
        log_z = np.zeros(size)
        for _ in range(n):
            rate_a = params.beta_a * state + params.alpha_a
            rate_h = params.beta_h * state + params.alpha_h
            offspring = rng.poisson(rate_h)
            alive = rate_h > 0.0
            ratio = np.where(alive, rate_a / np.where(alive, rate_h, 1.0), 1.0)
            log_z += np.where(
                alive, -(rate_a - rate_h) + offspring * np.log(ratio), 0.0
            )
            state = offspring
        scores[done : done + size] = lam * log_z
        done += size
        block_index += 1
    peak = scores.max()
    shifted = np.exp(scores - peak)
    mean = shifted.mean()
    log_estimate = peak + math.log(mean)
    std_error_log = shifted.std(ddof=1) / (math.sqrt(reps) * mean)
    return float(log_estimate), float(std_error_log)


def path_law_atoms(
    params: ParamSet, omega0: int, n: int, policy: TruncationPolicy = TruncationPolicy()
) -> PathLaw:
    """Joint (state, log Z_n, P_H-probability) atoms of the n-step path law.

    Atoms are grouped by current state; atoms landing on the same state with
    bitwise-equal log-likelihood-ratio are merged (no binning).  Each
    expansion is truncated where the Poisson tails of BOTH conditional rates
    drop below the per-step budget; since the Z-weighted hypothesis kernel
    is exactly the alternative kernel, the trimmed alternative mass is
    computable from the Poisson(rate_a) tail and tracked alongside the
    trimmed hypothesis mass.  Returns (log_z, prob, trimmed_h, trimmed_a,
    trimmed_logz_mass), the last being the first-overshoot estimate of the
    trimmed |log Z| mass used by the entropy oracle.
    """
    if omega0 < 1 or n < 1:
        raise GWIError("need omega0 >= 1 and n >= 1")
    by_state: dict[int, tuple[np.ndarray, np.ndarray]] = {
        omega0: (np.zeros(1), np.ones(1))
    }
    trimmed_h = 0.0
    trimmed_a = 0.0
    trimmed_logz_mass = 0.0
    for step in range(n):
        eps = policy.tail_budget / (n * max(len(by_state), 1))
        collect: dict[int, list[tuple[np.ndarray, np.ndarray]]] = {}
        for x, (log_zs, probs) in by_state.items():
            rate_a = params.rate_a(x)
            rate_h = params.rate_h(x)
            if rate_h == 0.0:
                # extinct no-immigration state: next state 0 w.p. 1, factor 1
                collect.setdefault(0, []).append((log_zs, probs))
                continue
            y_max = _poisson_cutoff(max(rate_h, rate_a), eps, policy.max_state)
            pmf = poisson.pmf(np.arange(y_max + 1), rate_h)
            mass_h = probs.sum()
            mass_a = float(np.sum(probs * np.exp(log_zs)))
            sf_a = float(poisson.sf(y_max, rate_a))
            trimmed_h += mass_h * max(1.0 - pmf.sum(), 0.0)
            trimmed_a += mass_a * sf_a
            base = -(rate_a - rate_h)
            log_ratio = math.log(rate_a / rate_h)
            # first trimmed moment of |log Z| under P_A on this expansion,
            # via E[y; y > Y] = rate * sf(Y - 1); later steps are estimated
            # to contribute comparably per remaining generation
            overshoot = (float(np.abs(log_zs).max()) + abs(base)) * sf_a
            overshoot += abs(log_ratio) * rate_a * float(poisson.sf(y_max - 1, rate_a))
            trimmed_logz_mass += (n - step) * mass_a * overshoot
            for y in range(y_max + 1):
                collect.setdefault(y, []).append(
                    (log_zs + (base + y * log_ratio), probs * pmf[y])
                )
        by_state = {}
        for y, chunks in collect.items():
            log_zs = np.concatenate([c[0] for c in chunks])
            probs = np.concatenate([c[1] for c in chunks])
            uniq, inverse = np.unique(log_zs, return_inverse=True)
            merged = np.zeros(len(uniq))
            np.add.at(merged, inverse, probs)
            by_state[y] = (uniq, merged)
    states = np.concatenate(
        [np.full(len(v[0]), x, dtype=np.int64) for x, v in by_state.items()]
    )
    log_z = np.concatenate([v[0] for v in by_state.values()])
    prob = np.concatenate([v[1] for v in by_state.values()])
    return PathLaw(
        states=states,
        log_z=log_z,
        prob_h=prob,
        trimmed_h=trimmed_h,
        trimmed_a=trimmed_a,
        trimmed_logz_mass=trimmed_logz_mass,
    )


def enum_bayes_risk(
    params: ParamSet,
    omega0: int,
    n: int,
    cfg: DecisionConfig,
    policy: TruncationPolicy = TruncationPolicy(),
) -> tuple[float, float]:
    """Exact Bayes risk integral min{w_H, w_A Z_n} dP_H over the kept atoms.

    The certified error is w_H times the trimmed hypothesis mass (the
    integrand never exceeds w_H).
    """
    law = path_law_atoms(params, omega0, n, policy)
    risk = float(np.sum(law.prob_h * np.minimum(cfg.weight_h, cfg.weight_a * np.exp(law.log_z))))
    return risk, cfg.weight_h * law.trimmed_h + _ROUNDING_CUSHION * max(risk, 1.0)


def enum_np_type2(
    params: ParamSet,
    omega0: int,
    n: int,
    level: float,
    policy: TruncationPolicy = TruncationPolicy(),
) -> tuple[float, float]:
    """Exact minimal type-II error by randomized likelihood-ratio thresholding.

    Atoms are sorted by likelihood ratio; rejection mass is spent greedily
    under the hypothesis until the level is exhausted, randomizing at the
    threshold atom.  The reported error bound covers both the trimmed
    alternative mass (counted as accepted) and the level the optimal test
    could additionally spend on trimmed paths.
    """
    if not 0.0 < level < 1.0:
        raise GWIError("level must lie in (0, 1)")
    law = path_law_atoms(params, omega0, n, policy)
    log_z, prob_h, trimmed_h = law.log_z, law.prob_h, law.trimmed_h
    prob_a = law.prob_a()
    order = np.argsort(-log_z)
    log_z, prob_h, prob_a = log_z[order], prob_h[order], prob_a[order]
    cum_h = np.cumsum(prob_h)
    idx = int(np.searchsorted(cum_h, level, side="left"))
    if idx >= len(prob_h):
        # level exceeds the kept hypothesis mass: reject every kept atom
        rejected_a = prob_a.sum()
        z_threshold = math.exp(log_z[-1]) if len(log_z) else 1.0
    else:
        before = cum_h[idx - 1] if idx > 0 else 0.0
        fraction = (level - before) / prob_h[idx]
        rejected_a = prob_a[:idx].sum() + fraction * prob_a[idx]
        z_threshold = math.exp(log_z[idx])
    type2 = min(max(1.0 - float(rejected_a), 0.0), 1.0)
    missing_a = max(1.0 - float(prob_a.sum()), 0.0)
    return type2, missing_a + z_threshold * trimmed_h + _ROUNDING_CUSHION


def enum_relative_entropy(
    params: ParamSet,
    omega0: int,
    n: int,
    policy: TruncationPolicy = TruncationPolicy(),
) -> tuple[float, float]:
    """Relative entropy sum of Z_n log Z_n dP_H over the kept atoms.

    Expansions cover the Poisson tails of both conditional laws, so both
    trimmed masses are within the budget; the error estimate scales their
    sum by the largest kept |log Z|.  The integrand on trimmed paths is not
    rigorously bounded, so this is an estimate rather than a certificate;
    at desk scale with the default budget it sits orders of magnitude below
    the bound gaps.
    """
    law = path_law_atoms(params, omega0, n, policy)
    value = float(np.sum(law.prob_a() * law.log_z))
    err = (
        law.trimmed_logz_mass
        + law.trimmed_a
        + law.trimmed_h
        + _ROUNDING_CUSHION * (abs(value) + 1.0)
    )
    return value, err
