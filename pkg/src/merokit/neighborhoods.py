"""Weighted coefficient neighborhoods and inclusion verification.

A weight sequence s_k turns coefficient space into a weighted-l1 metric

    dist(f, g) = sum_k s_k |b_k - a_k|

and the delta-neighborhood of f collects the g within distance delta.
Two weight kinds exist:

* ``plus``    s_k = weight_k / (2 p beta (1 - alpha)), the exact-criterion
              weights normalized by the budget;
* ``general`` s_k = [beta(k + |2 alpha - 1| p) + k + p] phi_k
              / (2 p beta (1 - alpha)), the modulus form used for the
              full class.

The inclusion radius that the operator parameters support is

    delta = (2 lam mu + lam - mu) / (1 + 2 lam mu + lam - mu)
          = 1 - 1/phi_{1-p}(lam, mu, m=1, p)     (identity checked in tests).

``verify_inclusion_plus`` samples the nonnegative-subclass inclusion.
Its stated hypotheses are checked, not assumed: besides f passing the
exact criterion, the premise

    sum_k s_k a_k <= 1 / phi_{1-p}(lam, mu, 1, p)

must hold (the criterion alone gives only <= 1, and the single-term
extremals sit exactly at 1, where inclusion genuinely fails inside the
radius).  A violated premise yields "inconclusive", never a guess.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .membership import (
    FAILS,
    HOLDS,
    INCONCLUSIVE,
    SUM_TOL,
    ClassParams,
    Report,
    budget,
    criterion_weight_array,
    exact_membership_plus,
    numeric_membership,
)
from .operator import OperatorParams, phi_array, phi_base
from .series import LaurentSeries, SampleGrid, default_grid, scale

_KINDS = ("plus", "general")


@dataclass(frozen=True)
class WeightSeq:
    """A neighborhood weight sequence of one of the two kinds."""

    kind: str
    op: OperatorParams
    cp: ClassParams

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"kind: expected one of {_KINDS}, got {self.kind!r}")


def weight(seq: WeightSeq, k: int) -> float:
    return float(weight_array(seq, np.array([k]))[0])


def weight_array(seq: WeightSeq, ks: np.ndarray) -> np.ndarray:
    ks = np.asarray(ks)
    op, cp = seq.op, seq.cp
    denom = budget(op, cp)
    if seq.kind == "plus":
        out = criterion_weight_array(op, cp, ks) / denom
    else:
        bracket = cp.beta * (ks + abs(2.0 * cp.alpha - 1.0) * op.p) + ks + op.p
        out = bracket * phi_array(op, ks) / denom
    if not np.all(np.isfinite(out)):
        raise OverflowError(
            f"weight: not finite at k={ks[~np.isfinite(out)].tolist()} "
            f"(alpha={cp.alpha} too close to 1?)"
        )
    return out


def _aligned(f: LaurentSeries, g: LaurentSeries):
    if f.pole_order != g.pole_order:
        raise ValueError(f"pole_order: mismatch {f.pole_order} != {g.pole_order}")
    if not (f.is_normalized and g.is_normalized):
        raise ValueError("lead: distances are defined between normalized series")
    if f.trunc_order == g.trunc_order:
        return f.coeffs, g.coeffs, f.k_values()
    if not (f.exact_support and g.exact_support):
        raise ValueError(
            "trunc_order: mismatched truncations need exact_support on both series"
        )
    k = max(f.trunc_order, g.trunc_order)
    n = k - (1 - f.pole_order) + 1
    a = np.zeros(n, dtype=np.complex128)
    b = np.zeros(n, dtype=np.complex128)
    a[: len(f.coeffs)] = f.coeffs
    b[: len(g.coeffs)] = g.coeffs
    return a, b, np.arange(1 - f.pole_order, k + 1)


def distance(seq: WeightSeq, f: LaurentSeries, g: LaurentSeries) -> float:
    """Weighted-l1 coefficient distance sum s_k |b_k - a_k|."""
    a, b, ks = _aligned(f, g)
    return float(np.dot(weight_array(seq, ks), np.abs(b - a)))


def in_neighborhood(seq: WeightSeq, f: LaurentSeries, g: LaurentSeries, delta: float) -> bool:
    if not delta > 0:
        raise ValueError(f"delta: must be > 0, got {delta}")
    return distance(seq, f, g) <= delta + SUM_TOL


def delta_star(op: OperatorParams) -> float:
    """The inclusion radius carried by the operator parameters."""
    t = 2.0 * op.lam * op.mu + op.lam - op.mu
    d = t / (1.0 + t)
    if d == 0.0:
        warnings.warn(
            "delta_star: lam = mu = 0 gives a degenerate (zero) radius",
            stacklevel=2,
        )
    return d


def _premise_bound(op: OperatorParams) -> float:
    """1 / phi_{1-p} at m = 1; complements delta_star to exactly 1."""
    return 1.0 / float(phi_base(op, 1 - op.p))


def verify_inclusion_plus(
    op: OperatorParams,
    cp: ClassParams,
    f: LaurentSeries,
    trials: int = 100,
    seed: int = 0,
) -> Report:
    """Sampled check of the nonnegative-subclass inclusion: every g in the
    delta-neighborhood of a premise-satisfying member passes the exact
    criterion, and the sharpness witness just beyond delta fails it."""
    d = delta_star(op)
    if d == 0.0:
        return Report(INCONCLUSIVE, 0.0, None, "degenerate radius delta = 0; nothing to verify")
    base = exact_membership_plus(op, cp, f)
    if base.verdict != HOLDS:
        return Report(
            INCONCLUSIVE, base.worst_margin, None,
            f"base function does not certify the exact criterion ({base.verdict}); "
            "inclusion hypothesis not established",
        )
    seq = WeightSeq("plus", op, cp)
    ks = f.k_values()
    s = weight_array(seq, ks)
    if np.any(s < 0):
        return Report(
            INCONCLUSIVE, float(np.min(s)), None,
            f"negative neighborhood weights at k={ks[s < 0].tolist()}; "
            "the metric hypothesis fails",
        )
    premise = float(np.dot(s, f.coeffs.real))
    bound = _premise_bound(op)
    if premise > bound + SUM_TOL:
        return Report(
            INCONCLUSIVE, bound - premise, None,
            f"premise violated: sum s_k a_k = {premise:.17g} > {bound:.17g}; "
            "inclusion is not implied for this function",
        )
    rng = np.random.default_rng(seed)
    lo = 1 - op.p
    nidx = min(16, len(ks))
    worst = np.inf
    for t in range(trials):
        u = d * rng.uniform(0.0, 1.0)
        mass = rng.dirichlet(np.ones(nidx))
        signs = rng.choice((-1.0, 1.0), size=nidx)
        arr = np.array(f.coeffs.real)
        for j in range(nidx):
            k = lo + j
            if s[j] <= SUM_TOL:
                continue  # degenerate weight: leave that coefficient alone
            arr[j] = max(0.0, arr[j] + signs[j] * u * mass[j] / s[j])
        g = LaurentSeries(op.p, f.trunc_order, arr.astype(complex), 1.0, True)
        rep = exact_membership_plus(op, cp, g)
        if rep.verdict != HOLDS:
            return Report(
                FAILS, rep.worst_margin, t,
                f"sampled neighbor #{t} (seed {seed}) violates the exact criterion "
                f"by {-rep.worst_margin:.3g}",
            )
        worst = min(worst, rep.worst_margin)
    # sharpness: the witness just beyond delta must fail
    from .generators import neighborhood_witnesses  # deferred: avoids import cycle

    ds = d * (1.0 + 1e-9)
    fw, gw = neighborhood_witnesses(op, cp, ds)
    wd = distance(seq, fw, gw)
    wrep = exact_membership_plus(op, cp, gw)
    if wrep.verdict != FAILS:
        return Report(
            FAILS, wrep.worst_margin, -1,
            f"sharpness witness at distance {wd:.17g} unexpectedly passes the criterion",
        )
    detail = (
        f"trials={trials} seed={seed} delta={d:.17g} premise_slack={bound - premise:.3g}; "
        f"witness at delta*={ds:.17g} fails by {-wrep.worst_margin:.3g}"
    )
    if trials == 0:
        detail = "vacuous sampling (trials = 0); " + detail
        return Report(HOLDS, 0.0, None, detail)
    return Report(HOLDS, float(worst), None, detail)


def verify_inclusion_general(
    op: OperatorParams,
    cp: ClassParams,
    f: LaurentSeries,
    delta: float,
    eps_trials: int = 8,
    trials: int = 32,
    grid: SampleGrid | None = None,
    seed: int = 0,
) -> Report:
    """Sampled check of the full-class inclusion statement.

    Phase (a) establishes the hypothesis on sampled eps: each perturbed
    (f + eps z^p)/(1 + eps), |eps| < delta, passes numeric membership
    (eps = 0, i.e. f itself, always included).  Phase (b) samples g in
    the general-weight delta-neighborhood and requires numeric
    membership of each.  Any phase (a) miss is inconclusive (hypothesis
    not established); a phase (b) miss is a failing counterexample.
    """
    if not delta > 0:
        raise ValueError(f"delta: must be > 0, got {delta}")
    if f.trunc_order < op.p:
        raise ValueError(
            f"trunc_order: need at least p={op.p} to represent the eps-shift, got {f.trunc_order}"
        )
    grid = grid or default_grid()
    rng = np.random.default_rng(seed)
    eps_list = [0.0 + 0.0j]
    while len(eps_list) < max(1, eps_trials):
        e = rng.uniform(-1.0, 1.0) + 1j * rng.uniform(-1.0, 1.0)
        if abs(e) < 1.0:
            eps_list.append(delta * e)
    for i, eps in enumerate(eps_list):
        shifted = f.with_coeff(op.p, f.coeff(op.p) + eps)
        g = scale(shifted, 1.0 / (1.0 + eps))
        rep = numeric_membership(op, cp, g, grid)
        if rep.verdict != HOLDS:
            return Report(
                INCONCLUSIVE, rep.worst_margin, None,
                f"hypothesis not established: eps sample #{i} (eps={eps:.6g}, seed {seed}) "
                f"gives {rep.verdict} at witness {rep.witness}",
            )
    seq = WeightSeq("general", op, cp)
    ks = f.k_values()
    s = weight_array(seq, ks)
    lo = 1 - op.p
    nidx = min(16, len(ks))
    worst = np.inf
    worst_witness: complex | None = None
    for t in range(trials):
        u = rng.uniform(0.0, delta)
        mass = rng.dirichlet(np.ones(nidx))
        phases = np.exp(2j * np.pi * rng.uniform(0.0, 1.0, size=nidx))
        arr = np.array(f.coeffs)
        for j in range(nidx):
            if s[j] <= SUM_TOL:
                continue
            arr[j] = arr[j] + u * mass[j] * phases[j] / s[j]
        g = LaurentSeries(op.p, f.trunc_order, arr, 1.0, f.exact_support)
        rep = numeric_membership(op, cp, g, grid)
        if rep.verdict != HOLDS:
            return Report(
                FAILS, rep.worst_margin, rep.witness if rep.witness is not None else t,
                f"sampled neighbor #{t} (seed {seed}) leaves the class: {rep.detail}",
            )
        if rep.worst_margin < worst:
            worst = rep.worst_margin
            worst_witness = rep.witness
    detail = (
        f"eps_trials={len(eps_list)} trials={trials} seed={seed} delta={delta:.17g} "
        f"grid={grid.digest()}"
    )
    if trials == 0:
        return Report(HOLDS, 0.0, None, "vacuous sampling (trials = 0); " + detail)
    return Report(HOLDS, float(worst), worst_witness, detail)
