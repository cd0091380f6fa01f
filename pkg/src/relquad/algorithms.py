"""The public integrators.

``int_naive`` is doubly adaptive: every interval carries a rule degree from
the ladder n0, 2*n0, ..., n0*2^d_max (default 4/8/16/32) and the worst
interval first exhausts the ladder — reusing nested node values — before it
is bisected back to the lowest degree.  Its error estimate is the
coefficient distance between consecutive fits.

``int_refined`` works at a single degree (default 10) and bisects
immediately, but models the actual interpolation error: it extracts a proxy
for the (n+1)st derivative from the change in coefficients relative to the
change in Newton polynomials, validates the smoothness assumption pointwise,
and falls back to the plain difference norm where the integrand is not
smooth enough for the model.

``int_simpson_baseline`` is the classic recursive adaptive Simpson scheme
with tolerance halving; it is deliberately unguarded (no floors, no
divergence detection) and serves as the comparison baseline the two
integrators are designed to beat on reliability.

All three return a ``QuadResult`` whose eps is the total (heap + excess)
error estimate and whose status reports Converged / ToleranceNotMet /
Divergent honestly; NaN/Inf integrand values are data (masked and downdated
away), never propagated into q or eps by the two coefficient-based methods.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from relquad.basis import RuleStencil, get_stencil
from relquad.engine import (
    AdaptiveState,
    DivergentIntegral,
    EngineConfig,
    IntervalRecord,
    QuadResult,
    Status,
    accumulate_excess,
    divergence_update,
    enforce_heap_cap,
    select_worst,
    should_drop,
)
from relquad.errest import refined_error
from relquad.interp import (
    CountedFunction,
    SampleVector,
    fit,
    integral,
    sample,
    transfer_to_child,
)

__all__ = [
    "NaiveConfig",
    "RefinedConfig",
    "int_naive",
    "int_refined",
    "int_simpson_baseline",
    "divergence_ratio_probe",
]


@dataclass
class NaiveConfig:
    n0: int = 4
    d_max: int = 3
    hint: float = 0.1
    engine: EngineConfig | None = None

    def __post_init__(self):
        if self.n0 < 2:
            raise ValueError("n0 must be at least 2")
        if self.d_max < 1:
            raise ValueError("d_max must be at least 1")
        if not 0.0 < self.hint < 1.0:
            raise ValueError("hint must be in (0, 1)")

    def degree(self, d: int) -> int:
        return self.n0 * 2 ** d


@dataclass
class RefinedConfig:
    n: int = 10
    theta1: float = 1.1
    engine: EngineConfig | None = None

    def __post_init__(self):
        if self.n < 4:
            raise ValueError("n must be at least 4")
        if self.theta1 < 1.0:
            raise ValueError("theta1 must be at least 1")


def _engine_cfg(tau: float, base: EngineConfig | None) -> EngineConfig:
    """The explicit tolerance argument wins over any tau in the config."""
    if base is None:
        return EngineConfig(tau=tau)
    return EngineConfig(tau=tau, heap_cap=base.heap_cap,
                        nr_divmax=base.nr_divmax, eps_mach=base.eps_mach,
                        max_neval=base.max_neval)


def _status(total_eps: float, tau: float) -> Status:
    return Status.CONVERGED if total_eps <= tau else Status.TOLERANCE_NOT_MET


def _result(state: AdaptiveState, fn: CountedFunction, tau: float,
            status: Status | None = None) -> QuadResult:
    q, eps = state.totals()
    return QuadResult(q=q, eps=eps, neval=fn.count,
                      status=status if status is not None else _status(eps, tau))


# ---------------------------------------------------------------------------
# doubly adaptive integrator (degree ladder + bisection)
# ---------------------------------------------------------------------------

def _even_subsample(sv: SampleVector, n_lo: int) -> SampleVector:
    """Sample vector of the degree-n_lo rule extracted from a degree-2*n_lo
    sample: even-indexed nodes coincide by Chebyshev nesting."""
    f = sv.f[::2].copy()
    mask = tuple(i // 2 for i in sv.nan_mask if i % 2 == 0)
    return SampleVector(f=f, nan_mask=mask)


def _naive_split(state: AdaptiveState, rec: IntervalRecord, fn,
                 ncfg: NaiveConfig, ecfg: EngineConfig) -> None:
    """Bisect into two lowest-degree children with endpoint value reuse."""
    st_par = get_stencil(ncfg.degree(rec.d))
    st0 = get_stencil(ncfg.n0)
    mid = 0.5 * (rec.a + rec.b)
    h = 0.5 * (rec.b - rec.a)
    n_par = st_par.n
    for side, ca, cb in (("left", rec.a, mid), ("right", mid, rec.b)):
        if side == "left":
            reuse = {0: rec.samples.raw(n_par // 2), st0.n: rec.samples.raw(n_par)}
        else:
            reuse = {0: rec.samples.raw(0), st0.n: rec.samples.raw(n_par // 2)}
        sv = sample(fn, ca, cb, st0, reuse=reuse)
        cv = fit(sv, st0)
        q = integral(cv, ca, cb)
        nr_div = divergence_update(q, rec.q_base, rec, ecfg)
        xfer = transfer_to_child(rec.coeffs, side, st_par)
        eps = h * float(np.linalg.norm(cv.c - xfer.c[: st0.n + 1]))
        state.push(IntervalRecord(
            a=ca, b=cb, coeffs=cv, q=q, eps=eps, q_base=q,
            nr_div=nr_div, nr_rec=rec.nr_rec + 1, d=0, samples=sv))


def int_naive(integrand, a: float, b: float, tau: float,
              config: NaiveConfig | None = None) -> QuadResult:
    """Doubly adaptive quadrature over [a, b] to absolute tolerance tau."""
    ncfg = config if config is not None else NaiveConfig()
    ecfg = _engine_cfg(tau, ncfg.engine)
    fn = integrand if isinstance(integrand, CountedFunction) else CountedFunction(integrand)

    st_top = get_stencil(ncfg.degree(ncfg.d_max))
    st_lo = get_stencil(ncfg.degree(ncfg.d_max - 1))
    sv = sample(fn, a, b, st_top)
    c_top = fit(sv, st_top)
    c_lo = fit(_even_subsample(sv, st_lo.n), st_lo)
    q0 = integral(c_top, a, b)
    h0 = 0.5 * (b - a)
    eps0 = h0 * float(np.linalg.norm(
        c_top.c - np.concatenate([c_lo.c, np.zeros(st_top.n - st_lo.n)])))

    state = AdaptiveState()
    state.push(IntervalRecord(a=a, b=b, coeffs=c_top, q=q0, eps=eps0,
                              q_base=q0, d=ncfg.d_max, samples=sv))
    try:
        while state.heap and state.heap_eps() > tau:
            if ecfg.max_neval is not None and fn.count >= ecfg.max_neval:
                return _result(state, fn, tau, Status.TOLERANCE_NOT_MET)
            rec = select_worst(state)
            st_cur = get_stencil(ncfg.degree(rec.d))
            if should_drop(rec, st_cur, ecfg):
                accumulate_excess(state, rec)
                continue
            if rec.d < ncfg.d_max:
                # one step up the degree ladder, reusing nested node values
                st_hi = get_stencil(ncfg.degree(rec.d + 1))
                reuse = {2 * i: rec.samples.raw(i) for i in range(st_cur.n + 1)}
                sv_hi = sample(fn, rec.a, rec.b, st_hi, reuse=reuse)
                cv_hi = fit(sv_hi, st_hi)
                h = 0.5 * (rec.b - rec.a)
                diff = float(np.linalg.norm(
                    cv_hi.c - np.concatenate([rec.coeffs.c,
                                              np.zeros(st_hi.n - st_cur.n)])))
                rec.d += 1
                rec.samples = sv_hi
                rec.coeffs = cv_hi
                rec.q = integral(cv_hi, rec.a, rec.b)
                rec.eps = h * diff
                norm_hi = float(np.linalg.norm(cv_hi.c))
                # relative coefficient change: a large jump even at the new
                # degree means the ladder is not converging here — bisect
                split = diff > ncfg.hint * norm_hi if norm_hi > 0.0 else diff > 0.0
                if split:
                    _naive_split(state, rec, fn, ncfg, ecfg)
                else:
                    state.push(rec)
            else:
                _naive_split(state, rec, fn, ncfg, ecfg)
            enforce_heap_cap(state, ecfg)
    except DivergentIntegral:
        return _result(state, fn, tau, Status.DIVERGENT)
    return _result(state, fn, tau)


# ---------------------------------------------------------------------------
# refined integrator (fixed degree, derivative-extracting estimate)
# ---------------------------------------------------------------------------

def _refined_child(fn, rec: IntervalRecord, side: str, st: RuleStencil,
                   theta1: float, ecfg: EngineConfig) -> IntervalRecord:
    """Fit one half of rec and estimate its error against the parent."""
    mid = 0.5 * (rec.a + rec.b)
    h = 0.5 * (rec.b - rec.a)
    n = st.n
    if side == "left":
        ca, cb = rec.a, mid
        reuse = {0: rec.samples.raw(n // 2), n: rec.samples.raw(n)}
        T, Tf = st.t_left, st.t_left_full
    else:
        ca, cb = mid, rec.b
        reuse = {0: rec.samples.raw(0), n: rec.samples.raw(n // 2)}
        T, Tf = st.t_right, st.t_right_full
    sv = sample(fn, ca, cb, st, reuse=reuse)
    cv = fit(sv, st)
    q = integral(cv, ca, cb)
    nr_div = divergence_update(q, rec.q, rec, ecfg)
    c_xfer = transfer_to_child(rec.coeffs, side, st)
    # re-normalize the parent Newton polynomial to monic in child coords
    b_xfer = 2.0 ** (rec.coeffs.eff_degree + 1) * (Tf @ rec.coeffs.newton)
    est = refined_error(cv, c_xfer, cv.newton, b_xfer, sv,
                        st.P @ c_xfer.c, st.p_newton @ b_xfer,
                        theta1=theta1, halfwidth=h)
    return IntervalRecord(a=ca, b=cb, coeffs=cv, q=q, eps=est.eps, q_base=q,
                          nr_div=nr_div, nr_rec=rec.nr_rec + 1, samples=sv)


def int_refined(integrand, a: float, b: float, tau: float,
                config: RefinedConfig | None = None) -> QuadResult:
    """Fixed-degree adaptive quadrature over [a, b] to absolute tolerance
    tau, with the derivative-extracting error estimate."""
    rcfg = config if config is not None else RefinedConfig()
    ecfg = _engine_cfg(tau, rcfg.engine)
    fn = integrand if isinstance(integrand, CountedFunction) else CountedFunction(integrand)

    st = get_stencil(rcfg.n)
    sv = sample(fn, a, b, st)
    cv = fit(sv, st)
    q0 = integral(cv, a, b)
    eps0 = float(np.finfo(float).max)  # pessimistic: force the first split

    state = AdaptiveState()
    state.push(IntervalRecord(a=a, b=b, coeffs=cv, q=q0, eps=eps0,
                              q_base=q0, samples=sv))
    try:
        while state.heap and state.heap_eps() > tau:
            if ecfg.max_neval is not None and fn.count >= ecfg.max_neval:
                return _result(state, fn, tau, Status.TOLERANCE_NOT_MET)
            rec = select_worst(state)
            if should_drop(rec, st, ecfg):
                accumulate_excess(state, rec)
                continue
            for side in ("left", "right"):
                state.push(_refined_child(fn, rec, side, st,
                                          rcfg.theta1, ecfg))
            enforce_heap_cap(state, ecfg)
    except DivergentIntegral:
        return _result(state, fn, tau, Status.DIVERGENT)
    return _result(state, fn, tau)


# ---------------------------------------------------------------------------
# classic adaptive Simpson baseline
# ---------------------------------------------------------------------------

def int_simpson_baseline(integrand, a: float, b: float, tau: float,
                         max_neval: int = 100_000,
                         max_depth: int = 50) -> QuadResult:
    """Recursive adaptive Simpson with tolerance halving and the |S2-S1|/15
    accept test; no floors, no non-numeric handling, no divergence guard."""
    fn = integrand if isinstance(integrand, CountedFunction) else CountedFunction(integrand)
    with np.errstate(all="ignore"):
        fa, fb = fn(a), fn(b)
        m = 0.5 * (a + b)
        fm = fn(m)
        capped = False

        def recurse(x0, x2, f0, f1, f2, s1, tol, depth):
            # s1 = Simpson estimate over [x0, x2] with midpoint f1
            nonlocal capped
            xm = 0.5 * (x0 + x2)
            if fn.count + 2 > max_neval:
                capped = True
                return s1, 0.0
            xl = 0.5 * (x0 + xm)
            xr = 0.5 * (xm + x2)
            fl, fr = fn(xl), fn(xr)
            h = x2 - x0
            s_left = h / 12.0 * (f0 + 4.0 * fl + f1)
            s_right = h / 12.0 * (f1 + 4.0 * fr + f2)
            s2 = s_left + s_right
            err = (s2 - s1) / 15.0
            if abs(err) <= tol or depth >= max_depth:
                return s2 + err, abs(err)
            ql, el = recurse(x0, xm, f0, fl, f1, s_left, 0.5 * tol, depth + 1)
            qr, er = recurse(xm, x2, f1, fr, f2, s_right, 0.5 * tol, depth + 1)
            return ql + qr, el + er

        s1 = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
        q, eps = recurse(a, b, fa, fm, fb, s1, tau, 0)
    if capped:
        status = Status.TOLERANCE_NOT_MET
    elif np.isfinite(q) and eps <= tau:
        status = Status.CONVERGED
    else:
        status = Status.TOLERANCE_NOT_MET
    return QuadResult(q=float(q), eps=float(eps), neval=fn.count, status=status)


# ---------------------------------------------------------------------------
# divergence-ratio probe
# ---------------------------------------------------------------------------

def divergence_ratio_probe(alpha: float, h: float = 1.0) -> tuple[float, float]:
    """Ratios diagnosing non-integrable endpoint singularities.

    Computes the refined error estimate and integral estimate for x**alpha
    on [0, h] treated as the left child of [0, 2h], and again on [0, h/2] as
    the left child of [0, h], and returns (eps_ratio, q_ratio) of the inner
    to the outer.  For integrable singularities (alpha > -1) both ratios are
    below 1 — bisection makes progress; at alpha = -1 the error ratio is 1;
    beyond it the estimates grow toward the singularity.
    """
    if not -2.0 <= alpha < 0.0:
        raise ValueError("alpha must be in [-2, 0)")
    if not h > 0.0:
        raise ValueError("h must be positive")
    st = get_stencil(10)

    def integrand(x: float) -> float:
        with np.errstate(all="ignore"):
            return float(np.power(x, alpha))

    def left_child_estimate(a0: float, b0: float) -> tuple[float, float]:
        fn = CountedFunction(integrand)
        sv_par = sample(fn, a0, b0, st)
        cv_par = fit(sv_par, st)
        parent = IntervalRecord(a=a0, b=b0, coeffs=cv_par,
                                q=integral(cv_par, a0, b0), eps=0.0,
                                q_base=0.0, samples=sv_par)
        child = _refined_child(fn, parent, "left", st, 1.1,
                               EngineConfig(tau=1.0, nr_divmax=10 ** 9))
        return child.eps, child.q

    eps_outer, q_outer = left_child_estimate(0.0, 2.0 * h)   # -> [0, h]
    eps_inner, q_inner = left_child_estimate(0.0, h)          # -> [0, h/2]
    return eps_inner / eps_outer, q_inner / q_outer
