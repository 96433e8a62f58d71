//! Norm-type functionals on weighted Bergman spaces: Bergman quasinorms with
//! weight modifiers, the Littlewood–Paley ratio, Bloch-type and growth
//! seminorms, the Pavlović-type growth ratio, the `Q^{σ,ℓ}` functional and the
//! Lipschitz quotient for `β_φ`.
//!
//! Area measure is normalised, `dA = dx dy / π`, so radial integrals carry `2r dr`.

use crate::error::{Error, Result};
use crate::paraproducts::{apply_word, Letter, Word};
use crate::quad::{chebyshev_breaks, clustered_breaks, golden_max, log_integrate, log_sum_exp};
use crate::series::TruncatedSeries;
use crate::weights::WeightEval;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::cell::Cell;
use std::f64::consts::{LN_2, PI};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Angular nodes per unit of degree at the first level (`≥ 16`).
    pub angular_base: usize,
    pub radial_rel_tol: f64,
    /// Maximal number of doublings of any grid.
    pub max_refine: usize,
    /// Log-underflow cutoff for the weight factor.
    pub r_floor_log: f64,
    /// Radii in the first sweep of a supremum.
    pub sup_grid: usize,
    /// Accepted relative gap between a grid maximum and its polished value.
    pub sup_rel_tol: f64,
    /// Panel budget of the radial integrator.
    pub max_panels: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            angular_base: 16,
            radial_rel_tol: 1e-10,
            max_refine: 6,
            r_floor_log: -700.0,
            sup_grid: 128,
            sup_rel_tol: 1e-3,
            max_panels: 2000,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.angular_base < 16 {
            return Err(Error::InvalidArgument("angular_base must be >= 16".into()));
        }
        if !(self.radial_rel_tol > 0.0 && self.radial_rel_tol <= 1e-3) {
            return Err(Error::InvalidArgument("radial_rel_tol must lie in (0, 1e-3]".into()));
        }
        if !(self.r_floor_log < 0.0) || self.sup_grid < 4 {
            return Err(Error::InvalidArgument("bad floor or sup grid".into()));
        }
        Ok(())
    }

    /// One refinement step: every grid doubled, radial tolerance tightened.
    pub fn doubled(&self) -> Self {
        QuadratureConfig {
            angular_base: self.angular_base * 2,
            radial_rel_tol: (self.radial_rel_tol / 16.0).max(1e-14),
            sup_grid: self.sup_grid * 2,
            max_panels: self.max_panels * 2,
            ..*self
        }
    }
}

/// Extra weight factors `(1+φ')^β τ^γ ω^q` in a Bergman integral.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightModifier {
    pub beta: f64,
    pub gamma: f64,
    /// Exponent on `ω`.
    pub p_half_exponent: f64,
}

impl WeightModifier {
    /// `ω^{p/2}`: the plain `A^p_{ω_p}` norm.
    pub fn plain(p: f64) -> Self {
        WeightModifier {
            beta: 0.0,
            gamma: 0.0,
            p_half_exponent: p / 2.0,
        }
    }

    /// `ω^{p/2} (1+φ')^{-p}`, the derivative weight of the Littlewood–Paley formula.
    pub fn littlewood_paley(p: f64) -> Self {
        WeightModifier {
            beta: -p,
            gamma: 0.0,
            p_half_exponent: p / 2.0,
        }
    }
}

/// A numeric value with its refinement record.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub value: f64,
    /// Relative change at the final refinement.
    pub last_delta: f64,
    pub levels_used: usize,
    pub converged: bool,
}

impl NormEstimate {
    pub fn exact(value: f64) -> Self {
        NormEstimate {
            value,
            last_delta: 0.0,
            levels_used: 0,
            converged: true,
        }
    }
}

impl fmt::Display for NormEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ± {:e} (levels={}, converged={})",
            self.value, self.last_delta, self.levels_used, self.converged
        )
    }
}

fn check_p(p: f64) -> Result<()> {
    if p.is_finite() && p > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("p must be positive, got {p}")))
    }
}

/// Log of the angular mean of `exp(sample_j)` over `m` equispaced nodes,
/// doubling `m` until two levels agree to `tol`. `sample(m)` returns the
/// log-integrand at `θ_j = 2πj/m`.
fn log_angular_mean<S: Fn(usize) -> Vec<f64>>(
    sample: &S,
    m0: usize,
    tol: f64,
    max_refine: usize,
) -> (f64, f64, usize, bool) {
    let mut m = m0;
    let mut prev = {
        let v = sample(m);
        log_sum_exp(v) - (m as f64).ln()
    };
    for level in 1..=max_refine {
        m *= 2;
        let cur = log_sum_exp(sample(m)) - (m as f64).ln();
        let delta = if cur == prev {
            0.0
        } else {
            (cur - prev).exp_m1().abs()
        };
        if delta <= tol || (cur == f64::NEG_INFINITY && prev == f64::NEG_INFINITY) {
            return (cur, delta, level, true);
        }
        prev = cur;
    }
    (prev, f64::NAN, max_refine, false)
}

/// `Some(k)` when `x` is a positive integer `k` (to rounding).
fn as_half_integer_power(x: f64) -> Option<usize> {
    let k = x.round();
    (k >= 1.0 && (x - k).abs() <= 1e-12).then_some(k as usize)
}

/// Log of the exact angular mean of a trigonometric polynomial of degree
/// `< m` given in log form at `m` equispaced nodes.
fn log_exact_mean(log_samples: Vec<f64>) -> f64 {
    let m = log_samples.len() as f64;
    log_sum_exp(log_samples) - m.ln()
}

/// Radial integral `(∫_0^{r_hi} 2r A(r) W(r) dr)^{1/p}` with `A` supplied in log form.
fn radial_norm<A: Fn(f64) -> f64>(
    w: &WeightEval,
    p: f64,
    m: WeightModifier,
    cfg: &QuadratureConfig,
    log_angular: A,
) -> Result<(f64, f64, bool)> {
    if !(m.p_half_exponent > 0.0) {
        return Err(Error::InvalidArgument("weight exponent must be positive".into()));
    }
    let r_hi = w.phi_inverse(-cfg.r_floor_log / (2.0 * m.p_half_exponent));
    if r_hi <= 0.0 {
        return Err(Error::InvalidArgument("weight underflows at the origin".into()));
    }
    let log_f = |r: f64| {
        if r <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let j = w.jet_unchecked(r);
        let mut v = LN_2 + r.ln() - 2.0 * m.p_half_exponent * j.phi();
        if m.beta != 0.0 {
            v += m.beta * j.log_one_plus_dphi();
        }
        if m.gamma != 0.0 {
            v += m.gamma * j.log_tau();
        }
        if v == f64::NEG_INFINITY {
            return v;
        }
        v + log_angular(r)
    };
    let q = log_integrate(log_f, &clustered_breaks(r_hi, 32), cfg.radial_rel_tol, cfg.max_panels);
    Ok((q.log_value / p, q.rel_err / p, q.converged))
}

/// `‖f‖` in `L^p(ω^q (1+φ')^β τ^γ dA)`.
///
/// For `p = 2` with the plain weight the angular mean is the exact
/// `Σ |f_k|² r^{2k}`; otherwise an FFT trapezoid rule on `|f|^p`, starting at
/// `angular_base · (deg + 1)` nodes and doubled until stable.
pub fn bergman_norm(
    f: &TruncatedSeries,
    w: &WeightEval,
    p: f64,
    m: WeightModifier,
    cfg: &QuadratureConfig,
) -> Result<NormEstimate> {
    check_p(p)?;
    cfg.validate()?;
    if f.is_zero() {
        return Ok(NormEstimate::exact(0.0));
    }
    let f = f.trimmed();
    let levels = Cell::new(0usize);
    let ang_ok = Cell::new(true);
    let ang_delta = Cell::new(0.0f64);
    // The weight is radial, so for p = 2 the angular mean `Σ |f_k|² r^{2k}` is
    // exact for any modifier. Summed as `r^{2k0} · scale · Σ (|f_k|²/scale) r^{2(k-k0)}`
    // with `k0` the lowest nonzero index: positive terms, constant term nonzero.
    let exact_mean = p == 2.0;
    let sq: Vec<f64> = f.coeffs().iter().map(|c| c.norm_sqr()).collect();
    let k0 = sq.iter().position(|&v| v > 0.0).unwrap_or(0);
    let sq_max = sq.iter().copied().fold(0.0, f64::max);
    let scaled: Vec<f64> = sq[k0..].iter().map(|v| v / sq_max).collect();
    let angular = |r: f64| -> f64 {
        if exact_mean {
            let x = r * r;
            let h = scaled.iter().rev().fold(0.0, |acc, c| acc * x + c);
            return sq_max.ln() + k0 as f64 * x.ln() + h.ln();
        }
        let deg = f.effective_degree(r);
        let sample = |mm: usize| -> Vec<f64> {
            f.sample_circle(r, mm)
                .iter()
                .map(|v| p * v.norm().ln())
                .collect()
        };
        // |f|^p with p/2 integral is a trigonometric polynomial of degree (p/2)·deg.
        if let Some(b) = as_half_integer_power(p / 2.0) {
            return log_exact_mean(sample(b * deg + 1));
        }
        let (v, d, lv, ok) = log_angular_mean(
            &sample,
            cfg.angular_base * (deg + 1),
            0.1 * cfg.radial_rel_tol,
            cfg.max_refine,
        );
        levels.set(levels.get().max(lv));
        ang_ok.set(ang_ok.get() && ok);
        if d.is_finite() {
            ang_delta.set(ang_delta.get().max(d / p));
        }
        v
    };
    let (log_norm, rad_err, rad_ok) = radial_norm(w, p, m, cfg, angular)?;
    Ok(NormEstimate {
        value: log_norm.exp(),
        last_delta: rad_err.max(ang_delta.get()),
        levels_used: levels.get(),
        converged: rad_ok && ang_ok.get(),
    })
}

/// `(|f(0)|^p + ‖f'‖^p_{ω^{p/2}(1+φ')^{-p}}) / ‖f‖^p_{ω^{p/2}}`.
pub fn lp_ratio(f: &TruncatedSeries, w: &WeightEval, p: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if f.is_zero() {
        return Err(Error::InvalidArgument("lp_ratio needs f != 0".into()));
    }
    let num_d = bergman_norm(&f.derivative(), w, p, WeightModifier::littlewood_paley(p), cfg)?;
    let den = bergman_norm(f, w, p, WeightModifier::plain(p), cfg)?;
    if !(num_d.converged && den.converged) {
        return Err(Error::NotConverged("lp_ratio".into()));
    }
    Ok((f.coeff(0).norm().powf(p) + num_d.value.powf(p)) / den.value.powf(p))
}

/// Max over `θ` of a circle profile given by equispaced samples and a
/// pointwise evaluator; grid doubled until the polished value is stable to 1e-9.
fn circle_max<S, P>(deg: usize, sample: S, point: P) -> f64
where
    S: Fn(usize) -> Vec<f64>,
    P: Fn(f64) -> f64,
{
    let mut m = 16 * (deg + 1);
    let mut prev = f64::NAN;
    for _ in 0..6 {
        let vals = sample(m);
        let (best, grid_max) = vals
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
        let h = 2.0 * PI / m as f64;
        let t0 = best as f64 * h;
        let (_, pol) = golden_max(&point, t0 - h, t0 + h, 1e-12);
        let v = pol.max(grid_max);
        if (v - prev).abs() <= 1e-9 * v.abs().max(f64::MIN_POSITIVE) {
            return v.max(prev);
        }
        prev = v;
        m *= 2;
    }
    prev
}

/// Supremum of a nonnegative radial profile over `[0, r_hi]`: Chebyshev grid
/// clustered at both ends, then golden-section polishing around the best node.
/// `last_delta` is the relative gain of the polish over the grid maximum; the
/// grid is doubled until that gain is below `sup_rel_tol`.
pub(crate) fn radial_sup<F: Fn(f64) -> f64>(profile: F, r_hi: f64, cfg: &QuadratureConfig) -> (f64, f64, NormEstimate) {
    let mut n = cfg.sup_grid;
    let mut out = (0.0, 0.0, NormEstimate::exact(0.0));
    for level in 0..=cfg.max_refine {
        let grid = chebyshev_breaks(r_hi, n);
        let vals: Vec<f64> = grid.iter().map(|&r| profile(r)).collect();
        let (i, gmax) = vals
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
        if gmax <= 0.0 {
            return (0.0, 0.0, NormEstimate::exact(0.0));
        }
        let lo = grid[i.saturating_sub(1)];
        let hi = grid[(i + 1).min(grid.len() - 1)];
        let (arg, pol) = golden_max(&profile, lo, hi, 1e-13 * r_hi.max(1e-3));
        let (arg, best) = if pol >= gmax { (arg, pol) } else { (grid[i], gmax) };
        let delta = (best - gmax) / best;
        out = (
            best,
            arg,
            NormEstimate {
                value: best,
                last_delta: delta,
                levels_used: level + 1,
                converged: delta <= cfg.sup_rel_tol,
            },
        );
        if delta <= cfg.sup_rel_tol {
            break;
        }
        n *= 2;
    }
    out
}

/// Smallest `r` with `denominator(r) ≥ threshold` for an increasing denominator
/// (bisection), or the largest representable radius if never reached.
fn radius_where<D: Fn(f64) -> f64>(denominator: D, threshold: f64) -> f64 {
    if denominator(0.0) >= threshold {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0, 1.0 - f64::EPSILON);
    if denominator(hi) < threshold {
        return hi;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if denominator(mid) >= threshold {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Sup of `numerator(r) / denominator(r)` where the numerator is bounded by
/// `bound` and the denominator increases to infinity: a coarse sweep up to
/// `r_probe` fixes a provisional maximum, beyond which radius the quotient
/// cannot exceed it.
fn bounded_quotient_sup<N, D>(
    numerator: N,
    denominator: D,
    bound: f64,
    r_probe: f64,
    cfg: &QuadratureConfig,
) -> (f64, f64, NormEstimate)
where
    N: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let profile = |r: f64| {
        let d = denominator(r);
        if !d.is_finite() {
            return 0.0;
        }
        numerator(r) / d
    };
    let provisional = chebyshev_breaks(r_probe, 32)
        .iter()
        .map(|&r| profile(r))
        .fold(0.0, f64::max);
    if provisional <= 0.0 {
        return (0.0, 0.0, NormEstimate::exact(0.0));
    }
    let r_star = radius_where(&denominator, bound / provisional);
    radial_sup(profile, r_star.max(1e-3), cfg)
}

/// Result of a seminorm computation with the radius where the sup is attained.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupEstimate {
    pub estimate: NormEstimate,
    pub argmax_radius: f64,
}

/// `‖g‖_{B^q_φ} = (sup_z q |g|^{q-1} |g'| / (1 + φ'(|z|)))^{1/q}`.
pub fn bloch_seminorm(g: &TruncatedSeries, w: &WeightEval, q: f64, cfg: &QuadratureConfig) -> Result<NormEstimate> {
    Ok(bloch_seminorm_detailed(g, w, q, cfg)?.estimate)
}

pub fn bloch_seminorm_detailed(
    g: &TruncatedSeries,
    w: &WeightEval,
    q: f64,
    cfg: &QuadratureConfig,
) -> Result<SupEstimate> {
    if !(q >= 1.0 && q.is_finite()) {
        return Err(Error::InvalidArgument(format!("q must be >= 1, got {q}")));
    }
    cfg.validate()?;
    let g = g.trimmed();
    let dg = g.derivative();
    if dg.is_zero() {
        return Ok(SupEstimate {
            estimate: NormEstimate::exact(0.0),
            argmax_radius: 0.0,
        });
    }
    let deg = g.degree().unwrap_or(0);
    let numerator = |r: f64| -> f64 {
        let val = |gz: Complex64, dz: Complex64| -> f64 {
            if q == 1.0 {
                dz.norm()
            } else {
                q * gz.norm().powf(q - 1.0) * dz.norm()
            }
        };
        let sample = |m: usize| -> Vec<f64> {
            let a = g.sample_circle(r, m);
            let b = dg.sample_circle(r, m);
            a.iter().zip(&b).map(|(x, y)| val(*x, *y)).collect()
        };
        let point = |t: f64| {
            let z = Complex64::from_polar(r, t);
            val(g.evaluate(z), dg.evaluate(z))
        };
        if r == 0.0 {
            return point(0.0);
        }
        circle_max(deg, sample, point)
    };
    let denominator = |r: f64| 1.0 + w.jet_unchecked(r).dphi();
    let bound = q * g.l1_norm().powf(q - 1.0) * dg.l1_norm();
    let (v, arg, mut est) = bounded_quotient_sup(numerator, denominator, bound, w.r_cut(), cfg);
    est.value = v.powf(1.0 / q);
    est.last_delta /= q;
    Ok(SupEstimate {
        estimate: est,
        argmax_radius: arg,
    })
}

/// `‖g‖_{H^{∞,q}_φ} = (sup_r M_∞(r, g)^q / φ(r))^{1/q}`.
pub fn growth_norm(g: &TruncatedSeries, w: &WeightEval, q: f64, cfg: &QuadratureConfig) -> Result<NormEstimate> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::InvalidArgument(format!("q must be positive, got {q}")));
    }
    cfg.validate()?;
    if g.is_zero() {
        return Ok(NormEstimate::exact(0.0));
    }
    let numerator = |r: f64| g.max_modulus(r.min(1.0)).unwrap_or(f64::NAN).powf(q);
    let bound = g.l1_norm().powf(q);
    let provisional = numerator(0.0) / w.jet_unchecked(0.0).phi();
    let r_probe = w.r_cut();
    let (v, _, mut est) = if provisional > 0.0 {
        let r_star = w.phi_inverse(bound / provisional);
        radial_sup(|r| numerator(r) / w.jet_unchecked(r).phi(), r_star.max(1e-3), cfg)
    } else {
        bounded_quotient_sup(numerator, |r| w.jet_unchecked(r).phi(), bound, r_probe, cfg)
    };
    est.value = v.powf(1.0 / q);
    est.last_delta /= q;
    Ok(est)
}

/// Two sides of the growth characterisation with `ψ_α = (r + φ)^α`:
/// `lhs = sup M_∞(r,g)/ψ_α(r)`, `rhs = |g(0)| + sup M_∞(r,g')/ψ_α'(r)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PavlRatio {
    pub value: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// `g = 0`: value set to 1 by convention.
    pub degenerate: bool,
}

pub fn pavl_ratio(g: &TruncatedSeries, w: &WeightEval, alpha: f64, cfg: &QuadratureConfig) -> Result<PavlRatio> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidArgument(format!("alpha must be positive, got {alpha}")));
    }
    cfg.validate()?;
    if g.is_zero() {
        return Ok(PavlRatio {
            value: 1.0,
            lhs: 0.0,
            rhs: 0.0,
            degenerate: true,
        });
    }
    let dg = g.derivative();
    let psi = |r: f64| r + w.jet_unchecked(r).phi();
    let psi_a = |r: f64| psi(r).powf(alpha);
    let psi_a_prime = |r: f64| alpha * psi(r).powf(alpha - 1.0) * (1.0 + w.jet_unchecked(r).dphi());
    let lhs = bounded_quotient_sup(
        |r| g.max_modulus(r).unwrap_or(f64::NAN),
        psi_a,
        g.l1_norm(),
        w.r_cut(),
        cfg,
    )
    .0;
    let rhs_sup = if dg.is_zero() {
        0.0
    } else {
        bounded_quotient_sup(
            |r| dg.max_modulus(r).unwrap_or(f64::NAN),
            psi_a_prime,
            dg.l1_norm(),
            w.r_cut(),
            cfg,
        )
        .0
    };
    let rhs = g.coeff(0).norm() + rhs_sup;
    Ok(PavlRatio {
        value: lhs / rhs,
        lhs,
        rhs,
        degenerate: false,
    })
}

/// `‖ |g|^{σℓ} T_g^ℓ f ‖_{L^p(ω^{p/2})}` with `σ = num/den`.
///
/// `|g|^{σℓ}` is evaluated as `exp(σℓ log|g|)` and taken as 0 where
/// `|g| < 1e-300`. The angular rule is always refined (the integrand is not analytic).
pub fn q_functional(
    f: &TruncatedSeries,
    g: &TruncatedSeries,
    w: &WeightEval,
    sigma: (u32, u32),
    ell: u32,
    p: f64,
    cfg: &QuadratureConfig,
) -> Result<NormEstimate> {
    check_p(p)?;
    cfg.validate()?;
    if sigma.0 == 0 || sigma.1 == 0 || ell == 0 {
        return Err(Error::InvalidArgument("sigma and ell must be positive".into()));
    }
    let word = Word::new(vec![Letter::T; ell as usize])?;
    let cap = word.required_cap(g, f);
    let h = apply_word(&word, g, f, cap).trimmed();
    if h.is_zero() {
        return Ok(NormEstimate::exact(0.0));
    }
    let g = g.trimmed();
    let exponent = sigma.0 as f64 / sigma.1 as f64 * ell as f64;
    let levels = Cell::new(0usize);
    let ang_ok = Cell::new(true);
    let ang_delta = Cell::new(0.0f64);
    let angular = |r: f64| -> f64 {
        let dh = h.effective_degree(r);
        let dg = g.degree().unwrap_or(0);
        let deg = dh + dg;
        let sample = |m: usize| -> Vec<f64> {
            let gs = g.sample_circle(r, m);
            let hs = h.sample_circle(r, m);
            gs.iter()
                .zip(&hs)
                .map(|(a, b)| {
                    let ga = a.norm();
                    if ga < 1e-300 {
                        f64::NEG_INFINITY
                    } else {
                        p * (exponent * ga.ln() + b.norm().ln())
                    }
                })
                .collect()
        };
        // |g|^{2a} |h|^{2b} with integral a, b is a trigonometric polynomial.
        if let (Some(a), Some(b)) = (as_half_integer_power(p * exponent / 2.0), as_half_integer_power(p / 2.0)) {
            return log_exact_mean(sample(a * dg + b * dh + 1));
        }
        let (v, d, lv, ok) = log_angular_mean(
            &sample,
            cfg.angular_base * (deg + 1),
            0.1 * cfg.radial_rel_tol,
            cfg.max_refine,
        );
        levels.set(levels.get().max(lv));
        ang_ok.set(ang_ok.get() && ok);
        if d.is_finite() {
            ang_delta.set(ang_delta.get().max(d / p));
        }
        v
    };
    let (log_norm, rad_err, rad_ok) = radial_norm(w, p, WeightModifier::plain(p), cfg, angular)?;
    Ok(NormEstimate {
        value: log_norm.exp(),
        last_delta: rad_err.max(ang_delta.get()),
        levels_used: levels.get(),
        converged: rad_ok && ang_ok.get(),
    })
}

/// `| |g(z)|^q − |g(w)|^q | / β_φ(z, w)`.
pub fn lipschitz_quotient(
    g: &TruncatedSeries,
    w: &WeightEval,
    q: f64,
    z: Complex64,
    v: Complex64,
) -> Result<f64> {
    if z == v {
        return Err(Error::DegeneratePair);
    }
    let d = w.beta_distance(z, v)?;
    let num = (g.evaluate(z).norm().powf(q) - g.evaluate(v).norm().powf(q)).abs();
    Ok(num / d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate;

    fn w0() -> WeightEval {
        WeightEval::new("w0:1:1".parse().unwrap())
    }

    #[test]
    fn constant_one_against_oracle() {
        let cfg = QuadratureConfig::default();
        let one = TruncatedSeries::from_real(&[1.0]);
        let est = bergman_norm(&one, &w0(), 2.0, WeightModifier::plain(2.0), &cfg).unwrap();
        assert!(est.converged);
        // Oracle: plain adaptive quadrature of 2 r e^{-2/(1-r²)} on [0, 1).
        let oracle = integrate(|r| 2.0 * r * (-2.0 / (1.0 - r * r)).exp(), 0.0, 1.0 - 1e-12, 1e-13);
        assert!((est.value * est.value - oracle).abs() <= 1e-10 * oracle);
    }

    #[test]
    fn zero_and_homogeneity() {
        let cfg = QuadratureConfig::default();
        let z = TruncatedSeries::zero(3);
        assert_eq!(bergman_norm(&z, &w0(), 3.0, WeightModifier::plain(3.0), &cfg).unwrap().value, 0.0);
        let f = TruncatedSeries::from_real(&[0.5, -1.0, 0.25]);
        let lam = Complex64::new(-1.5, 2.0);
        for p in [1.0, 2.0, 3.0] {
            let a = bergman_norm(&f, &w0(), p, WeightModifier::plain(p), &cfg).unwrap().value;
            let b = bergman_norm(&f.scale(lam), &w0(), p, WeightModifier::plain(p), &cfg).unwrap().value;
            assert!((b - lam.norm() * a).abs() <= 1e-12 * b, "p={p}");
        }
    }

    #[test]
    fn bloch_examples() {
        let cfg = QuadratureConfig::default();
        let z = TruncatedSeries::from_real(&[0.0, 1.0]);
        let c = TruncatedSeries::from_real(&[3.0]);
        assert_eq!(bloch_seminorm(&c, &w0(), 1.0, &cfg).unwrap().value, 0.0);
        let b1 = bloch_seminorm(&z, &w0(), 1.0, &cfg).unwrap();
        assert!((b1.value - 1.0).abs() < 1e-12);
        // q = 2: sup 2r/(1+φ'(r)) against a dense grid.
        let w = w0();
        let dense = (0..=200_000)
            .map(|i| {
                let r = i as f64 / 200_000.0 * 0.999;
                2.0 * r / (1.0 + w.phi_prime(r).unwrap())
            })
            .fold(0.0, f64::max);
        let b2 = bloch_seminorm(&z, &w, 2.0, &cfg).unwrap();
        assert!((b2.value * b2.value - dense).abs() <= 1e-8 * dense);
    }

    #[test]
    fn growth_examples() {
        let cfg = QuadratureConfig::default();
        let one = TruncatedSeries::from_real(&[1.0]);
        assert!((growth_norm(&one, &w0(), 1.0, &cfg).unwrap().value - 1.0).abs() < 1e-14);
        assert_eq!(growth_norm(&TruncatedSeries::zero(2), &w0(), 1.0, &cfg).unwrap().value, 0.0);
        let g = TruncatedSeries::from_real(&[0.2, 1.0, 3.0]);
        let a = growth_norm(&g, &w0(), 2.0, &cfg).unwrap().value;
        let b = growth_norm(&g.scale(Complex64::new(0.0, -3.0)), &w0(), 2.0, &cfg).unwrap().value;
        assert!((b - 3.0 * a).abs() <= 1e-9 * b);
    }

    #[test]
    fn pavl_constant_symbol() {
        let cfg = QuadratureConfig::default();
        let g = TruncatedSeries::from_real(&[2.5]);
        for alpha in [0.5, 1.0, 2.0] {
            let r = pavl_ratio(&g, &w0(), alpha, &cfg).unwrap();
            // ψ_α(0) = φ(0)^α = 1.
            assert!((r.value - 1.0).abs() < 1e-12);
        }
        assert!(pavl_ratio(&TruncatedSeries::zero(1), &w0(), 1.0, &cfg).unwrap().degenerate);
    }

    #[test]
    fn q_functional_radial_case() {
        // σ = 1, ℓ = 1, g = z, f = 1: T_z 1 = z, so the integrand is |z|·|z| = r².
        let cfg = QuadratureConfig::default();
        let z = TruncatedSeries::from_real(&[0.0, 1.0]);
        let one = TruncatedSeries::from_real(&[1.0]);
        let w = w0();
        for p in [1.0, 2.0, 3.0] {
            let est = q_functional(&one, &z, &w, (1, 1), 1, p, &cfg).unwrap();
            let oracle = integrate(
                |r| 2.0 * r * r.powf(2.0 * p) * (-p / (1.0 - r * r)).exp(),
                0.0,
                1.0 - 1e-12,
                1e-13,
            )
            .powf(1.0 / p);
            assert!((est.value - oracle).abs() <= 1e-9 * oracle, "p={p}");
        }
        let c = TruncatedSeries::from_real(&[2.0]);
        assert_eq!(q_functional(&one, &c, &w, (1, 2), 2, 2.0, &cfg).unwrap().value, 0.0);
    }

    #[test]
    fn lipschitz_examples() {
        let w = w0();
        let z = TruncatedSeries::from_real(&[0.0, 1.0]);
        let v = lipschitz_quotient(&z, &w, 1.0, Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.0)).unwrap();
        assert!((v - 0.6).abs() < 1e-13);
        let c = TruncatedSeries::from_real(&[1.0]);
        assert_eq!(lipschitz_quotient(&c, &w, 2.0, Complex64::new(0.1, 0.2), Complex64::new(0.3, 0.0)).unwrap(), 0.0);
        assert_eq!(
            lipschitz_quotient(&z, &w, 1.0, Complex64::new(0.1, 0.0), Complex64::new(0.1, 0.0)),
            Err(Error::DegeneratePair)
        );
    }
}
