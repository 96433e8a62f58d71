//! Moments `α_j = 2∫_0^1 r^{2j+1} ω(r) dr` and the reproducing kernel
//! `K_a(w) = Σ_j (ā w)^j / α_j` of `A²_ω`.

use crate::error::{Error, Result};
use crate::norms::{bergman_norm, NormEstimate, QuadratureConfig, WeightModifier};
use crate::quad::{integrate_complex, log_integrate, log_sum_exp};
use crate::series::TruncatedSeries;
use crate::weights::{WeightEval, WeightSpec};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;

/// Relative tolerance of each moment integral.
pub const MOMENT_TOL: f64 = 1e-12;
/// Relative size of the neglected kernel tail that is accepted.
pub const TAIL_TOL: f64 = 1e-10;
/// Largest `|a|` accepted by the kernel sweeps.
pub const A_MAX: f64 = 0.9;

/// `log α_j`, `j = 0..=J`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentTable {
    pub spec: WeightSpec,
    pub log_alpha: Vec<f64>,
}

impl MomentTable {
    /// Largest stored index `J`.
    pub fn j_max(&self) -> usize {
        self.log_alpha.len() - 1
    }

    /// Restriction to `j ≤ j_max`.
    pub fn truncated(&self, j_max: usize) -> MomentTable {
        MomentTable {
            spec: self.spec,
            log_alpha: self.log_alpha[..=j_max.min(self.j_max())].to_vec(),
        }
    }

    /// Checks the invariants (finite, strictly decreasing); used for tables read from disk.
    pub fn validate(&self) -> Result<()> {
        if self.log_alpha.is_empty() {
            return Err(Error::TableTooShort { needed: 1, have: 0 });
        }
        if let Some(j) = self.log_alpha.iter().position(|v| !v.is_finite()) {
            return Err(Error::NotConverged(format!("moment {j} is not finite")));
        }
        if let Some(j) = self.log_alpha.windows(2).position(|w| w[1] >= w[0]) {
            return Err(Error::MomentsNotMonotone(j + 1));
        }
        Ok(())
    }
}

/// Log of one moment. The integrand `r^{2j+1} ω(r)` is unimodal; its peak
/// (root of `(2j+1)/r = 2φ'(r)`) and width seed the adaptive panels, and the
/// range stops where the integrand is `e^{-750}` below its peak.
pub fn log_moment(w: &WeightEval, j: usize) -> Result<f64> {
    let e = (2 * j + 1) as f64;
    let log_f = |r: f64| {
        if r <= 0.0 {
            return f64::NEG_INFINITY;
        }
        e * r.ln() - 2.0 * w.jet_unchecked(r).phi()
    };
    let (mut lo, mut hi) = (0.0, 1.0 - f64::EPSILON);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if e / mid > 2.0 * w.jet_unchecked(mid).dphi() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let peak = 0.5 * (lo + hi);
    let peak_log = log_f(peak);
    let r_hi = w
        .phi_inverse(((750.0 - peak_log) / 2.0).max(350.0))
        .max(peak);
    let curv = e / (peak * peak) + 2.0 * w.jet_unchecked(peak).d2phi();
    let width = 1.0 / curv.sqrt();
    let mut breaks = vec![0.0, r_hi];
    for k in [-32.0, -16.0, -8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0] {
        let b = peak + k * width;
        if b > 0.0 && b < r_hi {
            breaks.push(b);
        }
    }
    for i in 1..8 {
        breaks.push(r_hi * i as f64 / 8.0);
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let q = log_integrate(log_f, &breaks, MOMENT_TOL, 4000);
    if !q.converged || !q.log_value.is_finite() {
        return Err(Error::NotConverged(format!("moment {j} of {}", w.spec)));
    }
    Ok(LN_2 + q.log_value)
}

/// Moments `α_0..α_J` (parallel over `j`; each entry is independent of `J`).
pub fn moments(w: &WeightEval, j_max: usize) -> Result<MomentTable> {
    let log_alpha = (0..=j_max)
        .into_par_iter()
        .map(|j| log_moment(w, j))
        .collect::<Result<Vec<f64>>>()?;
    let t = MomentTable {
        spec: w.spec,
        log_alpha,
    };
    t.validate()?;
    Ok(t)
}

/// Truncated kernel series with its tail certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelHandle {
    pub a: Complex64,
    pub series: TruncatedSeries,
    /// Bound on `Σ_{j>cap} |a|^j r^j / α_j` at `r = r_eval`.
    pub tail_bound: f64,
    /// `Σ_{j≤cap} |a|^j r^j / α_j`, the size of the partial sum on `|w| = r_eval`.
    pub partial_sum: f64,
    pub r_eval: f64,
}

impl KernelHandle {
    pub fn cap(&self) -> usize {
        self.series.cap()
    }

    /// `K_{a,0}(z) = z K_a(z)`.
    pub fn offset_series(&self) -> TruncatedSeries {
        let mut c = vec![Complex64::new(0.0, 0.0)];
        c.extend_from_slice(self.series.coeffs());
        TruncatedSeries::new(c)
    }
}

fn log_terms(a_abs: f64, r: f64, table: &MomentTable, upto: usize) -> Vec<f64> {
    let l = (a_abs * r).ln();
    (0..=upto)
        .map(|j| {
            if j == 0 {
                -table.log_alpha[0]
            } else {
                j as f64 * l - table.log_alpha[j]
            }
        })
        .collect()
}

/// `(log tail bound, log partial sum)` for cap `cap` at radius `r`, using
/// that `α_j / α_{j+1}` decreases in `j` (log-convexity of moments), so the
/// terms beyond `cap` are dominated by a geometric series.
fn tail_and_partial(a_abs: f64, r: f64, table: &MomentTable, cap: usize) -> Result<(f64, f64)> {
    if cap + 1 > table.j_max() {
        return Err(Error::TableTooShort {
            needed: cap + 2,
            have: table.log_alpha.len(),
        });
    }
    let terms = log_terms(a_abs, r, table, cap);
    let partial = log_sum_exp(terms.iter().copied());
    if a_abs * r == 0.0 {
        return Ok((f64::NEG_INFINITY, partial));
    }
    let log_ratio = (a_abs * r).ln() + table.log_alpha[cap] - table.log_alpha[cap + 1];
    if log_ratio >= 0.0 {
        return Ok((f64::INFINITY, partial));
    }
    let tail = terms[cap] + log_ratio - (-log_ratio.exp()).ln_1p();
    Ok((tail, partial))
}

/// Kernel coefficients `ā^j / α_j`, `j ≤ cap`, with the tail certified at `r_eval`.
pub fn kernel_series(a: Complex64, table: &MomentTable, cap: usize, r_eval: f64) -> Result<KernelHandle> {
    let a_abs = a.norm();
    if a_abs >= 1.0 {
        return Err(Error::Domain(a_abs));
    }
    let (log_tail, log_partial) = tail_and_partial(a_abs, r_eval, table, cap)?;
    let tail_bound = log_tail.exp();
    let partial_sum = log_partial.exp();
    if log_tail > log_partial + TAIL_TOL.ln() {
        return Err(Error::TailTooLarge {
            bound: tail_bound,
            tol: TAIL_TOL * partial_sum,
        });
    }
    let theta = a.arg();
    let la = a_abs.ln();
    let coeffs = (0..=cap)
        .map(|j| {
            if j == 0 {
                Complex64::new((-table.log_alpha[0]).exp(), 0.0)
            } else if a_abs == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::from_polar((j as f64 * la - table.log_alpha[j]).exp(), -(j as f64) * theta)
            }
        })
        .collect();
    Ok(KernelHandle {
        a,
        series: TruncatedSeries::new(coeffs),
        tail_bound,
        partial_sum,
        r_eval,
    })
}

/// Smallest cap whose tail at `r_eval` is below `TAIL_TOL` of the partial sum.
pub fn auto_cap(a: Complex64, table: &MomentTable, r_eval: f64) -> Result<usize> {
    let a_abs = a.norm();
    if a_abs >= 1.0 {
        return Err(Error::Domain(a_abs));
    }
    if a_abs == 0.0 {
        return Ok(0);
    }
    let mut cap = 8;
    loop {
        if cap + 1 > table.j_max() {
            return Err(Error::TableTooShort {
                needed: cap + 2,
                have: table.log_alpha.len(),
            });
        }
        let (t, p) = tail_and_partial(a_abs, r_eval, table, cap)?;
        if t <= p + TAIL_TOL.ln() {
            break;
        }
        cap = (cap * 5 / 4).max(cap + 8);
    }
    // Shrink back to the smallest admissible cap in the last bracket.
    let mut lo = cap * 4 / 5;
    let mut hi = cap;
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        let (t, p) = tail_and_partial(a_abs, r_eval, table, mid)?;
        if t <= p + TAIL_TOL.ln() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `kernel_series` with the smallest certified cap.
pub fn kernel_auto(a: Complex64, table: &MomentTable, r_eval: f64) -> Result<KernelHandle> {
    let cap = auto_cap(a, table, r_eval)?;
    kernel_series(a, table, cap, r_eval)
}

/// `log |K_a(z)|`, summed with the largest term factored out.
pub fn log_abs_kernel(a: Complex64, z: Complex64, table: &MomentTable) -> Result<f64> {
    let r = z.norm();
    let cap = auto_cap(a, table, r.max(1e-300))?;
    let x = a.conj() * z;
    let lx = x.norm().ln();
    let logs: Vec<f64> = (0..=cap)
        .map(|j| if j == 0 { -table.log_alpha[0] } else { j as f64 * lx - table.log_alpha[j] })
        .collect();
    let m = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let phase = x.arg();
    let s: Complex64 = logs
        .iter()
        .enumerate()
        .map(|(j, l)| Complex64::from_polar((l - m).exp(), j as f64 * phase))
        .sum();
    Ok(m + s.norm().ln())
}

/// Residuals of the reproducing identity `f(a) = ⟨f, K_a⟩_ω`, relative to `|f(a)| + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReproducingCheck {
    /// Pairing through `⟨z^k, z^j⟩ = δ_{kj} α_k`; zero up to rounding.
    pub exact_residual: f64,
    /// Pairing by 2-D quadrature of `f · conj(K_a) · ω`.
    pub numeric_residual: f64,
    pub kernel_cap: usize,
}

impl ReproducingCheck {
    pub fn residual(&self) -> f64 {
        self.exact_residual.max(self.numeric_residual)
    }
}

pub fn verify_reproducing(
    f: &TruncatedSeries,
    a: Complex64,
    w: &WeightEval,
    table: &MomentTable,
) -> Result<ReproducingCheck> {
    let deg = f.degree().unwrap_or(0);
    if deg > table.j_max() {
        return Err(Error::TableTooShort {
            needed: deg + 1,
            have: table.log_alpha.len(),
        });
    }
    let fa = f.evaluate(a);
    let scale = fa.norm() + 1.0;
    let r_eval = w.r_cut();
    let k = kernel_auto(a, table, r_eval)?;
    let cap = k.cap().max(deg);
    let k = kernel_series(a, table, cap, r_eval)?;

    let exact: Complex64 = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(j, fj)| fj * k.series.coeff(j).conj() * table.log_alpha[j].exp())
        .sum();
    let exact_residual = (exact - fa).norm() / scale;

    // Angular trapezoid with more nodes than the frequency span is exact.
    let m = (deg + cap + 1).next_power_of_two() * 2;
    let angular = |r: f64| -> Complex64 {
        let fs = f.sample_circle(r, m);
        let ks = k.series.sample_circle(r, m);
        fs.iter().zip(&ks).map(|(x, y)| x * y.conj()).sum::<Complex64>() / m as f64
    };
    let radial = |r: f64| -> (f64, Complex64) {
        if r <= 0.0 {
            return (0.0, Complex64::new(0.0, 0.0));
        }
        (LN_2 + r.ln() - 2.0 * w.jet_unchecked(r).phi(), angular(r))
    };
    let breaks = crate::quad::clustered_breaks(r_eval, 32);
    let q = integrate_complex(radial, &breaks, 1e-13, scale, 20_000);
    if !q.converged {
        return Err(Error::NotConverged("reproducing quadrature".into()));
    }
    let numeric_residual = (q.value - fa).norm() / scale;
    Ok(ReproducingCheck {
        exact_residual,
        numeric_residual,
        kernel_cap: cap,
    })
}

fn check_a(a: Complex64) -> Result<f64> {
    let r = a.norm();
    if r >= 1.0 {
        return Err(Error::Domain(r));
    }
    if r > A_MAX {
        return Err(Error::InvalidArgument(format!("|a| = {r} exceeds the sweep limit {A_MAX}")));
    }
    Ok(r)
}

/// `log K_a(a) = log Σ |a|^{2j}/α_j`, truncated by the tail criterion at
/// `r_eval = |a|`; `cap_scale` multiplies the certified cap (2 = truncation doubling).
pub fn log_kernel_diagonal(a: Complex64, table: &MomentTable, cap_scale: usize) -> Result<f64> {
    let r = a.norm();
    let cap = auto_cap(a, table, r)? * cap_scale.max(1);
    if cap > table.j_max() {
        return Err(Error::TableTooShort {
            needed: cap + 1,
            have: table.log_alpha.len(),
        });
    }
    let (tail, partial) = tail_and_partial(r, r, table, cap.min(table.j_max() - 1))?;
    if tail > partial + TAIL_TOL.ln() {
        return Err(Error::TailTooLarge {
            bound: tail.exp(),
            tol: TAIL_TOL * partial.exp(),
        });
    }
    Ok(partial)
}

/// `K_a(a) ω(a) τ(a)²`.
pub fn diagonal_ratio(a: Complex64, w: &WeightEval, table: &MomentTable) -> Result<f64> {
    diagonal_ratio_scaled(a, w, table, 1)
}

pub fn diagonal_ratio_scaled(a: Complex64, w: &WeightEval, table: &MomentTable, cap_scale: usize) -> Result<f64> {
    let r = check_a(a)?;
    let j = w.jet_unchecked(r);
    let lk = log_kernel_diagonal(a, table, cap_scale)?;
    Ok((lk - 2.0 * j.phi() + 2.0 * j.log_tau()).exp())
}

/// `‖K_a‖_{A^p_{ω_p}} ω(a)^{1/2} τ(a)^{2-2/p}` with the kernel certified on
/// the integration disc `|w| ≤ r_cut(p/2)`.
pub fn kernel_norm_ratio(
    a: Complex64,
    w: &WeightEval,
    p: f64,
    table: &MomentTable,
    cfg: &QuadratureConfig,
) -> Result<NormEstimate> {
    kernel_norm_ratio_scaled(a, w, p, table, cfg, 1)
}

pub fn kernel_norm_ratio_scaled(
    a: Complex64,
    w: &WeightEval,
    p: f64,
    table: &MomentTable,
    cfg: &QuadratureConfig,
    cap_scale: usize,
) -> Result<NormEstimate> {
    let r = check_a(a)?;
    let r_eval = w.r_cut_for(p / 2.0);
    let cap = auto_cap(a, table, r_eval)? * cap_scale.max(1);
    let k = kernel_series(a, table, cap, r_eval)?;
    let norm = bergman_norm(&k.series, w, p, WeightModifier::plain(p), cfg)?;
    let j = w.jet_unchecked(r);
    let factor = (-j.phi() + (2.0 - 2.0 / p) * j.log_tau()).exp();
    Ok(NormEstimate {
        value: norm.value * factor,
        ..norm
    })
}

/// Off-diagonal samples `(d_τ upper bound, |K_a(z)| ω(a)^{1/2} ω(z)^{1/2} τ(a) τ(z))`
/// and the fitted decay exponent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OffDiagProfile {
    pub points: Vec<(f64, f64)>,
    /// Least-squares `η` in `normalized ≈ C e^{-η d_τ}` over points with `d_τ > 0`.
    pub eta: Option<f64>,
}

pub fn offdiag_profile(
    a: Complex64,
    zs: &[Complex64],
    w: &WeightEval,
    table: &MomentTable,
) -> Result<OffDiagProfile> {
    let ra = check_a(a)?;
    let ja = w.jet_unchecked(ra);
    let mut points = Vec::with_capacity(zs.len());
    for &z in zs {
        let rz = z.norm();
        if rz >= w.r_cut() {
            return Err(Error::Domain(rz));
        }
        let jz = w.jet_unchecked(rz);
        let lk = log_abs_kernel(a, z, table)?;
        let normalized = (lk - ja.phi() - jz.phi() + ja.log_tau() + jz.log_tau()).exp();
        points.push((w.tau_distance(a, z)?, normalized));
    }
    let fit: Vec<(f64, f64)> = points
        .iter()
        .filter(|(d, v)| *d > 0.0 && *v > 0.0)
        .map(|&(d, v)| (d, v.ln()))
        .collect();
    let eta = if fit.len() >= 2 {
        let n = fit.len() as f64;
        let mx = fit.iter().map(|p| p.0).sum::<f64>() / n;
        let my = fit.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = fit.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = fit.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        (sxx > 0.0).then(|| -sxy / sxx)
    } else {
        None
    };
    Ok(OffDiagProfile { points, eta })
}
