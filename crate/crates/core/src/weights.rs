//! The weights `ω_n(r) = exp(-2 exp_n(c (1-r²)^{-α}))`, with `φ = -½ log ω`.
//!
//! `φ` and its first two derivatives are evaluated through their logarithms:
//! for the level-0 function `g(r) = c u^{-α}`, `u = 1 - r²`,
//!
//! ```text
//! log g   = ln c − α ln u
//! log g'  = ln(2cα) + ln r − (α+1) ln u
//! log g'' = ln(2cα) − (α+2) ln u + ln(1 + (2α+1) r²)
//! ```
//!
//! and each further level `φ_k = exp(φ_{k-1})` gives
//! `log φ_k = φ_{k-1}`, `log φ_k' = log φ_k + log φ_{k-1}'` and
//! `log φ_k'' = log φ_k + log(φ_{k-1}'' + φ_{k-1}'²)`.
//! These stay finite far past the radius where `ω` itself underflows.

use crate::error::{Error, Result};
use crate::quad::{gauss_legendre_64, log_add_exp, log_sum_exp};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Log-underflow floor used for the default cut radius: `log ω^{p/2} = -700`.
pub const LOG_FLOOR: f64 = -700.0;

/// Parameters `(n, α, c)` of `ω_n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct WeightSpec {
    pub level: u32,
    pub alpha: f64,
    pub c: f64,
}

impl WeightSpec {
    pub fn new(level: u32, alpha: f64, c: f64) -> Result<Self> {
        let ok = alpha.is_finite() && alpha > 0.0 && c.is_finite() && c > 0.0;
        if !ok {
            return Err(Error::InvalidWeight(format!("w{level}:{alpha}:{c}")));
        }
        Ok(WeightSpec { level, alpha, c })
    }

    /// Levels above 2 are accepted but live deep in underflow territory.
    pub fn is_extreme(&self) -> bool {
        self.level > 2
    }
}

impl fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w{}:{}:{}", self.level, self.alpha, self.c)
    }
}

impl FromStr for WeightSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidWeight(s.to_string());
        let body = s.trim().strip_prefix('w').ok_or_else(bad)?;
        let parts: Vec<&str> = body.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let level = parts[0].parse::<u32>().map_err(|_| bad())?;
        let alpha = parts[1].parse::<f64>().map_err(|_| bad())?;
        let c = parts[2].parse::<f64>().map_err(|_| bad())?;
        WeightSpec::new(level, alpha, c).map_err(|_| bad())
    }
}

impl TryFrom<String> for WeightSpec {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<WeightSpec> for String {
    fn from(w: WeightSpec) -> String {
        w.to_string()
    }
}

/// Logarithms of `φ, φ', φ''` at one radius. `log_dphi` is `-∞` at `r = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhiJet {
    pub log_phi: f64,
    pub log_dphi: f64,
    pub log_d2phi: f64,
}

impl PhiJet {
    pub fn phi(&self) -> f64 {
        self.log_phi.exp()
    }
    pub fn dphi(&self) -> f64 {
        self.log_dphi.exp()
    }
    pub fn d2phi(&self) -> f64 {
        self.log_d2phi.exp()
    }
    /// `log(1 + φ')`.
    pub fn log_one_plus_dphi(&self) -> f64 {
        log_add_exp(0.0, self.log_dphi)
    }
    /// `log τ = -½ log(1 + φ' + φ'')`.
    pub fn log_tau(&self) -> f64 {
        -0.5 * log_sum_exp([0.0, self.log_dphi, self.log_d2phi])
    }
}

/// A validated weight with its default cut radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightEval {
    pub spec: WeightSpec,
    r_cut: f64,
}

fn check_radius(r: f64) -> Result<()> {
    if (0.0..1.0).contains(&r) {
        Ok(())
    } else {
        Err(Error::Domain(r))
    }
}

impl WeightEval {
    pub fn new(spec: WeightSpec) -> Self {
        let mut w = WeightEval { spec, r_cut: 0.0 };
        w.r_cut = w.r_cut_for(1.0);
        w
    }

    /// Radius where `log ω = -700`, the cut used for `A²_ω` integrals.
    pub fn r_cut(&self) -> f64 {
        self.r_cut
    }

    /// Radius where `q · log ω = -700`, i.e. the cut for integrands carrying `ω^q`.
    pub fn r_cut_for(&self, q: f64) -> f64 {
        self.phi_inverse(-LOG_FLOOR / (2.0 * q))
    }

    /// Smallest `r` with `φ(r) ≥ y` (0 if `y ≤ φ(0)`), clamped below 1.
    pub fn phi_inverse(&self, y: f64) -> f64 {
        let WeightSpec { level, alpha, c } = self.spec;
        let mut t = y;
        for _ in 0..level {
            if t <= 0.0 {
                return 0.0;
            }
            t = t.ln();
        }
        if t <= c {
            return 0.0;
        }
        let u = (c / t).powf(1.0 / alpha);
        let r = (1.0 - u).sqrt();
        if r >= 1.0 {
            1.0 - f64::EPSILON / 2.0
        } else {
            r
        }
    }

    /// Log-domain jet without domain validation; `r` must lie in `[0, 1)`.
    pub fn jet_unchecked(&self, r: f64) -> PhiJet {
        let WeightSpec { level, alpha, c } = self.spec;
        let ln_u = ((1.0 - r) * (1.0 + r)).ln();
        let ln_2ca = (2.0 * c * alpha).ln();
        let mut jet = PhiJet {
            log_phi: c.ln() - alpha * ln_u,
            log_dphi: ln_2ca + r.ln() - (alpha + 1.0) * ln_u,
            log_d2phi: ln_2ca - (alpha + 2.0) * ln_u + ((2.0 * alpha + 1.0) * r * r).ln_1p(),
        };
        for _ in 0..level {
            let log_phi = jet.log_phi.exp();
            jet = PhiJet {
                log_phi,
                log_dphi: log_phi + jet.log_dphi,
                log_d2phi: log_phi + log_add_exp(jet.log_d2phi, 2.0 * jet.log_dphi),
            };
        }
        jet
    }

    pub fn jet(&self, r: f64) -> Result<PhiJet> {
        check_radius(r)?;
        Ok(self.jet_unchecked(r))
    }

    pub fn phi(&self, r: f64) -> Result<f64> {
        Ok(self.jet(r)?.phi())
    }

    pub fn phi_prime(&self, r: f64) -> Result<f64> {
        Ok(self.jet(r)?.dphi())
    }

    pub fn phi_second(&self, r: f64) -> Result<f64> {
        Ok(self.jet(r)?.d2phi())
    }

    /// `log ω(r) = -2 φ(r)`.
    pub fn log_omega(&self, r: f64) -> Result<f64> {
        Ok(-2.0 * self.phi(r)?)
    }

    pub fn tau(&self, r: f64) -> Result<f64> {
        Ok(self.jet(r)?.log_tau().exp())
    }

    pub fn log_tau(&self, r: f64) -> Result<f64> {
        Ok(self.jet(r)?.log_tau())
    }

    /// `log Δφ` at radius `r`; `Δφ(0) = 2 φ''(0)`.
    pub fn log_delta_phi_radial(&self, r: f64) -> Result<f64> {
        let j = self.jet(r)?;
        if r == 0.0 {
            return Ok(std::f64::consts::LN_2 + j.log_d2phi);
        }
        Ok(log_add_exp(j.log_d2phi, j.log_dphi - r.ln()))
    }

    /// `Δφ(z) = φ''(|z|) + φ'(|z|)/|z|`.
    pub fn delta_phi(&self, z: Complex64) -> Result<f64> {
        Ok(self.log_delta_phi_radial(z.norm())?.exp())
    }

    /// `ψ(r) = r + φ(r)`.
    pub fn psi(&self, r: f64) -> Result<f64> {
        Ok(r + self.phi(r)?)
    }

    pub fn psi_prime(&self, r: f64) -> Result<f64> {
        Ok(1.0 + self.phi_prime(r)?)
    }

    /// `β_φ(z, w)`: path distance with density `1 + φ'(|ζ|)`.
    ///
    /// Exact when both points lie on one ray from the origin; otherwise an
    /// upper bound from the best of several polylines.
    pub fn beta_distance(&self, z: Complex64, w: Complex64) -> Result<f64> {
        check_radius(z.norm())?;
        check_radius(w.norm())?;
        let radial = |a: f64, b: f64| {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            (hi - lo) + (self.jet_unchecked(hi).phi() - self.jet_unchecked(lo).phi())
        };
        let density = |r: f64| 1.0 + self.jet_unchecked(r).dphi();
        Ok(path_distance(z, w, &density, &radial))
    }

    /// `d_τ(z, w)`: path distance with density `1/τ(|ζ|)`.
    pub fn tau_distance(&self, z: Complex64, w: Complex64) -> Result<f64> {
        check_radius(z.norm())?;
        check_radius(w.norm())?;
        let density = |r: f64| (-self.jet_unchecked(r).log_tau()).exp();
        let radial = |a: f64, b: f64| {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            crate::quad::integrate(density, lo, hi, 1e-13)
        };
        Ok(path_distance(z, w, &density, &radial))
    }

    /// Numerical checks of the structural properties of `φ` and `τ` on
    /// `grid` (increasing toward 1). See [`CheckReport`].
    pub fn self_check(&self, grid: &[f64]) -> Result<CheckReport> {
        for &r in grid {
            check_radius(r)?;
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument("grid must be strictly increasing".into()));
        }
        Ok(run_self_check(self, grid))
    }
}

/// The standard check grid `1 - 2^{-k}`, `k = 0..=20`.
pub fn default_check_grid() -> Vec<f64> {
    (0..=20).map(|k| 1.0 - 0.5f64.powi(k)).collect()
}

const POLY_POINTS: usize = 8;

fn segment_length<D: Fn(f64) -> f64>(a: Complex64, b: Complex64, density: &D) -> f64 {
    let len = (b - a).norm();
    if len == 0.0 {
        return 0.0;
    }
    let (x, w) = gauss_legendre_64();
    let mid = (a + b) * 0.5;
    let half = (b - a) * 0.5;
    let s: f64 = x
        .iter()
        .zip(w)
        .map(|(&t, &wt)| wt * density((mid + half * t).norm()))
        .sum();
    0.5 * len * s
}

fn path_distance<D, R>(z: Complex64, w: Complex64, density: &D, radial: &R) -> f64
where
    D: Fn(f64) -> f64,
    R: Fn(f64, f64) -> f64,
{
    if z == w {
        return 0.0;
    }
    // Fixed argument order makes the result exactly symmetric.
    let (z, w) = if (z.re, z.im) <= (w.re, w.im) { (z, w) } else { (w, z) };
    let (rz, rw) = (z.norm(), w.norm());
    let same_ray = rz == 0.0 || rw == 0.0 || {
        let cross = z.re * w.im - z.im * w.re;
        let dot = z.re * w.re + z.im * w.im;
        cross.abs() <= 1e-15 * rz * rw && dot > 0.0
    };
    if same_ray {
        return radial(rz, rw);
    }

    let straight = segment_length(z, w, density);
    let via_origin = radial(0.0, rz) + radial(0.0, rw);

    // Interior vertices of the polyline, started on the better candidate.
    let mut pts: Vec<Complex64> = if straight <= via_origin {
        (1..=POLY_POINTS)
            .map(|i| z + (w - z) * (i as f64 / (POLY_POINTS + 1) as f64))
            .collect()
    } else {
        let total = rz + rw;
        (1..=POLY_POINTS)
            .map(|i| {
                let s = total * i as f64 / (POLY_POINTS + 1) as f64;
                if s <= rz {
                    z * ((rz - s) / rz)
                } else {
                    w * ((s - rz) / rw)
                }
            })
            .collect()
    };
    let r_max = rz.max(rw);
    let vertex = |pts: &[Complex64], i: isize| -> Complex64 {
        if i < 0 {
            z
        } else if i as usize >= pts.len() {
            w
        } else {
            pts[i as usize]
        }
    };
    let mut seg: Vec<f64> = (0..=POLY_POINTS)
        .map(|i| {
            let i = i as isize;
            segment_length(vertex(&pts, i - 1), vertex(&pts, i), density)
        })
        .collect();
    let mut best = seg.iter().sum::<f64>();
    let mut step = 0.25 * (w - z).norm().max(1e-3) / (POLY_POINTS + 1) as f64;
    let min_step = 1e-9 * (w - z).norm();
    let dirs = [
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, -1.0),
    ];
    let mut sweeps = 0;
    while step > min_step && sweeps < 400 {
        sweeps += 1;
        let mut improved = false;
        for i in 0..POLY_POINTS {
            for d in &dirs {
                let cand = pts[i] + d * step;
                // Radial projection shortens paths, so the optimum stays in |ζ| ≤ r_max.
                if cand.norm() > r_max {
                    continue;
                }
                let prev = vertex(&pts, i as isize - 1);
                let next = vertex(&pts, i as isize + 1);
                let a = segment_length(prev, cand, density);
                let b = segment_length(cand, next, density);
                let delta = a + b - seg[i] - seg[i + 1];
                if delta < 0.0 {
                    pts[i] = cand;
                    seg[i] = a;
                    seg[i + 1] = b;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    best = best.min(seg.iter().sum::<f64>());
    best.min(straight).min(via_origin)
}

/// Outcome of one check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// One checked property: the radii used, the (mostly logarithmic) values
/// observed there, and the verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckItem {
    pub name: String,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub weight: WeightSpec,
    /// Radius where `log ω < -700`.
    pub r_cut: f64,
    pub checks: Vec<CheckItem>,
    /// Smallest `η` (step 0.05, at most 20) making `(1+φ')τ^η` nonincreasing
    /// on the tail of the grid, if any.
    pub eta: Option<f64>,
    /// Largest relative mismatch between closed-form and finite-difference derivatives.
    pub fd_max_rel_err: f64,
}

impl CheckReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.verdict == Verdict::Pass)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| c.verdict == Verdict::Fail)
            .map(|c| c.name.as_str())
            .collect()
    }
}

/// Relative tolerance of the derivative check.
pub const FD_TOL: f64 = 1e-6;
const FD_STEP: f64 = 1e-5;
const LOCAL_RATIO_MAX: f64 = 10.0;

fn tail(values: &[f64]) -> &[f64] {
    let n = values.len();
    let k = (n / 2).max(3).min(n);
    &values[n - k..]
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn trend_up(v: &[f64]) -> Verdict {
    let t = tail(v);
    verdict(t.len() >= 3 && t.windows(2).all(|w| w[1] > w[0]))
}

fn trend_down(v: &[f64]) -> Verdict {
    let t = tail(v);
    verdict(t.len() >= 3 && t.windows(2).all(|w| w[1] < w[0]))
}

fn bounded(v: &[f64]) -> Verdict {
    let t = tail(v);
    let lo = t.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = t.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    verdict(!v.is_empty() && v.iter().all(|x| x.is_finite()) && hi - lo <= std::f64::consts::LN_2)
}

fn item<F: Fn(f64, &PhiJet) -> f64>(
    name: &str,
    w: &WeightEval,
    grid: &[f64],
    f: F,
    judge: fn(&[f64]) -> Verdict,
) -> CheckItem {
    let (g, v): (Vec<f64>, Vec<f64>) = grid
        .iter()
        .map(|&r| (r, f(r, &w.jet_unchecked(r))))
        .filter(|(_, v)| v.is_finite())
        .unzip();
    let verdict = judge(&v);
    CheckItem {
        name: name.to_string(),
        grid: g,
        values: v,
        verdict,
    }
}

/// Five-point central difference; `f` must accept `|r| < 1`.
fn fd5<F: Fn(f64) -> f64>(f: F, r: f64, h: f64) -> f64 {
    (f(r - 2.0 * h) - 8.0 * f(r - h) + 8.0 * f(r + h) - f(r + 2.0 * h)) / (12.0 * h)
}

fn run_self_check(w: &WeightEval, grid: &[f64]) -> CheckReport {
    let ln_1m = |r: f64| (1.0 - r).ln();
    let mut checks = vec![
        item(
            "tau/(1-r) -> 0",
            w,
            grid,
            |r, j| j.log_tau() - ln_1m(r),
            trend_down,
        ),
        item(
            "(1-r)phi' -> inf",
            w,
            grid,
            |r, j| ln_1m(r) + j.log_dphi,
            trend_up,
        ),
        item(
            "tau*phi' -> inf",
            w,
            grid,
            |_, j| j.log_tau() + j.log_dphi,
            trend_up,
        ),
        item(
            "phi''/phi'^2 -> 0",
            w,
            grid,
            |_, j| j.log_d2phi - 2.0 * j.log_dphi,
            trend_down,
        ),
        item(
            "phi/log(1/(1-r)) -> inf",
            w,
            grid,
            |r, j| j.log_phi - (-ln_1m(r)).ln(),
            trend_up,
        ),
        item(
            "phi''*phi/(1+phi')^2 bounded",
            w,
            grid,
            |_, j| j.log_d2phi + j.log_phi - 2.0 * j.log_one_plus_dphi(),
            bounded,
        ),
        item(
            "tau^-2/laplacian bounded",
            w,
            grid,
            |r, j| {
                let lap = if r == 0.0 {
                    std::f64::consts::LN_2 + j.log_d2phi
                } else {
                    log_add_exp(j.log_d2phi, j.log_dphi - r.ln())
                };
                -2.0 * j.log_tau() - lap
            },
            bounded,
        ),
    ];

    // ψ = r + φ: (1-r)ψ' increasing and ψ''/ψ'² decreasing over the whole grid.
    let whole_up = |v: &[f64]| verdict(v.len() >= 3 && v.windows(2).all(|p| p[1] > p[0]));
    let whole_down = |v: &[f64]| verdict(v.len() >= 3 && v.windows(2).all(|p| p[1] < p[0]));
    let mut psi1 = item(
        "(1-r)psi' increasing",
        w,
        grid,
        |r, j| ln_1m(r) + j.log_one_plus_dphi(),
        trend_up,
    );
    psi1.verdict = whole_up(&psi1.values);
    let mut psi2 = item(
        "psi''/psi'^2 decreasing",
        w,
        grid,
        |_, j| j.log_d2phi - 2.0 * j.log_one_plus_dphi(),
        trend_down,
    );
    psi2.verdict = whole_down(&psi2.values);
    checks.push(psi1);
    checks.push(psi2);

    // Local comparability of τ and 1+φ' on discs of radius δτ(r).
    let finite: Vec<f64> = grid
        .iter()
        .copied()
        .filter(|&r| w.jet_unchecked(r).log_tau().is_finite())
        .collect();
    let delta = 0.25
        * finite
            .iter()
            .map(|&r| (1.0 - r) / w.jet_unchecked(r).log_tau().exp())
            .fold(f64::INFINITY, f64::min);
    let mut local_vals = Vec::new();
    let mut local_grid = Vec::new();
    for &r in &finite {
        let j = w.jet_unchecked(r);
        let rad = delta * j.log_tau().exp();
        let mut worst: f64 = 0.0;
        for s in [(r - rad).max(0.0), (r + rad).min(r + 0.5 * (1.0 - r))] {
            let k = w.jet_unchecked(s);
            worst = worst
                .max((k.log_tau() - j.log_tau()).abs())
                .max((k.log_one_plus_dphi() - j.log_one_plus_dphi()).abs());
        }
        if worst.is_finite() {
            local_grid.push(r);
            local_vals.push(worst);
        }
    }
    // The comparability constant is not quantified; require finite log-ratios
    // everywhere and ratios below LOCAL_RATIO_MAX on the tail.
    let local_ok = local_vals.len() >= 3
        && local_vals.iter().all(|v| v.is_finite())
        && tail(&local_vals).iter().all(|&v| v <= LOCAL_RATIO_MAX.ln());
    checks.push(CheckItem {
        name: "tau and 1+phi' comparable on D_delta".into(),
        grid: local_grid,
        values: local_vals,
        verdict: verdict(local_ok),
    });

    // Derivative closed forms against finite differences on [0, r_cut].
    let r_cut = w.r_cut();
    let hi = r_cut - 3.0 * FD_STEP;
    let mut fd_grid: Vec<f64> = (0..64).map(|i| hi * i as f64 / 63.0).collect();
    fd_grid.extend(grid.iter().copied().filter(|&r| r <= hi));
    fd_grid.sort_by(f64::total_cmp);
    fd_grid.dedup();
    let phi_even = |r: f64| w.jet_unchecked(r.abs()).phi();
    let dphi_odd = |r: f64| r.signum() * w.jet_unchecked(r.abs()).dphi();
    let mut fd_vals = Vec::with_capacity(fd_grid.len());
    for &r in &fd_grid {
        let j = w.jet_unchecked(r);
        let rel = |exact: f64, approx: f64| {
            let d = (exact - approx).abs();
            if exact == 0.0 {
                d
            } else {
                d / exact.abs()
            }
        };
        let e1 = rel(j.dphi(), fd5(phi_even, r, FD_STEP));
        let e2 = rel(j.d2phi(), fd5(dphi_odd, r, FD_STEP));
        fd_vals.push(e1.max(e2));
    }
    let fd_max = fd_vals.iter().copied().fold(0.0, f64::max);
    checks.push(CheckItem {
        name: "closed-form derivatives match finite differences".into(),
        grid: fd_grid,
        values: fd_vals,
        verdict: verdict(fd_max <= FD_TOL),
    });

    // Smallest η making (1+φ')τ^η nonincreasing on the tail.
    let eta_item = item("eta", w, grid, |_, j| j.log_tau(), |_| Verdict::Pass);
    let tail_r: Vec<f64> = {
        let n = eta_item.grid.len();
        let k = (n / 2).max(3).min(n);
        eta_item.grid[n - k..].to_vec()
    };
    let eta = (1..=400).map(|i| i as f64 * 0.05).find(|&eta| {
        let v: Vec<f64> = tail_r
            .iter()
            .map(|&r| {
                let j = w.jet_unchecked(r);
                j.log_one_plus_dphi() + eta * j.log_tau()
            })
            .collect();
        v.iter().all(|x| x.is_finite()) && v.windows(2).all(|p| p[1] <= p[0])
    });
    let eta_vals: Vec<f64> = tail_r
        .iter()
        .map(|&r| {
            let j = w.jet_unchecked(r);
            j.log_one_plus_dphi() + eta.unwrap_or(0.0) * j.log_tau()
        })
        .collect();
    checks.push(CheckItem {
        name: "(1+phi')tau^eta nonincreasing".into(),
        grid: tail_r,
        values: eta_vals,
        verdict: verdict(eta.is_some()),
    });

    CheckReport {
        weight: w.spec,
        r_cut,
        checks,
        eta,
        fd_max_rel_err: fd_max,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> WeightEval {
        WeightEval::new(s.parse().unwrap())
    }

    #[test]
    fn parse_and_display_round_trip() {
        let s: WeightSpec = "w1:0.5:2".parse().unwrap();
        assert_eq!(s, WeightSpec { level: 1, alpha: 0.5, c: 2.0 });
        assert_eq!(s.to_string(), "w1:0.5:2");
        for bad in ["bogus", "w0:1", "w0:-1:1", "w0:1:0", "x0:1:1", "w-1:1:1", "w0:nan:1"] {
            assert!(bad.parse::<WeightSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn values_at_origin() {
        let w0 = w("w0:1:1");
        assert_eq!(w0.phi(0.0).unwrap(), 1.0);
        assert_eq!(w0.phi_prime(0.0).unwrap(), 0.0);
        assert!((w0.phi_second(0.0).unwrap() - 2.0).abs() < 1e-15);
        assert!((w0.tau(0.0).unwrap() - 3f64.powf(-0.5)).abs() < 1e-15);
        assert!((w0.delta_phi(Complex64::new(0.0, 0.0)).unwrap() - 4.0).abs() < 1e-14);
        assert_eq!(w0.log_omega(0.0).unwrap(), -2.0);
        let w1 = w("w1:1:1");
        assert!((w1.phi(0.0).unwrap() - std::f64::consts::E).abs() < 1e-15);
        assert!((w1.log_omega(0.0).unwrap() + 2.0 * std::f64::consts::E).abs() < 1e-14);
    }

    #[test]
    fn closed_forms_level_zero() {
        // φ = 1/(1-r²): φ' = 2r/(1-r²)², φ'' = (2 + 6r²)/(1-r²)³.
        let w0 = w("w0:1:1");
        for r in [0.1, 0.5, 0.9, 0.99] {
            let u = 1.0 - r * r;
            let j = w0.jet(r).unwrap();
            assert!((j.phi() - 1.0 / u).abs() <= 1e-13 * j.phi());
            assert!((j.dphi() - 2.0 * r / (u * u)).abs() <= 1e-13 * j.dphi());
            let d2 = (2.0 + 6.0 * r * r) / (u * u * u);
            assert!((j.d2phi() - d2).abs() <= 1e-13 * d2);
        }
        let lap = w0.delta_phi(Complex64::new(0.5, 0.0)).unwrap();
        let expect = w0.phi_second(0.5).unwrap() + w0.phi_prime(0.5).unwrap() / 0.5;
        assert!((lap - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn domain_errors() {
        let w0 = w("w0:1:1");
        assert_eq!(w0.phi(1.0), Err(Error::Domain(1.0)));
        assert_eq!(w0.tau(-0.1), Err(Error::Domain(-0.1)));
        assert!(w0.beta_distance(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn cut_radius_matches_floor() {
        for s in ["w0:1:1", "w0:2:0.5", "w1:1:1", "w2:1:1"] {
            let e = w(s);
            let r = e.r_cut();
            assert!(r > 0.0 && r < 1.0);
            assert!((e.log_omega(r).unwrap() - LOG_FLOOR).abs() < 1e-6, "{s}");
            let r4 = e.r_cut_for(2.0);
            assert!(r4 < r);
            assert!((2.0 * e.log_omega(r4).unwrap() - LOG_FLOOR).abs() < 1e-6);
        }
    }

    #[test]
    fn radial_beta_closed_form() {
        let w0 = w("w0:1:1");
        let d = w0
            .beta_distance(Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.0))
            .unwrap();
        assert!((d - 5.0 / 6.0).abs() < 1e-14);
        assert_eq!(w0.beta_distance(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)).unwrap(), 0.0);
    }

    #[test]
    fn self_check_standard_weights() {
        for s in ["w0:1:1", "w0:2:0.5", "w1:1:1", "w2:1:1"] {
            let rep = w(s).self_check(&default_check_grid()).unwrap();
            assert!(rep.all_pass(), "{s}: {:?}", rep.failures());
            assert!(rep.fd_max_rel_err <= FD_TOL);
            assert!(rep.eta.is_some());
        }
    }
}
