//! Truncated complex power series `f(z) = Σ_{k≤D} f_k z^k`.

use crate::error::{Error, Result};
use crate::quad::golden_max;
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::cell::RefCell;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

/// An analytic function modulo `z^{D+1}`; `coeffs[k]` multiplies `z^k` and
/// `D = coeffs.len() - 1` is the cap.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Coefficients below this fraction of the largest term are ignored when
/// sizing angular grids.
const NEGLIGIBLE: f64 = 1e-17;

impl TruncatedSeries {
    /// Series with the given coefficients; an empty vector is the zero series of cap 0.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        TruncatedSeries { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero(cap: usize) -> Self {
        Self::new(vec![Complex64::new(0.0, 0.0); cap + 1])
    }

    pub fn constant(c: Complex64, cap: usize) -> Self {
        let mut s = Self::zero(cap);
        s.coeffs[0] = c;
        s
    }

    /// `z^k` with cap `max(k, cap)`.
    pub fn monomial(k: usize, cap: usize) -> Self {
        let mut s = Self::zero(cap.max(k));
        s.coeffs[k] = Complex64::new(1.0, 0.0);
        s
    }

    pub fn cap(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient of `z^k` (zero beyond the cap).
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// Index of the highest nonzero coefficient, `None` for the zero series.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| *c != Complex64::new(0.0, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    /// Membership in `H_0`: vanishing constant term.
    pub fn in_h0(&self) -> bool {
        self.coeffs[0] == Complex64::new(0.0, 0.0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Sum of coefficient moduli, a bound for `|f|` on the closed disc.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// Truncate or zero-pad to the given cap.
    pub fn with_cap(&self, cap: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.resize(cap + 1, Complex64::new(0.0, 0.0));
        Self::new(c)
    }

    /// Drop trailing zero coefficients (keeps at least the constant term).
    pub fn trimmed(&self) -> Self {
        let d = self.degree().unwrap_or(0);
        Self::new(self.coeffs[..=d].to_vec())
    }

    pub fn scale(&self, lambda: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * lambda).collect())
    }

    /// Sum truncated to the smaller cap.
    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().min(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeffs[k] + other.coeffs[k]).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().min(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeffs[k] - other.coeffs[k]).collect())
    }

    /// Sum with the larger cap (no truncation).
    pub fn add_padded(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    /// Largest coefficient modulus of `self - other` over the union of supports.
    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n)
            .map(|k| (self.coeff(k) - other.coeff(k)).norm())
            .fold(0.0, f64::max)
    }

    /// Derivative, cap `D - 1` (cap 0 for constants).
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero(0);
        }
        Self::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(k, c)| c * (k + 1) as f64)
                .collect(),
        )
    }

    /// Primitive vanishing at 0, cap `D + 1`.
    pub fn primitive0(&self) -> Self {
        let mut c = Vec::with_capacity(self.coeffs.len() + 1);
        c.push(Complex64::new(0.0, 0.0));
        c.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, x)| x / (k + 1) as f64),
        );
        Self::new(c)
    }

    /// `Π_0 f = f - f(0)`.
    pub fn pi0(&self) -> Self {
        let mut s = self.clone();
        s.coeffs[0] = Complex64::new(0.0, 0.0);
        s
    }

    /// Horner evaluation.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    /// `f_r(z) = f(rz)`.
    pub fn dilate(&self, r: f64) -> Self {
        let mut rk = 1.0;
        Self::new(
            self.coeffs
                .iter()
                .map(|c| {
                    let v = c * rk;
                    rk *= r;
                    v
                })
                .collect(),
        )
    }

    /// `f(e^{iθ} z)`.
    pub fn rotate(&self, theta: f64) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c * Complex64::from_polar(1.0, k as f64 * theta))
                .collect(),
        )
    }

    /// `g^k` truncated at `cap`, by repeated squaring.
    pub fn power(&self, k: u32, cap: usize) -> Self {
        let mut result = Self::constant(Complex64::new(1.0, 0.0), cap);
        let mut base = self.with_cap(cap);
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = cauchy_product(&result, &base, cap);
            }
            e >>= 1;
            if e > 0 {
                base = cauchy_product(&base, &base, cap);
            }
        }
        result
    }

    /// Highest index whose term on `|z| = r` is not negligible.
    pub fn effective_degree(&self, r: f64) -> usize {
        let mags: Vec<f64> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.norm() * r.powi(k as i32))
            .collect();
        let m = mags.iter().copied().fold(0.0, f64::max);
        if m == 0.0 {
            return 0;
        }
        mags.iter().rposition(|&v| v > NEGLIGIBLE * m).unwrap_or(0)
    }

    /// `f(r e^{2πij/m})` for `j = 0..m` via one inverse FFT.
    pub fn sample_circle(&self, r: f64, m: usize) -> Vec<Complex64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        let mut rk = 1.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            buf[k % m] += c * rk;
            rk *= r;
            if rk == 0.0 {
                break;
            }
        }
        let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(m));
        fft.process(&mut buf);
        buf
    }

    /// `M_∞(r, f) = max_{|z|=r} |f(z)|`.
    ///
    /// Angular grid of `16 (deg+1)` points, doubled until the polished
    /// maximum changes by less than `1e-9` relative. `r = 1` is accepted
    /// (the sup over the closed disc of a polynomial).
    pub fn max_modulus(&self, r: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::Domain(r));
        }
        if r == 0.0 {
            return Ok(self.coeffs[0].norm());
        }
        let deg = self.effective_degree(r);
        if deg == 0 {
            return Ok(self.coeffs[0].norm());
        }
        let mut m = 16 * (deg + 1);
        let mut prev = f64::NAN;
        for _ in 0..8 {
            let v = self.polished_circle_max(r, m);
            if (v - prev).abs() <= 1e-9 * v.max(f64::MIN_POSITIVE) {
                return Ok(v.max(prev));
            }
            prev = v;
            m *= 2;
        }
        Ok(prev)
    }

    fn polished_circle_max(&self, r: f64, m: usize) -> f64 {
        let vals = self.sample_circle(r, m);
        let (best, grid_max) = vals
            .iter()
            .enumerate()
            .map(|(j, v)| (j, v.norm()))
            .fold((0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
        let h = 2.0 * PI / m as f64;
        let t0 = best as f64 * h;
        let (_, polished) = golden_max(
            |t| self.evaluate(Complex64::from_polar(r, t)).norm(),
            t0 - h,
            t0 + h,
            1e-12,
        );
        polished.max(grid_max)
    }
}

/// Coefficients `k ≤ cap` of `f g`.
pub fn cauchy_product(f: &TruncatedSeries, g: &TruncatedSeries, cap: usize) -> TruncatedSeries {
    let mut out = vec![Complex64::new(0.0, 0.0); cap + 1];
    let (a, b) = (&f.coeffs, &g.coeffs);
    for (i, &ai) in a.iter().enumerate().take(cap + 1) {
        if ai == Complex64::new(0.0, 0.0) {
            continue;
        }
        let jmax = (cap - i).min(b.len() - 1);
        for j in 0..=jmax {
            out[i + j] += ai * b[j];
        }
    }
    TruncatedSeries::new(out)
}

impl From<TruncatedSeries> for Vec<[f64; 2]> {
    fn from(s: TruncatedSeries) -> Self {
        s.coeffs.iter().map(|c| [c.re, c.im]).collect()
    }
}

impl TryFrom<Vec<[f64; 2]>> for TruncatedSeries {
    type Error = Error;
    fn try_from(v: Vec<[f64; 2]>) -> Result<Self> {
        if v.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidSeries("non-finite coefficient".into()));
        }
        Ok(Self::new(v.into_iter().map(|[re, im]| Complex64::new(re, im)).collect()))
    }
}

/// Parses `poly:1,0,2` (real coefficients in index order) or a JSON array of
/// `[re, im]` pairs.
impl FromStr for TruncatedSeries {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(body) = s.strip_prefix("poly:") {
            let coeffs = body
                .split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<f64>, _>>()
                .map_err(|_| Error::InvalidSeries(s.to_string()))?;
            if coeffs.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidSeries(s.to_string()));
            }
            return Ok(Self::from_real(&coeffs));
        }
        if s.starts_with('[') {
            let pairs: Vec<[f64; 2]> = serde_json::from_str(s).map_err(|_| Error::InvalidSeries(s.to_string()))?;
            return pairs.try_into();
        }
        Err(Error::InvalidSeries(s.to_string()))
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if *c == Complex64::new(0.0, 0.0) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn products() {
        let a = TruncatedSeries::from_real(&[1.0, 1.0]);
        assert_eq!(cauchy_product(&a, &a, 2), TruncatedSeries::from_real(&[1.0, 2.0, 1.0]));
        let p = TruncatedSeries::from_real(&[1.0, 1.0, 1.0]);
        let q = TruncatedSeries::from_real(&[1.0, -1.0]);
        assert_eq!(
            cauchy_product(&p, &q, 3),
            TruncatedSeries::from_real(&[1.0, 0.0, 0.0, -1.0])
        );
        // Truncation at a smaller cap.
        assert_eq!(cauchy_product(&p, &q, 1), TruncatedSeries::from_real(&[1.0, 0.0]));
    }

    #[test]
    fn calculus() {
        let z3 = TruncatedSeries::monomial(3, 3);
        assert_eq!(z3.derivative(), TruncatedSeries::from_real(&[0.0, 0.0, 3.0]));
        assert!(TruncatedSeries::constant(c(5.0), 0).derivative().is_zero());
        let one = TruncatedSeries::constant(c(1.0), 0);
        assert_eq!(one.primitive0(), TruncatedSeries::from_real(&[0.0, 1.0]));
        let z = TruncatedSeries::monomial(1, 1);
        assert_eq!(z.primitive0(), TruncatedSeries::from_real(&[0.0, 0.0, 0.5]));
        let f = TruncatedSeries::from_real(&[0.0, 0.0, 3.0]);
        assert_eq!(f.primitive0(), TruncatedSeries::from_real(&[0.0, 0.0, 0.0, 1.0]));
    }

    #[test]
    fn evaluation_and_dilation() {
        let f = TruncatedSeries::from_real(&[1.0, 1.0]);
        assert_eq!(f.evaluate(c(0.5)), c(1.5));
        let z4 = TruncatedSeries::monomial(4, 4);
        assert!((z4.evaluate(Complex64::i()) - c(1.0)).norm() < 1e-15);
        let z2 = TruncatedSeries::monomial(2, 2);
        assert_eq!(z2.dilate(0.5), TruncatedSeries::from_real(&[0.0, 0.0, 0.25]));
        assert_eq!(f.dilate(1.0), f);
    }

    #[test]
    fn powers() {
        let g = TruncatedSeries::from_real(&[1.0, 1.0]);
        assert_eq!(g.power(0, 3), TruncatedSeries::from_real(&[1.0, 0.0, 0.0, 0.0]));
        assert_eq!(g.power(2, 2), TruncatedSeries::from_real(&[1.0, 2.0, 1.0]));
        let z = TruncatedSeries::monomial(1, 1);
        assert_eq!(z.power(3, 3), TruncatedSeries::monomial(3, 3));
    }

    #[test]
    fn max_modulus_examples() {
        let z5 = TruncatedSeries::monomial(5, 5);
        assert!((z5.max_modulus(0.7).unwrap() - 0.7f64.powi(5)).abs() < 1e-15);
        let k = TruncatedSeries::constant(Complex64::new(3.0, 4.0), 2);
        assert!((k.max_modulus(0.5).unwrap() - 5.0).abs() < 1e-15);
        let f = TruncatedSeries::from_real(&[1.0, 1.0]);
        assert!((f.max_modulus(0.5).unwrap() - 1.5).abs() < 1e-14);
        // Maximum strictly between grid points: 1 + e^{-i·0.1} z has its peak at θ = 0.1.
        let g = TruncatedSeries::new(vec![c(1.0), Complex64::from_polar(1.0, -0.1)]);
        assert!((g.max_modulus(0.9).unwrap() - 1.9).abs() < 1e-12);
        assert!(f.max_modulus(1.5).is_err());
    }

    #[test]
    fn circle_samples_match_horner() {
        let f = TruncatedSeries::new(vec![c(1.0), Complex64::new(0.5, -2.0), c(0.0), Complex64::new(0.1, 0.3)]);
        let m = 7;
        let s = f.sample_circle(0.8, m);
        for (j, v) in s.iter().enumerate() {
            let z = Complex64::from_polar(0.8, 2.0 * PI * j as f64 / m as f64);
            assert!((v - f.evaluate(z)).norm() < 1e-14);
        }
        // Folding: more coefficients than samples.
        let s2 = f.sample_circle(0.8, 2);
        assert!((s2[1] - f.evaluate(c(-0.8))).norm() < 1e-14);
    }

    #[test]
    fn parsing() {
        let p: TruncatedSeries = "poly:1,0,2".parse().unwrap();
        assert_eq!(p, TruncatedSeries::from_real(&[1.0, 0.0, 2.0]));
        let j: TruncatedSeries = "[[1,0],[0,-1.5]]".parse().unwrap();
        assert_eq!(j.coeffs(), &[c(1.0), Complex64::new(0.0, -1.5)]);
        assert!("poly:1,x".parse::<TruncatedSeries>().is_err());
        assert!("1,2".parse::<TruncatedSeries>().is_err());
        assert!("[[1,0],[2]]".parse::<TruncatedSeries>().is_err());
    }

    #[test]
    fn pi0_is_idempotent() {
        let f = TruncatedSeries::from_real(&[3.0, 1.0]);
        assert_eq!(f.pi0(), TruncatedSeries::from_real(&[0.0, 1.0]));
        assert_eq!(f.pi0().pi0(), f.pi0());
        assert!(TruncatedSeries::constant(c(2.0), 0).pi0().is_zero());
    }
}
