//! Quadrature and 1-D optimisation primitives shared by the numeric modules.
//!
//! Everything that integrates a weight works on the *logarithm* of the
//! integrand: the weights in this crate underflow double precision long
//! before the unit circle, so each Gauss–Kronrod panel factors out its own
//! maximum log value and panels are combined with log-sum-exp.

use num_complex::Complex64;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// 7-point Gauss weights, attached to XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// `ln(e^a + e^b)` without overflow; `-∞` is the additive identity.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln Σ e^{x_i}`, summed in iteration order.
pub fn log_sum_exp<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let xs: Vec<f64> = xs.into_iter().collect();
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY || m.is_nan() {
        return m;
    }
    if m == f64::INFINITY {
        return m;
    }
    let s: f64 = xs.iter().map(|x| (x - m).exp()).sum();
    m + s.ln()
}

/// Result of a log-domain integration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogQuad {
    /// Natural log of the integral (`-∞` for an identically zero integrand).
    pub log_value: f64,
    /// Estimated relative error (Kronrod minus Gauss, summed over panels).
    pub rel_err: f64,
    pub panels: usize,
    /// Deepest bisection level reached.
    pub depth: u32,
    pub converged: bool,
}

#[derive(Clone, Copy, Debug)]
struct Panel {
    a: f64,
    b: f64,
    log_val: f64,
    log_err: f64,
    depth: u32,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.log_err == other.log_err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.log_err
            .total_cmp(&other.log_err)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gk15_log<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, depth: u32) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut vals = [f64::NEG_INFINITY; 15];
    for i in 0..7 {
        vals[2 * i] = f(c - h * XGK[i]);
        vals[2 * i + 1] = f(c + h * XGK[i]);
    }
    vals[14] = f(c);
    let m = vals
        .iter()
        .copied()
        .filter(|v| !v.is_nan())
        .fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return Panel {
            a,
            b,
            log_val: f64::NEG_INFINITY,
            log_err: f64::NEG_INFINITY,
            depth,
        };
    }
    let e = |v: f64| if v.is_nan() { 0.0 } else { (v - m).exp() };
    let mut kron = WGK[7] * e(vals[14]);
    let mut gauss = WG[3] * e(vals[14]);
    for i in 0..7 {
        let pair = e(vals[2 * i]) + e(vals[2 * i + 1]);
        kron += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    let log_h = h.ln();
    let log_val = m + log_h + kron.ln();
    let diff = (kron - gauss).abs();
    let log_err = if diff > 0.0 {
        m + log_h + diff.ln()
    } else {
        f64::NEG_INFINITY
    };
    Panel {
        a,
        b,
        log_val,
        log_err,
        depth,
    }
}

/// Adaptive Gauss–Kronrod (7/15) integration of `exp(log_f)` over the
/// intervals delimited by `breaks` (sorted, at least two entries).
///
/// Refinement always bisects the panel with the largest error estimate until
/// the summed error is below `rel_tol` times the integral or `max_panels` is
/// reached. Panels are summed in left-to-right order, so the result does not
/// depend on the refinement history.
pub fn log_integrate<F: Fn(f64) -> f64>(
    log_f: F,
    breaks: &[f64],
    rel_tol: f64,
    max_panels: usize,
) -> LogQuad {
    assert!(breaks.len() >= 2, "need at least one panel");
    let mut heap: BinaryHeap<Panel> = breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| gk15_log(&log_f, w[0], w[1], 0))
        .collect();
    let log_tol = rel_tol.ln();
    loop {
        let total = log_sum_exp(heap.iter().map(|p| p.log_val));
        let err = log_sum_exp(heap.iter().map(|p| p.log_err));
        let done = total == f64::NEG_INFINITY || err <= total + log_tol;
        if done || heap.len() >= max_panels {
            let mut panels = heap.into_vec();
            panels.sort_by(|x, y| x.a.total_cmp(&y.a));
            let log_value = log_sum_exp(panels.iter().map(|p| p.log_val));
            let log_err = log_sum_exp(panels.iter().map(|p| p.log_err));
            let rel_err = if log_value == f64::NEG_INFINITY {
                0.0
            } else {
                (log_err - log_value).exp()
            };
            return LogQuad {
                log_value,
                rel_err,
                panels: panels.len(),
                depth: panels.iter().map(|p| p.depth).max().unwrap_or(0),
                converged: done,
            };
        }
        let worst = heap.pop().expect("non-empty panel set");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval exhausted at machine resolution; keep it but stop refining it.
            heap.push(Panel {
                log_err: f64::NEG_INFINITY,
                ..worst
            });
            continue;
        }
        heap.push(gk15_log(&log_f, worst.a, mid, worst.depth + 1));
        heap.push(gk15_log(&log_f, mid, worst.b, worst.depth + 1));
    }
}

/// Result of a complex-valued integration.
#[derive(Clone, Copy, Debug)]
pub struct ComplexQuad {
    pub value: Complex64,
    pub abs_err: f64,
    pub panels: usize,
    pub converged: bool,
}

/// Adaptive Gauss–Kronrod for a complex integrand given as `e^{s(x)} v(x)`,
/// where `f(x) = (s, v)`. The scale is factored per panel so integrands with
/// a large dynamic range in magnitude stay representable.
///
/// Stops when the summed absolute error is below
/// `rel_tol * max(|I|, abs_floor)`.
pub fn integrate_complex<F: Fn(f64) -> (f64, Complex64)>(
    f: F,
    breaks: &[f64],
    rel_tol: f64,
    abs_floor: f64,
    max_panels: usize,
) -> ComplexQuad {
    struct CPanel {
        a: f64,
        b: f64,
        val: Complex64,
        err: f64,
    }
    let eval = |a: f64, b: f64| -> CPanel {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut pts = [(0.0, Complex64::new(0.0, 0.0)); 15];
        for i in 0..7 {
            pts[2 * i] = f(c - h * XGK[i]);
            pts[2 * i + 1] = f(c + h * XGK[i]);
        }
        pts[14] = f(c);
        let m = pts
            .iter()
            .map(|p| p.0)
            .filter(|s| !s.is_nan())
            .fold(f64::NEG_INFINITY, f64::max);
        if m == f64::NEG_INFINITY {
            return CPanel {
                a,
                b,
                val: Complex64::new(0.0, 0.0),
                err: 0.0,
            };
        }
        let e = |p: (f64, Complex64)| p.1 * (p.0 - m).exp();
        let mut kron = e(pts[14]) * WGK[7];
        let mut gauss = e(pts[14]) * WG[3];
        for i in 0..7 {
            let pair = e(pts[2 * i]) + e(pts[2 * i + 1]);
            kron += pair * WGK[i];
            if i % 2 == 1 {
                gauss += pair * WG[i / 2];
            }
        }
        let scale = h * m.exp();
        CPanel {
            a,
            b,
            val: kron * scale,
            err: (kron - gauss).norm() * scale,
        }
    };
    let mut panels: Vec<CPanel> = breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| eval(w[0], w[1]))
        .collect();
    loop {
        panels.sort_by(|x, y| x.a.total_cmp(&y.a));
        let total: Complex64 = panels.iter().map(|p| p.val).sum();
        let err: f64 = panels.iter().map(|p| p.err).sum();
        let done = err <= rel_tol * total.norm().max(abs_floor);
        if done || panels.len() >= max_panels {
            return ComplexQuad {
                value: total,
                abs_err: err,
                panels: panels.len(),
                converged: done,
            };
        }
        let (idx, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .expect("non-empty");
        let worst = panels.swap_remove(idx);
        let mid = 0.5 * (worst.a + worst.b);
        panels.push(eval(worst.a, mid));
        panels.push(eval(mid, worst.b));
    }
}

/// Plain adaptive Gauss–Kronrod for a real, moderately scaled integrand.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let q = integrate_complex(
        |x| (0.0, Complex64::new(f(x), 0.0)),
        &[a, b],
        rel_tol,
        f64::MIN_POSITIVE,
        4096,
    );
    q.value.re
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` (Newton iteration on `P_n`).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pn1 = if n <= 1 { 1.0 } else { p0 };
            dp = nf * (z * pn - pn1) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// The 64-point rule used for path-length integrals.
pub fn gauss_legendre_64() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(64))
}

/// Golden-section search for the maximum of `f` on `[a, b]`.
/// Returns `(argmax, max)`.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, x_tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iters = 0;
    while (b - a).abs() > x_tol && iters < 200 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        iters += 1;
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Chebyshev-type break points on `[0, hi]` clustered at both ends.
pub fn chebyshev_breaks(hi: f64, n: usize) -> Vec<f64> {
    let n = n.max(1);
    (0..=n)
        .map(|i| 0.5 * hi * (1.0 - (std::f64::consts::PI * i as f64 / n as f64).cos()))
        .collect()
}

/// Break points on `[0, hi]` clustered toward `hi` only.
pub fn clustered_breaks(hi: f64, n: usize) -> Vec<f64> {
    let n = n.max(1);
    (0..=n)
        .map(|i| hi * (0.5 * std::f64::consts::PI * i as f64 / n as f64).sin())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_add_exp_identities() {
        assert_eq!(log_add_exp(f64::NEG_INFINITY, 2.0), 2.0);
        assert!((log_add_exp(0.0, 0.0) - 2f64.ln()).abs() < 1e-15);
        assert!((log_add_exp(1000.0, 1000.0) - (1000.0 + 2f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(64);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(10)).sum();
        assert!((s - 2.0 / 11.0).abs() < 1e-14);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-13);
    }

    #[test]
    fn log_integrate_gaussian_tail() {
        // ∫_0^∞ e^{-x²} dx = √π / 2, truncated at 40.
        let q = log_integrate(|x| -x * x, &[0.0, 1.0, 4.0, 40.0], 1e-13, 500);
        assert!(q.converged);
        let v = q.log_value.exp();
        assert!((v - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-13);
    }

    #[test]
    fn log_integrate_extreme_scale() {
        // ∫_0^1 e^{-2000 + x} dx computed without underflow.
        let q = log_integrate(|x| -2000.0 + x, &[0.0, 1.0], 1e-13, 100);
        let exact = -2000.0 + (1f64.exp() - 1.0).ln();
        assert!((q.log_value - exact).abs() < 1e-12);
    }

    #[test]
    fn golden_finds_parabola_peak() {
        let (x, v) = golden_max(|x| -(x - 0.3) * (x - 0.3) + 2.0, 0.0, 1.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-6);
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn complex_integration_of_oscillation() {
        let q = integrate_complex(
            |x| (0.0, Complex64::new(0.0, x).exp()),
            &[0.0, std::f64::consts::PI],
            1e-13,
            1.0,
            200,
        );
        assert!((q.value - Complex64::new(0.0, 2.0)).norm() < 1e-12);
    }
}
