use num_complex::Complex64;
use paraprod::harness::{random_h0_polys, SymbolFamily};
use paraprod::norms::{bergman_norm, bloch_seminorm, q_functional};
use paraprod::paraproducts::{apply_word_full, canonical_decomposition_h0, Letter};
use paraprod::quad::gauss_legendre;
use paraprod::weights::WeightEval;
use paraprod::{QuadratureConfig, TruncatedSeries, WeightModifier, Word};
use std::f64::consts::TAU;

/// `L f(z)` by nested Gauss–Legendre line integrals along `[0, z]`,
/// using only point values of `f`, `f'`, `g`, `g'`.
fn word_by_line_integrals(word: &Word, g: &TruncatedSeries, f: &TruncatedSeries, z: Complex64) -> Complex64 {
    let (x, wts) = gauss_legendre(24);
    let nodes: Vec<(f64, f64)> = x.iter().zip(&wts).map(|(x, w)| (0.5 * (x + 1.0), 0.5 * w)).collect();
    let gp = g.derivative();
    // Value and derivative of `L_i ⋯ L_N f` at a point, recursively from the right.
    fn eval(
        letters: &[Letter],
        g: &TruncatedSeries,
        gp: &TruncatedSeries,
        f: &TruncatedSeries,
        nodes: &[(f64, f64)],
        z: Complex64,
    ) -> (Complex64, Complex64) {
        let Some((&first, rest)) = letters.split_first() else {
            return (f.evaluate(z), f.derivative().evaluate(z));
        };
        let (h, hp) = eval(rest, g, gp, f, nodes, z);
        let deriv = match first {
            Letter::M => g.evaluate(z) * hp + gp.evaluate(z) * h,
            Letter::T => h * gp.evaluate(z),
            Letter::S => hp * g.evaluate(z),
        };
        let value = match first {
            Letter::M => g.evaluate(z) * h,
            _ => nodes
                .iter()
                .map(|&(t, w)| {
                    let (h, hp) = eval(rest, g, gp, f, nodes, z * t);
                    let d = match first {
                        Letter::T => h * gp.evaluate(z * t),
                        _ => hp * g.evaluate(z * t),
                    };
                    d * z * w
                })
                .sum(),
        };
        (value, deriv)
    }
    eval(word.letters(), g, &gp, f, &nodes, z).0
}

#[test]
fn word_application_matches_line_integrals() {
    let gs = SymbolFamily::new(21, 6, 4).symbols();
    let fs = random_h0_polys(22, 6, 5);
    let z = Complex64::from_polar(0.7, 1.1);
    for w in ["T", "S", "M", "TS", "ST", "MT", "TMS", "SST"] {
        let word: Word = w.parse().unwrap();
        for (g, f) in gs.iter().zip(&fs) {
            let series = apply_word_full(&word, g, f).evaluate(z);
            let oracle = word_by_line_integrals(&word, g, f, z);
            assert!((series - oracle).norm() <= 1e-11 * oracle.norm().max(1e-3), "{w}: {series} vs {oracle}");
        }
    }
}

#[test]
fn two_letter_spot_values() {
    // Integration by parts on H_0: TM = ST, hence TS = ST - TT; and (gT_g f)' gives MT = ST + TT.
    let ts = canonical_decomposition_h0(&"TS".parse().unwrap()).unwrap();
    let mt = canonical_decomposition_h0(&"MT".parse().unwrap()).unwrap();
    assert_eq!(ts.c, vec![-1]);
    assert_eq!(mt.c, vec![1]);
    let g = TruncatedSeries::from_real(&[0.2, -1.0, 0.5, 0.3]);
    let f = TruncatedSeries::from_real(&[0.0, 1.0, 0.0, -2.0]);
    let z = Complex64::new(-0.4, 0.5);
    let at = |w: &str| word_by_line_integrals(&w.parse().unwrap(), &g, &f, z);
    assert!((at("TS") - (at("ST") - at("TT"))).norm() < 1e-13);
    assert!((at("MT") - (at("ST") + at("TT"))).norm() < 1e-13);
}

fn polar_norm_oracle(f: &TruncatedSeries, w: &WeightEval, p: f64) -> f64 {
    // Composite 20-point Gauss–Legendre in both r and θ (no trapezoid rule).
    let (x, wt) = gauss_legendre(20);
    let r_hi = w.r_cut_for(p / 2.0);
    let (nr, nt) = (400, 64);
    let mut total = 0.0;
    for i in 0..nr {
        let (a, b) = (r_hi * i as f64 / nr as f64, r_hi * (i + 1) as f64 / nr as f64);
        for (xi, wi) in x.iter().zip(&wt) {
            let r = 0.5 * (a + b) + 0.5 * (b - a) * xi;
            let wr = 0.5 * (b - a) * wi;
            let mut ang = 0.0;
            for k in 0..nt {
                let (c, d) = (TAU * k as f64 / nt as f64, TAU * (k + 1) as f64 / nt as f64);
                for (xj, wj) in x.iter().zip(&wt) {
                    let t = 0.5 * (c + d) + 0.5 * (d - c) * xj;
                    ang += 0.5 * (d - c) * wj * f.evaluate(Complex64::from_polar(r, t)).norm().powf(p);
                }
            }
            total += wr * r * ang * (-p * w.phi(r).unwrap()).exp();
        }
    }
    (total / std::f64::consts::PI).powf(1.0 / p)
}

#[test]
fn bergman_norm_against_polar_oracle() {
    let w = WeightEval::new("w0:1:1".parse().unwrap());
    let cfg = QuadratureConfig::default();
    let f = TruncatedSeries::new(vec![
        Complex64::new(0.5, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-0.3, 0.2),
        Complex64::new(0.1, 0.0),
    ]);
    for p in [1.0, 3.0, 4.0] {
        let v = bergman_norm(&f, &w, p, WeightModifier::plain(p), &cfg).unwrap().value;
        let o = polar_norm_oracle(&f, &w, p);
        assert!((v / o - 1.0).abs() <= 1e-8, "p={p}: {v} vs {o}");
    }
}

#[test]
fn bloch_seminorm_against_dense_grid() {
    let w = WeightEval::new("w1:1:1".parse().unwrap());
    let cfg = QuadratureConfig::default();
    let g = TruncatedSeries::from_real(&[0.1, 0.8, -0.6, 0.3]);
    let q = 1.5;
    let gp = g.derivative();
    let mut best: f64 = 0.0;
    for i in 0..=2000 {
        let r = 0.999 * i as f64 / 2000.0;
        let d = 1.0 + w.phi_prime(r).unwrap();
        for k in 0..360 {
            let z = Complex64::from_polar(r, TAU * k as f64 / 360.0);
            best = best.max(q * g.evaluate(z).norm().powf(q - 1.0) * gp.evaluate(z).norm() / d);
        }
    }
    let v = bloch_seminorm(&g, &w, q, &cfg).unwrap().value.powf(q);
    assert!(v >= best * (1.0 - 1e-9), "{v} < {best}");
    assert!(v <= best * (1.0 + 1e-4), "{v} >> {best}");
}

#[test]
fn q_functional_with_unit_exponent_is_multiplication_norm() {
    // | |g| T_g f | = | g T_g f | pointwise.
    let w = WeightEval::new("w0:1:1".parse().unwrap());
    let cfg = QuadratureConfig::default();
    let mt: Word = "MT".parse().unwrap();
    for (g, f) in SymbolFamily::new(3, 5, 6).symbols().iter().zip(random_h0_polys(4, 5, 6)) {
        for p in [2.0, 3.0] {
            let q = q_functional(&f, g, &w, (1, 1), 1, p, &cfg).unwrap().value;
            let n = bergman_norm(&apply_word_full(&mt, g, &f), &w, p, WeightModifier::plain(p), &cfg)
                .unwrap()
                .value;
            assert!((q / n - 1.0).abs() <= 1e-9, "p={p}: {q} vs {n}");
        }
    }
}
