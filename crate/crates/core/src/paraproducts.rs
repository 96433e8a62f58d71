//! The paraproducts `M_g f = fg`, `T_g f = ∫_0^z f g'`, `S_g f = ∫_0^z f' g`,
//! words over them, and the decomposition of a word into the `S^{k-j} T^{n+j}`
//! basis.
//!
//! The decomposition coefficients are integers independent of `g`. They are
//! recovered by exact rational linear algebra on polynomial symbols and
//! monomial inputs, then cross-validated on a second symbol.

use crate::error::{Error, Result};
use crate::series::{cauchy_product, TruncatedSeries};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    M,
    S,
    T,
}

impl Letter {
    pub fn as_char(self) -> char {
        match self {
            Letter::M => 'M',
            Letter::S => 'S',
            Letter::T => 'T',
        }
    }
}

/// A `g`-word `L_1 ⋯ L_N`; `letters[0]` is `L_1`, applied last.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Word {
    letters: Vec<Letter>,
}

/// Letter counts `(ℓ, m, n)` = numbers of `M`, `S`, `T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub l: usize,
    pub m: usize,
    pub n: usize,
}

impl std::ops::Add for Counts {
    type Output = Counts;
    fn add(self, o: Counts) -> Counts {
        Counts {
            l: self.l + o.l,
            m: self.m + o.m,
            n: self.n + o.n,
        }
    }
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidWord(String::new()));
        }
        Ok(Word { letters })
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// `N`.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn counts(&self) -> Counts {
        let count = |x| self.letters.iter().filter(|&&l| l == x).count();
        Counts {
            l: count(Letter::M),
            m: count(Letter::S),
            n: count(Letter::T),
        }
    }

    /// `k = ℓ + m`.
    pub fn k(&self) -> usize {
        let c = self.counts();
        c.l + c.m
    }

    /// `s = N / n`, defined when the word contains a `T`.
    pub fn s(&self) -> Option<f64> {
        let n = self.counts().n;
        (n > 0).then(|| self.len() as f64 / n as f64)
    }

    /// `δ_L`: 0 if the word ends in `T M^i`, 1 if it ends in `S M^i`,
    /// `None` for words made only of `M`.
    pub fn delta_l(&self) -> Option<u8> {
        match self.letters.iter().rev().find(|&&l| l != Letter::M) {
            Some(Letter::T) => Some(0),
            Some(Letter::S) => Some(1),
            _ => None,
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    /// `S^a T^b` (requires `a + b ≥ 1`).
    pub fn s_t(a: usize, b: usize) -> Result<Word> {
        let mut letters = vec![Letter::S; a];
        letters.extend(std::iter::repeat_n(Letter::T, b));
        Word::new(letters)
    }

    /// Cap large enough that applying the word to `f` loses nothing.
    pub fn required_cap(&self, g: &TruncatedSeries, f: &TruncatedSeries) -> usize {
        f.degree().unwrap_or(0) + self.len() * g.degree().unwrap_or(0)
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .trim()
            .chars()
            .map(|ch| match ch {
                'M' => Ok(Letter::M),
                'S' => Ok(Letter::S),
                'T' => Ok(Letter::T),
                _ => Err(Error::InvalidWord(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        Word::new(letters).map_err(|_| Error::InvalidWord(s.to_string()))
    }
}

impl TryFrom<String> for Word {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Word> for String {
    fn from(w: Word) -> String {
        w.to_string()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

/// One letter applied to `f`, truncated at `cap`.
pub fn apply_letter(
    letter: Letter,
    g: &TruncatedSeries,
    f: &TruncatedSeries,
    cap: usize,
) -> TruncatedSeries {
    match letter {
        Letter::M => cauchy_product(f, g, cap),
        Letter::T if cap == 0 => TruncatedSeries::zero(0),
        Letter::S if cap == 0 => TruncatedSeries::zero(0),
        Letter::T => cauchy_product(f, &g.derivative(), cap - 1).primitive0(),
        Letter::S => cauchy_product(&f.derivative(), g, cap - 1).primitive0(),
    }
}

/// `L f = L_1(L_2(⋯(L_N f)))` truncated at `cap`.
///
/// Every letter maps `z^j` into multiples of `z^{≥j}`, so truncating the
/// intermediate results at `cap` is exact for the returned coefficients.
pub fn apply_word(word: &Word, g: &TruncatedSeries, f: &TruncatedSeries, cap: usize) -> TruncatedSeries {
    let mut h = f.with_cap(cap);
    for &l in word.letters.iter().rev() {
        h = apply_letter(l, g, &h, cap);
    }
    h
}

/// `apply_word` at the cap where no truncation happens.
pub fn apply_word_full(word: &Word, g: &TruncatedSeries, f: &TruncatedSeries) -> TruncatedSeries {
    apply_word(word, g, f, word.required_cap(g, f))
}

/// Max coefficient deviation `|L_{λg} f − λ^N L_g f|`.
pub fn homogeneity_check(word: &Word, g: &TruncatedSeries, f: &TruncatedSeries, lambda: Complex64) -> f64 {
    let cap = word.required_cap(g, f);
    let lhs = apply_word(word, &g.scale(lambda), f, cap);
    let rhs = apply_word(word, g, f, cap).scale(lambda.powu(word.len() as u32));
    lhs.max_coeff_diff(&rhs)
}

/// Decomposition of a word: on `H_0`,
/// `L = S^k T^n + Σ_{j=1..k} c_j S^{k-j} T^{n+j}`; on the full space the
/// split `c_j = a_j + b_j` into parts without and with `Π_0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub word: Word,
    pub leading: Leading,
    /// `c_1..c_k`.
    pub c: Vec<i64>,
    #[serde(rename = "delta_L")]
    pub delta_l: Option<u8>,
    /// Largest mismatch on the validation symbol (exact rational arithmetic).
    pub residual: f64,
    /// The word has no `T` letter.
    #[serde(default)]
    pub no_t: bool,
    /// Full-space coefficients of `S^{k-j} T^{n+j}`, `j = 1..k`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<i64>>,
    /// Full-space coefficients of `S^{k-j} T^{n+j} Π_0`, `j = 1..k`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<i64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Leading {
    pub k: usize,
    pub n: usize,
}

impl CanonicalForm {
    /// `Σ_{j=0..k} c_j S^{k-j} T^{n+j} f` with `c_0 = 1`, truncated at `cap`.
    pub fn apply(&self, g: &TruncatedSeries, f: &TruncatedSeries, cap: usize) -> TruncatedSeries {
        let Leading { k, n } = self.leading;
        let mut acc = TruncatedSeries::zero(cap);
        for j in 0..=k {
            let cj = if j == 0 { 1 } else { self.c[j - 1] };
            if cj == 0 {
                continue;
            }
            let b = Word::s_t(k - j, n + j).expect("non-empty basis word");
            acc = acc.add(&apply_word(&b, g, f, cap).scale(Complex64::new(cj as f64, 0.0)));
        }
        acc
    }
}

/// Longest word accepted by the decomposition solver.
pub const MAX_DECOMPOSE_LEN: usize = 8;

type Q = BigRational;

/// Exact polynomial with rational coefficients.
#[derive(Clone, Debug, PartialEq)]
struct QPoly(Vec<Q>);

impl QPoly {
    fn from_ints(c: &[i64]) -> Self {
        QPoly(c.iter().map(|&x| Q::from_integer(BigInt::from(x))).collect())
    }

    fn monomial(i: usize) -> Self {
        let mut v = vec![Q::zero(); i + 1];
        v[i] = Q::one();
        QPoly(v)
    }

    fn coeff(&self, k: usize) -> Q {
        self.0.get(k).cloned().unwrap_or_else(Q::zero)
    }

    fn mul(&self, o: &QPoly) -> QPoly {
        if self.0.is_empty() || o.0.is_empty() {
            return QPoly(Vec::new());
        }
        let mut out = vec![Q::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly(out)
    }

    fn derivative(&self) -> QPoly {
        QPoly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Q::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    fn primitive0(&self) -> QPoly {
        let mut out = vec![Q::zero()];
        out.extend(
            self.0
                .iter()
                .enumerate()
                .map(|(k, c)| c / Q::from_integer(BigInt::from(k + 1))),
        );
        QPoly(out)
    }

    fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    fn len(&self) -> usize {
        self.0.len()
    }
}

fn q_apply_letter(l: Letter, g: &QPoly, f: &QPoly) -> QPoly {
    match l {
        Letter::M => f.mul(g),
        Letter::T => f.mul(&g.derivative()).primitive0(),
        Letter::S => f.derivative().mul(g).primitive0(),
    }
}

fn q_apply_word(w: &Word, g: &QPoly, f: &QPoly) -> QPoly {
    w.letters
        .iter()
        .rev()
        .fold(f.clone(), |h, &l| q_apply_letter(l, g, &h))
}

/// Basis `B_j = S^{k-j} T^{n+j}`, `j = 0..=k`.
fn basis(k: usize, n: usize) -> Vec<Word> {
    (0..=k)
        .map(|j| Word::s_t(k - j, n + j).expect("k + n ≥ 1"))
        .collect()
}

/// Solve `A x = b` exactly. Returns `None` if the system is inconsistent
/// and `Some(Err(rank))` if it is consistent but underdetermined.
fn solve_exact(mut a: Vec<Vec<Q>>, mut b: Vec<Q>, unknowns: usize) -> Option<std::result::Result<Vec<Q>, usize>> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..unknowns {
        let Some(p) = (r..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        b.swap(r, p);
        let inv = a[r][col].recip();
        for c in col..unknowns {
            a[r][c] = &a[r][c] * &inv;
        }
        b[r] = &b[r] * &inv;
        for i in 0..rows {
            if i != r && !a[i][col].is_zero() {
                let factor = a[i][col].clone();
                for c in col..unknowns {
                    let t = &factor * &a[r][c];
                    a[i][c] -= t;
                }
                let t = &factor * &b[r];
                b[i] -= t;
            }
        }
        pivots.push(col);
        r += 1;
    }
    if b[r..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    if r < unknowns {
        return Some(Err(r));
    }
    let mut x = vec![Q::zero(); unknowns];
    for (row, &col) in pivots.iter().enumerate() {
        x[col] = b[row].clone();
    }
    Some(Ok(x))
}

/// Append the coefficient equations of `target = Σ_j x_j cols[j]`.
fn push_equations(a: &mut Vec<Vec<Q>>, b: &mut Vec<Q>, target: &QPoly, cols: &[QPoly]) {
    let len = cols.iter().map(QPoly::len).chain([target.len()]).max().unwrap_or(0);
    for p in 0..len {
        a.push(cols.iter().map(|c| c.coeff(p)).collect());
        b.push(target.coeff(p));
    }
}

const SYMBOLS: [&[i64]; 3] = [&[1, 1], &[1, 1, 1], &[1, 1, 1, 1]];

/// Solve for `c_0..c_k` using symbol `SYMBOLS[sym]` and inputs `z^1..z^{k+1+extra}`,
/// stacking further symbols when the monomial inputs alone are not enough.
fn solve_h0(word: &Word, sym: usize) -> Result<Vec<Q>> {
    let k = word.k();
    let n = word.counts().n;
    let basis = basis(k, n);
    for extra in 0..3 {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for s in sym..(sym + 1 + extra).min(SYMBOLS.len()) {
            let g = QPoly::from_ints(SYMBOLS[s]);
            for i in 1..=k + 1 + 2 * extra {
                let f = QPoly::monomial(i);
                let cols: Vec<QPoly> = basis.iter().map(|w| q_apply_word(w, &g, &f)).collect();
                push_equations(&mut a, &mut b, &q_apply_word(word, &g, &f), &cols);
            }
        }
        match solve_exact(a, b, k + 1) {
            None => return Err(Error::SingularSystem(format!("{word}: inconsistent system"))),
            Some(Ok(x)) => return Ok(x),
            Some(Err(_)) => continue,
        }
    }
    Err(Error::SingularSystem(word.to_string()))
}

fn to_integers(word: &Word, x: &[Q], offset: usize) -> Result<Vec<i64>> {
    x.iter()
        .enumerate()
        .map(|(j, q)| {
            let value = q.to_f64().unwrap_or(f64::NAN);
            if !q.is_integer() {
                return Err(Error::NonIntegerCoefficient {
                    word: word.to_string(),
                    index: j + offset,
                    value,
                });
            }
            q.to_integer().to_i64().ok_or(Error::NonIntegerCoefficient {
                word: word.to_string(),
                index: j + offset,
                value,
            })
        })
        .collect()
}

/// Max absolute coefficient of `L f − Σ c_j B_j f` over the monomial inputs
/// `z^1..z^{k+3}` with symbol `g`.
fn h0_residual(word: &Word, c: &[Q], g: &QPoly) -> Q {
    let k = word.k();
    let basis = basis(k, word.counts().n);
    let mut worst = Q::zero();
    for i in 1..=k + 3 {
        let f = QPoly::monomial(i);
        let lhs = q_apply_word(word, g, &f);
        let mut acc = QPoly(vec![Q::zero(); lhs.len()]);
        for (cj, w) in c.iter().zip(&basis) {
            let t = q_apply_word(w, g, &f);
            if acc.0.len() < t.0.len() {
                acc.0.resize(t.0.len(), Q::zero());
            }
            for (p, v) in t.0.iter().enumerate() {
                acc.0[p] += cj * v;
            }
        }
        let len = acc.len().max(lhs.len());
        for p in 0..len {
            let d = (lhs.coeff(p) - acc.coeff(p)).abs();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

fn check_len(word: &Word) -> Result<()> {
    if word.len() > MAX_DECOMPOSE_LEN {
        return Err(Error::WordTooLong(word.len()));
    }
    let c = word.counts();
    if c.m + c.n == 0 {
        return Err(Error::InvalidWord(format!("{word} (needs an S or T letter)")));
    }
    Ok(())
}

/// The `H_0` decomposition `L = S^k T^n + Σ c_j S^{k-j} T^{n+j}`.
///
/// Solved with `g = 1 + z`, re-solved independently with `g = 1 + z + z²`;
/// the two integer vectors must agree. Words without `T` are solved in the
/// same basis and flagged with `no_t`.
pub fn canonical_decomposition_h0(word: &Word) -> Result<CanonicalForm> {
    check_len(word)?;
    let k = word.k();
    let n = word.counts().n;
    let x = solve_h0(word, 0)?;
    let ints = to_integers(word, &x, 0)?;
    if ints[0] != 1 {
        return Err(Error::SingularSystem(format!(
            "{word}: leading coefficient {} instead of 1",
            ints[0]
        )));
    }
    let check = solve_h0(word, 1)?;
    if check != x {
        return Err(Error::SingularSystem(format!(
            "{word}: coefficients differ between validation symbols"
        )));
    }
    let residual = h0_residual(word, &x, &QPoly::from_ints(SYMBOLS[1]))
        .to_f64()
        .unwrap_or(f64::INFINITY);
    Ok(CanonicalForm {
        word: word.clone(),
        leading: Leading { k, n },
        c: ints[1..].to_vec(),
        delta_l: word.delta_l(),
        residual,
        no_t: n == 0,
        a: None,
        b: None,
    })
}

/// The full-space decomposition
/// `L = (1-δ_L) S^kT^n + δ_L S^kT^nΠ_0 + Σ a_j S^{k-j}T^{n+j} + Σ b_j S^{k-j}T^{n+j}Π_0`.
///
/// The `H_0` part fixes `c_j = a_j + b_j`; applying `L` to the constant 1
/// (where `Π_0` vanishes) fixes the `a_j`. The coefficient of `S^k T^n`
/// found this way must equal `1 - δ_L`. A basis element that annihilates
/// constants (only `S^k` when `n = 0`) leaves its coefficient to the `δ_L` rule.
pub fn full_decomposition(word: &Word) -> Result<CanonicalForm> {
    let mut form = canonical_decomposition_h0(word)?;
    let k = form.leading.k;
    let n = form.leading.n;
    let basis = basis(k, n);
    let delta = word
        .delta_l()
        .ok_or_else(|| Error::InvalidWord(word.to_string()))?;

    let one = QPoly::monomial(0);
    // Columns that vanish on constants for every symbol are fixed by the rule.
    let free: Vec<usize> = (0..=k)
        .filter(|&j| {
            SYMBOLS
                .iter()
                .any(|s| !q_apply_word(&basis[j], &QPoly::from_ints(s), &one).is_zero())
        })
        .collect();
    let mut a_mat = Vec::new();
    let mut rhs = Vec::new();
    for s in SYMBOLS {
        let g = QPoly::from_ints(s);
        let cols: Vec<QPoly> = free.iter().map(|&j| q_apply_word(&basis[j], &g, &one)).collect();
        push_equations(&mut a_mat, &mut rhs, &q_apply_word(word, &g, &one), &cols);
    }
    let sol = match solve_exact(a_mat, rhs, free.len()) {
        Some(Ok(x)) => x,
        _ => return Err(Error::SingularSystem(format!("{word}: full-space system"))),
    };
    let mut x = vec![None; k + 1];
    for (i, &j) in free.iter().enumerate() {
        x[j] = Some(sol[i].clone());
    }
    let x0_expected = Q::from_integer(BigInt::from(1 - delta as i64));
    let x: Vec<Q> = x
        .into_iter()
        .enumerate()
        .map(|(j, v)| v.unwrap_or_else(|| if j == 0 { x0_expected.clone() } else { Q::zero() }))
        .collect();
    if x[0] != x0_expected {
        return Err(Error::SingularSystem(format!(
            "{word}: S^kT^n coefficient {} contradicts delta_L = {delta}",
            x[0]
        )));
    }
    let a_ints = to_integers(word, &x[1..], 1)?;
    let b_ints: Vec<i64> = form.c.iter().zip(&a_ints).map(|(c, a)| c - a).collect();
    form.a = Some(a_ints);
    form.b = Some(b_ints);
    Ok(form)
}

/// Apply the full-space decomposition to `f` (any `f`, not only `H_0`).
pub fn apply_full_form(form: &CanonicalForm, g: &TruncatedSeries, f: &TruncatedSeries, cap: usize) -> Option<TruncatedSeries> {
    let (a, b) = (form.a.as_ref()?, form.b.as_ref()?);
    let Leading { k, n } = form.leading;
    let delta = form.delta_l? as f64;
    let f0 = f.pi0();
    let mut acc = TruncatedSeries::zero(cap);
    for j in 0..=k {
        let w = Word::s_t(k - j, n + j).ok()?;
        let (x, y) = if j == 0 {
            (1.0 - delta, delta)
        } else {
            (a[j - 1] as f64, b[j - 1] as f64)
        };
        if x != 0.0 {
            acc = acc.add(&apply_word(&w, g, f, cap).scale(Complex64::new(x, 0.0)));
        }
        if y != 0.0 {
            acc = acc.add(&apply_word(&w, g, &f0, cap).scale(Complex64::new(y, 0.0)));
        }
    }
    Some(acc)
}

/// All words of length `1..=max_len` over `{M, S, T}`, in lexicographic order per length.
pub fn all_words(max_len: usize) -> Vec<Word> {
    let alphabet = [Letter::M, Letter::S, Letter::T];
    let mut out = Vec::new();
    let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| {
                alphabet.iter().map(move |&l| {
                    let mut v = w.clone();
                    v.push(l);
                    v
                })
            })
            .collect();
        out.extend(layer.iter().map(|l| Word { letters: l.clone() }));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(c: &[f64]) -> TruncatedSeries {
        TruncatedSeries::from_real(c)
    }

    fn w(x: &str) -> Word {
        x.parse().unwrap()
    }

    #[test]
    fn letter_examples() {
        let z = s(&[0.0, 1.0]);
        let one = s(&[1.0]);
        assert_eq!(apply_letter(Letter::T, &z, &one, 1), s(&[0.0, 1.0]));
        let f = s(&[2.0, 3.0, -1.0]);
        assert_eq!(apply_letter(Letter::S, &one, &f, 2), f.pi0());
        let z2 = s(&[0.0, 0.0, 1.0]);
        let out = apply_letter(Letter::T, &z2, &z, 3);
        assert!((out.coeff(3).re - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(out.coeff(0), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn word_examples() {
        let z = s(&[0.0, 1.0]);
        let one = s(&[1.0]);
        let st = apply_word(&w("ST"), &z, &one, 4);
        assert_eq!(st, s(&[0.0, 0.0, 0.5, 0.0, 0.0]));
        let half_t = apply_word(&w("T"), &s(&[0.0, 0.0, 1.0]), &one, 4).scale(Complex64::new(0.5, 0.0));
        assert_eq!(st, half_t);
        let g = s(&[1.0, -2.0, 0.5]);
        assert_eq!(apply_word(&w("M"), &g, &one, 2), g);
        assert!(apply_word(&w("MST"), &g, &TruncatedSeries::zero(3), 8).is_zero());
    }

    #[test]
    fn counts_and_exponent() {
        let x = w("MSTTS");
        assert_eq!(x.counts(), Counts { l: 1, m: 2, n: 2 });
        assert_eq!(x.k(), 3);
        assert_eq!(x.s(), Some(2.5));
        assert_eq!(w("MS").s(), None);
        assert_eq!(w("STM").delta_l(), Some(0));
        assert_eq!(w("TSMM").delta_l(), Some(1));
        assert_eq!(w("MM").delta_l(), None);
        assert!("".parse::<Word>().is_err());
        assert!("MXT".parse::<Word>().is_err());
    }

    #[test]
    fn homogeneity_exact_for_real_scalars() {
        let g = s(&[0.3, 1.0, -0.7]);
        let f = s(&[0.0, 1.0, 2.0]);
        assert_eq!(homogeneity_check(&w("T"), &g, &f, Complex64::new(1.0, 0.0)), 0.0);
        assert!(homogeneity_check(&w("T"), &g, &f, Complex64::new(2.0, 0.0)) <= 1e-13);
        let d = homogeneity_check(&w("MST"), &g, &f, Complex64::new(1.0, 1.0));
        assert!(d <= 1e-12 * apply_word_full(&w("MST"), &g, &f).max_abs_coeff() * 8.0);
    }

    #[test]
    fn decomposition_spot_values() {
        let ts = canonical_decomposition_h0(&w("TS")).unwrap();
        assert_eq!(ts.leading, Leading { k: 1, n: 1 });
        assert_eq!(ts.c, vec![-1]);
        assert_eq!(ts.residual, 0.0);
        assert_eq!(canonical_decomposition_h0(&w("MT")).unwrap().c, vec![1]);
        assert_eq!(canonical_decomposition_h0(&w("ST")).unwrap().c, vec![0]);
        let m = canonical_decomposition_h0(&w("M"));
        assert!(m.is_err());
        assert_eq!(
            canonical_decomposition_h0(&w("MSTSTSTST")),
            Err(Error::WordTooLong(9))
        );
    }

    #[test]
    fn full_decomposition_delta_rule() {
        let t = full_decomposition(&w("T")).unwrap();
        assert_eq!(t.delta_l, Some(0));
        assert!(t.c.is_empty());
        let f = full_decomposition(&w("STM")).unwrap();
        assert_eq!(f.delta_l, Some(0));
        let g = full_decomposition(&w("TSM")).unwrap();
        assert_eq!(g.delta_l, Some(1));
    }

    #[test]
    fn full_form_reproduces_word_off_h0() {
        let g = s(&[0.4, -1.0, 0.3, 0.2]);
        let f = s(&[1.5, 0.5, -2.0]);
        for word in ["TSM", "MTS", "SMT", "TM", "SM", "MS", "MMT"] {
            let word = w(word);
            let form = full_decomposition(&word).unwrap();
            let cap = word.required_cap(&g, &f);
            let lhs = apply_word(&word, &g, &f, cap);
            let rhs = apply_full_form(&form, &g, &f, cap).unwrap();
            assert!(lhs.max_coeff_diff(&rhs) <= 1e-12 * lhs.max_abs_coeff().max(1.0), "{word}");
        }
    }
}
