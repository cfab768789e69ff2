//! Truncated q-series with integer coefficients: eta products, divisor-sum
//! series, character twists, theta series of small positive definite forms,
//! and the coefficient identity tying the quaternary theta series to
//! `η(4z)⁸/η(2z)⁴` and `η(z)²η(11z)²`.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{Map, Value};
use thiserror::Error;

use crate::json;
use crate::linalg::{det, IntMatrix};

/// Coefficient range over which the identity is checked by default.
pub const IDENTITY_BOUND: u64 = 1388;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QSeriesError {
    #[error("eta product has exponent offset {offset24}/24, which is not an integer")]
    NonIntegralOffset { offset24: i64 },
    #[error("series with leading coefficient {0} is not invertible over the integers")]
    NonUnitConstant(BigInt),
    #[error("eta factor η({m}z)^{e} needs m >= 1")]
    BadFactor { m: u64, e: i64 },
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("{0}")]
    Shape(String),
    #[error("{0} is not an odd prime other than 11")]
    BadPrime(u64),
    #[error("4(p + 1 - b(p)) = {value} is not divisible by 5 at p = {p}")]
    Divisibility { p: u64, value: BigInt },
}

/// `Σ c_i q^(offset24/24 + i)`, known for exponents up to `precision`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    precision: i64,
    offset24: i64,
    coeffs: Vec<BigInt>,
}

/// `η(m z)^e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EtaFactor {
    pub m: u64,
    pub e: i64,
}

impl EtaFactor {
    pub const fn new(m: u64, e: i64) -> Self {
        EtaFactor { m, e }
    }
}

impl QSeries {
    /// Integer-exponent series starting at `q^start`.
    pub fn from_coeffs(start: i64, coeffs: Vec<BigInt>, precision: i64) -> Self {
        let mut s = QSeries {
            precision,
            offset24: 24 * start,
            coeffs,
        };
        s.truncate();
        s
    }

    pub fn from_i64(start: i64, coeffs: &[i64], precision: i64) -> Self {
        Self::from_coeffs(start, coeffs.iter().map(|&c| BigInt::from(c)).collect(), precision)
    }

    pub fn one(precision: i64) -> Self {
        Self::from_coeffs(0, vec![BigInt::one()], precision)
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    pub fn offset24(&self) -> i64 {
        self.offset24
    }

    pub fn has_integral_exponents(&self) -> bool {
        self.offset24 % 24 == 0
    }

    fn start(&self) -> i64 {
        debug_assert!(self.has_integral_exponents());
        Integer::div_floor(&self.offset24, &24)
    }

    fn truncate(&mut self) {
        if self.has_integral_exponents() {
            let keep = (self.precision - self.start() + 1).max(0) as usize;
            self.coeffs.truncate(keep);
        }
    }

    /// Coefficient of `q^n`; zero outside the stored range.
    pub fn coeff(&self, n: i64) -> BigInt {
        if !self.has_integral_exponents() || n > self.precision {
            return BigInt::zero();
        }
        let i = n - self.start();
        if i < 0 {
            return BigInt::zero();
        }
        self.coeffs.get(i as usize).cloned().unwrap_or_default()
    }

    pub fn set_coeff(&mut self, n: i64, value: BigInt) {
        let i = (n - self.start()) as usize;
        if self.coeffs.len() <= i {
            self.coeffs.resize(i + 1, BigInt::zero());
        }
        self.coeffs[i] = value;
    }

    /// Coefficients of `q^0 … q^precision`.
    pub fn dense(&self) -> Vec<BigInt> {
        (0..=self.precision.max(-1)).map(|n| self.coeff(n)).collect()
    }

    pub fn mul(&self, other: &QSeries) -> QSeries {
        let precision = self.precision.min(other.precision);
        let offset24 = self.offset24 + other.offset24;
        // index i carries q^(offset24/24 + i); keep exponents <= precision
        let len = if precision * 24 < offset24 {
            0
        } else {
            ((precision * 24 - offset24) / 24 + 1) as usize
        };
        let mut out = vec![BigInt::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        QSeries {
            precision,
            offset24,
            coeffs: out,
        }
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        assert!(self.has_integral_exponents() && other.has_integral_exponents());
        let precision = self.precision.min(other.precision);
        let start = self.start().min(other.start());
        let coeffs = (start..=precision).map(|n| self.coeff(n) - other.coeff(n)).collect();
        QSeries::from_coeffs(start, coeffs, precision)
    }

    /// `1/f` for `f` whose lowest stored coefficient is `±1`.
    pub fn inverse(&self) -> Result<QSeries, QSeriesError> {
        let lead = self.coeffs.first().cloned().unwrap_or_default();
        if lead.abs() != BigInt::one() {
            return Err(QSeriesError::NonUnitConstant(lead));
        }
        let offset24 = -self.offset24;
        let len = if self.precision * 24 < offset24 {
            0
        } else {
            ((self.precision * 24 - offset24) / 24 + 1) as usize
        };
        let mut inv: Vec<BigInt> = Vec::with_capacity(len);
        for n in 0..len {
            let mut acc = if n == 0 { BigInt::one() } else { BigInt::zero() };
            for k in 1..=n.min(self.coeffs.len().saturating_sub(1)) {
                let c = &self.coeffs[k];
                if !c.is_zero() {
                    acc -= c * &inv[n - k];
                }
            }
            // lead is ±1, so division is multiplication
            inv.push(acc * &lead);
        }
        Ok(QSeries {
            precision: self.precision,
            offset24,
            coeffs: inv,
        })
    }

    /// Sparse `"n:coeff"` listing of the nonzero terms.
    pub fn to_sparse_text(&self) -> String {
        let mut out = String::new();
        for n in self.start()..=self.precision {
            let c = self.coeff(n);
            if !c.is_zero() {
                if !out.is_empty() {
                    out.push(' ');
                }
                let _ = write!(out, "{n}:{c}");
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("precision".into(), Value::from(self.precision));
        obj.insert("start".into(), Value::from(self.start()));
        obj.insert(
            "coeffs".into(),
            Value::Array(self.coeffs.iter().map(json::int_to_json).collect()),
        );
        Value::Object(obj)
    }
}

/// `∏ (1 − q^{m n})^e` for `n ≥ 1`, as a plain power series through `q^degree`.
fn euler_power(m: u64, e: u64, degree: usize) -> Vec<BigInt> {
    let mut r = vec![BigInt::zero(); degree + 1];
    r[0] = BigInt::one();
    let m = m as usize;
    let mut step = m;
    while step <= degree {
        for _ in 0..e {
            for i in (step..=degree).rev() {
                if !r[i - step].is_zero() {
                    let t = r[i - step].clone();
                    r[i] -= t;
                }
            }
        }
        step += m;
    }
    r
}

/// `∏ η(m z)^e` through `q^precision`.
pub fn eta_product(factors: &[EtaFactor], precision: u64) -> Result<QSeries, QSeriesError> {
    if let Some(f) = factors.iter().find(|f| f.m == 0) {
        return Err(QSeriesError::BadFactor { m: f.m, e: f.e });
    }
    let offset24: i64 = factors.iter().map(|f| f.m as i64 * f.e).sum();
    if offset24 % 24 != 0 {
        return Err(QSeriesError::NonIntegralOffset { offset24 });
    }
    let start = offset24 / 24;
    let precision = precision as i64;
    let degree = precision - start;
    if degree < 0 {
        return Ok(QSeries::from_coeffs(start, Vec::new(), precision));
    }
    let degree = degree as usize;
    let mut num = QSeries::from_coeffs(0, vec![BigInt::one()], degree as i64);
    let mut den = num.clone();
    for f in factors {
        let part = QSeries::from_coeffs(0, euler_power(f.m, f.e.unsigned_abs(), degree), degree as i64);
        if f.e > 0 {
            num = num.mul(&part);
        } else if f.e < 0 {
            den = den.mul(&part);
        }
    }
    let body = num.mul(&den.inverse()?);
    Ok(QSeries::from_coeffs(start, body.coeffs, precision))
}

/// `σ₁(0..=n)` (divisor sums) with `σ₁(0) = 0`.
pub fn sigma1_table(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut s = vec![0u64; n + 1];
    for d in 1..=n {
        for m in (d..=n).step_by(d) {
            s[m] += d as u64;
        }
    }
    s
}

/// `Σ σ₁(2n−1) q^{2n−1}` through `q^precision`.
pub fn sigma1_series(precision: u64) -> QSeries {
    let table = sigma1_table(precision);
    let coeffs = table
        .iter()
        .enumerate()
        .map(|(n, &s)| if n % 2 == 1 { BigInt::from(s) } else { BigInt::zero() })
        .collect();
    QSeries::from_coeffs(0, coeffs, precision as i64)
}

/// `χ_p(n) = 0` when `p | n`, else 1.
pub fn chi(p: u64, n: i64) -> bool {
    n.rem_euclid(p as i64) != 0
}

/// Drops the terms whose exponent is divisible by `p`.
pub fn twist(f: &QSeries, p: u64) -> QSeries {
    assert!(f.has_integral_exponents(), "twist needs integer exponents");
    let start = f.start();
    let coeffs = f
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| if chi(p, start + i as i64) { c.clone() } else { BigInt::zero() })
        .collect();
    QSeries::from_coeffs(start, coeffs, f.precision)
}

/// Representation numbers `#{x ∈ Zⁿ : x G xᵀ = m}` for `m ≤ precision`.
///
/// Enumerates the box `|x_i| ≤ t_i` where `t_i` is the largest integer with
/// `t_i² · det G ≤ precision · cof_ii(G)`, i.e. `x_i² ≤ precision · (G⁻¹)_ii`.
pub fn quaternary_theta(g: &IntMatrix, precision: u64) -> Result<QSeries, QSeriesError> {
    if !g.is_symmetric() {
        return Err(QSeriesError::Shape("form must be square and symmetric".into()));
    }
    let n = g.rows();
    for k in 1..=n {
        let minor = IntMatrix::from_fn(k, k, |i, j| g.get(i, j).clone());
        if !det(&minor).expect("square").is_positive() {
            return Err(QSeriesError::NotPositiveDefinite);
        }
    }
    let d = det(g).expect("square");
    let bounds: Vec<i64> = (0..n)
        .map(|i| {
            let cof = IntMatrix::from_fn(n - 1, n - 1, |r, c| {
                let rr = if r < i { r } else { r + 1 };
                let cc = if c < i { c } else { c + 1 };
                g.get(rr, cc).clone()
            });
            let cof = det(&cof).expect("square");
            let rhs = BigInt::from(precision) * cof;
            let mut t = (&rhs / &d).sqrt();
            while &t * &t * &d > rhs {
                t -= 1;
            }
            while (&t + 1u32) * (&t + 1u32) * &d <= rhs {
                t += 1;
            }
            t.to_i64().expect("box bound fits")
        })
        .collect();
    let gi: Vec<Vec<i64>> = g
        .to_i64_rows()
        .ok_or_else(|| QSeriesError::Shape("form entries exceed 64 bits".into()))?;
    let len = precision as usize + 1;
    let counts: Vec<u64> = if n == 0 {
        let mut c = vec![0; len];
        c[0] = 1;
        c
    } else {
        (-bounds[0]..=bounds[0])
            .into_par_iter()
            .map(|x0| {
                let mut local = vec![0u64; len];
                let mut x = vec![0i64; n];
                x[0] = x0;
                box_scan(&gi, &bounds, &mut x, 1, precision as i128, &mut local);
                local
            })
            .reduce(
                || vec![0u64; len],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            )
    };
    Ok(QSeries::from_coeffs(
        0,
        counts.into_iter().map(BigInt::from).collect(),
        precision as i64,
    ))
}

fn box_scan(g: &[Vec<i64>], bounds: &[i64], x: &mut [i64], i: usize, limit: i128, out: &mut [u64]) {
    if i == x.len() {
        let mut v: i128 = 0;
        for a in 0..x.len() {
            for b in 0..x.len() {
                v += (x[a] as i128) * (g[a][b] as i128) * (x[b] as i128);
            }
        }
        if v <= limit {
            out[v as usize] += 1;
        }
        return;
    }
    for t in -bounds[i]..=bounds[i] {
        x[i] = t;
        box_scan(g, bounds, x, i + 1, limit, out);
    }
}

/// Gram matrix of `{(a,b,c,d) : a ≡ d, b ≡ c (mod 4)}` under
/// `(a² + 11b² + c² + 11d²)/4`, in the basis
/// `(4,0,0,0), (0,4,0,0), (1,0,0,1), (0,1,1,0)`.
pub fn quaternary_gram() -> IntMatrix {
    IntMatrix::from_i64_rows(&[&[4, 0, 1, 0], &[0, 44, 0, 11], &[1, 0, 3, 0], &[0, 11, 0, 3]])
}

/// `b(n)`: coefficients of `η(z)²η(11z)²`.
pub fn b_series(precision: u64) -> QSeries {
    eta_product(&[EtaFactor::new(1, 2), EtaFactor::new(11, 2)], precision).expect("offset 24/24 = 1")
}

/// Which coefficients the identity compares.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdentityForm {
    /// `5·a(n) = 4·(σ₁(n) − b(n))` for every `n` coprime to 22.
    Coprime22,
    /// `5·χ₂(n)·a(n) = 4·χ₁₁(n)·(σ₁(n) − b(n))` for every `n`, as usually
    /// displayed. Fails already at `n = 2`; kept for comparison.
    AsPrinted,
}

impl IdentityForm {
    pub fn name(self) -> &'static str {
        match self {
            IdentityForm::Coprime22 => "coprime-22",
            IdentityForm::AsPrinted => "as-printed",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub bound: u64,
    pub form: IdentityForm,
    pub holds: bool,
    pub first_mismatch: Option<u64>,
}

impl IdentityReport {
    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("bound".into(), Value::from(self.bound));
        obj.insert("form".into(), Value::from(self.form.name()));
        obj.insert("holds".into(), Value::from(self.holds));
        obj.insert(
            "firstMismatch".into(),
            self.first_mismatch.map_or(Value::Null, Value::from),
        );
        Value::Object(obj)
    }
}

/// The three coefficient sequences entering the identity; fields are public
/// so callers can inject faults.
#[derive(Clone, Debug)]
pub struct IdentityInputs {
    pub bound: u64,
    pub theta: QSeries,
    pub b: QSeries,
    pub sigma1: Vec<u64>,
}

impl IdentityInputs {
    pub fn compute(bound: u64) -> Self {
        IdentityInputs {
            bound,
            theta: quaternary_theta(&quaternary_gram(), bound).expect("form is positive definite"),
            b: b_series(bound),
            sigma1: sigma1_table(bound),
        }
    }

    pub fn check(&self, form: IdentityForm) -> IdentityReport {
        let mismatch = (1..=self.bound).find(|&n| {
            let ni = n as i64;
            let a = self.theta.coeff(ni);
            let rhs = BigInt::from(self.sigma1[n as usize]) - self.b.coeff(ni);
            let (lhs, rhs) = match form {
                IdentityForm::Coprime22 => {
                    if !(chi(2, ni) && chi(11, ni)) {
                        return false;
                    }
                    (a * 5, rhs * 4)
                }
                IdentityForm::AsPrinted => {
                    let l = if chi(2, ni) { a * 5 } else { BigInt::zero() };
                    let r = if chi(11, ni) { rhs * 4 } else { BigInt::zero() };
                    (l, r)
                }
            };
            lhs != rhs
        });
        IdentityReport {
            bound: self.bound,
            form,
            holds: mismatch.is_none(),
            first_mismatch: mismatch,
        }
    }
}

/// The identity over `1 ≤ n ≤ bound`, restricted to `n` coprime to 22.
pub fn identity_check(bound: u64) -> IdentityReport {
    IdentityInputs::compute(bound).check(IdentityForm::Coprime22)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if sieve[i] {
            out.push(i as u64);
            for j in (i * i..=n).step_by(i) {
                sieve[j] = false;
            }
        }
    }
    out
}

/// `(4/5)(p + 1 − b(p))` for an odd prime `p ≠ 11`.
pub fn a_p_formula(p: u64) -> Result<BigInt, QSeriesError> {
    if p == 2 || p == 11 || !is_prime(p) {
        return Err(QSeriesError::BadPrime(p));
    }
    let b = b_series(p).coeff(p as i64);
    let value: BigInt = (BigInt::from(p + 1) - b) * 4u32;
    if !value.is_multiple_of(&BigInt::from(5)) {
        return Err(QSeriesError::Divisibility { p, value });
    }
    Ok(value / 5)
}

/// `b(p)² < 4p` for every prime `p ≤ bound`.
pub fn ramanujan_check(bound: u64) -> bool {
    let b = b_series(bound);
    primes_up_to(bound).into_iter().all(|p| {
        let c = b.coeff(p as i64);
        &c * &c < BigInt::from(4 * p)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &QSeries, upto: i64) -> Vec<i64> {
        (0..=upto).map(|n| s.coeff(n).to_i64().unwrap()).collect()
    }

    #[test]
    fn eta_quotient_small() {
        let f = eta_product(&[EtaFactor::new(4, 8), EtaFactor::new(2, -4)], 9).unwrap();
        assert_eq!(ints(&f, 9), vec![0, 1, 0, 4, 0, 6, 0, 8, 0, 13]);
    }

    #[test]
    fn b_coefficients() {
        let b = b_series(13);
        assert_eq!(ints(&b, 5), vec![0, 1, -2, -1, 2, 1]);
        assert_eq!(b.coeff(13), BigInt::from(4));
    }

    #[test]
    fn fractional_offset_rejected() {
        assert_eq!(
            eta_product(&[EtaFactor::new(1, 1)], 10),
            Err(QSeriesError::NonIntegralOffset { offset24: 1 })
        );
    }

    #[test]
    fn negative_offset_series() {
        // 1/Δ = q^{-1} + 24 + 324 q + 3200 q^2 + ...
        let f = eta_product(&[EtaFactor::new(1, -24)], 2).unwrap();
        assert_eq!(f.coeff(-1), BigInt::one());
        assert_eq!(f.coeff(0), BigInt::from(24));
        assert_eq!(f.coeff(1), BigInt::from(324));
        assert_eq!(f.coeff(2), BigInt::from(3200));
    }

    #[test]
    fn inverse_needs_unit() {
        let f = QSeries::from_i64(0, &[2, 1], 5);
        assert!(matches!(f.inverse(), Err(QSeriesError::NonUnitConstant(_))));
        let g = QSeries::from_i64(0, &[1, -1], 5);
        assert_eq!(ints(&g.inverse().unwrap(), 5), vec![1; 6]);
    }

    #[test]
    fn sigma_series_values() {
        let s = sigma1_series(9);
        assert_eq!(ints(&s, 9), vec![0, 1, 0, 4, 0, 6, 0, 8, 0, 13]);
    }

    #[test]
    fn twist_values() {
        let f = QSeries::from_i64(0, &[0, 1, 1], 2);
        assert_eq!(twist(&f, 2), QSeries::from_i64(0, &[0, 1, 0], 2));
        let t = twist(&quaternary_theta(&quaternary_gram(), 17).unwrap(), 2);
        assert_eq!(t.to_sparse_text(), "3:4 5:4 7:8 9:12 13:8 15:20 17:16");
        assert_eq!(twist(&t, 2), t);
    }

    #[test]
    fn quaternary_theta_prefix() {
        let t = quaternary_theta(&quaternary_gram(), 13).unwrap();
        assert_eq!(ints(&t, 13), vec![1, 0, 0, 4, 4, 4, 4, 8, 12, 12, 4, 0, 16, 8]);
        let z4 = quaternary_theta(&IntMatrix::identity(4), 1).unwrap();
        assert_eq!(ints(&z4, 1), vec![1, 8]);
        assert_eq!(det(&quaternary_gram()).unwrap(), BigInt::from(121));
    }

    #[test]
    fn quaternary_theta_rejects_indefinite() {
        let g = IntMatrix::from_i64_rows(&[&[1, 2], &[2, 1]]);
        assert_eq!(quaternary_theta(&g, 3), Err(QSeriesError::NotPositiveDefinite));
    }

    #[test]
    fn identity_small_and_fault_injection() {
        assert!(identity_check(13).holds);
        let mut inputs = IdentityInputs::compute(30);
        assert!(inputs.check(IdentityForm::Coprime22).holds);
        assert_eq!(inputs.check(IdentityForm::AsPrinted).first_mismatch, Some(2));
        let b5 = inputs.b.coeff(5) + 1;
        inputs.b.set_coeff(5, b5);
        assert_eq!(inputs.check(IdentityForm::Coprime22).first_mismatch, Some(5));
    }

    #[test]
    fn a_p_values() {
        assert_eq!(a_p_formula(3).unwrap(), BigInt::from(4));
        assert_eq!(a_p_formula(5).unwrap(), BigInt::from(4));
        assert_eq!(a_p_formula(13).unwrap(), BigInt::from(8));
        assert_eq!(a_p_formula(11), Err(QSeriesError::BadPrime(11)));
        assert_eq!(a_p_formula(9), Err(QSeriesError::BadPrime(9)));
    }

    #[test]
    fn ramanujan_small() {
        assert!(ramanujan_check(13));
        assert_eq!(b_series(2).coeff(2), BigInt::from(-2));
    }

    #[test]
    fn primes() {
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert!(is_prime(97) && !is_prime(91) && !is_prime(1));
    }
}
