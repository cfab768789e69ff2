//! Linear codes over `Z_k`: the McKay matrix, the two length-24 codes over
//! `Z_4`, the negacirculant code over `Z_11`, self-duality, Euclidean
//! weights and exhaustive minimum-weight search.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde_json::{Map, Value};
use thiserror::Error;

use crate::json::{self, JsonError};
use crate::linalg::{hnf, IntMatrix, IntVector};

/// Largest number of information vectors `min_euclidean_weight` will visit.
pub const ENUMERATION_LIMIT: u64 = 1 << 26;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("modulus {0} is too small (need k >= 2)")]
    Modulus(u64),
    #[error("self-dual codes have even length; got {0}")]
    OddLength(usize),
    #[error("code over Z_{modulus} is not self-dual")]
    NotSelfDual { modulus: u64 },
    #[error("word has length {got}, code has length {expected}")]
    Length { expected: usize, got: usize },
    #[error("entry {entry} is not a residue modulo {modulus}")]
    Residue { entry: u64, modulus: u64 },
    #[error("{modulus}^{rank} information vectors exceed the enumeration limit; use the lattice route")]
    EnumerationGuard { modulus: u64, rank: usize },
}

/// A `Z_k`-submodule of `Z_k^n`, stored by a generator matrix with entries
/// in `{0, …, k−1}`.
#[derive(Clone, PartialEq, Eq)]
pub struct ZkCode {
    modulus: u64,
    generator: IntMatrix,
}

/// A word of residues `{0, …, k−1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Codeword(Vec<u64>);

impl Codeword {
    pub fn new(entries: Vec<u64>) -> Self {
        Codeword(entries)
    }

    pub fn zero(n: usize) -> Self {
        Codeword(vec![0; n])
    }

    /// Reduces an integer vector into residues modulo `k`.
    pub fn from_vector(v: &IntVector, k: u64) -> Self {
        let m = BigInt::from(k);
        Codeword(
            v.entries()
                .iter()
                .map(|x| x.mod_floor(&m).to_u64().expect("residue fits"))
                .collect(),
        )
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The lift `ρ`: residue `i` to the integer `i`.
    pub fn lift(&self) -> IntVector {
        IntVector::new(self.0.iter().map(|&x| BigInt::from(x)).collect())
    }
}

impl ZkCode {
    /// Builds a code from any integer generator matrix; entries are reduced
    /// into `{0, …, k−1}`.
    pub fn new(modulus: u64, generator: &IntMatrix) -> Result<Self, CodeError> {
        if modulus < 2 {
            return Err(CodeError::Modulus(modulus));
        }
        Ok(ZkCode {
            modulus,
            generator: generator.reduce_mod(&BigInt::from(modulus)),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn length(&self) -> usize {
        self.generator.cols()
    }

    pub fn generator(&self) -> &IntMatrix {
        &self.generator
    }

    /// Generator rows as residues.
    pub fn generator_rows(&self) -> Vec<Codeword> {
        self.generator
            .row_vectors()
            .iter()
            .map(|v| Codeword::from_vector(v, self.modulus))
            .collect()
    }

    /// `G · xᵀ mod k`; zero exactly when `x` is orthogonal to the code.
    pub fn syndrome(&self, x: &Codeword) -> Result<Vec<u64>, CodeError> {
        if x.len() != self.length() {
            return Err(CodeError::Length {
                expected: self.length(),
                got: x.len(),
            });
        }
        let k = self.modulus as u128;
        Ok(self
            .generator_rows()
            .iter()
            .map(|g| {
                let s = g
                    .entries()
                    .iter()
                    .zip(x.entries())
                    .fold(0u128, |acc, (&a, &b)| (acc + a as u128 * (b as u128 % k)) % k);
                s as u64
            })
            .collect())
    }

    /// Number of codewords, from the index of `ρ(C) + kZⁿ` in `Zⁿ`.
    pub fn size(&self) -> BigInt {
        let n = self.length();
        let k = BigInt::from(self.modulus);
        let stacked = self
            .generator
            .vstack(&IntMatrix::identity(n).scaled(&k))
            .expect("same width");
        let (h, _) = hnf(&stacked);
        let index: BigInt = h.diagonal().iter().product();
        num_traits::pow(k, n) / index
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("modulus".into(), Value::from(self.modulus));
        obj.insert("length".into(), Value::from(self.length() as u64));
        obj.insert("generator".into(), json::matrix_to_json(&self.generator));
        Value::Object(obj)
    }

    pub fn from_json(v: &Value) -> Result<Self, JsonError> {
        let obj = json::as_object(v, "code")?;
        let modulus = json::u64_from_json(json::field(obj, "modulus")?, "modulus")?;
        let length = json::u64_from_json(json::field(obj, "length")?, "length")?;
        let generator = json::matrix_from_json(json::field(obj, "generator")?, "generator")?;
        if generator.rows() > 0 && generator.cols() as u64 != length {
            return Err(JsonError::invalid("generator", "column count does not match length"));
        }
        ZkCode::new(modulus, &generator).map_err(|e| JsonError::invalid("modulus", e.to_string()))
    }
}

impl fmt::Debug for ZkCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ZkCode")
            .field("modulus", &self.modulus)
            .field("length", &self.length())
            .field("rows", &self.generator.rows())
            .finish()
    }
}

const MCKAY_S: [[i64; 12]; 12] = [
    [0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1],
    [-1, 0, 1, -1, 1, 1, 1, -1, -1, -1, 1, -1],
    [-1, -1, 0, 1, -1, 1, 1, 1, -1, -1, -1, 1],
    [-1, 1, -1, 0, 1, -1, 1, 1, 1, -1, -1, -1],
    [-1, -1, 1, -1, 0, 1, -1, 1, 1, 1, -1, -1],
    [-1, -1, -1, 1, -1, 0, 1, -1, 1, 1, 1, -1],
    [-1, -1, -1, -1, 1, -1, 0, 1, -1, 1, 1, 1],
    [-1, 1, -1, -1, -1, 1, -1, 0, 1, -1, 1, 1],
    [-1, 1, 1, -1, -1, -1, 1, -1, 0, 1, -1, 1],
    [-1, 1, 1, 1, -1, -1, -1, 1, -1, 0, 1, -1],
    [-1, -1, 1, 1, 1, -1, -1, -1, 1, -1, 0, 1],
    [-1, 1, -1, 1, 1, 1, -1, -1, -1, 1, -1, 0],
];

/// First row of the negacirculant block of the length-24 code over `Z_11`.
pub const C11_SEED: [u64; 12] = [2, 2, 2, 10, 4, 9, 7, 1, 1, 1, 1, 1];

/// McKay's 12×12 skew-symmetric matrix with `S·Sᵀ = 11·I`.
pub fn mckay_s() -> IntMatrix {
    IntMatrix::from_fn(12, 12, |i, j| BigInt::from(MCKAY_S[i][j]))
}

fn standard_form(modulus: u64, right: &IntMatrix) -> ZkCode {
    let g = IntMatrix::identity(right.rows()).hstack(right).expect("square block");
    ZkCode::new(modulus, &g).expect("modulus >= 2")
}

/// The `Z_4` code with generator `(I | 2I + S)`; Construction A gives the Leech lattice.
pub fn code_c4() -> ZkCode {
    let right = mckay_s()
        .add(&IntMatrix::identity(12).scaled(&BigInt::from(2)))
        .expect("12x12");
    standard_form(4, &right)
}

/// The `Z_4` code with generator `(I | S)`; Construction A gives the odd Leech lattice.
pub fn code_d4() -> ZkCode {
    standard_form(4, &mckay_s())
}

/// The `Z_11` code with generator `(I | A)`, `A` negacirculant.
pub fn code_c11() -> ZkCode {
    let seed = IntVector::new(C11_SEED.iter().map(|&x| BigInt::from(x)).collect());
    standard_form(11, &negacirculant(&seed, 11))
}

/// Square negacirculant matrix: each row is the previous one shifted right
/// by one, the wrapped entry negated modulo `k`.
pub fn negacirculant(first_row: &IntVector, k: u64) -> IntMatrix {
    let n = first_row.dim();
    let m = BigInt::from(k);
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    let mut cur: Vec<BigInt> = first_row.entries().iter().map(|x| x.mod_floor(&m)).collect();
    for _ in 0..n {
        rows.push(cur.clone());
        if n == 0 {
            break;
        }
        let wrapped = (-cur[n - 1].clone()).mod_floor(&m);
        cur.rotate_right(1);
        cur[0] = wrapped;
    }
    if n == 0 {
        return IntMatrix::zeros(0, 0);
    }
    IntMatrix::from_rows(&rows).expect("uniform rows")
}

/// Self-dual iff `G·Gᵀ ≡ 0 (mod k)` and `|C| = k^{n/2}`.
pub fn is_self_dual(code: &ZkCode) -> Result<bool, CodeError> {
    let n = code.length();
    if n % 2 == 1 {
        return Err(CodeError::OddLength(n));
    }
    let k = BigInt::from(code.modulus);
    if !code.generator.row_gram().is_zero_mod(&k) {
        return Ok(false);
    }
    Ok(code.size() == num_traits::pow(k, n / 2))
}

/// `Σ min{x_i², (k − x_i)²}`.
pub fn euclidean_weight(x: &Codeword, k: u64) -> u64 {
    x.entries()
        .iter()
        .map(|&r| {
            let r = r % k;
            let s = k - r;
            (r * r).min(s * s)
        })
        .sum()
}

/// Membership in a self-dual code via its parity check `G·xᵀ ≡ 0`.
pub fn membership(code: &ZkCode, x: &Codeword) -> Result<bool, CodeError> {
    if !is_self_dual(code)? {
        return Err(CodeError::NotSelfDual {
            modulus: code.modulus,
        });
    }
    if let Some(&bad) = x.entries().iter().find(|&&e| e >= code.modulus) {
        return Err(CodeError::Residue {
            entry: bad,
            modulus: code.modulus,
        });
    }
    Ok(code.syndrome(x)?.iter().all(|&s| s == 0))
}

/// Minimum Euclidean weight over nonzero codewords, capped at `cap`.
///
/// Visits all `k^rank` combinations of generator rows; weights at or above
/// `cap` are pruned early, so the result is `min(d_E, cap)`. Pass
/// `u64::MAX` for the exact minimum.
pub fn min_euclidean_weight(code: &ZkCode, cap: u64) -> Result<u64, CodeError> {
    let k = code.modulus;
    let rank = code.generator.rows();
    let total = (0..rank).try_fold(1u64, |acc, _| acc.checked_mul(k).filter(|&t| t <= ENUMERATION_LIMIT));
    if total.is_none() {
        return Err(CodeError::EnumerationGuard { modulus: k, rank });
    }
    if rank == 0 {
        return Ok(cap);
    }
    let rows: Vec<Vec<u32>> = code
        .generator_rows()
        .iter()
        .map(|c| c.entries().iter().map(|&x| x as u32).collect())
        .collect();
    let table: Vec<u64> = (0..k).map(|r| (r * r).min((k - r) * (k - r))).collect();
    let n = code.length();

    // Fix the leading one or two digits per task.
    let lead = rank.min(2);
    let tasks = k.pow(lead as u32);
    let best = (0..tasks)
        .into_par_iter()
        .map(|t| {
            let mut word = vec![0u32; n];
            let mut rest = t;
            for r in rows.iter().take(lead) {
                let d = (rest % k) as u32;
                rest /= k;
                for (w, &g) in word.iter_mut().zip(r) {
                    *w = (*w + d * g) % k as u32;
                }
            }
            scan_tail(&rows[lead..], word, k as u32, &table, cap)
        })
        .min()
        .unwrap_or(cap);
    Ok(best)
}

/// Odometer over the remaining digits; each increment of digit `i` adds
/// row `i` once (a wrap adds the `k`-th copy, which vanishes mod `k`).
fn scan_tail(rows: &[Vec<u32>], mut word: Vec<u32>, k: u32, table: &[u64], cap: u64) -> u64 {
    let mut best = cap;
    let mut digits = vec![0u32; rows.len()];
    loop {
        let mut w = 0u64;
        for &x in &word {
            w += table[x as usize];
            if w >= best {
                break;
            }
        }
        if w > 0 && w < best {
            best = w;
        }
        let mut i = rows.len();
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            for (x, &g) in word.iter_mut().zip(&rows[i]) {
                *x += g;
                if *x >= k {
                    *x -= k;
                }
            }
            digits[i] += 1;
            if digits[i] == k {
                digits[i] = 0;
            } else {
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(entries: &[u64]) -> Codeword {
        Codeword::new(entries.to_vec())
    }

    fn padded(prefix: &[u64], n: usize) -> Codeword {
        let mut v = prefix.to_vec();
        v.resize(n, 0);
        Codeword::new(v)
    }

    #[test]
    fn mckay_first_row_and_skew_symmetry() {
        let s = mckay_s();
        let row0: Vec<i64> = s.row(0).iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(row0, vec![0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1]);
        assert_eq!(s.transpose(), s.neg());
        assert_eq!(&s * &s.transpose(), IntMatrix::identity(12).scaled(&BigInt::from(11)));
    }

    #[test]
    fn builtin_generators_match_tables() {
        let d = code_d4();
        assert_eq!((d.modulus(), d.length()), (4, 24));
        let mut expect = vec![0u64; 24];
        expect[0] = 1;
        expect[13..].iter_mut().for_each(|x| *x = 1);
        assert_eq!(d.generator_rows()[0].entries(), &expect[..]);

        let c = code_c4();
        assert_eq!(&c.generator_rows()[0].entries()[12..], &[2, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1]);
        // -1 + 0 reduces to 3 in the second row of 2I + S
        assert_eq!(c.generator_rows()[1].entries()[12], 3);

        let c11 = code_c11();
        assert_eq!(&c11.generator_rows()[1].entries()[12..], &[10, 2, 2, 2, 10, 4, 9, 7, 1, 1, 1, 1]);
    }

    #[test]
    fn negacirculant_matches_printed_a() {
        const A: [[u64; 12]; 12] = [
            [2, 2, 2, 10, 4, 9, 7, 1, 1, 1, 1, 1],
            [10, 2, 2, 2, 10, 4, 9, 7, 1, 1, 1, 1],
            [10, 10, 2, 2, 2, 10, 4, 9, 7, 1, 1, 1],
            [10, 10, 10, 2, 2, 2, 10, 4, 9, 7, 1, 1],
            [10, 10, 10, 10, 2, 2, 2, 10, 4, 9, 7, 1],
            [10, 10, 10, 10, 10, 2, 2, 2, 10, 4, 9, 7],
            [4, 10, 10, 10, 10, 10, 2, 2, 2, 10, 4, 9],
            [2, 4, 10, 10, 10, 10, 10, 2, 2, 2, 10, 4],
            [7, 2, 4, 10, 10, 10, 10, 10, 2, 2, 2, 10],
            [1, 7, 2, 4, 10, 10, 10, 10, 10, 2, 2, 2],
            [9, 1, 7, 2, 4, 10, 10, 10, 10, 10, 2, 2],
            [9, 9, 1, 7, 2, 4, 10, 10, 10, 10, 10, 2],
        ];
        let a = negacirculant(&IntVector::from_i64(&[2, 2, 2, 10, 4, 9, 7, 1, 1, 1, 1, 1]), 11);
        let expect = IntMatrix::from_fn(12, 12, |i, j| BigInt::from(A[i][j]));
        assert_eq!(a, expect);
        // A·Aᵀ ≡ −I (mod 11)
        let aat = &a * &a.transpose();
        assert_eq!(aat.reduce_mod(&BigInt::from(11)), IntMatrix::identity(12).scaled(&BigInt::from(10)));
    }

    #[test]
    fn negacirculant_small() {
        let id = negacirculant(&IntVector::from_i64(&[1, 0]), 5);
        assert_eq!(id, IntMatrix::identity(2));
        let w = negacirculant(&IntVector::from_i64(&[0, 1]), 7);
        assert_eq!(w, IntMatrix::from_i64_rows(&[&[0, 1], &[6, 0]]));
    }

    #[test]
    fn negacirculant_full_turn_negates() {
        // one more shift after the last row gives −(row 0)
        let seed = IntVector::from_i64(&[3, 1, 4, 1, 5]);
        let a = negacirculant(&seed, 7);
        let mut next: Vec<BigInt> = a.row(4).to_vec();
        let wrapped = (-next[4].clone()).mod_floor(&BigInt::from(7));
        next.rotate_right(1);
        next[0] = wrapped;
        let neg: Vec<BigInt> = seed.entries().iter().map(|x| (-x).mod_floor(&BigInt::from(7))).collect();
        assert_eq!(next, neg);
    }

    #[test]
    fn self_duality_of_builtins() {
        assert!(is_self_dual(&code_d4()).unwrap());
        assert!(is_self_dual(&code_c4()).unwrap());
        assert!(is_self_dual(&code_c11()).unwrap());
        assert_eq!(code_c11().size(), num_traits::pow(BigInt::from(11), 12));
    }

    #[test]
    fn non_self_dual_and_odd_length() {
        let g = IntMatrix::from_i64_rows(&[&[1, 0, 1, 0], &[0, 1, 0, 1]]);
        let c = ZkCode::new(4, &g).unwrap();
        assert!(!is_self_dual(&c).unwrap());
        let odd = ZkCode::new(4, &IntMatrix::from_i64_rows(&[&[1, 0, 1]])).unwrap();
        assert_eq!(is_self_dual(&odd), Err(CodeError::OddLength(3)));
        // self-orthogonal but too small: {0, 2}^2 component only
        let half = ZkCode::new(4, &IntMatrix::from_i64_rows(&[&[2, 2]])).unwrap();
        assert!(!is_self_dual(&half).unwrap());
        let full = ZkCode::new(4, &IntMatrix::from_i64_rows(&[&[2, 0], &[0, 2]])).unwrap();
        assert!(is_self_dual(&full).unwrap());
    }

    #[test]
    fn euclidean_weights() {
        assert_eq!(euclidean_weight(&Codeword::zero(24), 4), 0);
        assert_eq!(euclidean_weight(&padded(&[1, 3], 24), 4), 2);
        assert_eq!(euclidean_weight(&padded(&[2], 24), 4), 4);
        assert_eq!(euclidean_weight(&word(&[5, 6, 10]), 11), 25 + 25 + 1);
    }

    #[test]
    fn membership_in_d() {
        let d = code_d4();
        for g in d.generator_rows() {
            assert!(membership(&d, &g).unwrap());
        }
        assert!(!membership(&d, &padded(&[1], 24)).unwrap());
        // (S | I) is another generator matrix of D
        let alt = mckay_s().hstack(&IntMatrix::identity(12)).unwrap();
        for v in alt.row_vectors() {
            assert!(membership(&d, &Codeword::from_vector(&v, 4)).unwrap());
        }
        let bad = ZkCode::new(4, &IntMatrix::from_i64_rows(&[&[1, 0, 1, 0]])).unwrap();
        assert!(matches!(
            membership(&bad, &word(&[1, 0, 1, 0])),
            Err(CodeError::NotSelfDual { .. })
        ));
        assert!(matches!(membership(&d, &word(&[1, 2])), Err(CodeError::Length { .. })));
    }

    #[test]
    fn codewords_are_isotropic() {
        let d = code_d4();
        let rows = d.generator_rows();
        for (i, a) in rows.iter().enumerate() {
            for b in &rows[i..] {
                let sum: Vec<u64> = a.entries().iter().zip(b.entries()).map(|(x, y)| (x + 3 * y) % 4).collect();
                let norm: u64 = sum.iter().map(|x| x * x).sum();
                assert_eq!(norm % 4, 0);
            }
        }
    }

    #[test]
    fn min_weight_small_code_by_hand() {
        // {00, 11, 22, 33} over Z_4: weights 0, 2, 8, 2
        let c = ZkCode::new(4, &IntMatrix::from_i64_rows(&[&[1, 1]])).unwrap();
        assert_eq!(min_euclidean_weight(&c, u64::MAX).unwrap(), 2);
        assert_eq!(min_euclidean_weight(&c, 1).unwrap(), 1);
    }

    #[test]
    fn min_weight_guard_for_c11() {
        assert_eq!(
            min_euclidean_weight(&code_c11(), u64::MAX),
            Err(CodeError::EnumerationGuard { modulus: 11, rank: 12 })
        );
    }

    #[test]
    fn json_shape() {
        let v = code_d4().to_json();
        assert_eq!(v["modulus"], 4);
        assert_eq!(v["length"], 24);
        assert_eq!(v["generator"].as_array().unwrap().len(), 12);
        assert_eq!(ZkCode::from_json(&v).unwrap(), code_d4());
    }
}
