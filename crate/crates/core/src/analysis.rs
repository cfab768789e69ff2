//! Exact lattice invariants: unimodularity, parity, short-vector counts,
//! minimum norm and theta coefficients.
//!
//! Short vectors are found by Fincke–Pohst enumeration on an LLL-reduced
//! Gram matrix. Branch bounds come from a floating-point Cholesky
//! factorization with an additive slack of 1/2 on the radius; every vector
//! that reaches a leaf is re-evaluated with exact integer arithmetic before
//! it is counted.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde_json::{Map, Value};
use thiserror::Error;

use crate::construction_a::LatticeRep;
use crate::json;
use crate::linalg::{det, lll_gram, IntMatrix, IntVector, LinalgError};

/// Radius guard for `short_vectors` on lattices of dimension above 4.
pub const SHORT_VECTOR_BOUND_LIMIT: u64 = 8;
/// Coefficient guard for `theta_coeffs` on lattices of dimension above 4.
pub const THETA_LIMIT: u64 = 16;
const SMALL_DIM: usize = 4;
const RADIUS_SLACK: f64 = 0.5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("bound {bound} exceeds the limit {limit} for dimension {dim}")]
    Guard { bound: u64, limit: u64, dim: usize },
    #[error("bound must be at least 1")]
    ZeroBound,
    #[error("Gram matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("reduced Gram matrix does not fit in 64-bit integers")]
    Overflow,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Counts of lattice vectors by norm, `±v` counted separately.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortVectorReport {
    pub norm_bound: u64,
    pub counts_by_norm: BTreeMap<u64, u64>,
    /// Coefficient vectors with respect to the lattice basis, sorted.
    pub witnesses: Option<Vec<IntVector>>,
}

impl ShortVectorReport {
    pub fn min_norm(&self) -> Option<u64> {
        self.counts_by_norm.keys().next().copied()
    }

    pub fn count(&self, norm: u64) -> u64 {
        self.counts_by_norm.get(&norm).copied().unwrap_or(0)
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("normBound".into(), Value::from(self.norm_bound));
        let counts: Map<String, Value> = self
            .counts_by_norm
            .iter()
            .map(|(n, c)| (n.to_string(), Value::from(*c)))
            .collect();
        obj.insert("countsByNorm".into(), Value::Object(counts));
        if let Some(w) = &self.witnesses {
            obj.insert("witnesses".into(), Value::Array(w.iter().map(json::vector_to_json).collect()));
        }
        Value::Object(obj)
    }
}

pub fn is_unimodular(lattice: &LatticeRep) -> bool {
    lattice.gram().is_symmetric() && det(lattice.gram()).is_ok_and(|d| d.is_one())
}

/// All norms even; the diagonal decides since off-diagonal terms appear
/// twice in `(v, v)`.
pub fn is_even(lattice: &LatticeRep) -> bool {
    lattice
        .gram()
        .diagonal()
        .iter()
        .all(|x| x % 2u32 == BigInt::from(0))
}

pub fn short_vectors(
    lattice: &LatticeRep,
    bound: u64,
    want_witnesses: bool,
) -> Result<ShortVectorReport, AnalysisError> {
    if bound == 0 {
        return Err(AnalysisError::ZeroBound);
    }
    let dim = lattice.dim();
    if dim > SMALL_DIM && bound > SHORT_VECTOR_BOUND_LIMIT {
        return Err(AnalysisError::Guard {
            bound,
            limit: SHORT_VECTOR_BOUND_LIMIT,
            dim,
        });
    }
    enumerate(lattice.gram(), bound, want_witnesses)
}

/// Smallest positive norm, searching radii 1, 2, 3, ….
pub fn min_norm(lattice: &LatticeRep) -> Result<u64, AnalysisError> {
    let mut bound = 1;
    loop {
        let report = enumerate(lattice.gram(), bound, false)?;
        if let Some(m) = report.min_norm() {
            return Ok(m);
        }
        bound += 1;
    }
}

/// `a(0..=n)` with `a(m)` the number of vectors of norm `m`.
pub fn theta_coeffs(lattice: &LatticeRep, n: u64) -> Result<Vec<u64>, AnalysisError> {
    let dim = lattice.dim();
    if dim > SMALL_DIM && n > THETA_LIMIT {
        return Err(AnalysisError::Guard {
            bound: n,
            limit: THETA_LIMIT,
            dim,
        });
    }
    let mut coeffs = vec![0u64; n as usize + 1];
    coeffs[0] = 1;
    if n == 0 {
        return Ok(coeffs);
    }
    let report = enumerate(lattice.gram(), n, false)?;
    for (norm, count) in report.counts_by_norm {
        coeffs[norm as usize] = count;
    }
    Ok(coeffs)
}

/// Fincke–Pohst in the coefficients `x` of the LLL-reduced basis; `U`
/// maps them back to the input basis.
pub(crate) fn enumerate(gram: &IntMatrix, bound: u64, want_witnesses: bool) -> Result<ShortVectorReport, AnalysisError> {
    let n = gram.rows();
    let mut report = ShortVectorReport {
        norm_bound: bound,
        counts_by_norm: BTreeMap::new(),
        witnesses: want_witnesses.then(Vec::new),
    };
    if n == 0 {
        return Ok(report);
    }
    let (reduced, transform) = lll_gram(gram).map_err(|e| match e {
        LinalgError::RankDeficient(_) => AnalysisError::NotPositiveDefinite,
        other => other.into(),
    })?;
    let g = reduced.to_i64_rows().ok_or(AnalysisError::Overflow)?;
    let tree = SearchTree::new(&g, bound as f64 + RADIUS_SLACK)?;

    // One task per value of the last coordinate.
    let top = n - 1;
    let (lo, hi) = tree.range(top, 0.0, tree.radius);
    let partials: Vec<(BTreeMap<u64, u64>, Vec<Vec<i64>>)> = (lo..=hi)
        .into_par_iter()
        .map(|x_top| {
            let mut counts = BTreeMap::new();
            let mut found = Vec::new();
            let mut x = vec![0i64; n];
            x[top] = x_top;
            let partial = tree.q[top][top] * (x_top as f64).powi(2);
            if partial <= tree.radius {
                tree.descend(&g, &mut x, top, tree.radius - partial, bound, &mut |x, norm| {
                    *counts.entry(norm).or_insert(0) += 1;
                    if want_witnesses {
                        found.push(x.to_vec());
                    }
                });
            }
            (counts, found)
        })
        .collect();

    let mut witnesses = Vec::new();
    for (counts, found) in partials {
        for (norm, c) in counts {
            *report.counts_by_norm.entry(norm).or_insert(0) += c;
        }
        witnesses.extend(found);
    }
    if let Some(out) = report.witnesses.as_mut() {
        let mut mapped: Vec<IntVector> = witnesses
            .iter()
            .map(|x| {
                let coeffs = IntVector::from_i64(x);
                let row = IntMatrix::from_vectors(std::slice::from_ref(&coeffs)).expect("one row");
                (&row * &transform).row_vector(0)
            })
            .collect();
        mapped.sort();
        *out = mapped;
    }
    Ok(report)
}

/// Cholesky data in Fincke–Pohst form: `Q(x) = Σ_i q_ii (x_i + Σ_{j>i} q_ij x_j)²`.
struct SearchTree {
    n: usize,
    q: Vec<Vec<f64>>,
    radius: f64,
}

impl SearchTree {
    fn new(g: &[Vec<i64>], radius: f64) -> Result<Self, AnalysisError> {
        let n = g.len();
        let mut q = vec![vec![0.0f64; n]; n];
        for i in 0..n {
            let mut d = g[i][i] as f64;
            for k in 0..i {
                d -= q[k][k] * q[k][i] * q[k][i];
            }
            if d <= 0.0 {
                return Err(AnalysisError::NotPositiveDefinite);
            }
            q[i][i] = d;
            for j in i + 1..n {
                let mut s = g[i][j] as f64;
                for k in 0..i {
                    s -= q[k][k] * q[k][i] * q[k][j];
                }
                q[i][j] = s / d;
            }
        }
        Ok(SearchTree { n, q, radius })
    }

    fn center(&self, x: &[i64], i: usize) -> f64 {
        -(i + 1..self.n).map(|j| self.q[i][j] * x[j] as f64).sum::<f64>()
    }

    fn range(&self, i: usize, center: f64, budget: f64) -> (i64, i64) {
        let half = (budget.max(0.0) / self.q[i][i]).sqrt();
        ((center - half).ceil() as i64, (center + half).floor() as i64)
    }

    /// Coordinates `i+1..n` are fixed; `budget` is what remains of the radius.
    fn descend(
        &self,
        g: &[Vec<i64>],
        x: &mut [i64],
        fixed_from: usize,
        budget: f64,
        bound: u64,
        visit: &mut dyn FnMut(&[i64], u64),
    ) {
        if fixed_from == 0 {
            if x.iter().any(|&c| c != 0) {
                if let Some(norm) = exact_norm(g, x) {
                    if norm >= 1 && norm <= bound as i128 {
                        visit(x, norm as u64);
                    }
                }
            }
            return;
        }
        let i = fixed_from - 1;
        let c = self.center(x, i);
        let (lo, hi) = self.range(i, c, budget);
        for v in lo..=hi {
            let t = v as f64 - c;
            let used = self.q[i][i] * t * t;
            if used > budget {
                continue;
            }
            x[i] = v;
            self.descend(g, x, i, budget - used, bound, visit);
        }
        x[i] = 0;
    }
}

fn exact_norm(g: &[Vec<i64>], x: &[i64]) -> Option<i128> {
    let mut total: i128 = 0;
    for i in 0..x.len() {
        if x[i] == 0 {
            continue;
        }
        let mut row: i128 = 0;
        for j in 0..x.len() {
            row = row.checked_add((g[i][j] as i128).checked_mul(x[j] as i128)?)?;
        }
        total = total.checked_add(row.checked_mul(x[i] as i128)?)?;
    }
    Some(total)
}

/// Checks a candidate coefficient vector against the Gram matrix exactly.
pub fn norm_of(lattice: &LatticeRep, coeffs: &IntVector) -> BigInt {
    let g = lattice.gram();
    let x = coeffs.entries();
    let mut total = BigInt::from(0);
    for i in 0..x.len() {
        for j in 0..x.len() {
            total += &x[i] * g.get(i, j) * &x[j];
        }
    }
    total
}
