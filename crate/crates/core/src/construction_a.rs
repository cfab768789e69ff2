//! Construction A: the lattice `(1/√k)(ρ(C) + kZⁿ)` of a self-dual code,
//! held as the integer lattice `K = ρ(C) + kZⁿ` together with the scale `k`.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::One;
use serde_json::{Map, Value};
use thiserror::Error;

use crate::codes::{is_self_dual, CodeError, Codeword, ZkCode};
use crate::json::{self, JsonError};
use crate::linalg::{det, gram, hnf, IntMatrix, IntVector, LinalgError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("code over Z_{0} is not self-dual")]
    NotSelfDual(u64),
    #[error("Gram determinant is {0}, expected 1")]
    NotUnimodular(BigInt),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// An integral lattice given by its Gram matrix, optionally with a basis
/// `B` of the scaled lattice such that `gram = B·Bᵀ / scale`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeRep {
    scale: u64,
    basis: Option<IntMatrix>,
    gram: IntMatrix,
    source: Option<String>,
}

impl LatticeRep {
    /// Lattice spanned by the rows of `basis`, with norms divided by `scale`.
    pub fn new(scale: u64, basis: IntMatrix) -> Result<Self, LinalgError> {
        let g = gram(&basis, &BigInt::from(scale))?;
        Ok(LatticeRep {
            scale,
            basis: Some(basis),
            gram: g,
            source: None,
        })
    }

    /// Abstract lattice known only through its Gram matrix.
    pub fn from_gram(gram: IntMatrix) -> Result<Self, LinalgError> {
        if !gram.is_symmetric() {
            return Err(LinalgError::Shape("Gram matrix must be square and symmetric".into()));
        }
        Ok(LatticeRep {
            scale: 1,
            basis: None,
            gram,
            source: None,
        })
    }

    /// `Zⁿ` with its standard basis.
    pub fn integer_lattice(n: usize) -> Self {
        LatticeRep::new(1, IntMatrix::identity(n))
            .expect("scale 1 divides everything")
            .with_source(format!("Z^{n}"))
    }

    pub fn with_source(mut self, label: impl Into<String>) -> Self {
        self.source = Some(label.into());
        self
    }

    pub fn scale(&self) -> u64 {
        self.scale
    }

    pub fn basis(&self) -> Option<&IntMatrix> {
        self.basis.as_ref()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn source(&self) -> Option<&str> {
        self.source.as_deref()
    }

    /// The scaled-lattice vector with the given coefficients in the basis.
    pub fn embed(&self, coeffs: &IntVector) -> Option<IntVector> {
        let b = self.basis.as_ref()?;
        let row = IntMatrix::from_vectors(std::slice::from_ref(coeffs)).ok()?;
        Some(row.matmul(b).ok()?.row_vector(0))
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("scale".into(), Value::from(self.scale));
        obj.insert(
            "basis".into(),
            self.basis.as_ref().map_or(Value::Null, json::matrix_to_json),
        );
        obj.insert("gram".into(), json::matrix_to_json(&self.gram));
        Value::Object(obj)
    }

    pub fn from_json(v: &Value) -> Result<Self, JsonError> {
        let obj = json::as_object(v, "lattice")?;
        let scale = json::u64_from_json(json::field(obj, "scale")?, "scale")?;
        let gram_m = json::matrix_from_json(json::field(obj, "gram")?, "gram")?;
        let rep = match obj.get("basis") {
            Some(Value::Null) | None => {
                LatticeRep::from_gram(gram_m.clone()).map_err(|e| JsonError::invalid("gram", e.to_string()))?
            }
            Some(b) => {
                let basis = json::matrix_from_json(b, "basis")?;
                LatticeRep::new(scale, basis).map_err(|e| JsonError::invalid("basis", e.to_string()))?
            }
        };
        if rep.gram != gram_m {
            return Err(JsonError::invalid("gram", "does not match basis"));
        }
        Ok(rep)
    }
}

/// Builds `K = ρ(C) + kZⁿ` for a self-dual code and checks that the scaled
/// Gram matrix is unimodular.
pub fn construction_a(code: &ZkCode) -> Result<LatticeRep, ConstructionError> {
    let k = code.modulus();
    if !is_self_dual(code)? {
        return Err(ConstructionError::NotSelfDual(k));
    }
    let n = code.length();
    let lifted = IntMatrix::from_vectors(&code.generator_rows().iter().map(Codeword::lift).collect::<Vec<_>>())?;
    let stacked = lifted.vstack(&IntMatrix::identity(n).scaled(&BigInt::from(k)))?;
    let (basis, rank) = hnf(&stacked);
    debug_assert_eq!(rank, n, "kZ^n is full rank");
    let rep = LatticeRep::new(k, basis)?.with_source(format!("A_{k}"));
    let d = det(rep.gram())?;
    if !d.is_one() {
        return Err(ConstructionError::NotUnimodular(d));
    }
    Ok(rep)
}

/// `min{k, d_E/k}`, the minimum norm of `A_k(C)` in terms of the minimum
/// Euclidean weight of `C`.
pub fn min_norm_formula(code: &ZkCode, min_euclidean_weight: u64) -> Ratio<u64> {
    let k = code.modulus();
    let via_weight = Ratio::new(min_euclidean_weight, k);
    via_weight.min(Ratio::from_integer(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{code_c11, code_c4, code_d4, membership};

    fn assert_rows_in_code(rep: &LatticeRep, code: &ZkCode) {
        for v in rep.basis().unwrap().row_vectors() {
            assert!(membership(code, &Codeword::from_vector(&v, code.modulus())).unwrap());
        }
    }

    #[test]
    fn odd_leech_from_d() {
        let d = code_d4();
        let rep = construction_a(&d).unwrap();
        assert_eq!(det(rep.gram()).unwrap(), BigInt::one());
        assert!(rep.gram().is_symmetric());
        assert_rows_in_code(&rep, &d);
        // HNF diagonal product is the index 4^24 / |D| = 4^12
        let idx: BigInt = rep.basis().unwrap().diagonal().iter().product();
        assert_eq!(idx, num_traits::pow(BigInt::from(4), 12));
    }

    #[test]
    fn leech_from_c_has_even_diagonal() {
        let rep = construction_a(&code_c4()).unwrap();
        assert!(rep.gram().diagonal().iter().all(|x| x % 2 == BigInt::from(0)));
    }

    #[test]
    fn z11_route_is_unimodular() {
        let c = code_c11();
        let rep = construction_a(&c).unwrap();
        assert_eq!(det(rep.gram()).unwrap(), BigInt::one());
        assert_rows_in_code(&rep, &c);
    }

    #[test]
    fn rejects_non_self_dual() {
        let c = ZkCode::new(4, &IntMatrix::from_i64_rows(&[&[1, 0, 1, 0], &[0, 1, 0, 1]])).unwrap();
        assert_eq!(construction_a(&c), Err(ConstructionError::NotSelfDual(4)));
    }

    #[test]
    fn formula_values() {
        assert_eq!(min_norm_formula(&code_d4(), 12), Ratio::from_integer(3));
        assert_eq!(min_norm_formula(&code_c4(), 16), Ratio::from_integer(4));
        assert_eq!(min_norm_formula(&code_c11(), 33), Ratio::from_integer(3));
        assert_eq!(min_norm_formula(&code_d4(), 30), Ratio::from_integer(4));
        assert_eq!(min_norm_formula(&code_d4(), 10), Ratio::new(5, 2));
    }

    #[test]
    fn json_round_trip() {
        let rep = construction_a(&code_d4()).unwrap();
        let back = LatticeRep::from_json(&rep.to_json()).unwrap();
        assert_eq!(back.gram(), rep.gram());
        assert_eq!(back.basis(), rep.basis());
    }
}
