//! Orthogonal frames of the odd Leech lattice.
//!
//! Two realizations of the odd Leech lattice are used: `A_4(D)` with `D`
//! generated by `(I | S)`, and `A_11(C_11)`. Frames are stored as vectors of
//! the scaled lattice `K = ρ(code) + sZ²⁴`, so a `k`-frame has Gram matrix
//! `s·k·I` exactly.
//!
//! * For `a ≡ d`, `b ≡ c (mod 4)` the rows of
//!   `P = (aI+bS, cI+dS; −cI+dS, aI−bS)` lie in `K` for `D` and satisfy
//!   `P·Pᵀ = (a²+11b²+c²+11d²)·I`, giving a frame of norm `(a²+11b²+c²+11d²)/4`.
//! * `11·e_i` is an 11-frame of `A_11(C_11)`.
//! * A frame of norm `k` becomes one of norm `k·m` by applying a 4×4
//!   quaternion block `Q` with `Q·Qᵀ = m·I` to each quadruple of vectors.

use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{ToPrimitive, Zero};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::codes::{code_c11, code_d4, is_self_dual, mckay_s, CodeError, Codeword, ZkCode};
use crate::construction_a::{construction_a, ConstructionError};
use crate::json::{self, JsonError};
use crate::linalg::{hnf, IntMatrix, IntVector};

pub const FRAME_DIM: usize = 24;
pub const CERTIFICATE_VERSION: u64 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrameError {
    #[error("frames of norm {0} do not exist in the odd Leech lattice (need k >= 3)")]
    NormTooSmall(u64),
    #[error("({a},{b},{c},{d}) violates a ≡ d and b ≡ c (mod 4)")]
    Congruence { a: i64, b: i64, c: i64, d: i64 },
    #[error("row {0} of the frame is not in the ambient code lattice")]
    Membership(usize),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("no representation found for norm {0}")]
    NoRepresentation(u64),
    #[error("multiplier must be positive")]
    ZeroMultiplier,
    #[error("inner product of basis row {row} with frame vector {col} is not divisible by {scale}")]
    Divisibility { row: usize, col: usize, scale: u64 },
    #[error("extracted code over Z_{0} is not self-dual")]
    ExtractedNotSelfDual(u64),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Json(#[from] JsonError),
}

/// `(a, b, c, d)` with `a ≡ d`, `b ≡ c (mod 4)`; represents
/// `(a² + 11b² + c² + 11d²)/4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuaternaryRep {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl QuaternaryRep {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self, FrameError> {
        if (a - d).rem_euclid(4) != 0 || (b - c).rem_euclid(4) != 0 {
            return Err(FrameError::Congruence { a, b, c, d });
        }
        Ok(QuaternaryRep { a, b, c, d })
    }

    /// `a² + 11b² + c² + 11d²`.
    pub fn value(&self) -> i128 {
        let sq = |x: i64| (x as i128) * (x as i128);
        sq(self.a) + 11 * sq(self.b) + sq(self.c) + 11 * sq(self.d)
    }

    /// The frame norm `value / 4`.
    pub fn norm(&self) -> u64 {
        (self.value() / 4) as u64
    }
}

impl fmt::Display for QuaternaryRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.a, self.b, self.c, self.d)
    }
}

/// `w² + x² + y² + z² = m` with `w ≥ x ≥ y ≥ z ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FourSquares {
    pub w: u64,
    pub x: u64,
    pub y: u64,
    pub z: u64,
}

impl FourSquares {
    pub fn sum(&self) -> u64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    /// `((w,x,y,z), (−x,w,−z,y), (−y,z,w,−x), (−z,−y,x,w))`, with `Q·Qᵀ = m·I`.
    pub fn quaternion_block(&self) -> IntMatrix {
        let (w, x, y, z) = (self.w as i64, self.x as i64, self.y as i64, self.z as i64);
        IntMatrix::from_i64_rows(&[&[w, x, y, z], &[-x, w, -z, y], &[-y, z, w, -x], &[-z, -y, x, w]])
    }
}

/// Which realization of the odd Leech lattice a frame lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ambient {
    /// `A_4(D)`.
    D4,
    /// `A_11(C_11)`.
    C11,
}

impl Ambient {
    pub fn code(self) -> ZkCode {
        match self {
            Ambient::D4 => code_d4(),
            Ambient::C11 => code_c11(),
        }
    }

    pub fn scale(self) -> u64 {
        match self {
            Ambient::D4 => 4,
            Ambient::C11 => 11,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Ambient::D4 => "D4",
            Ambient::C11 => "C11",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "D4" => Some(Ambient::D4),
            "C11" => Some(Ambient::C11),
            _ => None,
        }
    }
}

/// One step of how a certificate was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProvenanceStep {
    Representation(QuaternaryRep),
    StandardFrame11,
    Multiply { m: u64, squares: FourSquares },
}

impl ProvenanceStep {
    fn to_json(self) -> Value {
        let mut obj = Map::new();
        match self {
            ProvenanceStep::Representation(r) => {
                obj.insert("step".into(), "representation".into());
                obj.insert("abcd".into(), Value::from(vec![r.a, r.b, r.c, r.d]));
                obj.insert("norm".into(), Value::from(r.norm()));
            }
            ProvenanceStep::StandardFrame11 => {
                obj.insert("step".into(), "standard-11".into());
            }
            ProvenanceStep::Multiply { m, squares } => {
                obj.insert("step".into(), "multiply".into());
                obj.insert("m".into(), Value::from(m));
                obj.insert(
                    "squares".into(),
                    Value::from(vec![squares.w, squares.x, squares.y, squares.z]),
                );
            }
        }
        Value::Object(obj)
    }

    fn from_json(v: &Value) -> Result<Self, JsonError> {
        let obj = json::as_object(v, "provenance")?;
        let step = json::field(obj, "step")?
            .as_str()
            .ok_or_else(|| JsonError::invalid("step", "expected a string"))?;
        let ints = |name: &str| -> Result<Vec<i64>, JsonError> {
            let arr = json::field(obj, name)?
                .as_array()
                .ok_or_else(|| JsonError::invalid(name, "expected an array"))?;
            arr.iter()
                .map(|x| x.as_i64().ok_or_else(|| JsonError::invalid(name, "expected integers")))
                .collect()
        };
        match step {
            "representation" => {
                let v = ints("abcd")?;
                if v.len() != 4 {
                    return Err(JsonError::invalid("abcd", "expected four integers"));
                }
                let r = QuaternaryRep::new(v[0], v[1], v[2], v[3])
                    .map_err(|e| JsonError::invalid("abcd", e.to_string()))?;
                Ok(ProvenanceStep::Representation(r))
            }
            "standard-11" => Ok(ProvenanceStep::StandardFrame11),
            "multiply" => {
                let m = json::u64_from_json(json::field(obj, "m")?, "m")?;
                let s = ints("squares")?;
                if s.len() != 4 || s.iter().any(|&x| x < 0) {
                    return Err(JsonError::invalid("squares", "expected four non-negative integers"));
                }
                let squares = FourSquares {
                    w: s[0] as u64,
                    x: s[1] as u64,
                    y: s[2] as u64,
                    z: s[3] as u64,
                };
                Ok(ProvenanceStep::Multiply { m, squares })
            }
            other => Err(JsonError::invalid("step", format!("unknown step {other:?}"))),
        }
    }
}

/// Results of re-checking a certificate from scratch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FrameChecks {
    pub gram_ok: bool,
    pub membership_ok: bool,
}

impl FrameChecks {
    pub fn ok(&self) -> bool {
        self.gram_ok && self.membership_ok
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("gram_ok".into(), Value::from(self.gram_ok));
        obj.insert("membership_ok".into(), Value::from(self.membership_ok));
        Value::Object(obj)
    }
}

/// 24 vectors of `K = ρ(code) + sZ²⁴` with pairwise inner products `s·k·δ_ij`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameCertificate {
    pub k: u64,
    pub ambient: Ambient,
    pub vectors: Vec<IntVector>,
    pub provenance: Vec<ProvenanceStep>,
}

impl FrameCertificate {
    pub fn checks(&self) -> FrameChecks {
        check_frame(self)
    }

    pub fn to_json(&self) -> Value {
        let mut ambient = Map::new();
        ambient.insert("code".into(), self.ambient.name().into());
        ambient.insert("modulus".into(), Value::from(self.ambient.scale()));
        ambient.insert("scale".into(), Value::from(self.ambient.scale()));

        let mut obj = Map::new();
        obj.insert("version".into(), Value::from(CERTIFICATE_VERSION));
        obj.insert("k".into(), Value::from(self.k));
        obj.insert("ambient".into(), Value::Object(ambient));
        obj.insert(
            "vectors".into(),
            Value::Array(self.vectors.iter().map(json::vector_to_json).collect()),
        );
        obj.insert(
            "provenance".into(),
            Value::Array(self.provenance.iter().map(|p| p.to_json()).collect()),
        );
        obj.insert("checks".into(), self.checks().to_json());
        Value::Object(obj)
    }

    /// Parses a certificate; the stored `checks` are ignored and recomputed
    /// by `verify_frame`.
    pub fn from_json(v: &Value) -> Result<Self, JsonError> {
        let obj = json::as_object(v, "certificate")?;
        let version = json::u64_from_json(json::field(obj, "version")?, "version")?;
        if version != CERTIFICATE_VERSION {
            return Err(JsonError::invalid("version", format!("unsupported version {version}")));
        }
        let k = json::u64_from_json(json::field(obj, "k")?, "k")?;
        let amb = json::as_object(json::field(obj, "ambient")?, "ambient")?;
        let code = json::field(amb, "code")?
            .as_str()
            .ok_or_else(|| JsonError::invalid("ambient.code", "expected a string"))?;
        let ambient = Ambient::parse(code)
            .ok_or_else(|| JsonError::invalid("ambient.code", format!("unknown code {code:?}")))?;
        for key in ["modulus", "scale"] {
            let s = json::u64_from_json(json::field(amb, key)?, key)?;
            if s != ambient.scale() {
                return Err(JsonError::invalid(key, format!("{s} does not match {}", ambient.name())));
            }
        }
        let vectors = json::field(obj, "vectors")?
            .as_array()
            .ok_or_else(|| JsonError::invalid("vectors", "expected an array"))?
            .iter()
            .map(|r| json::vector_from_json(r, "vectors"))
            .collect::<Result<Vec<_>, _>>()?;
        let provenance = match obj.get("provenance") {
            None | Some(Value::Null) => Vec::new(),
            Some(p) => p
                .as_array()
                .ok_or_else(|| JsonError::invalid("provenance", "expected an array"))?
                .iter()
                .map(ProvenanceStep::from_json)
                .collect::<Result<Vec<_>, _>>()?,
        };
        Ok(FrameCertificate {
            k,
            ambient,
            vectors,
            provenance,
        })
    }
}

fn ceil_sqrt(n: u64) -> u64 {
    let r = n.sqrt();
    if r * r == n {
        r
    } else {
        r + 1
    }
}

fn exact_sqrt(n: i128) -> Option<i64> {
    if n < 0 {
        return None;
    }
    let r = (n as u128).sqrt() as i128;
    (r * r == n).then_some(r as i64)
}

/// Searches `a² + 11b² + c² + 11d² = 4k` with `a ≡ d`, `b ≡ c (mod 4)` over
/// `|a|, |c| ≤ ⌈2√k⌉`, `|b|, |d| ≤ ⌈2√(k/11)⌉`; returns the
/// lexicographically greatest solution.
pub fn represent_quaternary(k: u64) -> Option<QuaternaryRep> {
    let target = 4 * k as i128;
    let ac = ceil_sqrt(4 * k) as i64;
    let bd = ceil_sqrt((4 * k).div_ceil(11)) as i64;
    for a in (-ac..=ac).rev() {
        let ra = target - (a as i128).pow(2);
        if ra < 0 {
            continue;
        }
        for b in (-bd..=bd).rev() {
            let rb = ra - 11 * (b as i128).pow(2);
            if rb < 0 {
                continue;
            }
            for c in (-ac..=ac).rev() {
                if (b - c).rem_euclid(4) != 0 {
                    continue;
                }
                let rc = rb - (c as i128).pow(2);
                if rc < 0 || rc % 11 != 0 {
                    continue;
                }
                if let Some(s) = exact_sqrt(rc / 11) {
                    for d in [s, -s] {
                        if d.abs() <= bd && (a - d).rem_euclid(4) == 0 {
                            return Some(QuaternaryRep { a, b, c, d });
                        }
                    }
                }
            }
        }
    }
    None
}

/// `P = (aI+bS, cI+dS; −cI+dS, aI−bS)`.
pub fn p_matrix(r: &QuaternaryRep) -> Result<IntMatrix, FrameError> {
    let r = QuaternaryRep::new(r.a, r.b, r.c, r.d)?;
    let s = mckay_s();
    let id = IntMatrix::identity(12);
    let block = |x: i64, y: i64| {
        id.scaled(&BigInt::from(x))
            .add(&s.scaled(&BigInt::from(y)))
            .expect("12x12")
    };
    let top = block(r.a, r.b).hstack(&block(r.c, r.d)).expect("12 rows");
    let bottom = block(-r.c, r.d).hstack(&block(r.a, -r.b)).expect("12 rows");
    Ok(top.vstack(&bottom).expect("24 columns"))
}

/// The frame of `A_4(D)` formed by the rows of `P`.
pub fn frame_from_representation(r: &QuaternaryRep) -> Result<FrameCertificate, FrameError> {
    let p = p_matrix(r)?;
    let cert = FrameCertificate {
        k: r.norm(),
        ambient: Ambient::D4,
        vectors: p.row_vectors(),
        provenance: vec![ProvenanceStep::Representation(*r)],
    };
    if let Some(row) = first_non_member(&cert) {
        return Err(FrameError::Membership(row));
    }
    if !check_frame(&cert).gram_ok {
        return Err(FrameError::InvalidCertificate("P·Pᵀ is not scalar".into()));
    }
    Ok(cert)
}

/// `11·e_i` in `A_11(C_11)`.
pub fn standard_frame_11() -> FrameCertificate {
    FrameCertificate {
        k: 11,
        ambient: Ambient::C11,
        vectors: (0..FRAME_DIM).map(|i| IntVector::unit(FRAME_DIM, i, 11)).collect(),
        provenance: vec![ProvenanceStep::StandardFrame11],
    }
}

/// Greedy-from-the-top search with `w ≥ x ≥ y ≥ z ≥ 0`.
pub fn four_squares(m: u64) -> FourSquares {
    for w in (0..=m.sqrt()).rev() {
        let rw = m - w * w;
        for x in (0..=w.min(rw.sqrt())).rev() {
            let rx = rw - x * x;
            for y in (0..=x.min(rx.sqrt())).rev() {
                let ry = rx - y * y;
                let z = ry.sqrt();
                if z * z == ry && z <= y {
                    return FourSquares { w, x, y, z };
                }
            }
        }
    }
    unreachable!("every non-negative integer is a sum of four squares")
}

/// Norm `k·m` frame from a norm `k` frame.
pub fn multiply_frame(frame: &FrameCertificate, m: u64) -> Result<FrameCertificate, FrameError> {
    if m == 0 {
        return Err(FrameError::ZeroMultiplier);
    }
    let checks = check_frame(frame);
    if !checks.ok() {
        return Err(FrameError::InvalidCertificate(format!(
            "input frame fails verification (gram_ok={}, membership_ok={})",
            checks.gram_ok, checks.membership_ok
        )));
    }
    let squares = four_squares(m);
    let q = squares.quaternion_block();
    let qqt = &q * &q.transpose();
    if qqt.scalar_identity_value() != Some(BigInt::from(m)) {
        return Err(FrameError::InvalidCertificate(format!("quaternion block for {m} is not orthogonal")));
    }
    let mut vectors = Vec::with_capacity(FRAME_DIM);
    for quad in frame.vectors.chunks(4) {
        let block = IntMatrix::from_vectors(quad).expect("equal dimensions");
        vectors.extend((&q * &block).row_vectors());
    }
    let mut provenance = frame.provenance.clone();
    provenance.push(ProvenanceStep::Multiply { m, squares });
    let out = FrameCertificate {
        k: frame.k * m,
        ambient: frame.ambient,
        vectors,
        provenance,
    };
    if !check_frame(&out).ok() {
        return Err(FrameError::InvalidCertificate("multiplied frame fails verification".into()));
    }
    Ok(out)
}

/// Divisor `k₀` the dispatcher falls back to when `k` itself has no direct
/// representation: the smallest odd prime factor other than 11, else 4
/// for powers of two, else 11.
pub fn fallback_divisor(k: u64) -> Option<u64> {
    if k < 3 {
        return None;
    }
    let mut n = k;
    while n % 2 == 0 {
        n /= 2;
    }
    let mut p = 3;
    let mut rest = n;
    while p * p <= rest {
        if rest % p == 0 {
            if p != 11 {
                return Some(p);
            }
            while rest % p == 0 {
                rest /= p;
            }
        } else {
            p += 2;
        }
    }
    if rest > 1 && rest != 11 {
        return Some(rest);
    }
    if n == 1 {
        return (k >= 4).then_some(4);
    }
    // only 2s and 11s remain
    Some(11)
}

/// A certified frame of norm `k` for any `k ≥ 3`.
pub fn build_frame(k: u64) -> Result<FrameCertificate, FrameError> {
    if k < 3 {
        return Err(FrameError::NormTooSmall(k));
    }
    let cert = if let Some(r) = represent_quaternary(k) {
        frame_from_representation(&r)?
    } else {
        let base_norm = fallback_divisor(k).ok_or(FrameError::NoRepresentation(k))?;
        let base = if base_norm == 11 {
            standard_frame_11()
        } else {
            let r = represent_quaternary(base_norm).ok_or(FrameError::NoRepresentation(base_norm))?;
            frame_from_representation(&r)?
        };
        if base_norm == k {
            base
        } else {
            multiply_frame(&base, k / base_norm)?
        }
    };
    let checks = check_frame(&cert);
    if !checks.ok() || cert.k != k {
        return Err(FrameError::InvalidCertificate(format!("built frame for {k} fails verification")));
    }
    Ok(cert)
}

fn first_non_member(frame: &FrameCertificate) -> Option<usize> {
    let code = frame.ambient.code();
    let s = frame.ambient.scale();
    frame.vectors.iter().position(|v| {
        v.dim() != code.length()
            || !code
                .syndrome(&Codeword::from_vector(v, s))
                .is_ok_and(|syn| syn.iter().all(|&x| x == 0))
    })
}

/// Recomputes the Gram condition and the membership of every vector in the
/// ambient lattice (parity check of the self-dual code modulo `s`).
pub fn check_frame(frame: &FrameCertificate) -> FrameChecks {
    let shape_ok = frame.vectors.len() == FRAME_DIM && frame.vectors.iter().all(|v| v.dim() == FRAME_DIM);
    let gram_ok = shape_ok && {
        let target = BigInt::from(frame.ambient.scale()) * BigInt::from(frame.k);
        let g = IntMatrix::from_vectors(&frame.vectors).expect("checked shape").row_gram();
        g.scalar_identity_value() == Some(target)
    };
    let membership_ok = shape_ok && first_non_member(frame).is_none();
    FrameChecks {
        gram_ok,
        membership_ok,
    }
}

pub fn verify_frame(frame: &FrameCertificate) -> bool {
    check_frame(frame).ok()
}

/// The self-dual `Z_k` code whose Construction A lattice is the ambient
/// lattice, read off in frame coordinates: basis row `v` of `K` maps to
/// `((v·f_j)/s mod k)_j`.
pub fn extract_code(frame: &FrameCertificate) -> Result<ZkCode, FrameError> {
    let checks = check_frame(frame);
    if !checks.ok() {
        return Err(FrameError::InvalidCertificate("frame fails verification".into()));
    }
    let s = frame.ambient.scale();
    let lattice = construction_a(&frame.ambient.code())?;
    let basis = lattice.basis().expect("Construction A keeps its basis");
    let scale = BigInt::from(s);
    let k = BigInt::from(frame.k);
    let mut words = Vec::with_capacity(basis.rows());
    for row in 0..basis.rows() {
        let v = basis.row_vector(row);
        let mut word = Vec::with_capacity(FRAME_DIM);
        for (col, f) in frame.vectors.iter().enumerate() {
            let (q, r) = v.dot(f).div_rem(&scale);
            if !r.is_zero() {
                return Err(FrameError::Divisibility { row, col, scale: s });
            }
            word.push(q.mod_floor(&k));
        }
        words.push(word);
    }
    let spanned = IntMatrix::from_rows(&words)
        .expect("uniform rows")
        .vstack(&IntMatrix::identity(FRAME_DIM).scaled(&k))
        .expect("same width");
    // rows with pivot k reduce to combinations of later rows mod k
    let (h, _) = hnf(&spanned);
    let kept: Vec<Vec<BigInt>> = (0..FRAME_DIM)
        .filter(|&i| h.get(i, i) < &k)
        .map(|i| h.row(i).to_vec())
        .collect();
    let generator = IntMatrix::from_rows(&kept).expect("uniform rows");
    let code = ZkCode::new(frame.k, &generator)?;
    if !is_self_dual(&code)? {
        return Err(FrameError::ExtractedNotSelfDual(frame.k));
    }
    Ok(code)
}

/// Frame norm as `u64`, for reports.
pub fn gram_value(frame: &FrameCertificate) -> Option<u64> {
    let g = IntMatrix::from_vectors(&frame.vectors).ok()?.row_gram();
    g.scalar_identity_value()?.to_u64()
}
