use num_bigint::BigInt;
use num_traits::ToPrimitive;
use proptest::prelude::*;

use oddleech::codes::{code_d4, mckay_s};
use oddleech::frames::{
    build_frame, check_frame, four_squares, frame_from_representation, multiply_frame, p_matrix,
    represent_quaternary, standard_frame_11, QuaternaryRep,
};
use oddleech::linalg::IntMatrix;
use oddleech::qseries::{eta_product, quaternary_gram, quaternary_theta, sigma1_series, EtaFactor};

fn to_i64(m: &IntMatrix) -> Vec<Vec<i64>> {
    m.to_rows()
        .into_iter()
        .map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect())
        .collect()
}

fn naive_sigma(n: u64) -> u64 {
    (1..=n).filter(|d| n % d == 0).sum()
}

fn valid_rep() -> impl Strategy<Value = QuaternaryRep> {
    (-40i64..=40, -12i64..=12, -3i64..=3, -3i64..=3)
        .prop_map(|(a, b, t, u)| QuaternaryRep::new(a, b, b + 4 * t, a + 4 * u).unwrap())
}

#[test]
fn eta_quotient_equals_odd_divisor_sums() {
    let n = 2000;
    let eta = eta_product(&[EtaFactor::new(4, 8), EtaFactor::new(2, -4)], n).unwrap();
    let sigma = sigma1_series(n);
    for i in 0..=n {
        let expected = if i % 2 == 1 { naive_sigma(i) } else { 0 };
        assert_eq!(eta.coeff(i as i64), BigInt::from(expected), "q^{i}");
        assert_eq!(sigma.coeff(i as i64), BigInt::from(expected), "q^{i}");
    }
}

#[test]
fn quaternary_theta_coefficients_divisible_by_four() {
    let theta = quaternary_theta(&quaternary_gram(), 600).unwrap();
    for n in 1..=600 {
        let c = theta.coeff(n);
        assert!(c >= BigInt::from(0));
        assert_eq!(c % 4, BigInt::from(0), "a({n})");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn p_matrix_is_scaled_orthogonal(r in valid_rep()) {
        let p = to_i64(&p_matrix(&r).unwrap());
        let v = r.value() as i64;
        for i in 0..24 {
            for j in 0..24 {
                let dot: i64 = (0..24).map(|t| p[i][t] * p[j][t]).sum();
                prop_assert_eq!(dot, if i == j { v } else { 0 });
            }
        }
        let gen = to_i64(code_d4().generator());
        for row in &p {
            for g in &gen {
                let dot: i64 = row.iter().zip(g).map(|(x, y)| x * y).sum();
                prop_assert_eq!(dot.rem_euclid(4), 0);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multiplication_composes_norms(base_k in 3u64..40, m in 1u64..40) {
        let base = match represent_quaternary(base_k) {
            Some(r) => frame_from_representation(&r).unwrap(),
            None => standard_frame_11(),
        };
        let f = multiply_frame(&base, m).unwrap();
        prop_assert_eq!(f.k, base.k * m);
        let g = to_i64(&IntMatrix::from_vectors(&f.vectors).unwrap().row_gram());
        let s = f.ambient.scale() as i64;
        for i in 0..24 {
            for j in 0..24 {
                prop_assert_eq!(g[i][j], if i == j { s * f.k as i64 } else { 0 });
            }
        }
        let q = four_squares(m);
        prop_assert_eq!(q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z, m);
    }

    #[test]
    fn dispatcher_is_total(k in 3u64..10_000) {
        let f = build_frame(k).unwrap();
        prop_assert_eq!(f.k, k);
        prop_assert!(check_frame(&f).ok());
    }
}

#[test]
fn mckay_matrix_identities() {
    let s = to_i64(&mckay_s());
    for i in 0..12 {
        for j in 0..12 {
            assert_eq!(s[i][j], -s[j][i]);
            let dot: i64 = (0..12).map(|t| s[i][t] * s[j][t]).sum();
            assert_eq!(dot, if i == j { 11 } else { 0 });
        }
    }
}
