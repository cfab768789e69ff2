use oddleech::frames::{build_frame, extract_code, verify_frame, Ambient, FrameCertificate, ProvenanceStep};

#[test]
fn chain_through_eleven() {
    let f = build_frame(121).unwrap();
    assert_eq!(f.ambient, Ambient::C11);
    assert_eq!(f.provenance[0], ProvenanceStep::StandardFrame11);
    assert!(matches!(f.provenance[1], ProvenanceStep::Multiply { m: 11, .. }));
    assert!(verify_frame(&f));
}

#[test]
fn powers_of_two_and_eleven() {
    for k in [8u64, 16, 32, 64, 242, 1331] {
        let f = build_frame(k).unwrap();
        assert_eq!(f.k, k);
        assert!(verify_frame(&f), "k = {k}");
    }
}

#[test]
fn certificates_survive_serialization() {
    for k in [3u64, 11, 44, 97, 500] {
        let f = build_frame(k).unwrap();
        let text = serde_json::to_string(&f.to_json()).unwrap();
        let back = FrameCertificate::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, f);
        assert!(verify_frame(&back));
    }
}

#[test]
fn extracted_codes_have_expected_size() {
    for k in [6u64, 9, 13] {
        let code = extract_code(&build_frame(k).unwrap()).unwrap();
        assert_eq!(code.modulus(), k);
        assert_eq!(code.size(), num_traits::pow(num_bigint::BigInt::from(k), 12));
    }
}

#[test]
fn extracted_codes_are_self_dual_on_samples() {
    for k in [3u64, 4, 5, 7, 11, 12, 22, 44, 97, 121] {
        let code = extract_code(&build_frame(k).unwrap()).unwrap();
        assert!(oddleech::codes::is_self_dual(&code).unwrap(), "k = {k}");
    }
}

#[test]
fn extracted_code_weights() {
    use oddleech::codes::min_euclidean_weight;
    let c3 = extract_code(&build_frame(3).unwrap()).unwrap();
    assert!(min_euclidean_weight(&c3, u64::MAX).unwrap() >= 9);
    let c4 = extract_code(&build_frame(4).unwrap()).unwrap();
    assert_eq!(min_euclidean_weight(&c4, u64::MAX).unwrap(), 12);
}

#[test]
fn repeated_multiplication() {
    use oddleech::frames::multiply_frame;
    let f = multiply_frame(&multiply_frame(&build_frame(3).unwrap(), 5).unwrap(), 7).unwrap();
    assert_eq!(f.k, 105);
    assert!(verify_frame(&f));
}
