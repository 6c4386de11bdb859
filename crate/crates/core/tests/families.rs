mod common;

use special_graphs::democratic::{
    check_families, circulant_matrix, classify_small, product_matrix_from_values, Factorization,
    DEFAULT_FAMILY_CHECK_MAX_R,
};
use special_graphs::graphs::{curve_decomposition, find_isomorphism, is_democratic};
use special_graphs::DistanceMatrix;

#[test]
fn composite_nine_is_circulant_or_three_by_three() {
    let check = check_families(9, &[1, 2, 3, 4], DEFAULT_FAMILY_CHECK_MAX_R).unwrap();
    assert!(check.verified, "{} unmatched", check.unmatched.len());
    let circ = Factorization::new(vec![9]).unwrap();
    let prod = Factorization::new(vec![3, 3]).unwrap();
    assert!(check.matched[&circ] > 0);
    assert!(check.matched[&prod] > 0);
    assert_eq!(check.matched.values().sum::<usize>(), check.democratic);
}

#[test]
fn fifteen_is_over_cap() {
    assert!(
        check_families(15, &[1, 2, 3, 4, 5, 6, 7], DEFAULT_FAMILY_CHECK_MAX_R)
            .unwrap_err()
            .is_capacity()
    );
}

#[test]
fn three_by_three_is_not_a_circulant() {
    // every curve of Z3 × Z3 splits into three triangles, while a circulant
    // on 9 vertices with a generator coprime to 9 has a 9-cycle
    let f = Factorization::new(vec![3, 3]).unwrap();
    let m = product_matrix_from_values(&f, &[1, 2, 3, 4]).unwrap();
    assert!(is_democratic(&m).unwrap());
    assert!(curve_decomposition(&m)
        .unwrap()
        .curves
        .iter()
        .all(|c| c.pathlengths == vec![3, 3, 3]));
    for d in [[1, 2, 3, 4], [2, 1, 4, 3], [4, 3, 2, 1]] {
        assert!(find_isomorphism(&circulant_matrix(4, &d).unwrap(), &m).is_none());
    }
}

#[test]
fn catalog_json_lists_matrices_and_witnesses() {
    let c = classify_small(5, 2, 2).unwrap();
    let v = serde_json::to_value(&c).unwrap();
    let entry = &v["entries"][0];
    let example: DistanceMatrix = serde_json::from_value(entry["example"].clone()).unwrap();
    assert_eq!(example.r(), 5);
    assert_eq!(entry["witness"].as_array().unwrap().len(), 5);
    assert_eq!(v["theorem_verified"], true);
}
