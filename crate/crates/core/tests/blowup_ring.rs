//! Full verification of the reference threefold's intersection ring against
//! the hand-transcribed multiplication table, adjunction numbers and
//! intersection pairings.

use abcml_core::blowup::{reference_ring, IntersectionRing};
use abcml_core::cbba::K;
use abcml_core::scalar::rational_int;
use num::Zero;

/// The expected `H^{1,1} × H^{1,1} -> H^{2,2}` table. Entries are
/// coefficient lists over `[G^2, E_P^2, E_Q^2, E_R^2, GE_C, GE_L1, GE_L2]`;
/// only the upper triangle is listed, the rest follows by symmetry.
const H22_BASIS: [&str; 7] = ["G^2", "E_P^2", "E_Q^2", "E_R^2", "GE_C", "GE_L1", "GE_L2"];
const DIVISORS: [&str; 7] = ["G", "E_P", "E_Q", "E_R", "E_C", "E_L1", "E_L2"];

fn expected_entries() -> Vec<(&'static str, &'static str, [i64; 7])> {
    vec![
        ("G", "G", [1, 0, 0, 0, 0, 0, 0]),
        ("G", "E_P", [0; 7]),
        ("G", "E_Q", [0; 7]),
        ("G", "E_R", [0; 7]),
        ("G", "E_C", [0, 0, 0, 0, 1, 0, 0]),
        ("G", "E_L1", [0, 0, 0, 0, 0, 1, 0]),
        ("G", "E_L2", [0, 0, 0, 0, 0, 0, 1]),
        ("E_P", "E_P", [0, 1, 0, 0, 0, 0, 0]),
        ("E_P", "E_Q", [0; 7]),
        ("E_P", "E_R", [0; 7]),
        ("E_P", "E_C", [0, 0, 0, 0, 1, 0, 0]),
        ("E_P", "E_L1", [0; 7]),
        ("E_P", "E_L2", [0; 7]),
        ("E_Q", "E_Q", [0, 0, 1, 0, 0, 0, 0]),
        ("E_Q", "E_R", [0; 7]),
        ("E_Q", "E_C", [0, 0, 0, 0, 1, 0, 0]),
        ("E_Q", "E_L1", [0; 7]),
        ("E_Q", "E_L2", [0; 7]),
        ("E_R", "E_R", [0, 0, 0, 1, 0, 0, 0]),
        ("E_R", "E_C", [0; 7]),
        ("E_R", "E_L1", [0, 0, 0, 0, 0, 1, 0]),
        ("E_R", "E_L2", [0, 0, 0, 0, 0, 0, 1]),
        ("E_C", "E_C", [-1, -1, -1, 0, -2, 0, 0]),
        ("E_C", "E_L1", [0, 0, 0, 0, 0, 1, 0]),
        ("E_C", "E_L2", [0, 0, 0, 0, 0, 0, 1]),
        ("E_L1", "E_L1", [-1, 0, 0, -1, 1, -1, 0]),
        ("E_L1", "E_L2", [0; 7]),
        ("E_L2", "E_L2", [-1, 0, 0, -1, 1, 0, -1]),
    ]
}

fn as_coeff_vec(ring: &IntersectionRing, coeffs: &[i64; 7]) -> Vec<K> {
    let m = ring.model();
    let mut v = vec![K::zero(); m.dim()];
    for (name, c) in H22_BASIS.iter().zip(coeffs) {
        let idx = m.index_of(name).unwrap_or_else(|| panic!("basis element {name} missing"));
        v[idx] = K::from_int(*c);
    }
    v
}

#[test]
fn multiplication_table_matches_entry_by_entry() {
    let ring = reference_ring();
    let table = ring.multiplication_table();
    assert_eq!(table.names, DIVISORS.to_vec());
    assert!(table.is_symmetric());
    let mut checked = 0;
    for (a, b, coeffs) in expected_entries() {
        let expected = as_coeff_vec(&ring, &coeffs);
        for (x, y) in [(a, b), (b, a)] {
            let entry = table.entry(x, y).unwrap();
            assert_eq!(entry.coeffs(), &expected, "{x}·{y}");
            checked += 1;
        }
    }
    // 28 upper-triangle entries, diagonal double-counted above
    assert_eq!(checked, 56);
}

#[test]
fn adjunction_numbers_for_the_three_curves() {
    let ring = reference_ring();
    let records = ring.curve_records();
    assert_eq!(records.len(), 3);

    let c = &records[0];
    assert_eq!(c.center.name, "E_C");
    assert_eq!(c.ambient_c1_degree, 0);
    assert_eq!(c.normal_bundle_degree, -2);
    // [C] = G² + E_P² + E_Q²
    let mut class = c.curve_class.clone();
    class.sort_by(|a, b| a.0.cmp(&b.0));
    assert_eq!(
        class,
        vec![
            ("E_P^2".to_string(), K::from_int(1)),
            ("E_Q^2".to_string(), K::from_int(1)),
            ("G^2".to_string(), K::from_int(1)),
        ]
    );

    for rec in &records[1..] {
        assert_eq!(rec.ambient_c1_degree, 1);
        assert_eq!(rec.normal_bundle_degree, -1);
    }
}

#[test]
fn registered_classes_match_their_formulas() {
    let ring = reference_ring();
    let m = ring.model();
    // A_i = G - E_R - E_Li
    for (a, l) in [("A_1", "E_L1"), ("A_2", "E_L2")] {
        let got = ring.class(a).unwrap();
        let want = ring
            .divisor("G")
            .unwrap()
            .sub(&ring.divisor("E_R").unwrap())
            .unwrap()
            .sub(&ring.divisor(l).unwrap())
            .unwrap();
        assert_eq!(got.coeffs(), want.coeffs());
    }
    // F_i = GE_Li as classes
    for (f, gl) in [("F_1", "GE_L1"), ("F_2", "GE_L2")] {
        let got = ring.class(f).unwrap();
        let idx = m.index_of(gl).unwrap();
        let mut want = vec![K::zero(); m.dim()];
        want[idx] = K::from_int(1);
        assert_eq!(got.coeffs(), &want);
    }
}

#[test]
fn triple_integrals() {
    let ring = reference_ring();
    let g = ring.divisor("G").unwrap();
    assert_eq!(ring.integrate_triple(&g, &g, &g).unwrap(), rational_int(1));

    // A_i meets F_i in one point and misses F_j
    let a1 = ring.class("A_1").unwrap();
    let a2 = ring.class("A_2").unwrap();
    let ec = ring.divisor("E_C").unwrap();
    let el1 = ring.divisor("E_L1").unwrap();
    assert_eq!(ring.integrate_triple(&a1, &ec, &el1).unwrap(), rational_int(1));
    assert_eq!(ring.integrate_triple(&a2, &ec, &el1).unwrap(), rational_int(0));

    let f1 = ring.class("F_1").unwrap();
    let f2 = ring.class("F_2").unwrap();
    assert_eq!(ring.integrate(&a1.product(&f1).unwrap()).unwrap(), rational_int(1));
    assert_eq!(ring.integrate(&a1.product(&f2).unwrap()).unwrap(), rational_int(0));
    assert_eq!(ring.integrate(&a2.product(&f2).unwrap()).unwrap(), rational_int(1));
}

#[test]
fn every_stage_keeps_poincare_duality() {
    let ring = reference_ring();
    assert!(ring.poincare_nondegenerate());
    // wrong-dimension guard for triple integration
    let p2 = IntersectionRing::projective_space(2).unwrap();
    let g = p2.divisor("G").unwrap();
    assert!(p2.integrate_triple(&g, &g, &g).is_err());
}

#[test]
fn c1_of_the_reference_ring() {
    let ring = reference_ring();
    let m = ring.model();
    let c1 = ring.c1();
    let expect: Vec<(&str, i64)> = vec![
        ("G", 4),
        ("E_P", -2),
        ("E_Q", -2),
        ("E_R", -2),
        ("E_C", -1),
        ("E_L1", -1),
        ("E_L2", -1),
    ];
    for (name, c) in expect {
        assert_eq!(c1.coeffs()[m.index_of(name).unwrap()], K::from_int(c), "{name}");
    }
}

#[test]
fn tsv_table_is_deterministic_and_complete() {
    let t1 = reference_ring().multiplication_table().to_tsv();
    let t2 = reference_ring().multiplication_table().to_tsv();
    assert_eq!(t1, t2);
    assert_eq!(t1.lines().count(), 8);
    let header = t1.lines().next().unwrap();
    assert_eq!(header, "*\tG\tE_P\tE_Q\tE_R\tE_C\tE_L1\tE_L2");
    // spot checks on the rendered diagonal
    assert!(t1.contains("-G^2-E_P^2-E_Q^2-2GE_C"));
    assert!(t1.contains("-G^2-E_R^2+GE_C-GE_L1"));
}
