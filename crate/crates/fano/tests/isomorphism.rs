mod common;

use fano::catalog::Catalog;
use fano::enumerate::{reconstruct, Presentation};
use fano::isom::{
    are_isomorphic, canonical_form, combinatorially_equivalent, relations_correspond,
};
use fano::FanoPolytope;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fourfold(name: &str) -> FanoPolytope {
    let cat = Catalog::embedded(4).unwrap();
    let e = cat.entries.iter().find(|e| e.entry.name == name).unwrap();
    e.polytope.clone().unwrap()
}

#[test]
fn b4_and_b5_share_combinatorics_only() {
    let (b4, b5) = (fourfold("B_4"), fourfold("B_5"));
    let sigma = combinatorially_equivalent(&b4, &b5).expect("same face lattice");
    assert!(!relations_correspond(&b4, &b5, &sigma));
    assert!(are_isomorphic(&b4, &b5).is_none());
    assert_ne!(canonical_form(&b4), canonical_form(&b5));
}

#[test]
fn canonical_form_survives_unimodular_maps() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for name in ["P4", "B_2", "D_8", "symm10iii"] {
        let p = fourfold(name);
        let c = canonical_form(&p);
        for _ in 0..50 {
            let q = common::random_image(&p, &mut rng);
            assert_eq!(canonical_form(&q), c, "{name}");
            assert!(are_isomorphic(&p, &q).is_some());
        }
    }
}

#[test]
fn presentations_round_trip() {
    for d in 2..=4 {
        let cat = Catalog::embedded(d).unwrap();
        for e in &cat.entries {
            let p = e.polytope.as_ref().unwrap();
            let pres = Presentation::of_polytope(p);
            let again = Presentation::from_json(&pres.to_json().to_string()).unwrap();
            let q = reconstruct(&again).unwrap_or_else(|err| panic!("{}: {err}", e.entry.name));
            assert!(are_isomorphic(p, &q).is_some(), "{}", e.entry.name);
        }
    }
}
