#![allow(dead_code)]

use fano::exactlin::IntMatrix;
use fano::{validate_fano, FanoPolytope, LatticePoint};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

/// Product of random elementary row operations and sign flips.
pub fn random_unimodular(d: usize, rng: &mut impl Rng) -> IntMatrix {
    let mut a = IntMatrix::identity(d);
    for _ in 0..3 * d {
        let i = rng.gen_range(0..d);
        let mut e = IntMatrix::identity(d);
        if d > 1 {
            let j = (i + rng.gen_range(1..d)) % d;
            e.set(i, j, BigInt::from(rng.gen_range(-2i64..=2)));
        }
        if rng.gen_bool(0.3) {
            e.set(i, i, BigInt::from(-1));
        }
        a = e.mul(&a).unwrap();
    }
    a
}

/// Image of `p` under a random unimodular map, with the vertices shuffled.
pub fn random_image(p: &FanoPolytope, rng: &mut impl Rng) -> FanoPolytope {
    let a = random_unimodular(p.dim(), rng);
    let mut v: Vec<LatticePoint> = p
        .vertices()
        .iter()
        .map(|x| LatticePoint(a.mul_vec(&x.0).unwrap()))
        .collect();
    v.shuffle(rng);
    validate_fano(&v).expect("unimodular image stays Fano")
}
