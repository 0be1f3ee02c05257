//! Numerical invariants of the toric Fano manifold of a smooth Fano
//! polytope, and the vertex-count and face-count bounds.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::exactlin::{dot, rat};
use crate::polytope::{
    dual_polytope, f_vector, lattice_points, volume, FVector, FanoPolytope, LatticePoint,
    PolytopeError,
};
use crate::relations::{total_weight, walls};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error("{what} is only defined in dimension {expected}, got {found}")]
    WrongDimension {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{what} is not an integer: {value}")]
    NonIntegral {
        what: &'static str,
        value: BigRational,
    },
    #[error("the two expressions for h21 disagree: {first} vs {second}")]
    H21Mismatch { first: BigInt, second: BigInt },
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

fn binom(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| {
        acc * BigInt::from(n - i) / BigInt::from(i + 1)
    })
}

/// h-vector `h_0, ..., h_d` of the boundary complex; `b_{2k} = h_k`.
pub fn h_vector(f: &FVector, d: usize) -> Vec<BigInt> {
    (0..=d)
        .map(|k| {
            (0..=k)
                .map(|i| {
                    let term = binom(d - i, k - i) * BigInt::from(f.shifted(i));
                    if (k - i) % 2 == 0 {
                        term
                    } else {
                        -term
                    }
                })
                .sum()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Betti {
    pub h: Vec<BigInt>,
}

impl Betti {
    pub fn b2(&self) -> BigInt {
        self.h[1].clone()
    }

    /// `b_4`; zero in dimension below 2.
    pub fn b4(&self) -> BigInt {
        self.h.get(2).cloned().unwrap_or_default()
    }
}

pub fn betti(p: &FanoPolytope) -> Betti {
    Betti {
        h: h_vector(&f_vector(p), p.dim()),
    }
}

/// `c_1^d = d! vol(P*)`.
pub fn anticanonical_degree(p: &FanoPolytope) -> Result<BigInt, InvariantError> {
    let vol = volume(&dual_polytope(p))?;
    let fact: BigInt = (1..=p.dim()).map(BigInt::from).product();
    let v = vol * rat(&fact);
    if !v.is_integer() {
        return Err(InvariantError::NonIntegral {
            what: "c1^d",
            value: v,
        });
    }
    Ok(v.to_integer())
}

/// Number of lattice points of the dual polytope, `h^0(V, -K_V)`.
pub fn h0(p: &FanoPolytope) -> Result<BigInt, InvariantError> {
    Ok(BigInt::from(lattice_points(&dual_polytope(p))?.len()))
}

fn require_dim4(p: &FanoPolytope, what: &'static str) -> Result<(), InvariantError> {
    if p.dim() != 4 {
        return Err(InvariantError::WrongDimension {
            what,
            expected: 4,
            found: p.dim(),
        });
    }
    Ok(())
}

/// `c_1^2 c_2 = 12 (h0 - 1) - 2 c_1^4`.
pub fn c1sq_c2_from(h0: &BigInt, c1_4: &BigInt) -> BigInt {
    BigInt::from(12) * (h0 - 1) - BigInt::from(2) * c1_4
}

/// `a(V) = 22 + 3 b2 - b4 + (2 c_1^4 - 5 c_1^2 c_2) / 12`.
pub fn aut_dim_from(
    b2: &BigInt,
    b4: &BigInt,
    c1_4: &BigInt,
    c1sq_c2: &BigInt,
) -> Result<BigInt, InvariantError> {
    let num = BigInt::from(2) * c1_4 - BigInt::from(5) * c1sq_c2;
    let (q, r) = num.div_rem(&BigInt::from(12));
    if !r.is_zero() {
        return Err(InvariantError::NonIntegral {
            what: "a(V)",
            value: BigRational::new(num, BigInt::from(12)),
        });
    }
    Ok(BigInt::from(22) + BigInt::from(3) * b2 - b4 + q)
}

/// `h^{2,1}` by both closing expressions; they must agree.
pub fn h21_from(
    h0: &BigInt,
    a: &BigInt,
    c1sq_c2: &BigInt,
    b2: &BigInt,
    b4: &BigInt,
) -> Result<BigInt, InvariantError> {
    let first = h0 - a - 1;
    let (half, r) = c1sq_c2.div_rem(&BigInt::from(2));
    if !r.is_zero() {
        return Err(InvariantError::NonIntegral {
            what: "c1^2 c2 / 2",
            value: BigRational::new(c1sq_c2.clone(), BigInt::from(2)),
        });
    }
    let second = half + b4 - BigInt::from(3) * b2 - 22;
    if first != second {
        return Err(InvariantError::H21Mismatch { first, second });
    }
    Ok(first)
}

pub fn c1sq_c2(p: &FanoPolytope) -> Result<BigInt, InvariantError> {
    require_dim4(p, "c1^2 c2")?;
    Ok(c1sq_c2_from(&h0(p)?, &anticanonical_degree(p)?))
}

pub fn aut_dim(p: &FanoPolytope) -> Result<BigInt, InvariantError> {
    require_dim4(p, "a(V)")?;
    let b = betti(p);
    let c4 = anticanonical_degree(p)?;
    aut_dim_from(&b.b2(), &b.b4(), &c4, &c1sq_c2_from(&h0(p)?, &c4))
}

/// Demazure roots, in the sign convention of the dual polytope used here:
/// lattice points `m` with `<m, v> = 1` for exactly one vertex and
/// `<m, v> <= 0` for all others.
pub fn demazure_roots(p: &FanoPolytope) -> Result<Vec<LatticePoint>, InvariantError> {
    let one = BigInt::one();
    let mut roots = Vec::new();
    for m in lattice_points(&dual_polytope(p))? {
        let values: Vec<BigInt> = p.vertices().iter().map(|v| dot(&m.0, &v.0)).collect();
        if values.iter().filter(|x| **x == one).count() == 1
            && values.iter().all(|x| *x == one || !x.is_positive())
        {
            roots.push(m);
        }
    }
    Ok(roots)
}

/// Dimension of the automorphism group in any dimension: torus plus one
/// root subgroup per Demazure root.
pub fn aut_dim_demazure(p: &FanoPolytope) -> Result<BigInt, InvariantError> {
    Ok(BigInt::from(p.dim() + demazure_roots(p)?.len()))
}

pub fn h21(p: &FanoPolytope) -> Result<BigInt, InvariantError> {
    let r = invariant_report(p)?;
    r.h21.ok_or(InvariantError::WrongDimension {
        what: "h21",
        expected: 4,
        found: p.dim(),
    })
}

/// The closing identities linking a table row:
/// `12 (h0 - 1) = c_1^2 c_2 + 2 c_1^4` and
/// `12 (a - 22 - 3 b2 + b4) = 2 c_1^4 - 5 c_1^2 c_2`.
pub fn closing_identities_hold(
    c1_4: &BigInt,
    c1sq_c2: &BigInt,
    b2: &BigInt,
    b4: &BigInt,
    a: &BigInt,
    h0: &BigInt,
) -> bool {
    let twelve = BigInt::from(12);
    &twelve * (h0 - 1) == c1sq_c2 + BigInt::from(2) * c1_4
        && twelve * (a - 22 - BigInt::from(3) * b2 + b4)
            == BigInt::from(2) * c1_4 - BigInt::from(5) * c1sq_c2
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantReport {
    pub dim: usize,
    pub f_vector: FVector,
    pub h_vector: Vec<BigInt>,
    pub b2: BigInt,
    pub b4: Option<BigInt>,
    pub c1_pow_d: BigInt,
    pub h0: BigInt,
    pub c1sq_c2: Option<BigInt>,
    /// From the closing formula when `d = 4`, otherwise from Demazure roots.
    pub aut_dim: Option<BigInt>,
    pub h21: Option<BigInt>,
    pub total_weight: Option<BigInt>,
}

/// JSON number when the value fits in `i64`, decimal string otherwise.
pub fn big_json(x: &BigInt) -> Value {
    match i64::try_from(x) {
        Ok(v) => json!(v),
        Err(_) => json!(x.to_string()),
    }
}

fn opt_json(x: &Option<BigInt>) -> Value {
    x.as_ref().map_or(Value::Null, big_json)
}

impl InvariantReport {
    pub fn to_json(&self) -> Value {
        json!({
            "dim": self.dim,
            "f_vector": self.f_vector.0,
            "h_vector": self.h_vector.iter().map(big_json).collect::<Vec<_>>(),
            "b2": big_json(&self.b2),
            "b4": opt_json(&self.b4),
            "c1_pow_d": big_json(&self.c1_pow_d),
            "h0": big_json(&self.h0),
            "c1sq_c2": opt_json(&self.c1sq_c2),
            "aut_dim": opt_json(&self.aut_dim),
            "h21": opt_json(&self.h21),
            "total_weight": opt_json(&self.total_weight),
        })
    }
}

pub fn invariant_report(p: &FanoPolytope) -> Result<InvariantReport, InvariantError> {
    let d = p.dim();
    let f = f_vector(p);
    let h = h_vector(&f, d);
    let c = anticanonical_degree(p)?;
    let h0v = h0(p)?;
    let b2 = h[1].clone();
    let b4 = (d >= 2).then(|| h[2].clone());
    let (mut c2, mut a, mut h21v) = (None, None, None);
    if d == 4 {
        let b4v = h[2].clone();
        let cc = c1sq_c2_from(&h0v, &c);
        let av = aut_dim_from(&b2, &b4v, &c, &cc)?;
        h21v = Some(h21_from(&h0v, &av, &cc, &b2, &b4v)?);
        c2 = Some(cc);
        a = Some(av);
    }
    if a.is_none() {
        a = Some(aut_dim_demazure(p)?);
    }
    let tw = if d >= 3 {
        Some(total_weight(p).expect("d >= 3"))
    } else {
        None
    };
    Ok(InvariantReport {
        dim: d,
        f_vector: f,
        h_vector: h,
        b2,
        b4,
        c1_pow_d: c,
        h0: h0v,
        c1sq_c2: c2,
        aut_dim: a,
        h21: h21v,
        total_weight: tw,
    })
}

/// One evaluated inequality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundCheck {
    pub name: &'static str,
    pub holds: bool,
    pub detail: String,
}

pub fn bounds_check(p: &FanoPolytope) -> Vec<BoundCheck> {
    let d = p.dim();
    let f = f_vector(p);
    let f0 = f.get(0);
    let mut out = Vec::new();
    let vmax = 2 * ((1usize << d.min(62)) - 1);
    out.push(BoundCheck {
        name: "vertex_bound",
        holds: f0 <= vmax,
        detail: format!("f0 = {f0} <= 2(2^d - 1) = {vmax}"),
    });
    if d > 2 {
        let r = d * d + 1;
        out.push(BoundCheck {
            name: "quadratic_vertex_bound",
            holds: f0 <= r,
            detail: format!("f0 = {f0} <= d^2 + 1 = {r}"),
        });
        let lhs = 12 * f.get(d - 3);
        let rhs = (3 * d - 4) * f.get(d - 2);
        out.push(BoundCheck {
            name: "weight_inequality",
            holds: lhs >= rhs,
            detail: format!("12 f_(d-3) = {lhs} >= (3d-4) f_(d-2) = {rhs}"),
        });
    }
    if d == 4 {
        let f1 = f.get(1);
        out.push(BoundCheck {
            name: "edge_bound",
            holds: 4 * f0 >= f1,
            detail: format!("4 f0 = {} >= f1 = {f1}", 4 * f0),
        });
    }
    out
}

/// The weight inequality is an equality exactly when every wall has
/// anticanonical degree one. Returns `(is_equality, all_walls_degree_one)`.
pub fn weight_equality_case(p: &FanoPolytope) -> Option<(bool, bool)> {
    let d = p.dim();
    if d < 3 {
        return None;
    }
    let f = f_vector(p);
    let eq = 12 * f.get(d - 3) == (3 * d - 4) * f.get(d - 2);
    let all_one = walls(p).iter().all(|w| w.anticanonical_degree().is_one());
    Some((eq, all_one))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::int;
    use crate::polytope::tests::{b1, cube4, p1p3, p4, pts};
    use crate::polytope::validate_fano;

    #[test]
    fn projective_space() {
        let r = invariant_report(&p4()).unwrap();
        assert_eq!(
            (
                r.c1_pow_d,
                r.c1sq_c2.unwrap(),
                r.b2,
                r.b4.unwrap(),
                r.aut_dim.unwrap(),
                r.h0,
                r.h21.unwrap()
            ),
            (
                int(625),
                int(250),
                int(1),
                int(1),
                int(24),
                int(126),
                int(101)
            )
        );
        assert_eq!(r.total_weight, Some(int(30)));
    }

    #[test]
    fn cube_and_products() {
        let r = invariant_report(&cube4()).unwrap();
        assert_eq!(
            (r.c1_pow_d, r.c1sq_c2.unwrap(), r.b2, r.b4.unwrap()),
            (int(384), int(192), int(4), int(6))
        );
        assert_eq!(
            (r.aut_dim.unwrap(), r.h0, r.h21.unwrap()),
            (int(12), int(81), int(68))
        );
        let r = invariant_report(&p1p3()).unwrap();
        assert_eq!(
            (r.c1_pow_d, r.b2, r.b4.unwrap(), r.aut_dim.unwrap(), r.h0),
            (int(512), int(2), int(2), int(18), int(105))
        );
    }

    #[test]
    fn b1_row() {
        let p = b1();
        assert_eq!(anticanonical_degree(&p).unwrap(), int(800));
        assert_eq!(c1sq_c2(&p).unwrap(), int(296));
    }

    #[test]
    fn low_dimensions() {
        let p2 = validate_fano(&pts(&[&[1, 0], &[0, 1], &[-1, -1]])).unwrap();
        let r = invariant_report(&p2).unwrap();
        assert_eq!((r.c1_pow_d, r.h0, r.b2), (int(9), int(10), int(1)));
        assert_eq!(r.aut_dim, Some(int(8)));
        assert!(matches!(
            aut_dim(&p2),
            Err(InvariantError::WrongDimension { .. })
        ));
        let hex = validate_fano(&pts(&[
            &[1, 0],
            &[0, 1],
            &[-1, 0],
            &[0, -1],
            &[1, 1],
            &[-1, -1],
        ]))
        .unwrap();
        assert_eq!(anticanonical_degree(&hex).unwrap(), int(6));
        assert!(bounds_check(&hex).iter().all(|b| b.holds));
        let seg = validate_fano(&pts(&[&[1], &[-1]])).unwrap();
        let r = invariant_report(&seg).unwrap();
        assert_eq!((r.c1_pow_d, r.h0, r.b2), (int(2), int(3), int(1)));
    }

    #[test]
    fn demazure_count_matches_closing_formula() {
        for p in [p4(), cube4(), b1(), p1p3()] {
            assert_eq!(aut_dim_demazure(&p).unwrap(), aut_dim(&p).unwrap());
        }
        let p2 = validate_fano(&pts(&[&[1, 0], &[0, 1], &[-1, -1]])).unwrap();
        assert_eq!(aut_dim_demazure(&p2).unwrap(), int(8));
        let hexagon = validate_fano(&pts(&[
            &[1, 0],
            &[1, 1],
            &[0, 1],
            &[-1, 0],
            &[-1, -1],
            &[0, -1],
        ]))
        .unwrap();
        assert_eq!(aut_dim_demazure(&hexagon).unwrap(), int(2));
    }

    #[test]
    fn identities() {
        assert!(closing_identities_hold(
            &int(625),
            &int(250),
            &int(1),
            &int(1),
            &int(24),
            &int(126)
        ));
        assert!(!closing_identities_hold(
            &int(625),
            &int(250),
            &int(1),
            &int(1),
            &int(23),
            &int(126)
        ));
        assert_eq!(
            h21_from(&int(49), &int(4), &int(144), &int(8), &int(18)).unwrap(),
            int(44)
        );
        assert!(matches!(
            h21_from(&int(49), &int(5), &int(144), &int(8), &int(18)),
            Err(InvariantError::H21Mismatch { .. })
        ));
    }

    #[test]
    fn bounds_and_equality_case() {
        assert!(bounds_check(&p4()).iter().all(|b| b.holds));
        let (eq, one) = weight_equality_case(&cube4()).unwrap();
        assert_eq!(eq, one);
        let (eq, one) = weight_equality_case(&p4()).unwrap();
        assert_eq!((eq, one), (false, false));
    }
}
