//! Primitive collections and relations, the relation lattice, extremal
//! rays, walls and ampleness.
//!
//! Vertex indices are 0-based throughout the library; 1-based labels only
//! appear in file formats and printed output.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactlin::{
    self, invariant_factors, kernel_basis, nonnegative_combination, rank, IntMatrix, LinalgError,
};
use crate::polytope::{f_vector, FanoPolytope, LatticePoint};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RelationError {
    #[error("vertex index {index} out of range (polytope has {n} vertices)")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("{0:?} is not a primitive collection")]
    NotPrimitive(Vec<usize>),
    #[error("point {0} lies in no cone of the fan")]
    NotInFan(LatticePoint),
    #[error("{0:?} is not a ridge (a (d-1)-face)")]
    NotARidge(Vec<usize>),
    #[error("relation of {0:?} is not an extremal ray")]
    NotExtremal(Vec<usize>),
    #[error("total weight needs dimension at least 3, got {0}")]
    DimensionTooSmall(usize),
    #[error("cone {cone:?} has {found} rays, expected {expected}")]
    ConeSize {
        cone: Vec<usize>,
        expected: usize,
        found: usize,
    },
    #[error("cone {0:?} is not generated by a lattice basis")]
    NotRegular(Vec<usize>),
    #[error("the fan is not complete: ridge {0:?} lies in {1} maximal cones")]
    NotComplete(Vec<usize>, usize),
    #[error("ray {0} has the wrong dimension")]
    RayDimension(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A complete regular simplicial fan, given by its rays and maximal cones.
/// For a smooth Fano polytope the cones are the cones over the facets.
pub trait FanView {
    fn dim(&self) -> usize;
    fn rays(&self) -> &[LatticePoint];
    fn cone_count(&self) -> usize;
    fn cone(&self, c: usize) -> &[usize];
    /// Coordinates of `x` in the basis of cone `c`.
    fn cone_coordinates(&self, c: usize, x: &[BigInt]) -> Vec<BigInt>;
}

impl FanView for FanoPolytope {
    fn dim(&self) -> usize {
        FanoPolytope::dim(self)
    }
    fn rays(&self) -> &[LatticePoint] {
        self.vertices()
    }
    fn cone_count(&self) -> usize {
        self.facets().len()
    }
    fn cone(&self, c: usize) -> &[usize] {
        &self.facets()[c].vertices
    }
    fn cone_coordinates(&self, c: usize, x: &[BigInt]) -> Vec<BigInt> {
        self.facet_coordinates(c, x)
    }
}

/// Explicit fan; needed for fans that are not face fans of a smooth Fano
/// polytope (the nef-but-not-ample case).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<LatticePoint>,
    cones: Vec<Vec<usize>>,
    inverses: Vec<IntMatrix>,
}

impl Fan {
    /// Validates regularity and completeness (every ridge in exactly two cones).
    pub fn new(
        dim: usize,
        rays: Vec<LatticePoint>,
        cones: Vec<Vec<usize>>,
    ) -> Result<Fan, RelationError> {
        if let Some(i) = rays.iter().position(|r| r.dim() != dim) {
            return Err(RelationError::RayDimension(i));
        }
        let mut inverses = Vec::new();
        let mut sorted = Vec::new();
        for c in cones {
            let mut c = c;
            c.sort_unstable();
            c.dedup();
            if c.len() != dim {
                return Err(RelationError::ConeSize {
                    found: c.len(),
                    cone: c,
                    expected: dim,
                });
            }
            if let Some(&i) = c.iter().find(|&&i| i >= rays.len()) {
                return Err(RelationError::IndexOutOfRange {
                    index: i,
                    n: rays.len(),
                });
            }
            let cols: Vec<Vec<BigInt>> = c.iter().map(|&i| rays[i].0.clone()).collect();
            let b = IntMatrix::from_columns(dim, &cols)?;
            let inv = exactlin::unimodular_inverse(&b)?
                .ok_or_else(|| RelationError::NotRegular(c.clone()))?;
            inverses.push(inv);
            sorted.push(c);
        }
        let mut ridges: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for c in &sorted {
            for r in c.iter().copied().combinations(dim - 1) {
                *ridges.entry(r).or_default() += 1;
            }
        }
        if let Some((r, k)) = ridges.into_iter().find(|&(_, k)| k != 2) {
            return Err(RelationError::NotComplete(r, k));
        }
        Ok(Fan {
            dim,
            rays,
            cones: sorted,
            inverses,
        })
    }

    pub fn of_polytope(p: &FanoPolytope) -> Fan {
        Fan {
            dim: p.dim(),
            rays: p.vertices().to_vec(),
            cones: p.facets().iter().map(|f| f.vertices.clone()).collect(),
            inverses: (0..p.facets().len())
                .map(|f| p.facet_inverse(f).clone())
                .collect(),
        }
    }

    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }
}

impl FanView for Fan {
    fn dim(&self) -> usize {
        self.dim
    }
    fn rays(&self) -> &[LatticePoint] {
        &self.rays
    }
    fn cone_count(&self) -> usize {
        self.cones.len()
    }
    fn cone(&self, c: usize) -> &[usize] {
        &self.cones[c]
    }
    fn cone_coordinates(&self, c: usize, x: &[BigInt]) -> Vec<BigInt> {
        self.inverses[c].mul_vec(x).expect("dimension checked")
    }
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    small.iter().all(|x| big.contains(x))
}

fn check_indices<F: FanView + ?Sized>(fan: &F, s: &[usize]) -> Result<(), RelationError> {
    let n = fan.rays().len();
    match s.iter().find(|&&i| i >= n) {
        Some(&i) => Err(RelationError::IndexOutOfRange { index: i, n }),
        None => Ok(()),
    }
}

/// True when the vertices `s` lie in a common facet (cone).
pub fn is_face<F: FanView + ?Sized>(fan: &F, s: &[usize]) -> Result<bool, RelationError> {
    check_indices(fan, s)?;
    Ok((0..fan.cone_count()).any(|c| is_subset(s, fan.cone(c))))
}

/// Minimal non-face, sorted.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PrimitiveCollection(pub Vec<usize>);

impl PrimitiveCollection {
    pub fn members(&self) -> &[usize] {
        &self.0
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn primitive_collections<F: FanView + ?Sized>(fan: &F) -> Vec<PrimitiveCollection> {
    let n = fan.rays().len();
    let d = fan.dim();
    let face = |s: &[usize]| (0..fan.cone_count()).any(|c| is_subset(s, fan.cone(c)));
    let mut out = Vec::new();
    for k in 2..=(d + 1).min(n) {
        for s in (0..n).combinations(k) {
            if face(&s) {
                continue;
            }
            let minimal = (0..k).all(|drop| {
                let sub: Vec<usize> = s
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != drop)
                    .map(|(_, &x)| x)
                    .collect();
                face(&sub)
            });
            if minimal {
                out.push(PrimitiveCollection(s));
            }
        }
    }
    out
}

/// The minimal cone containing a point: `point = sum coeffs[i] * v[support[i]]`
/// with all coefficients positive.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cone {
    pub support: Vec<usize>,
    pub coeffs: Vec<BigInt>,
}

pub fn locate<F: FanView + ?Sized>(fan: &F, point: &LatticePoint) -> Result<Cone, RelationError> {
    if point.dim() != fan.dim() {
        return Err(LinalgError::DimensionMismatch {
            expected: fan.dim(),
            found: point.dim(),
        }
        .into());
    }
    for c in 0..fan.cone_count() {
        let coords = fan.cone_coordinates(c, &point.0);
        if coords.iter().all(|x| !x.is_negative()) {
            let mut pairs: Vec<(usize, BigInt)> = fan
                .cone(c)
                .iter()
                .copied()
                .zip(coords)
                .filter(|(_, x)| !x.is_zero())
                .collect();
            pairs.sort();
            let (support, coeffs) = pairs.into_iter().unzip();
            return Ok(Cone { support, coeffs });
        }
    }
    Err(RelationError::NotInFan(point.clone()))
}

/// `sum_{i in collection} v_i = sum_j coeffs[j] * v_{support[j]}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PrimitiveRelation {
    pub collection: Vec<usize>,
    pub support: Vec<usize>,
    pub coeffs: Vec<BigInt>,
}

impl PrimitiveRelation {
    /// `|collection| - sum coeffs`, the anticanonical degree.
    pub fn degree(&self) -> BigInt {
        BigInt::from(self.collection.len()) - self.coeffs.iter().sum::<BigInt>()
    }

    /// Coefficient vector in `Z^n` (collection +1, support -coeff).
    pub fn vector(&self, n: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); n];
        for &i in &self.collection {
            v[i] += 1;
        }
        for (&j, c) in self.support.iter().zip(&self.coeffs) {
            v[j] -= c;
        }
        v
    }

    pub fn coefficient_sum(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    pub fn target(&self) -> BTreeMap<usize, BigInt> {
        self.support
            .iter()
            .copied()
            .zip(self.coeffs.iter().cloned())
            .collect()
    }

    /// Human-readable form with 1-based labels, e.g. `v1 + v2 = 2v3`.
    pub fn display(&self) -> String {
        let lhs = self
            .collection
            .iter()
            .map(|i| format!("v{}", i + 1))
            .join(" + ");
        let rhs = if self.support.is_empty() {
            "0".to_string()
        } else {
            self.support
                .iter()
                .zip(&self.coeffs)
                .map(|(j, c)| {
                    if c.is_one() {
                        format!("v{}", j + 1)
                    } else {
                        format!("{c}v{}", j + 1)
                    }
                })
                .join(" + ")
        };
        format!("{lhs} = {rhs}")
    }
}

impl fmt::Display for PrimitiveRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

pub fn primitive_relation<F: FanView + ?Sized>(
    fan: &F,
    collection: &[usize],
) -> Result<PrimitiveRelation, RelationError> {
    check_indices(fan, collection)?;
    let mut c = collection.to_vec();
    c.sort_unstable();
    c.dedup();
    if !primitive_collections_contains(fan, &c) {
        return Err(RelationError::NotPrimitive(c));
    }
    relation_of(fan, c)
}

fn primitive_collections_contains<F: FanView + ?Sized>(fan: &F, s: &[usize]) -> bool {
    let face = |s: &[usize]| (0..fan.cone_count()).any(|c| is_subset(s, fan.cone(c)));
    s.len() >= 2
        && !face(s)
        && (0..s.len()).all(|drop| {
            let sub: Vec<usize> = s
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != drop)
                .map(|(_, &x)| x)
                .collect();
            face(&sub)
        })
}

fn relation_of<F: FanView + ?Sized>(
    fan: &F,
    collection: Vec<usize>,
) -> Result<PrimitiveRelation, RelationError> {
    let d = fan.dim();
    let mut s = LatticePoint::zero(d);
    for &i in &collection {
        s = s.add(&fan.rays()[i]);
    }
    let cone = locate(fan, &s)?;
    Ok(PrimitiveRelation {
        collection,
        support: cone.support,
        coeffs: cone.coeffs,
    })
}

pub fn primitive_relations<F: FanView + ?Sized>(fan: &F) -> Vec<PrimitiveRelation> {
    primitive_collections(fan)
        .into_iter()
        .map(|c| relation_of(fan, c.0).expect("complete fan contains every point"))
        .collect()
}

/// The lattice `L(P)` of integer relations among the vertices, and whether
/// the primitive relations generate it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationLattice {
    /// Rows form a basis of `L(P)`.
    pub basis: IntMatrix,
    pub rank: usize,
    /// Index of the sublattice spanned by the relations (0 if not full rank).
    pub index: BigInt,
}

impl RelationLattice {
    pub fn generated(&self) -> bool {
        self.index.is_one()
    }
}

pub fn relation_lattice(p: &FanoPolytope, relations: &[PrimitiveRelation]) -> RelationLattice {
    let n = p.n_vertices();
    let basis = kernel_basis(&p.vertex_matrix());
    let r = basis.rows();
    let rel_rows: Vec<Vec<BigInt>> = relations.iter().map(|rel| rel.vector(n)).collect();
    let index = if rel_rows.is_empty() {
        if r == 0 {
            BigInt::one()
        } else {
            BigInt::zero()
        }
    } else {
        let m = IntMatrix::from_rows(rel_rows).expect("equal lengths");
        if rank(&m) < r {
            BigInt::zero()
        } else {
            invariant_factors(&m).iter().product()
        }
    };
    RelationLattice {
        basis,
        rank: r,
        index,
    }
}

/// Indices (into `relations`) of the relation vectors spanning extremal rays
/// of the cone they generate.
pub fn extremal_rays(n: usize, relations: &[PrimitiveRelation]) -> Vec<usize> {
    let vecs: Vec<Vec<BigInt>> = relations.iter().map(|r| r.vector(n)).collect();
    let mut seen: HashSet<&Vec<BigInt>> = HashSet::new();
    (0..vecs.len())
        .filter(|&i| {
            // a repeated vector spans the same ray; keep its first occurrence
            if !seen.insert(&vecs[i]) {
                return false;
            }
            let others: Vec<Vec<BigInt>> = vecs
                .iter()
                .enumerate()
                .filter(|&(j, v)| j != i && v != &vecs[i])
                .map(|(_, v)| v.clone())
                .collect();
            nonnegative_combination(&others, &vecs[i]).is_none()
        })
        .collect()
}

/// Normal bundle of the invariant curve of an extremal contraction, written
/// as its list of line-bundle degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalBundle {
    pub degrees: Vec<BigInt>,
    pub anticanonical_degree: BigInt,
}

/// `{1^(k-2), 0^(d+1-k-m), -c_1, ..., -c_m}` for an extremal relation.
pub fn normal_bundle_type(
    p: &FanoPolytope,
    relations: &[PrimitiveRelation],
    which: usize,
) -> Result<NormalBundle, RelationError> {
    let rel = &relations[which];
    if !extremal_rays(p.n_vertices(), relations).contains(&which) {
        return Err(RelationError::NotExtremal(rel.collection.clone()));
    }
    let d = p.dim();
    let k = rel.collection.len();
    let m = rel.support.len();
    let mut degrees = vec![BigInt::one(); k - 2];
    degrees.extend(std::iter::repeat_n(
        BigInt::zero(),
        (d + 1).saturating_sub(k + m),
    ));
    degrees.extend(rel.coeffs.iter().map(|c| -c));
    Ok(NormalBundle {
        degrees,
        anticanonical_degree: rel.degree(),
    })
}

/// Wall relation across a ridge `r` shared by facets `r + a` and `r + b`:
/// `v_a + v_b + sum_i x_i v_{r_i} = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallRelation {
    pub ridge: Vec<usize>,
    pub a: usize,
    pub b: usize,
    pub x: Vec<BigInt>,
}

impl WallRelation {
    pub fn normal_degree(&self) -> BigInt {
        self.x.iter().sum()
    }

    pub fn anticanonical_degree(&self) -> BigInt {
        self.normal_degree() + 2
    }

    pub fn vector(&self, n: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); n];
        v[self.a] += 1;
        v[self.b] += 1;
        for (&i, x) in self.ridge.iter().zip(&self.x) {
            v[i] += x;
        }
        v
    }
}

pub fn wall_relation(p: &FanoPolytope, ridge: &[usize]) -> Result<WallRelation, RelationError> {
    check_indices(p, ridge)?;
    let d = p.dim();
    let mut r = ridge.to_vec();
    r.sort_unstable();
    r.dedup();
    let containing: Vec<usize> = (0..p.facets().len())
        .filter(|&f| is_subset(&r, &p.facets()[f].vertices))
        .collect();
    if r.len() + 1 != d || containing.len() != 2 {
        return Err(RelationError::NotARidge(r));
    }
    let other = |f: usize| {
        *p.facets()[f]
            .vertices
            .iter()
            .find(|v| !r.contains(v))
            .expect("facet has one extra vertex")
    };
    let (fa, fb) = (containing[0], containing[1]);
    let (a, b) = (other(fa), other(fb));
    // coordinates of v_b in the basis of facet fa = ridge + a; coefficient of a is -1
    let coords = p.facet_coordinates(fa, &p.vertex(b).0);
    let verts = &p.facets()[fa].vertices;
    let x: Vec<BigInt> = r
        .iter()
        .map(|i| {
            let pos = verts
                .iter()
                .position(|v| v == i)
                .expect("ridge vertex in facet");
            -coords[pos].clone()
        })
        .collect();
    debug_assert_eq!(
        coords[verts.iter().position(|&v| v == a).unwrap()],
        BigInt::from(-1)
    );
    Ok(WallRelation { ridge: r, a, b, x })
}

pub fn ridges(p: &FanoPolytope) -> Vec<Vec<usize>> {
    let d = p.dim();
    if d == 0 {
        return Vec::new();
    }
    p.faces_with(d - 1).into_iter().collect()
}

pub fn walls(p: &FanoPolytope) -> Vec<WallRelation> {
    ridges(p)
        .iter()
        .map(|r| wall_relation(p, r).expect("ridge of the polytope"))
        .collect()
}

/// `sum over walls of (anticanonical degree - 2)`, i.e. `sum of normal degrees`.
pub fn total_weight(p: &FanoPolytope) -> Result<BigInt, RelationError> {
    if p.dim() < 3 {
        return Err(RelationError::DimensionTooSmall(p.dim()));
    }
    Ok(walls(p).iter().map(WallRelation::normal_degree).sum())
}

/// Closed form `12 f_{d-3} - 3(d-1) f_{d-2}` for the total weight.
pub fn total_weight_formula(p: &FanoPolytope) -> Result<BigInt, RelationError> {
    let d = p.dim();
    if d < 3 {
        return Err(RelationError::DimensionTooSmall(d));
    }
    let f = f_vector(p);
    Ok(BigInt::from(12 * f.get(d - 3)) - BigInt::from(3 * (d - 1) * f.get(d - 2)))
}

/// Number of edges at vertex `i`.
pub fn valence(p: &FanoPolytope, i: usize) -> usize {
    p.edges().iter().filter(|&&(a, b)| a == i || b == i).count()
}

/// Ampleness of the anticanonical class of a complete regular fan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ampleness {
    Ample,
    NefOnly,
    NotNef,
}

impl fmt::Display for Ampleness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ampleness::Ample => "ample",
            Ampleness::NefOnly => "nef_only",
            Ampleness::NotNef => "not_nef",
        })
    }
}

/// Classifies by the minimal degree of the primitive relations.
pub fn ampleness(fan: &Fan) -> Ampleness {
    let min = primitive_relations(fan)
        .iter()
        .map(PrimitiveRelation::degree)
        .min();
    match min {
        Some(m) if m.is_positive() => Ampleness::Ample,
        Some(m) if m.is_zero() => Ampleness::NefOnly,
        Some(_) => Ampleness::NotNef,
        None => Ampleness::Ample,
    }
}

/// Sets of indices whose sums are zero, for each antipodal vertex pair.
pub fn antipodal_pairs(p: &FanoPolytope) -> Vec<(usize, usize)> {
    let n = p.n_vertices();
    let set: BTreeSet<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| p.vertex(i).add(p.vertex(j)).is_zero())
        .collect();
    set.into_iter().collect()
}
