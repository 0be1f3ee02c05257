//! Lattice polytopes: hulls, smooth Fano validation, duals, lattice points
//! and volumes.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactlin::{self, dot, gcd_all, rank_of_rows, rat, IntMatrix, LinalgError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("point {index} has {found} coordinates, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("need at least {needed} points in dimension {dim}, got {found}")]
    TooFewPoints {
        dim: usize,
        needed: usize,
        found: usize,
    },
    #[error("points {0} and {1} coincide")]
    DuplicatePoint(usize, usize),
    #[error("the points do not span a full-dimensional polytope")]
    NotFullDimensional,
    #[error("the origin is not in the interior of the convex hull")]
    OriginNotInterior,
    #[error("point {0} is not a vertex of the convex hull")]
    RedundantPoint(usize),
    #[error("facet {members:?} is not a simplex")]
    NonSimplicialFacet { members: Vec<usize> },
    #[error("facet {members:?} is not unimodular (determinant {det})")]
    NonUnimodularFacet { members: Vec<usize>, det: BigInt },
    #[error("polytope has no vertices")]
    Empty,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A point of `Z^d`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct LatticePoint(pub Vec<BigInt>);

impl LatticePoint {
    pub fn from_i64(xs: &[i64]) -> Self {
        LatticePoint(exactlin::ivec(xs))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn zero(d: usize) -> Self {
        LatticePoint(vec![BigInt::zero(); d])
    }

    pub fn add(&self, o: &LatticePoint) -> LatticePoint {
        LatticePoint(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self) -> LatticePoint {
        LatticePoint(self.0.iter().map(|a| -a).collect())
    }

    pub fn is_primitive(&self) -> bool {
        gcd_all(&self.0).is_one()
    }

    pub fn max_abs(&self) -> BigInt {
        self.0.iter().map(|x| x.abs()).max().unwrap_or_default()
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

/// Facet of the hull of an arbitrary full-dimensional lattice point set:
/// `<normal, x> <= level` on the hull, with equality exactly on `members`.
/// `normal` is primitive.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffineFacet {
    pub normal: Vec<BigInt>,
    pub level: BigInt,
    pub members: Vec<usize>,
}

/// Generalized cross product of `d-1` vectors in `Z^d`; zero iff dependent.
fn cross(vs: &[Vec<BigInt>], d: usize) -> Vec<BigInt> {
    (0..d)
        .map(|j| {
            let minor: Vec<Vec<BigInt>> = vs
                .iter()
                .map(|v| {
                    v.iter()
                        .enumerate()
                        .filter(|&(k, _)| k != j)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let m = if minor.is_empty() {
                IntMatrix::identity(0)
            } else {
                IntMatrix::from_rows(minor).expect("square minor")
            };
            let det = exactlin::det(&m).expect("square minor");
            if j % 2 == 0 {
                det
            } else {
                -det
            }
        })
        .collect()
}

/// Facets of the convex hull of `points`, found by scanning all `d`-subsets.
/// Fails with [`PolytopeError::NotFullDimensional`] for degenerate sets.
pub fn hull_facets(points: &[LatticePoint]) -> Result<Vec<AffineFacet>, PolytopeError> {
    let d = check_points(points)?;
    let n = points.len();
    if n < d + 1 {
        return Err(PolytopeError::NotFullDimensional);
    }
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut out = Vec::new();
    for subset in (0..n).combinations(d) {
        let p0 = &points[subset[0]].0;
        let diffs: Vec<Vec<BigInt>> = subset[1..]
            .iter()
            .map(|&k| points[k].0.iter().zip(p0).map(|(a, b)| a - b).collect())
            .collect();
        let mut normal = cross(&diffs, d);
        let g = gcd_all(&normal);
        if g.is_zero() {
            continue;
        }
        for x in normal.iter_mut() {
            *x = &*x / &g;
        }
        let mut level = dot(&normal, p0);
        let mut above = false;
        let mut below = false;
        let mut members = Vec::new();
        for (k, p) in points.iter().enumerate() {
            let v = dot(&normal, &p.0);
            match v.cmp(&level) {
                std::cmp::Ordering::Greater => above = true,
                std::cmp::Ordering::Less => below = true,
                std::cmp::Ordering::Equal => members.push(k),
            }
            if above && below {
                break;
            }
        }
        if above && below {
            continue;
        }
        if !below && !above {
            return Err(PolytopeError::NotFullDimensional);
        }
        if above {
            normal.iter_mut().for_each(|x| *x = -&*x);
            level = -level;
        }
        if seen.insert(members.clone()) {
            out.push(AffineFacet {
                normal,
                level,
                members,
            });
        }
    }
    if out.is_empty() {
        return Err(PolytopeError::NotFullDimensional);
    }
    Ok(out)
}

fn check_points(points: &[LatticePoint]) -> Result<usize, PolytopeError> {
    let d = points
        .first()
        .map(LatticePoint::dim)
        .ok_or(PolytopeError::Empty)?;
    if d == 0 {
        return Err(PolytopeError::ZeroDimension);
    }
    for (i, p) in points.iter().enumerate() {
        if p.dim() != d {
            return Err(PolytopeError::DimensionMismatch {
                index: i,
                expected: d,
                found: p.dim(),
            });
        }
    }
    Ok(d)
}

/// Indices of the points that are vertices of their hull.
pub fn hull_vertices(points: &[LatticePoint], facets: &[AffineFacet]) -> Vec<usize> {
    let d = points.first().map_or(0, LatticePoint::dim);
    (0..points.len())
        .filter(|&i| {
            let normals: Vec<Vec<BigInt>> = facets
                .iter()
                .filter(|f| f.members.contains(&i))
                .map(|f| f.normal.clone())
                .collect();
            rank_of_rows(&normals) == d
        })
        .collect()
}

/// Facet of a smooth Fano polytope: a unimodular simplex with integral
/// normal `u`, `<u, v> = 1` on its vertices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Facet {
    pub vertices: Vec<usize>,
    pub normal: LatticePoint,
}

/// A validated smooth Fano polytope.
#[derive(Clone, Debug)]
pub struct FanoPolytope {
    dim: usize,
    vertices: Vec<LatticePoint>,
    facets: Vec<Facet>,
    // inverse of the matrix whose columns are the facet's vertices
    inverses: Vec<IntMatrix>,
}

impl PartialEq for FanoPolytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices
    }
}

impl Eq for FanoPolytope {}

impl FanoPolytope {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &LatticePoint {
        &self.vertices[i]
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Inverse of the basis matrix of facet `f` (columns in `facets()[f].vertices` order).
    pub fn facet_inverse(&self, f: usize) -> &IntMatrix {
        &self.inverses[f]
    }

    /// Coordinates of `x` in the basis of facet `f`.
    pub fn facet_coordinates(&self, f: usize, x: &[BigInt]) -> Vec<BigInt> {
        self.inverses[f].mul_vec(x).expect("dimension checked")
    }

    pub fn index_of(&self, p: &LatticePoint) -> Option<usize> {
        self.vertices.iter().position(|v| v == p)
    }

    /// Pairs `{i, j}` (with `i < j`) spanning an edge.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: BTreeSet<(usize, usize)> = BTreeSet::new();
        for f in &self.facets {
            for pair in f.vertices.iter().combinations(2) {
                e.insert((*pair[0], *pair[1]));
            }
        }
        e.into_iter().collect()
    }

    /// Every face is a subset of a facet; returns the distinct `k`-vertex faces.
    pub fn faces_with(&self, k: usize) -> BTreeSet<Vec<usize>> {
        let mut out = BTreeSet::new();
        for f in &self.facets {
            for s in f.vertices.iter().copied().combinations(k) {
                out.insert(s);
            }
        }
        out
    }

    pub fn vertex_matrix(&self) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = self.vertices.iter().map(|v| v.0.clone()).collect();
        IntMatrix::from_columns(self.dim, &cols).expect("consistent dimensions")
    }
}

/// Checks that `points` are the vertices of a smooth Fano polytope and
/// computes its facets.
pub fn validate_fano(points: &[LatticePoint]) -> Result<FanoPolytope, PolytopeError> {
    let d = check_points(points)?;
    if points.len() < d + 1 {
        return Err(PolytopeError::TooFewPoints {
            dim: d,
            needed: d + 1,
            found: points.len(),
        });
    }
    let mut index: HashMap<&LatticePoint, usize> = HashMap::new();
    for (i, p) in points.iter().enumerate() {
        if let Some(&j) = index.get(p) {
            return Err(PolytopeError::DuplicatePoint(j, i));
        }
        index.insert(p, i);
    }
    let coords: Vec<Vec<BigInt>> = points.iter().map(|p| p.0.clone()).collect();
    if rank_of_rows(&coords) < d {
        return Err(PolytopeError::NotFullDimensional);
    }
    let hull = hull_facets(points)?;
    if hull.iter().any(|f| !f.level.is_positive()) {
        return Err(PolytopeError::OriginNotInterior);
    }
    let verts = hull_vertices(points, &hull);
    if let Some(i) = (0..points.len()).find(|i| !verts.contains(i)) {
        return Err(PolytopeError::RedundantPoint(i));
    }
    let mut facets = Vec::with_capacity(hull.len());
    let mut inverses = Vec::with_capacity(hull.len());
    for f in hull {
        if f.members.len() != d {
            return Err(PolytopeError::NonSimplicialFacet { members: f.members });
        }
        let cols: Vec<Vec<BigInt>> = f.members.iter().map(|&i| points[i].0.clone()).collect();
        let b = IntMatrix::from_columns(d, &cols)?;
        let det = exactlin::det(&b)?;
        if !det.abs().is_one() {
            return Err(PolytopeError::NonUnimodularFacet {
                members: f.members,
                det,
            });
        }
        debug_assert!(f.level.is_one());
        let inv = exactlin::unimodular_inverse(&b)?.expect("unimodular");
        facets.push(Facet {
            vertices: f.members,
            normal: LatticePoint(f.normal),
        });
        inverses.push(inv);
    }
    Ok(FanoPolytope {
        dim: d,
        vertices: points.to_vec(),
        facets,
        inverses,
    })
}

/// `f_0, ..., f_{d-1}`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FVector(pub Vec<usize>);

impl FVector {
    pub fn get(&self, i: usize) -> usize {
        self.0[i]
    }

    /// `f_{i}` with the convention `f_{-1} = 1`, indexed by `i + 1`.
    pub fn shifted(&self, i_plus_one: usize) -> usize {
        if i_plus_one == 0 {
            1
        } else {
            self.0[i_plus_one - 1]
        }
    }
}

pub fn f_vector(p: &FanoPolytope) -> FVector {
    FVector((1..=p.dim).map(|k| p.faces_with(k).len()).collect())
}

/// Reflexivity of an arbitrary lattice polytope given by points containing
/// the origin in its interior: every facet is at lattice distance one, and
/// the origin is the only interior lattice point.
pub fn is_reflexive(points: &[LatticePoint]) -> Result<bool, PolytopeError> {
    let q = RationalPolytope::from_lattice_points(points)?;
    if q.inequalities.iter().any(|h| !h.level.is_positive()) {
        return Err(PolytopeError::OriginNotInterior);
    }
    if q.inequalities.iter().any(|h| !h.level.is_one()) {
        return Ok(false);
    }
    let interior = interior_lattice_points(&q)?;
    Ok(interior.len() == 1 && interior[0].is_zero())
}

/// Inequality `<normal, x> <= level`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Inequality {
    pub normal: Vec<BigInt>,
    pub level: BigRational,
}

impl Inequality {
    fn value(&self, x: &[BigRational]) -> BigRational {
        self.normal.iter().zip(x).map(|(a, b)| rat(a) * b).sum()
    }
}

/// A polytope with rational vertices, kept in both descriptions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalPolytope {
    pub dim: usize,
    pub vertices: Vec<Vec<BigRational>>,
    pub inequalities: Vec<Inequality>,
}

impl RationalPolytope {
    pub fn from_lattice_points(points: &[LatticePoint]) -> Result<Self, PolytopeError> {
        let facets = hull_facets(points)?;
        let verts = hull_vertices(points, &facets);
        let d = points[0].dim();
        Ok(RationalPolytope {
            dim: d,
            vertices: verts
                .iter()
                .map(|&i| points[i].0.iter().map(rat).collect())
                .collect(),
            inequalities: facets
                .into_iter()
                .map(|f| Inequality {
                    normal: f.normal,
                    level: rat(&f.level),
                })
                .collect(),
        })
    }

    pub fn contains(&self, x: &[BigRational]) -> bool {
        self.inequalities.iter().all(|h| h.value(x) <= h.level)
    }

    fn tight(&self, v: &[BigRational]) -> Vec<usize> {
        (0..self.inequalities.len())
            .filter(|&k| self.inequalities[k].value(v) == self.inequalities[k].level)
            .collect()
    }
}

/// The polar dual `{u : <u, v> <= 1 for all vertices v}` of a smooth Fano
/// polytope. Its vertices are the facet normals.
pub fn dual_polytope(p: &FanoPolytope) -> RationalPolytope {
    RationalPolytope {
        dim: p.dim,
        vertices: p
            .facets
            .iter()
            .map(|f| f.normal.0.iter().map(rat).collect())
            .collect(),
        inequalities: p
            .vertices
            .iter()
            .map(|v| Inequality {
                normal: v.0.clone(),
                level: BigRational::one(),
            })
            .collect(),
    }
}

fn scan_box(q: &RationalPolytope, strict: bool) -> Result<Vec<LatticePoint>, PolytopeError> {
    if q.vertices.is_empty() {
        return Err(PolytopeError::Empty);
    }
    let d = q.dim;
    let lo: Vec<BigInt> = (0..d)
        .map(|k| {
            q.vertices
                .iter()
                .map(|v| v[k].floor().to_integer())
                .min()
                .unwrap()
        })
        .collect();
    let hi: Vec<BigInt> = (0..d)
        .map(|k| {
            q.vertices
                .iter()
                .map(|v| v[k].ceil().to_integer())
                .max()
                .unwrap()
        })
        .collect();
    // integer form of each inequality: a.x * den <= num
    let ineqs: Vec<(Vec<BigInt>, BigInt, BigInt)> = q
        .inequalities
        .iter()
        .map(|h| {
            (
                h.normal.clone(),
                h.level.denom().clone(),
                h.level.numer().clone(),
            )
        })
        .collect();
    let mut out = Vec::new();
    let mut x = lo.clone();
    loop {
        let inside = ineqs.iter().all(|(a, den, num)| {
            let lhs = dot(a, &x) * den;
            if strict {
                &lhs < num
            } else {
                &lhs <= num
            }
        });
        if inside {
            out.push(LatticePoint(x.clone()));
        }
        // odometer, last coordinate fastest, so output is lexicographic
        let mut k = d;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            if x[k] < hi[k] {
                x[k] += 1;
                for j in k + 1..d {
                    x[j] = lo[j].clone();
                }
                break;
            }
        }
    }
}

/// All lattice points, in lexicographic order.
pub fn lattice_points(q: &RationalPolytope) -> Result<Vec<LatticePoint>, PolytopeError> {
    scan_box(q, false)
}

pub fn interior_lattice_points(q: &RationalPolytope) -> Result<Vec<LatticePoint>, PolytopeError> {
    scan_box(q, true)
}

fn affine_rank(points: &[&Vec<BigRational>]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let p0 = points[0];
    let diffs: Vec<Vec<BigRational>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect())
        .collect();
    exactlin::rref(diffs).1.len()
}

/// Simplices of a pulling triangulation of the face spanned by `face`
/// (vertex indices) of affine dimension `k`.
fn pull(
    q: &RationalPolytope,
    tight: &[Vec<usize>],
    face: &[usize],
    k: usize,
    out: &mut Vec<Vec<usize>>,
) {
    if k == 0 {
        out.push(vec![face[0]]);
        return;
    }
    let apex = face[0];
    let mut subfaces: BTreeSet<Vec<usize>> = BTreeSet::new();
    for h in 0..q.inequalities.len() {
        let s: Vec<usize> = face
            .iter()
            .copied()
            .filter(|&v| tight[v].contains(&h))
            .collect();
        if s.len() == face.len() || s.contains(&apex) || s.len() < k {
            continue;
        }
        let pts: Vec<&Vec<BigRational>> = s.iter().map(|&v| &q.vertices[v]).collect();
        if affine_rank(&pts) == k - 1 {
            subfaces.insert(s);
        }
    }
    for s in subfaces {
        let mut sub = Vec::new();
        pull(q, tight, &s, k - 1, &mut sub);
        for mut simplex in sub {
            simplex.insert(0, apex);
            out.push(simplex);
        }
    }
}

/// Euclidean volume, by a pulling triangulation.
pub fn volume(q: &RationalPolytope) -> Result<BigRational, PolytopeError> {
    if q.vertices.is_empty() {
        return Err(PolytopeError::Empty);
    }
    let d = q.dim;
    let all: Vec<&Vec<BigRational>> = q.vertices.iter().collect();
    if affine_rank(&all) < d {
        return Ok(BigRational::zero());
    }
    let tight: Vec<Vec<usize>> = q.vertices.iter().map(|v| q.tight(v)).collect();
    let face: Vec<usize> = (0..q.vertices.len()).collect();
    let mut simplices = Vec::new();
    pull(q, &tight, &face, d, &mut simplices);
    let mut total = BigRational::zero();
    for s in simplices {
        let v0 = &q.vertices[s[0]];
        let rows: Vec<Vec<BigRational>> = s[1..]
            .iter()
            .map(|&i| q.vertices[i].iter().zip(v0).map(|(a, b)| a - b).collect())
            .collect();
        total += rational_det(rows).abs();
    }
    let fact: BigInt = (1..=d).map(BigInt::from).product();
    Ok(total / rat(&fact))
}

fn rational_det(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        for i in c + 1..n {
            let f = &a[i][c] / &a[c][c];
            for j in c..n {
                let t = &a[c][j] * &f;
                a[i][j] -= t;
            }
        }
    }
    det
}
