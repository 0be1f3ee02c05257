//! Projections `pi_i : Z^d -> Z^d / Z v_i`, double points, links and the
//! face structure of the projected polytope.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactlin::{self, dot, rank_of_rows, IntMatrix, LinalgError};
use crate::polytope::{
    hull_facets, hull_vertices, interior_lattice_points, lattice_points, validate_fano,
    AffineFacet, FanoPolytope, LatticePoint, PolytopeError, RationalPolytope,
};
use crate::relations::{primitive_relations, valence, PrimitiveRelation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProjectError {
    #[error("vertex index {index} out of range (polytope has {n} vertices)")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("projection needs dimension at least 2")]
    DimensionTooSmall,
    #[error("lattice point {point} has {count} preimages among the vertices")]
    TooManyPreimages { point: LatticePoint, count: usize },
    #[error("double point {point} from v{} and v{}: neither sum relation is primitive", .a + 1, .b + 1)]
    UnresolvedDoublePoint {
        point: LatticePoint,
        a: usize,
        b: usize,
    },
    #[error("v{} + v{} is not zero", .0 + 1, .1 + 1)]
    NotAntipodal(usize, usize),
    #[error("2-face classification needs a 2-dimensional lattice polygon with 3 or 4 lattice points, got {0} points")]
    UnsupportedFace(usize),
    #[error("the f3 formula is stated for dimension 4, got {0}")]
    WrongDimension(usize),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A nonzero image point with two preimages `v_linked`, `v_link` such that
/// `v_base + v_linked = v_link` is a primitive relation; `v_link` is the
/// link of `v_linked`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoublePoint {
    pub point: LatticePoint,
    pub linked: usize,
    pub link: usize,
}

/// The image `P_i` of a smooth Fano polytope under `pi_i`.
#[derive(Clone, Debug)]
pub struct Projection {
    pub base: usize,
    pub quotient: IntMatrix,
    /// Image of each vertex of `P` (the base maps to the origin).
    pub images: Vec<LatticePoint>,
    /// Distinct image points, including the origin.
    pub points: Vec<LatticePoint>,
    pub facets: Vec<AffineFacet>,
    /// Indices into `points` of the vertices of `P_i`.
    pub vertices: Vec<usize>,
    pub double_points: Vec<DoublePoint>,
}

impl Projection {
    pub fn dim(&self) -> usize {
        self.quotient.rows()
    }

    pub fn polytope(&self) -> RationalPolytope {
        RationalPolytope {
            dim: self.dim(),
            vertices: self
                .vertices
                .iter()
                .map(|&k| self.points[k].0.iter().map(exactlin::rat).collect())
                .collect(),
            inequalities: self
                .facets
                .iter()
                .map(|f| crate::polytope::Inequality {
                    normal: f.normal.clone(),
                    level: exactlin::rat(&f.level),
                })
                .collect(),
        }
    }

    pub fn vertex_points(&self) -> Vec<LatticePoint> {
        self.vertices
            .iter()
            .map(|&k| self.points[k].clone())
            .collect()
    }

    pub fn is_double(&self, point: &LatticePoint) -> bool {
        self.double_points.iter().any(|d| &d.point == point)
    }
}

fn find_relation(rels: &[PrimitiveRelation], coll: [usize; 2]) -> Option<&PrimitiveRelation> {
    let mut c = coll.to_vec();
    c.sort_unstable();
    rels.iter().find(|r| r.collection == c)
}

pub fn project(p: &FanoPolytope, i: usize) -> Result<Projection, ProjectError> {
    project_with(p, i, &primitive_relations(p))
}

/// As [`project`], reusing already computed primitive relations.
pub fn project_with(
    p: &FanoPolytope,
    i: usize,
    rels: &[PrimitiveRelation],
) -> Result<Projection, ProjectError> {
    let n = p.n_vertices();
    if i >= n {
        return Err(ProjectError::IndexOutOfRange { index: i, n });
    }
    if p.dim() < 2 {
        return Err(ProjectError::DimensionTooSmall);
    }
    let q = exactlin::quotient_projection(&p.vertex(i).0)?;
    let images: Vec<LatticePoint> = p
        .vertices()
        .iter()
        .map(|v| LatticePoint(q.mul_vec(&v.0).expect("dim")))
        .collect();
    let mut pre: BTreeMap<LatticePoint, Vec<usize>> = BTreeMap::new();
    for (j, img) in images.iter().enumerate() {
        if j != i {
            pre.entry(img.clone()).or_default().push(j);
        }
    }
    let zero = LatticePoint::zero(p.dim() - 1);
    let mut double_points = Vec::new();
    for (pt, js) in &pre {
        if pt.is_zero() {
            continue;
        }
        match js.len() {
            1 => {}
            2 => {
                let (a, b) = (js[0], js[1]);
                let unit = |r: &PrimitiveRelation, t: usize| {
                    r.support == [t] && r.coeffs.iter().all(One::is_one)
                };
                let ra = find_relation(rels, [i, a]).filter(|r| unit(r, b));
                let rb = find_relation(rels, [i, b]).filter(|r| unit(r, a));
                match (ra, rb) {
                    (Some(_), None) => double_points.push(DoublePoint {
                        point: pt.clone(),
                        linked: a,
                        link: b,
                    }),
                    (None, Some(_)) => double_points.push(DoublePoint {
                        point: pt.clone(),
                        linked: b,
                        link: a,
                    }),
                    _ => {
                        return Err(ProjectError::UnresolvedDoublePoint {
                            point: pt.clone(),
                            a,
                            b,
                        })
                    }
                }
            }
            count => {
                return Err(ProjectError::TooManyPreimages {
                    point: pt.clone(),
                    count,
                })
            }
        }
    }
    let mut points: Vec<LatticePoint> = pre.keys().cloned().collect();
    if !points.contains(&zero) {
        points.push(zero);
        points.sort();
    }
    let facets = hull_facets(&points)?;
    let vertices = hull_vertices(&points, &facets);
    Ok(Projection {
        base: i,
        quotient: q,
        images,
        points,
        facets,
        vertices,
        double_points,
    })
}

/// `P_i` is reflexive with the origin as its only interior lattice point.
pub fn check_reflexive_projection(proj: &Projection) -> Result<bool, ProjectError> {
    if proj.facets.iter().any(|f| !f.level.is_positive()) {
        return Ok(false);
    }
    if proj.facets.iter().any(|f| !f.level.is_one()) {
        return Ok(false);
    }
    let interior = interior_lattice_points(&proj.polytope())?;
    Ok(interior.len() == 1 && interior[0].is_zero())
}

/// Outcome of the divisor criterion: when every primitive collection
/// through `v_i` has degree at least 2, the projection is a smooth Fano
/// polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorCheck {
    /// Minimal degree over primitive relations whose collection contains `v_i`.
    pub min_collection_degree: Option<BigInt>,
    pub projected_is_fano: bool,
}

pub fn divisor_fano_check(p: &FanoPolytope, i: usize) -> Result<DivisorCheck, ProjectError> {
    let rels = primitive_relations(p);
    let proj = project_with(p, i, &rels)?;
    let min = rels
        .iter()
        .filter(|r| r.collection.contains(&i))
        .map(PrimitiveRelation::degree)
        .min();
    Ok(DivisorCheck {
        min_collection_degree: min,
        projected_is_fano: validate_fano(&proj.vertex_points()).is_ok(),
    })
}

/// Lattice types of 2-faces of a three-dimensional projection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FaceType {
    /// Unimodular triangle.
    F1,
    /// Triangle with one interior point `p1 + p2 + p3 = 3 p4`.
    F2,
    /// Triangle with a lattice point on one edge, `p1 + p2 = 2 p3`.
    F3,
    /// Unimodular parallelogram, `p1 + p2 = p3 + p4`.
    F4,
}

impl fmt::Display for FaceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

fn minor_gcd(diffs: &[Vec<BigInt>]) -> BigInt {
    let d = diffs[0].len();
    let mut g = BigInt::zero();
    for cols in (0..d).combinations(2) {
        let m = &diffs[0][cols[0]] * &diffs[1][cols[1]] - &diffs[0][cols[1]] * &diffs[1][cols[0]];
        g = num_integer::Integer::gcd(&g, &m);
    }
    g
}

fn sub(a: &LatticePoint, b: &LatticePoint) -> Vec<BigInt> {
    a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect()
}

/// Classifies a lattice polygon (in any ambient dimension) given by all of
/// its lattice points.
pub fn classify_2face(points: &[LatticePoint]) -> Result<FaceType, ProjectError> {
    let two = BigInt::from(2);
    let three = BigInt::from(3);
    let diffs = |pts: &[&LatticePoint]| -> Vec<Vec<BigInt>> {
        pts[1..].iter().map(|p| sub(p, pts[0])).collect()
    };
    match points.len() {
        3 => {
            let pts: Vec<&LatticePoint> = points.iter().collect();
            if minor_gcd(&diffs(&pts)).is_one() {
                return Ok(FaceType::F1);
            }
            Err(ProjectError::UnsupportedFace(3))
        }
        4 => {
            let sum = |xs: &[usize]| -> Vec<BigInt> {
                (0..points[0].dim())
                    .map(|k| xs.iter().map(|&j| &points[j].0[k]).sum())
                    .collect()
            };
            let scaled = |j: usize, c: &BigInt| -> Vec<BigInt> {
                points[j].0.iter().map(|x| x * c).collect()
            };
            for j in 0..4 {
                let rest: Vec<usize> = (0..4).filter(|&k| k != j).collect();
                if sum(&rest) == scaled(j, &three) {
                    return Ok(FaceType::F2);
                }
                for pair in rest.iter().copied().combinations(2) {
                    if sum(&pair) == scaled(j, &two) {
                        return Ok(FaceType::F3);
                    }
                }
            }
            for pair in (0..4).combinations(2) {
                let other: Vec<usize> = (0..4).filter(|k| !pair.contains(k)).collect();
                if sum(&pair) == sum(&other) {
                    return Ok(FaceType::F4);
                }
            }
            Err(ProjectError::UnsupportedFace(4))
        }
        k => Err(ProjectError::UnsupportedFace(k)),
    }
}

/// A 2-face of a three-dimensional projection with its lattice points.
#[derive(Clone, Debug)]
pub struct ProjectedFace {
    pub facet: usize,
    pub lattice_points: Vec<LatticePoint>,
    pub kind: Result<FaceType, ProjectError>,
    pub double_points: usize,
}

/// The facets of `P_i` (2-faces when `d = 4`) with their lattice points.
pub fn two_faces(proj: &Projection) -> Result<Vec<ProjectedFace>, ProjectError> {
    let all = lattice_points(&proj.polytope())?;
    Ok(proj
        .facets
        .iter()
        .enumerate()
        .map(|(k, f)| {
            let pts: Vec<LatticePoint> = all
                .iter()
                .filter(|x| dot(&f.normal, &x.0) == f.level)
                .cloned()
                .collect();
            let dbl = pts.iter().filter(|x| proj.is_double(x)).count();
            ProjectedFace {
                facet: k,
                kind: classify_2face(&pts),
                lattice_points: pts,
                double_points: dbl,
            }
        })
        .collect())
}

/// Edges of `P_i` at the vertex with point index `v`.
pub fn projected_valence(proj: &Projection, v: usize) -> usize {
    let dim = proj.dim();
    let facets_of = |k: usize| -> BTreeSet<usize> {
        proj.facets
            .iter()
            .enumerate()
            .filter(|(_, f)| f.members.contains(&k))
            .map(|(j, _)| j)
            .collect()
    };
    let fv = facets_of(v);
    proj.vertices
        .iter()
        .filter(|&&w| w != v)
        .filter(|&&w| {
            let shared: Vec<Vec<BigInt>> = facets_of(w)
                .intersection(&fv)
                .map(|&j| proj.facets[j].normal.clone())
                .collect();
            rank_of_rows(&shared) + 1 == dim
        })
        .count()
}

/// Terms of `f_3 = 4 alpha + beta - 8 + sum gamma(v)` for an antipodal pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F3Check {
    pub f3: usize,
    pub alpha: usize,
    pub beta: usize,
    pub gammas: Vec<usize>,
}

impl F3Check {
    pub fn predicted(&self) -> i64 {
        4 * self.alpha as i64 + self.beta as i64 - 8 + self.gammas.iter().sum::<usize>() as i64
    }

    pub fn holds(&self) -> bool {
        self.predicted() == self.f3 as i64
    }
}

pub fn f3_formula_check(p: &FanoPolytope, i: usize, j: usize) -> Result<F3Check, ProjectError> {
    let n = p.n_vertices();
    for k in [i, j] {
        if k >= n {
            return Err(ProjectError::IndexOutOfRange { index: k, n });
        }
    }
    if p.dim() != 4 {
        return Err(ProjectError::WrongDimension(p.dim()));
    }
    if !p.vertex(i).add(p.vertex(j)).is_zero() {
        return Err(ProjectError::NotAntipodal(i, j));
    }
    let proj = project(p, i)?;
    let faces = two_faces(&proj)?;
    let beta = faces
        .iter()
        .filter(|f| matches!(f.kind, Ok(FaceType::F4)))
        .count();
    let gammas = proj
        .vertices
        .iter()
        .filter(|&&k| proj.is_double(&proj.points[k]))
        .map(|&k| projected_valence(&proj, k))
        .collect();
    Ok(F3Check {
        f3: p.facets().len(),
        alpha: valence(p, i),
        beta,
        gammas,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::tests::{b1, cube4, p1p3, p4, pts};

    #[test]
    fn p4_projection_is_p3() {
        let p = p4();
        let proj = project(&p, 0).unwrap();
        assert_eq!(proj.vertices.len(), 4);
        assert!(proj.double_points.is_empty());
        assert!(check_reflexive_projection(&proj).unwrap());
        assert!(validate_fano(&proj.vertex_points()).is_ok());
        assert_eq!(proj.images[0], LatticePoint::zero(3));
    }

    #[test]
    fn p1p3_projection_along_p1() {
        // v5 = e4, v6 = -e4: projecting along e4 collapses onto P3 with 0 from v6
        let p = p1p3();
        let proj = project(&p, 4).unwrap();
        assert_eq!(proj.images[5], LatticePoint::zero(3));
        assert_eq!(proj.vertices.len(), 4);
        let proj = project(&p, 0).unwrap();
        assert!(check_reflexive_projection(&proj).unwrap());
    }

    #[test]
    fn double_points_in_s1() {
        let p = validate_fano(&pts(&[&[1, 0], &[0, 1], &[-1, -1], &[1, 1]])).unwrap();
        let proj = project(&p, 0).unwrap();
        // e2 and e1 + e2 share an image; e1 + e2 = e2 + e1 makes e1 + e2 the link
        assert_eq!(proj.double_points.len(), 1);
        let dp = &proj.double_points[0];
        assert_eq!((dp.linked, dp.link), (1, 3));
        assert!(check_reflexive_projection(&proj).unwrap());
    }

    #[test]
    fn antipodal_image_is_not_double() {
        let p = validate_fano(&pts(&[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]])).unwrap();
        let proj = project(&p, 0).unwrap();
        assert!(proj.images[2].is_zero());
        assert!(proj.double_points.is_empty());
    }

    #[test]
    fn face_types() {
        assert_eq!(
            classify_2face(&pts(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1]])).unwrap(),
            FaceType::F1
        );
        assert_eq!(
            classify_2face(&pts(&[&[1, 0], &[0, 1], &[-1, -1], &[0, 0]])).unwrap(),
            FaceType::F2
        );
        assert_eq!(
            classify_2face(&pts(&[&[0, 0], &[2, 0], &[1, 0], &[0, 1]])).unwrap(),
            FaceType::F3
        );
        assert_eq!(
            classify_2face(&pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])).unwrap(),
            FaceType::F4
        );
        assert!(classify_2face(&pts(&[&[0, 0], &[2, 0], &[0, 1]])).is_err());
    }

    #[test]
    fn f3_formula_on_cube() {
        let p = cube4();
        let c = f3_formula_check(&p, 0, 1).unwrap();
        assert_eq!((c.alpha, c.beta, c.gammas.iter().sum::<usize>()), (6, 0, 0));
        assert_eq!(c.f3, 16);
        assert!(c.holds());
        assert!(matches!(
            f3_formula_check(&p, 0, 2),
            Err(ProjectError::NotAntipodal(0, 2))
        ));
    }

    #[test]
    fn divisor_check_on_b1() {
        let p = b1();
        for i in 0..p.n_vertices() {
            let c = divisor_fano_check(&p, i).unwrap();
            if c.min_collection_degree
                .as_ref()
                .is_some_and(|m| m >= &BigInt::from(2))
            {
                assert!(c.projected_is_fano, "vertex {i}");
            }
        }
    }

    #[test]
    fn errors() {
        let p = p4();
        assert!(matches!(
            project(&p, 7),
            Err(ProjectError::IndexOutOfRange { .. })
        ));
        let seg = validate_fano(&pts(&[&[1], &[-1]])).unwrap();
        assert!(matches!(
            project(&seg, 0),
            Err(ProjectError::DimensionTooSmall)
        ));
    }
}
