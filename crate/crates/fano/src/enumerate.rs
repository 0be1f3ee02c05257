//! Exhaustive classification in dimensions one to three, free sums, and
//! reconstruction of a polytope from its primitive relations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactlin::{self, gcd_all, rat};
use crate::isom::{canonical_form, for_each_frame, CanonicalForm};
use crate::polytope::{
    hull_facets, hull_vertices, lattice_points, validate_fano, FanoPolytope, Inequality,
    LatticePoint, PolytopeError, RationalPolytope,
};
use crate::relations::{primitive_relations, Fan, RelationError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumerateError {
    #[error("invalid presentation JSON: {0}")]
    Parse(String),
    #[error("malformed presentation: {0}")]
    Malformed(String),
    #[error("inconsistent presentation: no {0}-element subset avoids every collection")]
    NoFace(usize),
    #[error("inconsistent presentation: the relations do not determine the vertices")]
    Underdetermined,
    #[error("inconsistent presentation: the relations have no common solution")]
    NoSolution,
    #[error("inconsistent presentation: vertex v{vertex} gets non-integral coordinates")]
    NonIntegral { vertex: usize },
    #[error("inconsistent presentation: solved vertices are not a smooth Fano polytope: {0}")]
    NotFano(PolytopeError),
    #[error("relation mismatch: {0}")]
    Mismatch(String),
    #[error("fan construction failed: {0}")]
    Fan(RelationError),
    #[error("exhaustive enumeration is only supported for dimensions 1 to 3, got {0}")]
    UnsupportedDimension(usize),
    #[error("box bound must be at least 1")]
    BadBox,
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

/// One relation of a presentation: `sum_{members} v = sum target[j] v_j`.
/// Indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentedRelation {
    pub members: Vec<usize>,
    #[serde(default)]
    pub target: BTreeMap<String, i64>,
}

/// A polytope given by its primitive relations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Presentation {
    pub dim: usize,
    pub n: usize,
    pub collections: Vec<PresentedRelation>,
}

/// 0-based form of a relation after validation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Rel {
    members: Vec<usize>,
    target: BTreeMap<usize, BigInt>,
}

fn show(members: &[usize], target: &BTreeMap<usize, BigInt>) -> String {
    let lhs = members.iter().map(|i| format!("v{}", i + 1)).join(" + ");
    let rhs = if target.is_empty() {
        "0".to_string()
    } else {
        target
            .iter()
            .map(|(j, c)| {
                if *c == BigInt::from(1) {
                    format!("v{}", j + 1)
                } else {
                    format!("{c}v{}", j + 1)
                }
            })
            .join(" + ")
    };
    format!("{lhs} = {rhs}")
}

impl Presentation {
    pub fn from_json(text: &str) -> Result<Presentation, EnumerateError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let p: Presentation = serde_path_to_error::deserialize(de)
            .map_err(|e| EnumerateError::Parse(e.to_string()))?;
        p.relations()?;
        Ok(p)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain data")
    }

    /// Presentation read off a polytope's own primitive relations.
    pub fn of_polytope(p: &FanoPolytope) -> Presentation {
        Presentation {
            dim: p.dim(),
            n: p.n_vertices(),
            collections: primitive_relations(p)
                .into_iter()
                .map(|r| PresentedRelation {
                    members: r.collection.iter().map(|i| i + 1).collect(),
                    target: r
                        .support
                        .iter()
                        .zip(&r.coeffs)
                        .map(|(j, c)| {
                            (
                                (j + 1).to_string(),
                                i64::try_from(c).expect("small coefficient"),
                            )
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    fn relations(&self) -> Result<Vec<Rel>, EnumerateError> {
        let bad = |m: String| Err(EnumerateError::Malformed(m));
        if self.dim == 0 {
            return bad("dim must be at least 1".into());
        }
        if self.n < self.dim + 1 {
            return bad(format!(
                "n = {} is below dim + 1 = {}",
                self.n,
                self.dim + 1
            ));
        }
        if self.n > 64 {
            return bad(format!(
                "n = {} exceeds the supported maximum of 64",
                self.n
            ));
        }
        let mut out: Vec<Rel> = Vec::new();
        for (k, r) in self.collections.iter().enumerate() {
            let mut members = Vec::new();
            for &i in &r.members {
                if i == 0 || i > self.n {
                    return bad(format!(
                        "relation {}: member index {i} outside 1..={}",
                        k + 1,
                        self.n
                    ));
                }
                members.push(i - 1);
            }
            members.sort_unstable();
            if members.windows(2).any(|w| w[0] == w[1]) {
                return bad(format!("relation {}: repeated member", k + 1));
            }
            if members.len() < 2 {
                return bad(format!(
                    "relation {}: a collection needs at least two members",
                    k + 1
                ));
            }
            let mut target = BTreeMap::new();
            for (key, &c) in &r.target {
                let j: usize = match key.trim().parse() {
                    Ok(j) if j >= 1 && j <= self.n => j,
                    _ => {
                        return bad(format!(
                            "relation {}: target index {key:?} outside 1..={}",
                            k + 1,
                            self.n
                        ))
                    }
                };
                if c <= 0 {
                    return bad(format!(
                        "relation {}: coefficient of v{j} must be positive",
                        k + 1
                    ));
                }
                if members.contains(&(j - 1)) {
                    return bad(format!(
                        "relation {}: v{j} is both a member and in the target",
                        k + 1
                    ));
                }
                if target.insert(j - 1, BigInt::from(c)).is_some() {
                    return bad(format!(
                        "relation {}: v{j} listed twice in the target",
                        k + 1
                    ));
                }
            }
            out.push(Rel { members, target });
        }
        for (a, b) in out.iter().tuple_combinations() {
            let (small, big) = if a.members.len() <= b.members.len() {
                (a, b)
            } else {
                (b, a)
            };
            if small.members.iter().all(|x| big.members.contains(x)) {
                return bad(format!(
                    "collection {{{}}} contains collection {{{}}}",
                    big.members.iter().map(|i| i + 1).join(","),
                    small.members.iter().map(|i| i + 1).join(",")
                ));
            }
        }
        Ok(out)
    }
}

/// Steps one to three of reconstruction: pick the first `d`-subset face as
/// the standard basis and solve the relations for the other vertices.
pub fn solve_presentation(pres: &Presentation) -> Result<Vec<LatticePoint>, EnumerateError> {
    let rels = pres.relations()?;
    let (d, n) = (pres.dim, pres.n);
    let basis = (0..n)
        .combinations(d)
        .find(|s| !rels.iter().any(|r| r.members.iter().all(|m| s.contains(m))))
        .ok_or(EnumerateError::NoFace(d))?;
    let unknown: Vec<usize> = (0..n).filter(|j| !basis.contains(j)).collect();
    // row per relation: coefficients over unknowns | -sum over basis columns
    let rows: Vec<Vec<BigRational>> = rels
        .iter()
        .map(|r| {
            let mut coeff = vec![BigInt::zero(); n];
            for &m in &r.members {
                coeff[m] += 1;
            }
            for (&j, c) in &r.target {
                coeff[j] -= c;
            }
            let mut row: Vec<BigRational> = unknown.iter().map(|&j| rat(&coeff[j])).collect();
            row.extend((0..d).map(|k| rat(&-coeff[basis[k]].clone())));
            row
        })
        .collect();
    let m = unknown.len();
    let (red, pivots) = exactlin::rref(rows);
    if pivots.iter().any(|&c| c >= m) {
        return Err(EnumerateError::NoSolution);
    }
    if pivots.len() < m {
        return Err(EnumerateError::Underdetermined);
    }
    let mut points = vec![LatticePoint::zero(d); n];
    for (k, &b) in basis.iter().enumerate() {
        points[b].0[k] = BigInt::from(1);
    }
    for (r, &c) in pivots.iter().enumerate() {
        let j = unknown[c];
        let mut coords = Vec::with_capacity(d);
        for k in 0..d {
            let x = &red[r][m + k];
            if !x.is_integer() {
                return Err(EnumerateError::NonIntegral { vertex: j + 1 });
            }
            coords.push(x.to_integer());
        }
        points[j] = LatticePoint(coords);
    }
    Ok(points)
}

/// Rebuilds the polytope described by `pres`; vertex `k` of the result is
/// `v_{k+1}` of the presentation.
pub fn reconstruct(pres: &Presentation) -> Result<FanoPolytope, EnumerateError> {
    let points = solve_presentation(pres)?;
    let p = validate_fano(&points).map_err(EnumerateError::NotFano)?;
    let listed: BTreeSet<Rel> = pres.relations()?.into_iter().collect();
    let found: BTreeSet<Rel> = primitive_relations(&p)
        .into_iter()
        .map(|r| Rel {
            members: r.collection.clone(),
            target: r.target(),
        })
        .collect();
    for r in &found {
        if !listed.contains(r) {
            let msg = match listed.iter().find(|l| l.members == r.members) {
                Some(l) => format!(
                    "listed {} but the polytope has {}",
                    show(&l.members, &l.target),
                    show(&r.members, &r.target)
                ),
                None => format!(
                    "unlisted primitive relation {}",
                    show(&r.members, &r.target)
                ),
            };
            return Err(EnumerateError::Mismatch(msg));
        }
    }
    if let Some(l) = listed.iter().find(|l| !found.contains(l)) {
        return Err(EnumerateError::Mismatch(format!(
            "{{{}}} is not a primitive collection of the polytope (listed {})",
            l.members.iter().map(|i| i + 1).join(","),
            show(&l.members, &l.target)
        )));
    }
    Ok(p)
}

/// Complete fan of a presentation whose relations need not have positive
/// degree: maximal cones are the `d`-subsets containing no collection.
pub fn presentation_fan(pres: &Presentation) -> Result<Fan, EnumerateError> {
    let rays = solve_presentation(pres)?;
    let rels = pres.relations()?;
    let cones: Vec<Vec<usize>> = (0..pres.n)
        .combinations(pres.dim)
        .filter(|s| !rels.iter().any(|r| r.members.iter().all(|m| s.contains(m))))
        .collect();
    Fan::new(pres.dim, rays, cones).map_err(EnumerateError::Fan)
}

/// Free sum: `{(v, 0)} u {(0, w)}`; the fan is the product fan.
pub fn direct_sum(p1: &FanoPolytope, p2: &FanoPolytope) -> Result<FanoPolytope, PolytopeError> {
    let (d1, d2) = (p1.dim(), p2.dim());
    let mut v = Vec::with_capacity(p1.n_vertices() + p2.n_vertices());
    for x in p1.vertices() {
        let mut c = x.0.clone();
        c.extend(std::iter::repeat_n(BigInt::zero(), d2));
        v.push(LatticePoint(c));
    }
    for y in p2.vertices() {
        let mut c = vec![BigInt::zero(); d1];
        c.extend(y.0.iter().cloned());
        v.push(LatticePoint(c));
    }
    validate_fano(&v)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumConfig {
    pub dim: usize,
    pub box_bound: i64,
    pub max_vertices: usize,
}

impl EnumConfig {
    /// Default box: 2 for `d <= 2`, 3 for `d = 3`.
    pub fn new(dim: usize) -> EnumConfig {
        let box_bound = if dim <= 2 { 2 } else { 3 };
        EnumConfig {
            dim,
            box_bound,
            max_vertices: 2 * ((1usize << dim.min(62)) - 1),
        }
    }

    pub fn with_box(mut self, b: i64) -> EnumConfig {
        self.box_bound = b;
        self
    }
}

#[derive(Clone, Debug)]
pub struct EnumeratedClass {
    pub form: CanonicalForm,
    pub polytope: FanoPolytope,
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    /// Sorted by canonical form.
    pub classes: Vec<EnumeratedClass>,
    /// Search nodes visited.
    pub nodes: u64,
}

impl Enumeration {
    pub fn histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for c in &self.classes {
            *h.entry(c.polytope.n_vertices()).or_default() += 1;
        }
        h
    }
}

impl fmt::Display for Enumeration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} classes ({} search nodes)",
            self.classes.len(),
            self.nodes
        )
    }
}

struct Search {
    d: usize,
    basis: Vec<LatticePoint>,
    cands: Vec<LatticePoint>,
    // sum of coordinates; at most 0 for every candidate
    level: Vec<i64>,
    compatible: Vec<Vec<bool>>,
    max_extra: usize,
}

/// Convex position with no stray lattice points: every point is a vertex of
/// the hull and the hull's lattice points are the points themselves and
/// possibly the origin.
fn clean(points: &[LatticePoint]) -> bool {
    let Ok(facets) = hull_facets(points) else {
        return false;
    };
    if hull_vertices(points, &facets).len() != points.len() {
        return false;
    }
    let q = RationalPolytope {
        dim: points[0].dim(),
        vertices: points
            .iter()
            .map(|p| p.0.iter().map(rat).collect())
            .collect(),
        inequalities: facets
            .iter()
            .map(|f| Inequality {
                normal: f.normal.clone(),
                level: rat(&f.level),
            })
            .collect(),
    };
    let Ok(inside) = lattice_points(&q) else {
        return false;
    };
    inside.iter().all(|x| x.is_zero() || points.contains(x))
}

fn origin_interior(points: &[LatticePoint]) -> bool {
    hull_facets(points).is_ok_and(|fs| fs.iter().all(|f| f.level.is_positive()))
}

/// Every pair of vertices either spans an edge, or sums to zero or to a vertex.
pub fn pair_law_holds(p: &FanoPolytope) -> bool {
    let edges: BTreeSet<(usize, usize)> = p.edges().into_iter().collect();
    (0..p.n_vertices()).tuple_combinations().all(|(i, j)| {
        if edges.contains(&(i, j)) {
            return true;
        }
        let s = p.vertex(i).add(p.vertex(j));
        s.is_zero() || p.index_of(&s).is_some()
    })
}

impl Search {
    fn new(cfg: &EnumConfig) -> Search {
        let d = cfg.dim;
        let b = cfg.box_bound;
        let basis: Vec<LatticePoint> = (0..d)
            .map(|k| LatticePoint((0..d).map(|j| BigInt::from(i64::from(j == k))).collect()))
            .collect();
        let mut cands = Vec::new();
        for xs in (0..d).map(|_| -b..=b).multi_cartesian_product() {
            let s: i64 = xs.iter().sum();
            let p = LatticePoint::from_i64(&xs);
            if s <= 0 && gcd_all(&p.0) == BigInt::from(1) {
                cands.push(p);
            }
        }
        cands.sort();
        let with = |extra: &[&LatticePoint]| {
            let mut pts = basis.clone();
            pts.extend(extra.iter().map(|p| (*p).clone()));
            clean(&pts)
        };
        let single: Vec<bool> = cands.iter().map(|c| with(&[c])).collect();
        let n = cands.len();
        let mut compatible = vec![vec![false; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                if single[i] && single[j] && with(&[&cands[i], &cands[j]]) {
                    compatible[i][j] = true;
                    compatible[j][i] = true;
                }
            }
            compatible[i][i] = single[i];
        }
        let level = cands
            .iter()
            .map(|c| c.0.iter().map(|x| i64::try_from(x).expect("box")).sum())
            .collect();
        Search {
            d,
            basis,
            cands,
            level,
            compatible,
            max_extra: cfg.max_vertices.saturating_sub(d),
        }
    }

    /// Explores every extension of `chosen` by candidates after `chosen.last()`.
    fn descend(
        &self,
        chosen: &mut Vec<usize>,
        budget: i64,
        nodes: &mut u64,
        out: &mut BTreeMap<CanonicalForm, FanoPolytope>,
    ) {
        *nodes += 1;
        let mut pts = self.basis.clone();
        pts.extend(chosen.iter().map(|&i| self.cands[i].clone()));
        if chosen.len() > 2 && !clean(&pts) {
            return;
        }
        if origin_interior(&pts) {
            if let Ok(p) = validate_fano(&pts) {
                if pair_law_holds(&p) {
                    out.entry(canonical_form(&p)).or_insert(p);
                }
            }
        }
        if chosen.len() >= self.max_extra {
            return;
        }
        let start = chosen.last().map_or(0, |&i| i + 1);
        for next in start..self.cands.len() {
            let lv = self.level[next];
            if budget + lv < 0
                || !chosen.iter().all(|&c| self.compatible[c][next])
                || !self.compatible[next][next]
            {
                continue;
            }
            chosen.push(next);
            self.descend(chosen, budget + lv, nodes, out);
            chosen.pop();
        }
    }
}

/// All smooth Fano polytopes of dimension `cfg.dim` (1 to 3) up to
/// isomorphism, searching vertices in the box `[-B, B]^d` in the frame of
/// a special facet. `jobs` worker threads share the search by first
/// candidate.
pub fn enumerate_fano(cfg: &EnumConfig, jobs: usize) -> Result<Enumeration, EnumerateError> {
    if !(1..=3).contains(&cfg.dim) {
        return Err(EnumerateError::UnsupportedDimension(cfg.dim));
    }
    if cfg.box_bound < 1 {
        return Err(EnumerateError::BadBox);
    }
    let s = Search::new(cfg);
    let d = i64::try_from(s.d).expect("small dimension");
    let run = |first: usize| {
        let mut out = BTreeMap::new();
        let mut nodes = 0u64;
        if s.compatible[first][first] && d + s.level[first] >= 0 && s.max_extra >= 1 {
            s.descend(&mut vec![first], d + s.level[first], &mut nodes, &mut out);
        }
        (out, nodes)
    };
    let parts: Vec<(BTreeMap<CanonicalForm, FanoPolytope>, u64)> = if jobs <= 1 {
        (0..s.cands.len()).map(run).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| EnumerateError::Pool(e.to_string()))?;
        pool.install(|| (0..s.cands.len()).into_par_iter().map(run).collect())
    };
    let mut all: BTreeMap<CanonicalForm, FanoPolytope> = BTreeMap::new();
    let mut nodes = 0;
    for (part, k) in parts {
        nodes += k;
        for (form, p) in part {
            all.entry(form).or_insert(p);
        }
    }
    Ok(Enumeration {
        classes: all
            .into_iter()
            .map(|(form, polytope)| EnumeratedClass { form, polytope })
            .collect(),
        nodes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryAudit {
    pub box_bound: i64,
    /// Largest absolute coordinate over all vertices in all facet frames.
    pub max_abs_coordinate: BigInt,
    /// Indices of classes reaching the box boundary.
    pub offending: Vec<usize>,
}

impl BoundaryAudit {
    pub fn passes(&self) -> bool {
        self.offending.is_empty()
    }
}

/// Checks that no class has a vertex on or beyond the box boundary in any
/// facet frame, so the box could not have cut off a class.
pub fn boundary_audit(classes: &[EnumeratedClass], box_bound: i64) -> BoundaryAudit {
    let b = BigInt::from(box_bound);
    let mut max = BigInt::zero();
    let mut offending = Vec::new();
    for (k, c) in classes.iter().enumerate() {
        let mut local = BigInt::zero();
        for_each_frame(&c.polytope, |_, _, framed| {
            for x in framed.iter().flatten() {
                if x.abs() > local {
                    local = x.abs();
                }
            }
        });
        if local >= b {
            offending.push(k);
        }
        if local > max {
            max = local;
        }
    }
    BoundaryAudit {
        box_bound,
        max_abs_coordinate: max,
        offending,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isom::are_isomorphic;
    use crate::polytope::tests::{b1, p1p3, pts};
    use crate::relations::{ampleness, Ampleness};

    fn pres(dim: usize, n: usize, rels: &[(&[usize], &[(usize, i64)])]) -> Presentation {
        Presentation {
            dim,
            n,
            collections: rels
                .iter()
                .map(|(m, t)| PresentedRelation {
                    members: m.to_vec(),
                    target: t.iter().map(|(j, c)| (j.to_string(), *c)).collect(),
                })
                .collect(),
        }
    }

    #[test]
    fn b1_and_b4_round_trip() {
        let p = reconstruct(&pres(4, 6, &[(&[1, 2, 3, 4], &[(5, 3)]), (&[5, 6], &[])])).unwrap();
        assert!(are_isomorphic(&p, &b1()).is_some());
        let q = reconstruct(&pres(4, 6, &[(&[1, 2, 3, 4], &[]), (&[5, 6], &[])])).unwrap();
        assert!(are_isomorphic(&q, &p1p3()).is_some());
        let own = Presentation::of_polytope(&b1());
        assert!(are_isomorphic(&reconstruct(&own).unwrap(), &b1()).is_some());
    }

    #[test]
    fn malformed_presentations() {
        let e = reconstruct(&pres(2, 3, &[(&[1, 2], &[]), (&[1, 2, 3], &[])])).unwrap_err();
        assert!(matches!(e, EnumerateError::Malformed(_)), "{e}");
        let e = reconstruct(&pres(2, 4, &[(&[1, 3], &[])])).unwrap_err();
        assert!(matches!(e, EnumerateError::Underdetermined), "{e}");
        let e = reconstruct(&pres(2, 4, &[(&[1, 3], &[]), (&[2, 4], &[(1, 2)])])).unwrap_err();
        assert!(matches!(e, EnumerateError::NotFano(_)), "{e}");
        // dropping a relation of the pentagon leaves the vertices determined
        let pentagon =
            validate_fano(&pts(&[&[1, 0], &[0, 1], &[-1, 0], &[-1, -1], &[0, -1]])).unwrap();
        let full = Presentation::of_polytope(&pentagon);
        let mut mismatches = 0;
        for k in 0..full.collections.len() {
            let mut part = full.clone();
            part.collections.remove(k);
            match reconstruct(&part) {
                Err(EnumerateError::Mismatch(m)) => {
                    assert!(m.contains("unlisted"), "{m}");
                    mismatches += 1;
                }
                Err(EnumerateError::Underdetermined) => {}
                other => panic!("{other:?}"),
            }
        }
        assert!(mismatches > 0);
        assert!(
            Presentation::from_json(r#"{"dim":2,"n":3,"collections":[{"members":[1,9]}]}"#)
                .is_err()
        );
        assert!(Presentation::from_json(r#"{"dim":2,"n":3,"collections":[],"extra":1}"#).is_err());
        assert!(
            Presentation::from_json(r#"{"dim":2,"n":3,"collections":[{"members":[1,2,3]}]}"#)
                .is_ok()
        );
    }

    #[test]
    fn nef_fan_from_relations() {
        // second Hirzebruch surface: v1 + v3 = 2v2 has degree 0
        let p = pres(2, 4, &[(&[1, 3], &[(2, 2)]), (&[2, 4], &[])]);
        let fan = presentation_fan(&p).unwrap();
        assert_eq!(ampleness(&fan), Ampleness::NefOnly);
        assert!(reconstruct(&p).is_err());
    }

    #[test]
    fn direct_sums() {
        let seg = validate_fano(&pts(&[&[1], &[-1]])).unwrap();
        let sq = direct_sum(&seg, &seg).unwrap();
        let expect = validate_fano(&pts(&[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]])).unwrap();
        assert!(are_isomorphic(&sq, &expect).is_some());
    }

    #[test]
    fn small_dimensions() {
        let e1 = enumerate_fano(&EnumConfig::new(1), 1).unwrap();
        assert_eq!(e1.classes.len(), 1);
        let e2 = enumerate_fano(&EnumConfig::new(2), 1).unwrap();
        assert_eq!(e2.classes.len(), 5);
        assert_eq!(
            e2.histogram(),
            BTreeMap::from([(3, 1), (4, 2), (5, 1), (6, 1)])
        );
        let audit = boundary_audit(&e2.classes, 2);
        assert!(audit.passes(), "{audit:?}");
        assert!(matches!(
            enumerate_fano(&EnumConfig::new(4), 1),
            Err(EnumerateError::UnsupportedDimension(4))
        ));
    }
}
