//! Lattice isomorphism, canonical forms and combinatorial equivalence.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};

use itertools::Itertools;
use num_bigint::BigInt;
use sha2::{Digest, Sha256};

use crate::exactlin::IntMatrix;
use crate::polytope::{FanoPolytope, LatticePoint};
use crate::relations::primitive_relations;

/// Vertex coordinates in every facet frame: for facet `f` and a permutation
/// `sigma` of its basis, each vertex is written in the basis
/// `(b_sigma(0), ..., b_sigma(d-1))`. Calls `visit` once per frame.
pub fn for_each_frame(p: &FanoPolytope, mut visit: impl FnMut(usize, &[usize], Vec<Vec<BigInt>>)) {
    let d = p.dim();
    for f in 0..p.facets().len() {
        let w: Vec<Vec<BigInt>> = p
            .vertices()
            .iter()
            .map(|v| p.facet_coordinates(f, &v.0))
            .collect();
        for sigma in (0..d).permutations(d) {
            let framed = w
                .iter()
                .map(|x| sigma.iter().map(|&k| x[k].clone()).collect())
                .collect();
            visit(f, &sigma, framed);
        }
    }
}

/// Canonical representative of the isomorphism class: the lexicographically
/// smallest sorted vertex list over all facet frames. Vertices are compared
/// coordinate by coordinate; lists are compared vertex by vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalForm {
    dim: usize,
    vertices: Vec<LatticePoint>,
}

impl PartialOrd for CanonicalForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CanonicalForm {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.dim, self.vertices.len(), &self.vertices).cmp(&(
            other.dim,
            other.vertices.len(),
            &other.vertices,
        ))
    }
}

impl CanonicalForm {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sorted vertex list; read as columns it is the canonical `d x n` matrix.
    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn matrix(&self) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = self.vertices.iter().map(|v| v.0.clone()).collect();
        IntMatrix::from_columns(self.dim, &cols).expect("consistent dimensions")
    }

    /// Text form hashed by [`CanonicalForm::digest`]: `d;v1;v2;...` with
    /// comma-separated coordinates.
    pub fn encode(&self) -> String {
        let mut s = self.dim.to_string();
        for v in &self.vertices {
            s.push(';');
            s.push_str(&v.0.iter().join(","));
        }
        s
    }

    /// Lowercase hex SHA-256 of [`CanonicalForm::encode`].
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.encode().as_bytes()))
    }
}

pub fn canonical_form(p: &FanoPolytope) -> CanonicalForm {
    let mut best: Option<Vec<Vec<BigInt>>> = None;
    for_each_frame(p, |_, _, mut framed| {
        framed.sort();
        if best.as_ref().is_none_or(|b| framed < *b) {
            best = Some(framed);
        }
    });
    CanonicalForm {
        dim: p.dim(),
        vertices: best
            .expect("at least one facet")
            .into_iter()
            .map(LatticePoint)
            .collect(),
    }
}

/// A unimodular `A` with `A * vertices(p1) = vertices(p2)` as sets, if any.
pub fn are_isomorphic(p1: &FanoPolytope, p2: &FanoPolytope) -> Option<IntMatrix> {
    if p1.dim() != p2.dim()
        || p1.n_vertices() != p2.n_vertices()
        || p1.facets().len() != p2.facets().len()
    {
        return None;
    }
    let d = p1.dim();
    let target: HashSet<&LatticePoint> = p2.vertices().iter().collect();
    // A = B2 * B1^{-1}, with B1 the basis of p1's first facet and B2 any ordered facet basis of p2
    let inv1 = p1.facet_inverse(0);
    let w1: Vec<Vec<BigInt>> = p1
        .vertices()
        .iter()
        .map(|v| inv1.mul_vec(&v.0).expect("dim"))
        .collect();
    for f2 in p2.facets() {
        for sigma in (0..d).permutations(d) {
            let cols: Vec<Vec<BigInt>> = sigma
                .iter()
                .map(|&k| p2.vertex(f2.vertices[k]).0.clone())
                .collect();
            let b2 = IntMatrix::from_columns(d, &cols).expect("dim");
            let ok = w1.iter().all(|w| {
                let img = LatticePoint(b2.mul_vec(w).expect("dim"));
                target.contains(&img)
            });
            if ok {
                return Some(b2.mul(inv1).expect("square"));
            }
        }
    }
    None
}

/// The vertex bijection induced by a lattice map `a` taking `p1` to `p2`.
pub fn induced_bijection(
    p1: &FanoPolytope,
    p2: &FanoPolytope,
    a: &IntMatrix,
) -> Option<Vec<usize>> {
    p1.vertices()
        .iter()
        .map(|v| p2.index_of(&LatticePoint(a.mul_vec(&v.0).ok()?)))
        .collect()
}

/// Bijection `sigma` of vertex indices taking the facets of `p1` onto those
/// of `p2`, if one exists.
pub fn combinatorially_equivalent(p1: &FanoPolytope, p2: &FanoPolytope) -> Option<Vec<usize>> {
    let n = p1.n_vertices();
    if p1.dim() != p2.dim() || n != p2.n_vertices() || p1.facets().len() != p2.facets().len() {
        return None;
    }
    let facets1: Vec<Vec<usize>> = p1.facets().iter().map(|f| f.vertices.clone()).collect();
    let facets2: HashSet<Vec<usize>> = p2.facets().iter().map(|f| f.vertices.clone()).collect();
    let degree = |fs: &mut dyn Iterator<Item = &Vec<usize>>, n: usize| {
        let mut deg = vec![0usize; n];
        for f in fs {
            for &v in f {
                deg[v] += 1;
            }
        }
        deg
    };
    let deg1 = degree(&mut facets1.iter(), n);
    let deg2 = degree(&mut facets2.iter(), n);
    let mut sigma = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn extend(
        i: usize,
        sigma: &mut Vec<usize>,
        used: &mut Vec<bool>,
        deg1: &[usize],
        deg2: &[usize],
        facets1: &[Vec<usize>],
        facets2: &HashSet<Vec<usize>>,
    ) -> bool {
        let n = sigma.len();
        if i == n {
            return facets1.iter().all(|f| {
                let mut g: Vec<usize> = f.iter().map(|&v| sigma[v]).collect();
                g.sort_unstable();
                facets2.contains(&g)
            });
        }
        for j in 0..n {
            if used[j] || deg1[i] != deg2[j] {
                continue;
            }
            sigma[i] = j;
            // partial check: every facet of p1 fully assigned must map to a facet of p2
            let consistent = facets1
                .iter()
                .filter(|f| f.iter().all(|&v| v <= i))
                .all(|f| {
                    let mut g: Vec<usize> = f.iter().map(|&v| sigma[v]).collect();
                    g.sort_unstable();
                    facets2.contains(&g)
                });
            if consistent {
                used[j] = true;
                if extend(i + 1, sigma, used, deg1, deg2, facets1, facets2) {
                    return true;
                }
                used[j] = false;
            }
        }
        sigma[i] = usize::MAX;
        false
    }

    extend(0, &mut sigma, &mut used, &deg1, &deg2, &facets1, &facets2).then_some(sigma)
}

/// True when `sigma` maps the primitive relations of `p1` exactly onto
/// those of `p2`.
pub fn relations_correspond(p1: &FanoPolytope, p2: &FanoPolytope, sigma: &[usize]) -> bool {
    type Key = (Vec<usize>, BTreeMap<usize, BigInt>);
    let key = |coll: Vec<usize>, target: BTreeMap<usize, BigInt>| -> Key { (coll, target) };
    let mapped: HashSet<Key> = primitive_relations(p1)
        .into_iter()
        .map(|r| {
            let mut c: Vec<usize> = r.collection.iter().map(|&i| sigma[i]).collect();
            c.sort_unstable();
            key(
                c,
                r.support.iter().map(|&j| sigma[j]).zip(r.coeffs).collect(),
            )
        })
        .collect();
    let own: HashSet<Key> = primitive_relations(p2)
        .into_iter()
        .map(|r| key(r.collection.clone(), r.target()))
        .collect();
    mapped == own
}

/// Groups polytopes by canonical form; returns index groups in input order.
pub fn group_by_class(polytopes: &[FanoPolytope]) -> Vec<Vec<usize>> {
    let mut groups: HashMap<CanonicalForm, Vec<usize>> = HashMap::new();
    let mut order = Vec::new();
    for (i, p) in polytopes.iter().enumerate() {
        let c = canonical_form(p);
        let e = groups.entry(c.clone()).or_default();
        if e.is_empty() {
            order.push(c);
        }
        e.push(i);
    }
    order
        .into_iter()
        .map(|c| groups.remove(&c).expect("present"))
        .collect()
}
