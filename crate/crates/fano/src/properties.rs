//! Structural properties every smooth Fano polytope must satisfy, evaluated
//! exhaustively on one polytope at a time and tallied across a collection.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Value};

use crate::exactlin::nonnegative_combination;
use crate::invariants::{bounds_check, h_vector, weight_equality_case};
use crate::polytope::{f_vector, FanoPolytope};
use crate::project::{
    check_reflexive_projection, f3_formula_check, project_with, two_faces, FaceType,
};
use crate::relations::{
    antipodal_pairs, extremal_rays, is_face, primitive_relations, relation_lattice, total_weight,
    total_weight_formula, valence, walls, PrimitiveRelation,
};

/// Results of one property on one polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyOutcome {
    pub name: &'static str,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl PropertyOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Default)]
struct Sweep {
    out: BTreeMap<&'static str, PropertyOutcome>,
}

impl Sweep {
    fn check(&mut self, name: &'static str, ok: bool, detail: impl FnOnce() -> String) {
        let o = self.out.entry(name).or_insert_with(|| PropertyOutcome {
            name,
            checked: 0,
            failures: Vec::new(),
        });
        o.checked += 1;
        if !ok {
            o.failures.push(detail());
        }
    }

    fn finish(self) -> Vec<PropertyOutcome> {
        self.out.into_values().collect()
    }
}

fn show_set(s: &[usize]) -> String {
    format!("{{{}}}", s.iter().map(|i| format!("v{}", i + 1)).join(","))
}

/// Runs every applicable property on `p`. Properties that only make sense
/// in some dimensions are skipped elsewhere and do not appear in the output.
pub fn check_polytope(p: &FanoPolytope) -> Vec<PropertyOutcome> {
    let d = p.dim();
    let n = p.n_vertices();
    let rels = primitive_relations(p);
    let mut s = Sweep::default();

    for r in &rels {
        s.check(
            "relation_degree",
            r.degree() >= BigInt::one() && r.collection.len() <= d + 1,
            || format!("{} has degree {}", r.display(), r.degree()),
        );
        if r.collection.len() == 2 {
            let sum = p.vertex(r.collection[0]).add(p.vertex(r.collection[1]));
            s.check(
                "two_element_law",
                sum.is_zero() || p.index_of(&sum).is_some(),
                || r.display(),
            );
        }
    }

    let lat = relation_lattice(p, &rels);
    s.check(
        "lattice_generation",
        lat.generated() && lat.rank == n - d,
        || {
            format!(
                "rank {} (expected {}), index {}",
                lat.rank,
                n - d,
                lat.index
            )
        },
    );

    let f = f_vector(p);
    let h = h_vector(&f, d);
    s.check(
        "dehn_sommerville",
        (0..=d).all(|k| h[k] == h[d - k]),
        || format!("h = {h:?}"),
    );
    if d == 4 {
        let (f0, f1, f2, f3) = (f.get(0), f.get(1), f.get(2), f.get(3));
        s.check(
            "dehn_sommerville",
            f2 == 2 * (f1 - f0) && f3 == f1 - f0,
            || format!("f = {:?}", f.0),
        );
    }
    for b in bounds_check(p) {
        s.check("face_bounds", b.holds, || {
            format!("{}: {}", b.name, b.detail)
        });
    }

    if d >= 3 {
        let ws = walls(p);
        let tw = total_weight(p).ok();
        let formula = total_weight_formula(p).ok();
        s.check("total_weight", tw.is_some() && tw == formula, || {
            format!("sum {tw:?} vs formula {formula:?}")
        });
        for w in &ws {
            s.check(
                "wall_degree",
                w.anticanonical_degree() >= BigInt::one(),
                || {
                    format!(
                        "ridge {} has anticanonical degree {}",
                        show_set(&w.ridge),
                        w.anticanonical_degree()
                    )
                },
            );
        }
        if let Some((eq, all_one)) = weight_equality_case(p) {
            s.check("weight_equality_case", eq == all_one, || {
                format!("equality {eq}, all walls degree one {all_one}")
            });
        }
        let gens: Vec<Vec<BigInt>> = rels.iter().map(|r| r.vector(n)).collect();
        for w in &ws {
            s.check(
                "mori_containment",
                nonnegative_combination(&gens, &w.vector(n)).is_some(),
                || format!("wall at ridge {}", show_set(&w.ridge)),
            );
        }
    }

    let extremal: BTreeSet<usize> = extremal_rays(n, &rels).into_iter().collect();
    for (k, r) in rels.iter().enumerate() {
        if !r.degree().is_one() {
            continue;
        }
        let faces_ok = r.collection.iter().all(|&skip| {
            let mut face: Vec<usize> = r
                .collection
                .iter()
                .copied()
                .filter(|&c| c != skip)
                .chain(r.support.iter().copied())
                .collect();
            face.sort_unstable();
            is_face(p, &face).unwrap_or(false)
        });
        // a repeated relation vector is listed once among the extremal rays
        let listed = extremal.contains(&k) || rels[..k].iter().any(|q| q.vector(n) == r.vector(n));
        s.check("extremal_face_condition", faces_ok && listed, || {
            format!("{}: extremal {listed}, faces {faces_ok}", r.display())
        });
    }

    if d == 4 {
        let min_valence = (0..n).map(|i| valence(p, i)).min().unwrap_or(0);
        if min_valence >= 7 {
            s.check(
                "two_vertex_collection",
                rels.iter().any(|r| r.collection.len() == 2),
                || format!("minimum valence {min_valence} but no 2-element collection"),
            );
        }
    }

    if d >= 2 {
        projection_properties(p, &rels, &mut s);
    }
    mirror_relations(p, &rels, &mut s);
    s.finish()
}

fn projection_properties(p: &FanoPolytope, rels: &[PrimitiveRelation], s: &mut Sweep) {
    let d = p.dim();
    let antipodes: BTreeSet<usize> = antipodal_pairs(p)
        .into_iter()
        .flat_map(|(a, b)| [a, b])
        .collect();
    for i in 0..p.n_vertices() {
        let proj = match project_with(p, i, rels) {
            Ok(x) => x,
            Err(e) => {
                s.check("double_points", false, || {
                    format!("projection from v{}: {e}", i + 1)
                });
                continue;
            }
        };
        for dp in &proj.double_points {
            let mut c = vec![i, dp.linked];
            c.sort_unstable();
            let ok = rels.iter().any(|r| {
                r.collection == c && r.support == [dp.link] && r.coeffs.iter().all(One::is_one)
            });
            s.check("double_points", ok, || {
                format!(
                    "P_{}: v{} + v{} = v{} is not primitive",
                    i + 1,
                    i + 1,
                    dp.linked + 1,
                    dp.link + 1
                )
            });
        }
        let reflexive = check_reflexive_projection(&proj);
        s.check(
            "projection_reflexive",
            matches!(reflexive, Ok(true)),
            || format!("P_{}: {reflexive:?}", i + 1),
        );
        if d != 4 {
            continue;
        }
        let faces = match two_faces(&proj) {
            Ok(x) => x,
            Err(e) => {
                s.check("face_types", false, || format!("P_{}: {e}", i + 1));
                continue;
            }
        };
        for face in &faces {
            let k = face.lattice_points.len();
            let ok = match k {
                4 => face.double_points == 0,
                3 => face.double_points <= 1,
                _ => true,
            };
            s.check("double_points_on_faces", ok, || {
                format!(
                    "P_{}: face with {k} lattice points has {} double points",
                    i + 1,
                    face.double_points
                )
            });
            let ok = match &face.kind {
                Ok(FaceType::F1 | FaceType::F4) => true,
                Ok(_) => !antipodes.contains(&i),
                Err(_) => false,
            };
            s.check("face_types", ok, || {
                format!("P_{}: {:?} with {k} lattice points", i + 1, face.kind)
            });
        }
    }
    if d == 4 {
        for (a, b) in antipodal_pairs(p) {
            for (i, j) in [(a, b), (b, a)] {
                let c = f3_formula_check(p, i, j);
                s.check("f3_formula", c.as_ref().is_ok_and(|c| c.holds()), || {
                    format!("pair (v{}, v{}): {c:?}", i + 1, j + 1)
                });
            }
        }
    }
}

/// For an antipodal pair `v_i + v_j = 0`, a relation through `v_i` whose
/// coefficient sum equals the number of other members has unit
/// coefficients, and its mirror through `v_j` is again primitive.
fn mirror_relations(p: &FanoPolytope, rels: &[PrimitiveRelation], s: &mut Sweep) {
    let find = |coll: &[usize]| rels.iter().find(|r| r.collection == coll);
    for (a, b) in antipodal_pairs(p) {
        for (i, j) in [(a, b), (b, a)] {
            for r in rels
                .iter()
                .filter(|r| r.collection.contains(&i) && r.collection.len() > 2)
            {
                let k = r.collection.len() - 1;
                if r.coefficient_sum() != BigInt::from(k) {
                    continue;
                }
                let mut mirror: Vec<usize> = r.support.iter().copied().chain([j]).collect();
                mirror.sort_unstable();
                let expected: BTreeMap<usize, BigInt> = r
                    .collection
                    .iter()
                    .filter(|&&c| c != i)
                    .map(|&c| (c, BigInt::one()))
                    .collect();
                let unit = r.coeffs.iter().all(One::is_one) && r.support.len() == k;
                let found = find(&mirror);
                let ok = unit && found.is_some_and(|m| m.target() == expected);
                s.check("mirror_relations", ok, || {
                    format!(
                        "{} with v{} + v{} = 0: mirror {} {}",
                        r.display(),
                        i + 1,
                        j + 1,
                        show_set(&mirror),
                        found.map_or("is not primitive".to_string(), |m| format!(
                            "has relation {}",
                            m.display()
                        ))
                    )
                });
            }
        }
    }
}

/// Aggregate of one property over many polytopes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyTally {
    pub name: &'static str,
    pub polytopes: usize,
    pub checks: usize,
    pub failures: usize,
    /// Up to five failures, prefixed with the polytope label.
    pub examples: Vec<String>,
}

impl PropertyTally {
    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "polytopes": self.polytopes,
            "checks": self.checks,
            "failures": self.failures,
            "examples": self.examples,
        })
    }
}

/// Merges per-polytope outcomes, sorted by property name.
pub fn tally<'a>(
    labelled: impl IntoIterator<Item = (&'a str, &'a [PropertyOutcome])>,
) -> Vec<PropertyTally> {
    let mut by: BTreeMap<&'static str, PropertyTally> = BTreeMap::new();
    for (label, outcomes) in labelled {
        for o in outcomes {
            let t = by.entry(o.name).or_insert_with(|| PropertyTally {
                name: o.name,
                polytopes: 0,
                checks: 0,
                failures: 0,
                examples: Vec::new(),
            });
            t.polytopes += 1;
            t.checks += o.checked;
            t.failures += o.failures.len();
            for f in &o.failures {
                if t.examples.len() < 5 {
                    t.examples.push(format!("{label}: {f}"));
                }
            }
        }
    }
    by.into_values().collect()
}
