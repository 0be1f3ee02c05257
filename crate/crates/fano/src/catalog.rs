//! Catalog files of smooth Fano polytopes: loading, construction of each
//! entry, verification against the listed invariants, and report output.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use itertools::Itertools;
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::enumerate::{direct_sum, reconstruct, Presentation, PresentedRelation};
use crate::invariants::{
    aut_dim_demazure, big_json, closing_identities_hold, invariant_report, InvariantReport,
};
use crate::isom::{are_isomorphic, canonical_form};
use crate::polytope::{validate_fano, FanoPolytope, LatticePoint};
use crate::properties::{check_polytope, tally, PropertyOutcome, PropertyTally};

/// Largest catalog file accepted, in bytes.
pub const MAX_CATALOG_BYTES: usize = 16 << 20;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("{source_name}:{line}:{column}: at `{path}`: {message}")]
    Schema {
        source_name: String,
        line: usize,
        column: usize,
        path: String,
        message: String,
    },
    #[error("{source_name}: {message}")]
    Invalid {
        source_name: String,
        message: String,
    },
    #[error("{source_name}: entry {id} ({name}): unresolved product part `{part}`: {reason}")]
    UnresolvedPart {
        source_name: String,
        id: u32,
        name: String,
        part: String,
        reason: String,
    },
    #[error("cannot read {path}: {reason}")]
    Io { path: String, reason: String },
}

fn parse_json<T: serde::de::DeserializeOwned>(
    text: &str,
    source_name: &str,
) -> Result<T, CatalogError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        CatalogError::Schema {
            source_name: source_name.to_string(),
            line: inner.line(),
            column: inner.column(),
            path,
            message: inner.to_string(),
        }
    })
}

/// Largest vertex file accepted: dimension and vertex count.
pub const MAX_FILE_DIM: usize = 12;
pub const MAX_FILE_VERTICES: usize = 4096;

/// `{"dim": d, "vertices": [[...], ...]}`; vertex order is kept.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexFile {
    pub dim: usize,
    pub vertices: Vec<Vec<i64>>,
}

impl VertexFile {
    pub fn parse(text: &str, source_name: &str) -> Result<VertexFile, CatalogError> {
        let invalid = |message: String| CatalogError::Invalid {
            source_name: source_name.to_string(),
            message,
        };
        if text.len() > MAX_CATALOG_BYTES {
            return Err(invalid(format!("file exceeds {MAX_CATALOG_BYTES} bytes")));
        }
        let f: VertexFile = parse_json(text, source_name)?;
        if !(1..=MAX_FILE_DIM).contains(&f.dim) {
            return Err(invalid(format!("dim {} outside 1..={MAX_FILE_DIM}", f.dim)));
        }
        if f.vertices.len() > MAX_FILE_VERTICES {
            return Err(invalid(format!("more than {MAX_FILE_VERTICES} vertices")));
        }
        if let Some(k) = f.vertices.iter().position(|v| v.len() != f.dim) {
            return Err(invalid(format!(
                "vertex {} has {} coordinates, expected {}",
                k + 1,
                f.vertices[k].len(),
                f.dim
            )));
        }
        Ok(f)
    }

    pub fn points(&self) -> Vec<LatticePoint> {
        self.vertices
            .iter()
            .map(|v| LatticePoint::from_i64(v))
            .collect()
    }
}

/// Vertex file JSON for any point list; coordinates beyond `i64` are
/// written as strings.
pub fn vertex_file_json(dim: usize, points: &[LatticePoint]) -> Value {
    json!({
        "dim": dim,
        "vertices": points.iter().map(|p| p.0.iter().map(big_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogFile {
    pub dim: usize,
    pub entries: Vec<CatalogEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogEntry {
    pub id: u32,
    pub name: String,
    pub construction: Construction,
    #[serde(default)]
    pub expected: Expected,
    #[serde(default)]
    pub description: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Construction {
    Vertices {
        vertices: Vec<Vec<i64>>,
    },
    Relations {
        n: usize,
        collections: Vec<PresentedRelation>,
    },
    /// Free sum of two entries, each `name` (same file) or `file_stem:name`.
    Product {
        parts: [String; 2],
    },
}

/// Tabulated invariants; which fields apply depends on the dimension.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c1_4: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c1_3: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c1_2: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c1_2_c2: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b2: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b4: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h0: Option<i64>,
}

impl Expected {
    fn fields(&self) -> [(&'static str, Option<i64>); 8] {
        [
            ("c1_4", self.c1_4),
            ("c1_3", self.c1_3),
            ("c1_2", self.c1_2),
            ("c1_2_c2", self.c1_2_c2),
            ("b2", self.b2),
            ("b4", self.b4),
            ("a", self.a),
            ("h0", self.h0),
        ]
    }

    pub fn get(&self, field: &str) -> Option<i64> {
        self.fields()
            .into_iter()
            .find(|(k, _)| *k == field)
            .and_then(|(_, v)| v)
    }
}

/// Table columns in display order for a dimension.
pub fn columns(dim: usize) -> &'static [&'static str] {
    match dim {
        4 => &["c1_4", "c1_2_c2", "b2", "b4", "a", "h0"],
        3 => &["c1_3", "b2", "h0", "a"],
        2 => &["c1_2", "b2", "h0", "a"],
        _ => &["b2", "h0", "a"],
    }
}

impl CatalogFile {
    /// Parses and checks a catalog; `source_name` labels diagnostics.
    pub fn parse(text: &str, source_name: &str) -> Result<CatalogFile, CatalogError> {
        let invalid = |message: String| CatalogError::Invalid {
            source_name: source_name.to_string(),
            message,
        };
        if text.len() > MAX_CATALOG_BYTES {
            return Err(invalid(format!("file exceeds {MAX_CATALOG_BYTES} bytes")));
        }
        let file: CatalogFile = parse_json(text, source_name)?;
        if !(1..=8).contains(&file.dim) {
            return Err(invalid(format!("dim {} outside 1..=8", file.dim)));
        }
        let mut ids = HashMap::new();
        let mut names = HashMap::new();
        let allowed = columns(file.dim);
        for e in &file.entries {
            if e.id == 0 {
                return Err(invalid(format!("entry {}: ids start at 1", e.name)));
            }
            if let Some(prev) = ids.insert(e.id, &e.name) {
                return Err(invalid(format!(
                    "id {} used by both {prev} and {}",
                    e.id, e.name
                )));
            }
            if let Some(prev) = names.insert(e.name.as_str(), e.id) {
                return Err(invalid(format!(
                    "name {} used by both entries {prev} and {}",
                    e.name, e.id
                )));
            }
            for (k, v) in e.expected.fields() {
                if v.is_some() && !allowed.contains(&k) {
                    return Err(invalid(format!(
                        "entry {}: expected field {k} does not apply in dimension {}",
                        e.id, file.dim
                    )));
                }
            }
        }
        Ok(file)
    }

    pub fn entry_named(&self, name: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

/// Supplies the text of other catalog files referenced by product parts.
pub trait PartResolver {
    fn read(&self, stem: &str) -> Result<String, CatalogError>;
}

/// Reads `<dir>/<stem>.json`.
pub struct DirResolver(pub PathBuf);

impl PartResolver for DirResolver {
    fn read(&self, stem: &str) -> Result<String, CatalogError> {
        if stem.is_empty() || stem.contains(['/', '\\']) || stem.starts_with('.') {
            return Err(CatalogError::Io {
                path: stem.to_string(),
                reason: "not a plain file stem".into(),
            });
        }
        let path = self.0.join(format!("{stem}.json"));
        std::fs::read_to_string(&path).map_err(|e| CatalogError::Io {
            path: path.display().to_string(),
            reason: e.to_string(),
        })
    }
}

/// The catalogs compiled into the library.
pub struct EmbeddedResolver;

pub const FANO2: &str = include_str!("../../../data/fano2.json");
pub const FANO3: &str = include_str!("../../../data/fano3.json");
pub const FANO4: &str = include_str!("../../../data/fano4.json");

impl PartResolver for EmbeddedResolver {
    fn read(&self, stem: &str) -> Result<String, CatalogError> {
        match stem {
            "fano2" => Ok(FANO2.to_string()),
            "fano3" => Ok(FANO3.to_string()),
            "fano4" => Ok(FANO4.to_string()),
            _ => Err(CatalogError::Io {
                path: stem.to_string(),
                reason: "no embedded catalog with this name".into(),
            }),
        }
    }
}

/// An entry with its constructed polytope, or the reason construction failed.
#[derive(Clone, Debug)]
pub struct LoadedEntry {
    pub entry: CatalogEntry,
    pub polytope: Result<FanoPolytope, String>,
}

#[derive(Clone, Debug)]
pub struct Catalog {
    pub source: String,
    pub dim: usize,
    pub entries: Vec<LoadedEntry>,
}

struct Loader<'r> {
    resolver: &'r dyn PartResolver,
    files: HashMap<String, CatalogFile>,
    built: HashMap<(String, String), Result<FanoPolytope, String>>,
    active: Vec<(String, String)>,
}

impl Loader<'_> {
    fn file(&mut self, stem: &str) -> Result<&CatalogFile, CatalogError> {
        if !self.files.contains_key(stem) {
            let text = self.resolver.read(stem)?;
            let f = CatalogFile::parse(&text, &format!("{stem}.json"))?;
            self.files.insert(stem.to_string(), f);
        }
        Ok(&self.files[stem])
    }

    fn build(
        &mut self,
        stem: &str,
        name: &str,
    ) -> Result<Result<FanoPolytope, String>, CatalogError> {
        let key = (stem.to_string(), name.to_string());
        if let Some(done) = self.built.get(&key) {
            return Ok(done.clone());
        }
        let file = self.file(stem)?;
        let dim = file.dim;
        let entry = file
            .entry_named(name)
            .cloned()
            .ok_or_else(|| CatalogError::Invalid {
                source_name: format!("{stem}.json"),
                message: format!("no entry named {name}"),
            })?;
        let source_name = format!("{stem}.json");
        if self.active.contains(&key) {
            return Err(CatalogError::UnresolvedPart {
                source_name,
                id: entry.id,
                name: entry.name,
                part: name.to_string(),
                reason: "product parts form a cycle".into(),
            });
        }
        self.active.push(key.clone());
        let result = match &entry.construction {
            Construction::Vertices { vertices } => {
                let pts: Vec<LatticePoint> =
                    vertices.iter().map(|v| LatticePoint::from_i64(v)).collect();
                match pts.iter().position(|p| p.dim() != dim) {
                    Some(k) => Err(format!(
                        "vertex {} has {} coordinates, expected {dim}",
                        k + 1,
                        pts[k].dim()
                    )),
                    None => validate_fano(&pts).map_err(|e| e.to_string()),
                }
            }
            Construction::Relations { n, collections } => {
                let pres = Presentation {
                    dim,
                    n: *n,
                    collections: collections.clone(),
                };
                reconstruct(&pres).map_err(|e| e.to_string())
            }
            Construction::Product { parts } => {
                let mut built = Vec::new();
                for part in parts {
                    let (pstem, pname) = match part.split_once(':') {
                        Some((s, n)) => (s.to_string(), n.to_string()),
                        None => (stem.to_string(), part.clone()),
                    };
                    let unresolved = |reason: String| CatalogError::UnresolvedPart {
                        source_name: source_name.clone(),
                        id: entry.id,
                        name: entry.name.clone(),
                        part: part.clone(),
                        reason,
                    };
                    let pdim = self
                        .file(&pstem)
                        .map_err(|e| unresolved(e.to_string()))?
                        .dim;
                    if pdim >= dim {
                        return Err(unresolved(format!(
                            "part has dimension {pdim}, not below {dim}"
                        )));
                    }
                    let p = match self.build(&pstem, &pname) {
                        Ok(p) => p,
                        Err(CatalogError::Invalid { message, .. }) => {
                            return Err(unresolved(message))
                        }
                        Err(e) => return Err(e),
                    };
                    built.push((pdim, p));
                }
                if built[0].0 + built[1].0 != dim {
                    return Err(CatalogError::UnresolvedPart {
                        source_name,
                        id: entry.id,
                        name: entry.name,
                        part: parts.join(" x "),
                        reason: format!(
                            "part dimensions {} + {} do not add up to {dim}",
                            built[0].0, built[1].0
                        ),
                    });
                }
                match (&built[0].1, &built[1].1) {
                    (Ok(a), Ok(b)) => direct_sum(a, b).map_err(|e| e.to_string()),
                    (Err(e), _) | (_, Err(e)) => Err(format!("product part is not valid: {e}")),
                }
            }
        };
        self.active.pop();
        self.built.insert(key, result.clone());
        Ok(result)
    }
}

impl Catalog {
    /// Loads a catalog from disk; product parts naming another file are
    /// looked up next to it.
    pub fn load(path: &Path) -> Result<Catalog, CatalogError> {
        let text = std::fs::read_to_string(path).map_err(|e| CatalogError::Io {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        let stem = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("catalog")
            .to_string();
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Catalog::from_text(&text, &stem, &DirResolver(dir))
    }

    /// One of the shipped catalogs, `dim` in 2..=4.
    pub fn embedded(dim: usize) -> Result<Catalog, CatalogError> {
        let stem = format!("fano{dim}");
        let text = EmbeddedResolver.read(&stem)?;
        Catalog::from_text(&text, &stem, &EmbeddedResolver)
    }

    pub fn from_text(
        text: &str,
        stem: &str,
        resolver: &dyn PartResolver,
    ) -> Result<Catalog, CatalogError> {
        let source = format!("{stem}.json");
        let file = CatalogFile::parse(text, &source)?;
        let mut loader = Loader {
            resolver,
            files: HashMap::new(),
            built: HashMap::new(),
            active: Vec::new(),
        };
        loader.files.insert(stem.to_string(), file.clone());
        let mut entries = Vec::with_capacity(file.entries.len());
        for e in &file.entries {
            let polytope = loader.build(stem, &e.name)?;
            entries.push(LoadedEntry {
                entry: e.clone(),
                polytope,
            });
        }
        entries.sort_by_key(|e| e.entry.id);
        Ok(Catalog {
            source,
            dim: file.dim,
            entries,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantDiff {
    pub field: &'static str,
    pub expected: i64,
    pub computed: BigInt,
}

#[derive(Clone, Debug)]
pub struct EntryReport {
    pub id: u32,
    pub name: String,
    pub description: String,
    pub n_vertices: Option<usize>,
    /// Why the entry is not a valid smooth Fano polytope.
    pub error: Option<String>,
    pub digest: Option<String>,
    pub computed: BTreeMap<&'static str, BigInt>,
    pub diffs: Vec<InvariantDiff>,
    /// Closing identities on the recomputed values (`d = 4`).
    pub identities_hold: Option<bool>,
    /// Closing identities on the listed values (`d = 4`).
    pub listed_consistent: Option<bool>,
    /// Relation-based entries: rebuilding from the polytope's own relations
    /// gives an isomorphic polytope.
    pub roundtrip: Option<bool>,
    pub properties: Vec<PropertyOutcome>,
}

impl EntryReport {
    pub fn structural_failure(&self) -> bool {
        self.error.is_some()
            || self.roundtrip == Some(false)
            || self.identities_hold == Some(false)
            || self.properties.iter().any(|p| !p.passed())
    }

    pub fn to_json(&self) -> Value {
        let computed: serde_json::Map<String, Value> = self
            .computed
            .iter()
            .map(|(k, v)| (k.to_string(), big_json(v)))
            .collect();
        json!({
            "id": self.id,
            "name": self.name,
            "valid": self.error.is_none(),
            "error": self.error,
            "n_vertices": self.n_vertices,
            "digest": self.digest,
            "computed": computed,
            "diffs": self.diffs.iter().map(|d| json!({
                "field": d.field, "expected": d.expected, "computed": big_json(&d.computed)
            })).collect::<Vec<_>>(),
            "identities_hold": self.identities_hold,
            "listed_consistent": self.listed_consistent,
            "roundtrip": self.roundtrip,
            "property_failures": self.properties.iter().flat_map(|p| p.failures.iter().map(move |f| format!("{}: {f}", p.name))).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub source: String,
    pub dim: usize,
    pub entries: Vec<EntryReport>,
    pub pairs_compared: usize,
    /// Pairs of entry ids with equal canonical forms.
    pub isomorphic_pairs: Vec<(u32, u32)>,
    pub histogram: BTreeMap<usize, usize>,
    pub properties: Vec<PropertyTally>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub jobs: usize,
    pub properties: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            jobs: 1,
            properties: true,
        }
    }
}

fn computed_values(
    dim: usize,
    r: &InvariantReport,
    demazure: &BigInt,
) -> BTreeMap<&'static str, BigInt> {
    let mut m = BTreeMap::new();
    match dim {
        4 => {
            m.insert("c1_4", r.c1_pow_d.clone());
        }
        3 => {
            m.insert("c1_3", r.c1_pow_d.clone());
        }
        2 => {
            m.insert("c1_2", r.c1_pow_d.clone());
        }
        _ => {}
    }
    if let Some(c) = &r.c1sq_c2 {
        m.insert("c1_2_c2", c.clone());
    }
    m.insert("b2", r.b2.clone());
    if let Some(b4) = &r.b4 {
        m.insert("b4", b4.clone());
    }
    m.insert("a", demazure.clone());
    m.insert("h0", r.h0.clone());
    m
}

fn verify_entry(dim: usize, le: &LoadedEntry, properties: bool) -> EntryReport {
    let e = &le.entry;
    let mut rep = EntryReport {
        id: e.id,
        name: e.name.clone(),
        description: e.description.clone(),
        n_vertices: None,
        error: None,
        digest: None,
        computed: BTreeMap::new(),
        diffs: Vec::new(),
        identities_hold: None,
        listed_consistent: None,
        roundtrip: None,
        properties: Vec::new(),
    };
    if dim == 4 {
        let x = &e.expected;
        if let (Some(c4), Some(c2), Some(b2), Some(b4), Some(a), Some(h0)) =
            (x.c1_4, x.c1_2_c2, x.b2, x.b4, x.a, x.h0)
        {
            let b = BigInt::from;
            rep.listed_consistent = Some(closing_identities_hold(
                &b(c4),
                &b(c2),
                &b(b2),
                &b(b4),
                &b(a),
                &b(h0),
            ));
        }
    }
    let p = match &le.polytope {
        Ok(p) => p,
        Err(msg) => {
            rep.error = Some(msg.clone());
            return rep;
        }
    };
    rep.n_vertices = Some(p.n_vertices());
    rep.digest = Some(canonical_form(p).digest());
    let inv = invariant_report(p);
    let demazure = aut_dim_demazure(p);
    match (inv, demazure) {
        (Ok(r), Ok(a)) => {
            if dim == 4 {
                let formula = r.aut_dim.clone().expect("dimension 4");
                let c2 = r.c1sq_c2.clone().expect("dimension 4");
                let b4 = r.b4.clone().expect("dimension 4");
                rep.identities_hold = Some(
                    formula == a
                        && closing_identities_hold(&r.c1_pow_d, &c2, &r.b2, &b4, &a, &r.h0),
                );
            }
            rep.computed = computed_values(dim, &r, &a);
            for &field in columns(dim) {
                if let (Some(want), Some(got)) = (e.expected.get(field), rep.computed.get(field)) {
                    if BigInt::from(want) != *got {
                        rep.diffs.push(InvariantDiff {
                            field,
                            expected: want,
                            computed: got.clone(),
                        });
                    }
                }
            }
        }
        (Err(err), _) => rep.error = Some(format!("invariants: {err}")),
        (_, Err(err)) => rep.error = Some(format!("invariants: {err}")),
    }
    if matches!(e.construction, Construction::Relations { .. }) {
        let again = reconstruct(&Presentation::of_polytope(p));
        rep.roundtrip = Some(again.is_ok_and(|q| are_isomorphic(p, &q).is_some()));
    }
    if properties {
        rep.properties = check_polytope(p);
    }
    rep
}

/// Verifies every entry, compares all valid entries pairwise through their
/// canonical forms, and optionally runs the property suite. `jobs` worker
/// threads share the per-entry work; the report does not depend on it.
pub fn verify(cat: &Catalog, opts: VerifyOptions) -> VerificationReport {
    let work = || {
        cat.entries
            .par_iter()
            .map(|le| verify_entry(cat.dim, le, opts.properties))
            .collect::<Vec<_>>()
    };
    let entries = match rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
    {
        Ok(pool) => pool.install(work),
        Err(_) => cat
            .entries
            .iter()
            .map(|le| verify_entry(cat.dim, le, opts.properties))
            .collect(),
    };
    let valid: Vec<&EntryReport> = entries.iter().filter(|e| e.digest.is_some()).collect();
    let pairs_compared = valid.len() * valid.len().saturating_sub(1) / 2;
    let mut isomorphic_pairs = Vec::new();
    for (a, b) in valid.iter().tuple_combinations() {
        if a.digest == b.digest {
            isomorphic_pairs.push((a.id, b.id));
        }
    }
    let mut histogram = BTreeMap::new();
    for e in &valid {
        *histogram.entry(e.n_vertices.expect("valid")).or_insert(0) += 1;
    }
    let labels: Vec<String> = entries
        .iter()
        .map(|e| format!("#{} {}", e.id, e.name))
        .collect();
    let properties = tally(
        entries
            .iter()
            .zip(&labels)
            .map(|(e, l)| (l.as_str(), e.properties.as_slice())),
    );
    VerificationReport {
        source: cat.source.clone(),
        dim: cat.dim,
        entries,
        pairs_compared,
        isomorphic_pairs,
        histogram,
        properties,
    }
}

impl VerificationReport {
    pub fn distinct_classes(&self) -> usize {
        self.entries
            .iter()
            .filter_map(|e| e.digest.as_ref())
            .unique()
            .count()
    }

    pub fn invalid(&self) -> usize {
        self.entries.iter().filter(|e| e.error.is_some()).count()
    }

    pub fn with_diffs(&self) -> usize {
        self.entries.iter().filter(|e| !e.diffs.is_empty()).count()
    }

    /// 0 when everything passes, 2 on any structural failure (invalid or
    /// duplicate polytope, failed round trip or property), 3 when the only
    /// problems are invariant mismatches.
    pub fn exit_code(&self) -> i32 {
        if !self.isomorphic_pairs.is_empty()
            || self.entries.iter().any(EntryReport::structural_failure)
        {
            2
        } else if self.with_diffs() > 0 {
            3
        } else {
            0
        }
    }

    pub fn to_json(&self) -> Value {
        let hist: serde_json::Map<String, Value> = self
            .histogram
            .iter()
            .map(|(k, v)| (k.to_string(), json!(v)))
            .collect();
        json!({
            "source": self.source,
            "dim": self.dim,
            "summary": {
                "entries": self.entries.len(),
                "valid": self.entries.len() - self.invalid(),
                "invalid": self.invalid(),
                "distinct_classes": self.distinct_classes(),
                "entries_with_diffs": self.with_diffs(),
                "exit_code": self.exit_code(),
            },
            "isomorphism": {
                "pairs_compared": self.pairs_compared,
                "isomorphic_pairs": self.isomorphic_pairs,
            },
            "histogram": hist,
            "properties": self.properties.iter().map(PropertyTally::to_json).collect::<Vec<_>>(),
            "entries": self.entries.iter().map(EntryReport::to_json).collect::<Vec<_>>(),
        })
    }

    fn status(e: &EntryReport) -> &'static str {
        if e.error.is_some() {
            "invalid"
        } else if e.structural_failure() {
            "failed"
        } else if !e.diffs.is_empty() {
            "diff"
        } else {
            "ok"
        }
    }

    fn diff_text(e: &EntryReport) -> String {
        e.diffs
            .iter()
            .map(|d| format!("{}: listed {} computed {}", d.field, d.expected, d.computed))
            .join("; ")
    }

    /// One row per entry with the recomputed invariants.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let cols = columns(self.dim);
        let mut header = vec!["id"];
        header.extend(cols);
        header.extend(["type", "description", "status", "diffs"]);
        w.write_record(&header).expect("in-memory write");
        for e in &self.entries {
            let mut row = vec![e.id.to_string()];
            row.extend(cols.iter().map(|c| {
                e.computed
                    .get(c)
                    .map(ToString::to_string)
                    .unwrap_or_default()
            }));
            row.extend([
                e.name.clone(),
                e.description.clone(),
                Self::status(e).to_string(),
                Self::diff_text(e),
            ]);
            w.write_record(&row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }

    /// Markdown table in the layout of a printed invariant table, followed
    /// by the mismatch and summary sections.
    pub fn to_markdown(&self) -> String {
        let cols = columns(self.dim);
        let title = |c: &str| match c {
            "c1_4" => "c₁⁴",
            "c1_3" => "c₁³",
            "c1_2" => "c₁²",
            "c1_2_c2" => "c₁²c₂",
            "b2" => "b₂",
            "b4" => "b₄",
            "a" => "a(V)",
            "h0" => "h⁰",
            _ => "?",
        };
        let mut s = String::new();
        let _ = writeln!(s, "# {} ({} entries)\n", self.source, self.entries.len());
        let _ = writeln!(
            s,
            "| n⁰ | {} | type |",
            cols.iter().map(|c| title(c)).join(" | ")
        );
        let _ = writeln!(s, "|{}", "---|".repeat(cols.len() + 2));
        for e in &self.entries {
            let vals = cols
                .iter()
                .map(|c| {
                    e.computed
                        .get(c)
                        .map(ToString::to_string)
                        .unwrap_or_else(|| "—".into())
                })
                .join(" | ");
            let mark = match Self::status(e) {
                "ok" => "",
                "diff" => " ‡",
                _ => " ✗",
            };
            let kind = if e.description.is_empty() || e.description == e.name {
                e.name.clone()
            } else {
                format!("{}, {}", e.name, e.description)
            };
            let _ = writeln!(
                s,
                "| {}{mark} | {vals} | {} |",
                e.id,
                kind.replace('|', "\\|")
            );
        }
        let diffs: Vec<&EntryReport> = self
            .entries
            .iter()
            .filter(|e| !e.diffs.is_empty())
            .collect();
        if !diffs.is_empty() {
            let _ = writeln!(s, "\n## Mismatches (‡)\n");
            for e in diffs {
                let ids = match (e.identities_hold, e.listed_consistent) {
                    (Some(a), Some(b)) => {
                        format!(" (identities on computed: {a}; listed row consistent: {b})")
                    }
                    _ => String::new(),
                };
                let _ = writeln!(s, "- #{} {}: {}{ids}", e.id, e.name, Self::diff_text(e));
            }
        }
        let bad: Vec<&EntryReport> = self
            .entries
            .iter()
            .filter(|e| e.structural_failure())
            .collect();
        if !bad.is_empty() {
            let _ = writeln!(s, "\n## Failures (✗)\n");
            for e in bad {
                let why = e.error.clone().unwrap_or_else(|| {
                    let mut v: Vec<String> = e
                        .properties
                        .iter()
                        .flat_map(|p| p.failures.iter().map(move |f| format!("{}: {f}", p.name)))
                        .collect();
                    if e.roundtrip == Some(false) {
                        v.push("round trip failed".into());
                    }
                    if e.identities_hold == Some(false) {
                        v.push("closing identities fail on computed values".into());
                    }
                    v.join("; ")
                });
                let _ = writeln!(s, "- #{} {}: {why}", e.id, e.name);
            }
        }
        let _ = writeln!(s, "\n## Summary\n");
        let _ = writeln!(
            s,
            "- valid {} of {}, distinct classes {}, pairs compared {}, isomorphic pairs {}",
            self.entries.len() - self.invalid(),
            self.entries.len(),
            self.distinct_classes(),
            self.pairs_compared,
            self.isomorphic_pairs.len()
        );
        let _ = writeln!(
            s,
            "- vertex counts: {}",
            self.histogram
                .iter()
                .map(|(k, v)| format!("{k}:{v}"))
                .join(", ")
        );
        for t in &self.properties {
            let _ = writeln!(
                s,
                "- property {}: {} checks on {} polytopes, {} failures",
                t.name, t.checks, t.polytopes, t.failures
            );
        }
        let _ = writeln!(s, "- exit code {}", self.exit_code());
        s
    }
}
