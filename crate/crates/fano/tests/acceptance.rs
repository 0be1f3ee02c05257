//! Acceptance gate. Prints one PASS/FAIL line per criterion and fails if any
//! criterion fails. Thresholds are pinned below; all comparisons of
//! invariants are exact integer equality.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::time::{Duration, Instant};

use fano::catalog::{verify, Catalog, Construction, VerificationReport, VerifyOptions};
use fano::enumerate::{boundary_audit, enumerate_fano, EnumConfig, Enumeration};
use fano::isom::{are_isomorphic, canonical_form, combinatorially_equivalent};
use fano::properties::{check_polytope, tally, PropertyOutcome, PropertyTally};
use fano::FanoPolytope;
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const D2_LIMIT: Duration = Duration::from_secs(5);
const D3_LIMIT: Duration = Duration::from_secs(600);
const CATALOG_LIMIT: Duration = Duration::from_secs(120);
const TRANSFORMS_PER_SAMPLE: usize = 1000;

const FOURFOLD_HISTOGRAM: [(usize, usize); 8] = [
    (5, 1),
    (6, 9),
    (7, 28),
    (8, 47),
    (9, 26),
    (10, 10),
    (11, 1),
    (12, 1),
];
const THREEFOLD_HISTOGRAM: [(usize, usize); 5] = [(4, 1), (5, 4), (6, 7), (7, 4), (8, 2)];

/// Rows pinned to exact values of (c1^4, c1^2 c2, b2, b4, a, h0); `None`
/// where no value is pinned.
const ANCHORS: [(u32, [Option<i64>; 6]); 4] = [
    (
        1,
        [Some(625), Some(250), Some(1), Some(1), Some(24), Some(126)],
    ),
    (5, [Some(512), None, Some(2), Some(2), Some(18), Some(105)]),
    (
        56,
        [Some(384), Some(192), Some(4), Some(6), Some(12), Some(81)],
    ),
    (
        121,
        [Some(216), Some(144), Some(8), Some(18), Some(4), Some(49)],
    ),
];
const FOURFOLD_COLUMNS: [&str; 6] = ["c1_4", "c1_2_c2", "b2", "b4", "a", "h0"];

/// Rows whose listed invariants differ from the recomputed ones. Each must
/// show up itemized in the diff report.
const LISTED_ROW_ERRATA: [u32; 7] = [21, 24, 39, 44, 65, 84, 95];

/// Writes past the test harness's output capture, so the verdicts show up in
/// a plain `cargo test` run.
fn report(line: &str) {
    let _ = writeln!(std::io::stderr().lock(), "{line}");
}

struct Verdict {
    id: u8,
    title: &'static str,
    passed: bool,
    detail: String,
}

fn check(id: u8, title: &'static str, problems: Vec<String>, summary: String) -> Verdict {
    let passed = problems.is_empty();
    let detail = if passed {
        summary
    } else {
        format!("{summary}; {}", problems.join("; "))
    };
    Verdict {
        id,
        title,
        passed,
        detail,
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed())
}

fn hist(pairs: &[(usize, usize)]) -> BTreeMap<usize, usize> {
    pairs.iter().copied().collect()
}

struct Runs {
    enumerations: Vec<(Enumeration, Duration)>,
    catalogs: Vec<(VerificationReport, Duration)>,
}

fn criterion_1(runs: &Runs) -> Verdict {
    let mut problems = Vec::new();
    let want = [1usize, 5, 18];
    let mut parts = Vec::new();
    for (d, ((e, t), &n)) in runs.enumerations.iter().zip(&want).enumerate() {
        let d = d + 1;
        if e.classes.len() != n {
            problems.push(format!("d={d}: {} classes, want {n}", e.classes.len()));
        }
        parts.push(format!("d={d}: {} in {:.1?}", e.classes.len(), t));
    }
    if runs.enumerations[1].1 > D2_LIMIT {
        problems.push(format!(
            "d=2 took {:?} > {D2_LIMIT:?}",
            runs.enumerations[1].1
        ));
    }
    if runs.enumerations[2].1 > D3_LIMIT {
        problems.push(format!(
            "d=3 took {:?} > {D3_LIMIT:?}",
            runs.enumerations[2].1
        ));
    }
    let h3 = runs.enumerations[2].0.histogram();
    if h3 != hist(&THREEFOLD_HISTOGRAM) {
        problems.push(format!("d=3 histogram {h3:?}"));
    }
    parts.push(format!("d=3 histogram {h3:?}"));
    check(1, "enumeration counts", problems, parts.join(", "))
}

fn criterion_2(runs: &Runs) -> Verdict {
    let (r, t) = &runs.catalogs[2];
    let mut problems = Vec::new();
    if r.entries.len() != 123 {
        problems.push(format!("{} entries", r.entries.len()));
    }
    for e in r.entries.iter().filter(|e| e.error.is_some()) {
        problems.push(format!(
            "#{} {} invalid: {}",
            e.id,
            e.name,
            e.error.as_deref().unwrap_or("")
        ));
    }
    if r.distinct_classes() != 123 {
        problems.push(format!(
            "{} distinct classes, isomorphic pairs {:?}",
            r.distinct_classes(),
            r.isomorphic_pairs
        ));
    }
    if r.histogram != hist(&FOURFOLD_HISTOGRAM) {
        problems.push(format!("histogram {:?}", r.histogram));
    }
    if *t > CATALOG_LIMIT {
        problems.push(format!("took {t:?} > {CATALOG_LIMIT:?}"));
    }
    let summary = format!(
        "{} entries, {} distinct, {} pairs compared, histogram {:?}, {:.1?}",
        r.entries.len(),
        r.distinct_classes(),
        r.pairs_compared,
        r.histogram,
        t
    );
    check(2, "fourfold catalog", problems, summary)
}

/// Closing identities, evaluated directly on recomputed values:
/// 12(h0 - 1) = c1^2c2 + 2c1^4 and 12(a - 22 - 3b2 + b4) = 2c1^4 - 5c1^2c2.
fn closing_identities(c: &BTreeMap<&'static str, BigInt>) -> bool {
    let g = |k: &str| c[k].clone();
    let (c14, c12c2, b2, b4, a, h0) = (g("c1_4"), g("c1_2_c2"), g("b2"), g("b4"), g("a"), g("h0"));
    let twelve = BigInt::from(12);
    &twelve * (&h0 - 1) == &c12c2 + 2 * &c14
        && twelve * (a - 22 - 3 * b2 + b4) == 2 * c14 - 5 * c12c2
}

fn criterion_3(runs: &Runs) -> Verdict {
    let r = &runs.catalogs[2].0;
    let mut problems = Vec::new();
    for (id, want) in ANCHORS {
        let Some(e) = r.entries.iter().find(|e| e.id == id) else {
            problems.push(format!("row {id} missing"));
            continue;
        };
        for (col, w) in FOURFOLD_COLUMNS.iter().zip(want) {
            if let Some(w) = w {
                match e.computed.get(col) {
                    Some(got) if *got == BigInt::from(w) => {}
                    got => problems.push(format!("row {id} {col}: {got:?}, want {w}")),
                }
            }
        }
    }
    let csv = r.to_csv();
    let mut itemized = Vec::new();
    for e in &r.entries {
        if e.computed.len() == FOURFOLD_COLUMNS.len() && !closing_identities(&e.computed) {
            problems.push(format!(
                "row {}: closing identities fail on recomputed values",
                e.id
            ));
        }
        if e.diffs.is_empty() {
            continue;
        }
        let listed_row = csv.lines().find(|l| l.starts_with(&format!("{},", e.id)));
        if !listed_row.is_some_and(|l| e.diffs.iter().all(|d| l.contains(d.field))) {
            problems.push(format!(
                "row {}: mismatch not itemized in the diff report",
                e.id
            ));
        }
        let fields: Vec<String> = e
            .diffs
            .iter()
            .map(|d| format!("{} {}->{}", d.field, d.expected, d.computed))
            .collect();
        let listed = match e.listed_consistent {
            Some(true) => "listed row self-consistent",
            Some(false) => "listed row breaks the identities",
            None => "listed row incomplete",
        };
        itemized.push(format!(
            "#{} {} [{}; {listed}]",
            e.id,
            e.name,
            fields.join(", ")
        ));
    }
    let with_diffs: BTreeSet<u32> = r
        .entries
        .iter()
        .filter(|e| !e.diffs.is_empty())
        .map(|e| e.id)
        .collect();
    if with_diffs != LISTED_ROW_ERRATA.into_iter().collect() {
        problems.push(format!(
            "rows with mismatches {with_diffs:?}, pinned {LISTED_ROW_ERRATA:?}"
        ));
    }
    for line in &itemized {
        report(&format!("      mismatch {line}"));
    }
    let summary = format!(
        "anchors 1/5/56/121 exact, {}/{} rows match exactly, {} itemized mismatches with identities holding on recomputed values",
        r.entries.len() - itemized.len(),
        r.entries.len(),
        itemized.len()
    );
    check(3, "fourfold invariant table", problems, summary)
}

fn criterion_4(runs: &Runs) -> Verdict {
    let r = &runs.catalogs[1].0;
    let mut problems = Vec::new();
    if r.entries.len() != 18 {
        problems.push(format!("{} rows", r.entries.len()));
    }
    for e in &r.entries {
        for d in &e.diffs {
            problems.push(format!(
                "row {} {}: listed {} computed {}",
                e.id, d.field, d.expected, d.computed
            ));
        }
        if e.computed.is_empty() {
            problems.push(format!("row {}: nothing computed", e.id));
        }
    }
    let row8: Vec<String> = ["c1_3", "b2", "h0"]
        .iter()
        .map(|k| {
            r.entries
                .get(7)
                .and_then(|e| e.computed.get(k))
                .map_or("?".into(), ToString::to_string)
        })
        .collect();
    if row8 != ["48", "3", "27"] {
        problems.push(format!("row 8 = {row8:?}"));
    }
    let summary = format!(
        "{} rows, c1^3/b2/h0/a exact, row 8 = ({})",
        r.entries.len(),
        row8.join(", ")
    );
    check(4, "threefold table", problems, summary)
}

fn sampled_polytopes(runs: &Runs) -> Vec<(String, FanoPolytope)> {
    let mut out = Vec::new();
    for e in runs.enumerations[1].0.classes.iter().step_by(2) {
        out.push((
            format!("d2/{}v", e.polytope.n_vertices()),
            e.polytope.clone(),
        ));
    }
    for e in runs.enumerations[2].0.classes.iter().step_by(6) {
        out.push((
            format!("d3/{}v", e.polytope.n_vertices()),
            e.polytope.clone(),
        ));
    }
    let cat = Catalog::embedded(4).unwrap();
    for e in cat.entries.iter().step_by(20) {
        if let Ok(p) = &e.polytope {
            out.push((format!("#{} {}", e.entry.id, e.entry.name), p.clone()));
        }
    }
    out
}

fn criterion_5(runs: &Runs) -> Verdict {
    let mut problems = Vec::new();

    // cross-module properties over the catalogs and the enumerated classes
    let mut enumerated: Vec<(String, Vec<PropertyOutcome>)> = Vec::new();
    for (d, (e, _)) in runs.enumerations.iter().enumerate() {
        for (k, c) in e.classes.iter().enumerate() {
            enumerated.push((
                format!("enum d={} #{}", d + 1, k + 1),
                check_polytope(&c.polytope),
            ));
        }
    }
    let mut catalog_outcomes: Vec<(String, Vec<PropertyOutcome>)> = Vec::new();
    for (r, _) in &runs.catalogs {
        for e in &r.entries {
            catalog_outcomes.push((
                format!("fano{} #{} {}", r.dim, e.id, e.name),
                e.properties.clone(),
            ));
        }
    }
    let tallies: Vec<PropertyTally> = tally(
        enumerated
            .iter()
            .chain(&catalog_outcomes)
            .map(|(l, o)| (l.as_str(), o.as_slice())),
    );
    let mut checks = 0;
    for t in &tallies {
        checks += t.checks;
        report(&format!(
            "      property {:<26} {:>4} polytopes {:>7} checks {:>3} failures",
            t.name, t.polytopes, t.checks, t.failures
        ));
        if t.failures > 0 {
            problems.push(format!("{}: {}", t.name, t.examples.join(" | ")));
        }
    }
    let fourfold = &runs.catalogs[2].0;
    for name in [
        "f3_formula",
        "face_types",
        "mori_containment",
        "two_vertex_collection",
        "mirror_relations",
    ] {
        if !tallies.iter().any(|t| t.name == name && t.checks > 0) {
            problems.push(format!("{name} never exercised"));
        }
    }
    if fourfold.entries.iter().any(|e| e.properties.is_empty()) {
        problems.push("catalog verified without properties".into());
    }

    // canonical form under random unimodular maps
    let samples = sampled_polytopes(runs);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for (label, p) in &samples {
        let c = canonical_form(p);
        let bad = (0..TRANSFORMS_PER_SAMPLE)
            .filter(|_| canonical_form(&common::random_image(p, &mut rng)) != c)
            .count();
        if bad > 0 {
            problems.push(format!(
                "canonical form of {label} changed under {bad} maps"
            ));
        }
    }

    // combinatorics do not determine the lattice class
    let cat = Catalog::embedded(4).unwrap();
    let named = |n: &str| {
        cat.entries
            .iter()
            .find(|e| e.entry.name == n)
            .and_then(|e| e.polytope.clone().ok())
    };
    match (named("B_4"), named("B_5")) {
        (Some(b4), Some(b5)) => {
            if combinatorially_equivalent(&b4, &b5).is_none() || are_isomorphic(&b4, &b5).is_some()
            {
                problems.push("B_4/B_5 are not a combinatorial-only pair".into());
            }
        }
        _ => problems.push("B_4 or B_5 missing".into()),
    }

    // every relation-based entry rebuilds from its own relations
    let mut roundtrips = 0;
    for (r, _) in &runs.catalogs {
        let loaded = Catalog::embedded(r.dim).unwrap();
        for (e, l) in r.entries.iter().zip(&loaded.entries) {
            if matches!(l.entry.construction, Construction::Relations { .. }) {
                roundtrips += 1;
                if e.roundtrip != Some(true) {
                    problems.push(format!("fano{} #{} does not round-trip", r.dim, e.id));
                }
            }
        }
    }

    // worker count does not change the enumeration
    for (d, (single, _)) in runs.enumerations.iter().enumerate() {
        let multi = enumerate_fano(&EnumConfig::new(d + 1), 4).unwrap();
        let a: Vec<_> = single.classes.iter().map(|c| &c.form).collect();
        let b: Vec<_> = multi.classes.iter().map(|c| &c.form).collect();
        if a != b {
            problems.push(format!("d={}: 4 workers differ from 1", d + 1));
        }
    }

    let summary = format!(
        "{} properties, {checks} checks over {} polytopes; {} samples x {TRANSFORMS_PER_SAMPLE} maps; B_4/B_5; {roundtrips} round trips; 1 vs 4 workers",
        tallies.len(),
        enumerated.len() + catalog_outcomes.len(),
        samples.len()
    );
    check(5, "property suites", problems, summary)
}

fn criterion_6(runs: &Runs) -> Verdict {
    let mut problems = Vec::new();
    let mut parts = Vec::new();
    for (d, (e, _)) in runs.enumerations.iter().enumerate() {
        let b = EnumConfig::new(d + 1).box_bound;
        let audit = boundary_audit(&e.classes, b);
        if !audit.passes() {
            problems.push(format!("d={}: {:?}", d + 1, audit.offending));
        }
        parts.push(format!(
            "d={}: max |x| {} < B = {b}",
            d + 1,
            audit.max_abs_coordinate
        ));
    }
    check(6, "boundary audit", problems, parts.join(", "))
}

#[test]
fn acceptance() {
    let enumerations = (1..=3)
        .map(|d| {
            let (e, t) = timed(|| enumerate_fano(&EnumConfig::new(d), 1));
            (e.expect("enumeration runs"), t)
        })
        .collect();
    let catalogs = (2..=4)
        .map(|d| {
            let (r, t) = timed(|| {
                let cat = Catalog::embedded(d).expect("bundled catalog loads");
                verify(
                    &cat,
                    VerifyOptions {
                        jobs: 1,
                        properties: true,
                    },
                )
            });
            (r, t)
        })
        .collect();
    let runs = Runs {
        enumerations,
        catalogs,
    };

    let verdicts = [
        criterion_1(&runs),
        criterion_2(&runs),
        criterion_3(&runs),
        criterion_4(&runs),
        criterion_5(&runs),
        criterion_6(&runs),
    ];
    for v in &verdicts {
        report(&format!(
            "{} [{}] {}: {}",
            if v.passed { "PASS" } else { "FAIL" },
            v.id,
            v.title,
            v.detail
        ));
    }
    let failed: Vec<u8> = verdicts
        .iter()
        .filter(|v| !v.passed)
        .map(|v| v.id)
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
