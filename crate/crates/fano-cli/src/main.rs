use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fano::catalog::{verify, vertex_file_json, Catalog, VerifyOptions, VertexFile};
use fano::enumerate::{boundary_audit, enumerate_fano, reconstruct, EnumConfig, Presentation};
use fano::invariants::{big_json, bounds_check, invariant_report};
use fano::isom::{are_isomorphic, canonical_form, induced_bijection};
use fano::polytope::{f_vector, is_reflexive, validate_fano, FanoPolytope, LatticePoint};
use fano::project::{check_reflexive_projection, project, two_faces};
use fano::relations::{
    extremal_rays, normal_bundle_type, primitive_collections, primitive_relations,
    relation_lattice, total_weight, walls, PrimitiveRelation,
};

#[derive(Parser)]
#[command(
    name = "fano",
    version,
    about = "Smooth Fano lattice polytopes: validation, relations, invariants, classification"
)]
struct Cli {
    /// Input file, used when a subcommand's own FILE argument is omitted.
    /// `-` reads standard input.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Output format; csv and md apply to catalog-verify and report.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for enumerate, catalog-verify and report.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a vertex file describes a smooth Fano polytope.
    Validate { file: Option<PathBuf> },
    /// Facets with their vertex indices (1-based) and normals.
    Facets { file: Option<PathBuf> },
    /// Primitive collections.
    Collections { file: Option<PathBuf> },
    /// Primitive relations with degrees.
    Relations { file: Option<PathBuf> },
    /// Relation lattice, extremal rays and their normal bundles.
    Mori { file: Option<PathBuf> },
    /// Wall relations of all ridges.
    Walls { file: Option<PathBuf> },
    /// Projection along a vertex.
    Project {
        file: Option<PathBuf>,
        /// Vertex index, 1-based.
        #[arg(long)]
        vertex: usize,
    },
    /// Numerical invariants and face-count bounds.
    Invariants { file: Option<PathBuf> },
    /// Decide lattice isomorphism; exits 1 when not isomorphic.
    Isom { a: PathBuf, b: PathBuf },
    /// Canonical vertex matrix and its digest.
    Canon { file: Option<PathBuf> },
    /// All smooth Fano polytopes of dimension 1 to 3, one JSON line each.
    Enumerate {
        #[arg(long)]
        dim: usize,
        /// Coordinate box bound; defaults to 2 for d <= 2 and 3 for d = 3.
        #[arg(long = "box")]
        box_bound: Option<i64>,
    },
    /// Rebuild a polytope from a presentation by primitive relations.
    Reconstruct { file: Option<PathBuf> },
    /// Verify a catalog file (default: the bundled catalog of --dim).
    /// Exits 0, 2 (unloadable catalog or structural failure) or 3 (invariant
    /// mismatch only).
    CatalogVerify {
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        dim: usize,
        /// Skip the per-polytope property suite.
        #[arg(long)]
        no_properties: bool,
    },
    /// Invariant table of a catalog (default: the bundled catalog of --dim).
    Report {
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        dim: usize,
    },
}

fn read_input(file: Option<&Path>, global: Option<&Path>) -> Result<(String, String)> {
    let path = file
        .or(global)
        .context("no input file: pass FILE or --input")?;
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .context("reading standard input")?;
        return Ok((s, "<stdin>".into()));
    }
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok((text, path.display().to_string()))
}

fn load_polytope(file: Option<&Path>, global: Option<&Path>) -> Result<FanoPolytope> {
    let (text, name) = read_input(file, global)?;
    let vf = VertexFile::parse(&text, &name)?;
    validate_fano(&vf.points()).with_context(|| format!("{name} is not a smooth Fano polytope"))
}

fn point_json(p: &LatticePoint) -> Value {
    Value::Array(p.0.iter().map(big_json).collect())
}

fn one_based(ix: &[usize]) -> Value {
    json!(ix.iter().map(|i| i + 1).collect::<Vec<_>>())
}

fn relation_json(r: &PrimitiveRelation) -> Value {
    let target: serde_json::Map<String, Value> = r
        .target()
        .iter()
        .map(|(j, c)| ((j + 1).to_string(), big_json(c)))
        .collect();
    json!({
        "collection": one_based(&r.collection),
        "target": target,
        "degree": big_json(&r.degree()),
        "text": r.display(),
    })
}

fn print_json(v: &Value) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn require_json(cli: &Cli, command: &str) -> Result<()> {
    if cli.format != Format::Json {
        bail!("{command} only writes JSON; csv and md apply to catalog-verify and report");
    }
    Ok(())
}

fn load_catalog(file: Option<&Path>, global: Option<&Path>, dim: usize) -> Result<Catalog> {
    Ok(match file.or(global) {
        Some(p) => Catalog::load(p)?,
        None => Catalog::embedded(dim)?,
    })
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let global = cli.input.as_deref();
    match &cli.command {
        Command::Validate { file } => {
            require_json(cli, "validate")?;
            let (text, name) = read_input(file.as_deref(), global)?;
            let vf = VertexFile::parse(&text, &name)?;
            match validate_fano(&vf.points()) {
                Ok(p) => {
                    print_json(&json!({
                        "valid": true,
                        "dim": p.dim(),
                        "n_vertices": p.n_vertices(),
                        "f_vector": f_vector(&p).0,
                        "reflexive": is_reflexive(p.vertices()).unwrap_or(false),
                    }))?;
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    print_json(&json!({ "valid": false, "error": e.to_string() }))?;
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Facets { file } => {
            require_json(cli, "facets")?;
            let p = load_polytope(file.as_deref(), global)?;
            let v: Vec<Value> =
                p.facets().iter().map(|f| json!({ "vertices": one_based(&f.vertices), "normal": point_json(&f.normal) })).collect();
            print_json(&Value::Array(v))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Collections { file } => {
            require_json(cli, "collections")?;
            let p = load_polytope(file.as_deref(), global)?;
            let v: Vec<Value> = primitive_collections(&p)
                .iter()
                .map(|c| one_based(c.members()))
                .collect();
            print_json(&Value::Array(v))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Relations { file } => {
            require_json(cli, "relations")?;
            let p = load_polytope(file.as_deref(), global)?;
            print_json(&Value::Array(
                primitive_relations(&p).iter().map(relation_json).collect(),
            ))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Mori { file } => {
            require_json(cli, "mori")?;
            let p = load_polytope(file.as_deref(), global)?;
            let rels = primitive_relations(&p);
            let lat = relation_lattice(&p, &rels);
            let mut rays = Vec::new();
            for k in extremal_rays(p.n_vertices(), &rels) {
                let nb = normal_bundle_type(&p, &rels, k)?;
                let mut r = relation_json(&rels[k]);
                r["normal_bundle"] = json!(nb.degrees.iter().map(big_json).collect::<Vec<_>>());
                rays.push(r);
            }
            print_json(&json!({
                "relations": rels.iter().map(relation_json).collect::<Vec<_>>(),
                "lattice": {
                    "rank": lat.rank,
                    "index": big_json(&lat.index),
                    "generated_by_relations": lat.generated(),
                    "basis": lat.basis.to_rows().iter().map(|r| r.iter().map(big_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
                },
                "extremal_rays": rays,
            }))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Walls { file } => {
            require_json(cli, "walls")?;
            let p = load_polytope(file.as_deref(), global)?;
            if p.dim() < 3 {
                bail!("walls need dimension at least 3");
            }
            let v: Vec<Value> = walls(&p)
                .iter()
                .map(|w| {
                    json!({
                        "ridge": one_based(&w.ridge),
                        "a": w.a + 1,
                        "b": w.b + 1,
                        "x": w.x.iter().map(big_json).collect::<Vec<_>>(),
                        "normal_degree": big_json(&w.normal_degree()),
                        "anticanonical_degree": big_json(&w.anticanonical_degree()),
                    })
                })
                .collect();
            eprintln!("total weight {}", total_weight(&p)?);
            print_json(&Value::Array(v))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Project { file, vertex } => {
            require_json(cli, "project")?;
            let p = load_polytope(file.as_deref(), global)?;
            if *vertex == 0 || *vertex > p.n_vertices() {
                bail!("--vertex must be in 1..={}", p.n_vertices());
            }
            let proj = project(&p, vertex - 1)?;
            let mut out = json!({
                "vertex": vertex,
                "quotient": proj.quotient.to_rows().iter().map(|r| r.iter().map(big_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "images": proj.images.iter().map(point_json).collect::<Vec<_>>(),
                "vertices": proj.vertex_points().iter().map(point_json).collect::<Vec<_>>(),
                "double_points": proj.double_points.iter().map(|d| json!({
                    "point": point_json(&d.point),
                    "linked": d.linked + 1,
                    "link": d.link + 1,
                    "relation": format!("v{} + v{} = v{}", vertex, d.linked + 1, d.link + 1),
                })).collect::<Vec<_>>(),
                "reflexive": check_reflexive_projection(&proj)?,
            });
            if p.dim() == 4 {
                let mut counts = serde_json::Map::new();
                for f in two_faces(&proj)? {
                    let key = f
                        .kind
                        .as_ref()
                        .map_or_else(|_| "unclassified".to_string(), ToString::to_string);
                    let c = counts.entry(key).or_insert(json!(0));
                    *c = json!(c.as_u64().unwrap_or(0) + 1);
                }
                out["face_types"] = Value::Object(counts);
            }
            print_json(&out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Invariants { file } => {
            require_json(cli, "invariants")?;
            let p = load_polytope(file.as_deref(), global)?;
            let mut v = invariant_report(&p)?.to_json();
            v["bounds"] = json!(bounds_check(&p)
                .iter()
                .map(|b| json!({ "name": b.name, "holds": b.holds, "detail": b.detail }))
                .collect::<Vec<_>>());
            print_json(&v)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Isom { a, b } => {
            require_json(cli, "isom")?;
            let p = load_polytope(Some(a), None)?;
            let q = load_polytope(Some(b), None)?;
            match are_isomorphic(&p, &q) {
                Some(m) => {
                    let bij = induced_bijection(&p, &q, &m).unwrap_or_default();
                    print_json(&json!({
                        "isomorphic": true,
                        "matrix": m.to_rows().iter().map(|r| r.iter().map(big_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
                        "bijection": one_based(&bij),
                    }))?;
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    println!("not isomorphic");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Canon { file } => {
            require_json(cli, "canon")?;
            let p = load_polytope(file.as_deref(), global)?;
            let c = canonical_form(&p);
            print_json(&json!({
                "dim": c.dim(),
                "matrix": c.vertices().iter().map(point_json).collect::<Vec<_>>(),
                "encoding": c.encode(),
                "digest": c.digest(),
            }))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Enumerate { dim, box_bound } => {
            require_json(cli, "enumerate")?;
            let mut cfg = EnumConfig::new(*dim);
            if let Some(b) = box_bound {
                cfg = cfg.with_box(*b);
            }
            let e = enumerate_fano(&cfg, cli.jobs)?;
            let audit = boundary_audit(&e.classes, cfg.box_bound);
            let mut out = io::stdout().lock();
            for c in &e.classes {
                let line = json!({
                    "n_vertices": c.polytope.n_vertices(),
                    "vertices": c.form.vertices().iter().map(point_json).collect::<Vec<_>>(),
                    "digest": c.form.digest(),
                });
                writeln!(out, "{line}")?;
            }
            let hist: serde_json::Map<String, Value> = e
                .histogram()
                .iter()
                .map(|(k, v)| (k.to_string(), json!(v)))
                .collect();
            writeln!(
                out,
                "{}",
                json!({
                    "count": e.classes.len(),
                    "histogram": hist,
                    "box": cfg.box_bound,
                    "audit_passed": audit.passes(),
                    "max_abs_coordinate": big_json(&audit.max_abs_coordinate),
                })
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Reconstruct { file } => {
            require_json(cli, "reconstruct")?;
            let (text, _) = read_input(file.as_deref(), global)?;
            let pres = Presentation::from_json(&text)?;
            let p = reconstruct(&pres)?;
            print_json(&vertex_file_json(p.dim(), p.vertices()))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::CatalogVerify {
            file,
            dim,
            no_properties,
        } => {
            let cat = match load_catalog(file.as_deref(), global, *dim) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e:#}");
                    return Ok(ExitCode::from(2));
                }
            };
            let r = verify(
                &cat,
                VerifyOptions {
                    jobs: cli.jobs,
                    properties: !no_properties,
                },
            );
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&r.to_json())? + "\n",
                Format::Csv => r.to_csv(),
                Format::Md => r.to_markdown(),
            };
            io::stdout().lock().write_all(text.as_bytes())?;
            Ok(ExitCode::from(u8::try_from(r.exit_code()).unwrap_or(2)))
        }
        Command::Report { file, dim } => {
            let cat = match load_catalog(file.as_deref(), global, *dim) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e:#}");
                    return Ok(ExitCode::from(2));
                }
            };
            let r = verify(
                &cat,
                VerifyOptions {
                    jobs: cli.jobs,
                    properties: false,
                },
            );
            let text = match cli.format {
                Format::Json => {
                    let rows: Vec<Value> = r
                        .entries
                        .iter()
                        .map(|e| {
                            let mut row = serde_json::Map::new();
                            row.insert("id".into(), json!(e.id));
                            for (k, v) in &e.computed {
                                row.insert(k.to_string(), big_json(v));
                            }
                            row.insert("type".into(), json!(e.name));
                            row.insert("description".into(), json!(e.description));
                            Value::Object(row)
                        })
                        .collect();
                    serde_json::to_string_pretty(&rows)? + "\n"
                }
                Format::Csv => r.to_csv(),
                Format::Md => r.to_markdown(),
            };
            io::stdout().lock().write_all(text.as_bytes())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<io::Error>()
            .map(io::Error::kind)
            .or_else(|| {
                c.downcast_ref::<serde_json::Error>()
                    .and_then(serde_json::Error::io_error_kind)
            })
            == Some(io::ErrorKind::BrokenPipe)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
