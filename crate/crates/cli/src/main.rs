//! `blowup`: command-line access to splitting types, canonical forms,
//! isomorphism tests, the `j = 2` moduli space and gluing certificates.
//!
//! Results go to stdout as JSON (or `key: value` text). Failures print a
//! JSON error document to stdout and a one-line diagnostic to stderr; the
//! exit code is 1 for invalid input and 2 when a search ran out of bounds.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use blowup_core::canonical::{full_reduce, monomial_window};
use blowup_core::glue::{
    hartogs_value, is_pullback, nullhomotopy_certificate, topological_class, validate_glue, GlueError,
};
use blowup_core::io::{
    complex_doc, parse_complex_arg, parse_document, point_doc, to_json, CertificateDoc, DescriptorDoc,
    GlueDoc, MatrixDoc, NullhomotopyDoc, PolyDoc, ReferenceFamilyDoc, SchemaError, TopoClassDoc,
};
use blowup_core::iso_moduli::orbit::orbit_rank_at;
use blowup_core::iso_moduli::{
    are_isomorphic, classify_j2, discover_j2, DiscoveryConfig, IsoBounds, IsoVerdict, ModuliError,
    ModuliJ2Point, ReferenceFamily,
};
use blowup_core::splitting::birkhoff_factorize;
use blowup_core::{GaussianRational, TransitionMatrix};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

/// Reference family shipped with the tool (`moduli discover --samples 200 --seed 0`).
const DEFAULT_FAMILY: &str = include_str!("../../../data/m2_reference.json");

#[derive(Parser)]
#[command(name = "blowup", version, about = "Holomorphic rank-2 bundles near an exceptional curve")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Global {
    /// Jet order N used by isomorphism and reduction searches.
    #[arg(long, global = true)]
    umax: Option<u32>,
    /// Cap on the z-degree slack of candidate isomorphisms.
    #[arg(long, global = true)]
    zbound: Option<i64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a matrix file is a valid transition matrix.
    Validate { file: PathBuf },
    /// Splitting type on the exceptional curve, with a factorization certificate.
    SplitType { file: PathBuf },
    /// Canonical form and gauge certificate.
    Canonical { file: PathBuf },
    /// Dimension and monomials of the canonical parameter window.
    ParamSpace {
        #[arg(long, allow_hyphen_values = true)]
        j1: i64,
        #[arg(long, allow_hyphen_values = true)]
        j2: i64,
        #[arg(long, default_value_t = 1)]
        k: u32,
    },
    /// Decide whether two matrix files describe isomorphic bundles.
    Iso { a: PathBuf, b: PathBuf },
    /// Rank of the gauge action on the window at the canonical form of a matrix.
    OrbitRank { file: PathBuf },
    /// Classify a j = 2 canonical form in the moduli space.
    ModuliJ2 {
        #[arg(long, allow_hyphen_values = true)]
        p10: String,
        #[arg(long, allow_hyphen_values = true)]
        p11: String,
        #[arg(long, allow_hyphen_values = true)]
        p21: String,
        /// Reference family file; defaults to the bundled one.
        #[arg(long)]
        family: Option<PathBuf>,
    },
    /// Moduli discovery.
    Moduli {
        #[command(subcommand)]
        action: ModuliAction,
    },
    /// Gluing maps on C^m minus the origin.
    Glue {
        #[command(subcommand)]
        action: GlueAction,
    },
    /// Topological class of a descriptor (the gluing map is ignored).
    TopoClass { file: PathBuf },
    /// Whether a descriptor is globally a pull-back.
    IsPullback { file: PathBuf },
}

#[derive(Subcommand)]
enum ModuliAction {
    /// Sample canonical forms, cluster them with the oracle and write the reference family.
    Discover {
        #[arg(long, default_value_t = 2)]
        j: i64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GlueAction {
    Validate { file: PathBuf },
    Certify { file: PathBuf },
}

#[derive(Debug)]
enum CliError {
    Schema(SchemaError),
    Invalid(String),
    Inconclusive(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Schema(_) | CliError::Invalid(_) => 1,
            CliError::Inconclusive(_) => 2,
        }
    }

    fn document(&self) -> Value {
        match self {
            CliError::Schema(e) => {
                json!({"error": {"kind": "schema", "location": e.location, "message": e.message}})
            }
            CliError::Invalid(m) => json!({"error": {"kind": "validation", "message": m}}),
            CliError::Inconclusive(m) => json!({"error": {"kind": "inconclusive", "message": m}}),
        }
    }
}

impl From<SchemaError> for CliError {
    fn from(e: SchemaError) -> Self {
        CliError::Schema(e)
    }
}

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Invalid(e.to_string())
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

fn read_doc<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    parse_document(&read(path)?).map_err(|e| {
        CliError::Schema(SchemaError::new(format!("{}:{}", path.display(), e.location), e.message))
    })
}

fn read_transition(path: &Path) -> Result<TransitionMatrix, CliError> {
    let doc: MatrixDoc = read_doc(path)?;
    let m = doc.matrix()?;
    TransitionMatrix::validate(m, doc.k).map_err(invalid)
}

fn bounds(g: Global) -> IsoBounds {
    IsoBounds { umax: g.umax, zbound: g.zbound, ..IsoBounds::default() }
}

fn window_json(j1: i64, j2: i64, k: u32) -> Value {
    Value::Array(monomial_window(j1, j2, k).into_iter().map(|(i, l)| json!({"z": l, "u": i})).collect())
}

fn vector_json(w: &[GaussianRational]) -> Value {
    json!(w.iter().map(complex_doc).collect::<Vec<_>>())
}

fn moduli_point_json(x: &ModuliJ2Point) -> Value {
    match x {
        ModuliJ2Point::Q1 => json!({"class": "q1"}),
        ModuliJ2Point::Q2 => json!({"class": "q2"}),
        ModuliJ2Point::Generic(t) => json!({"class": "generic", "coordinate": point_doc(t)}),
    }
}

fn load_family(path: Option<&Path>) -> Result<ReferenceFamily, CliError> {
    let doc: ReferenceFamilyDoc = match path {
        Some(p) => read_doc(p)?,
        None => parse_document(DEFAULT_FAMILY)?,
    };
    Ok(doc.family()?)
}

fn moduli_error(e: ModuliError) -> CliError {
    match e {
        ModuliError::DiscoveryIncomplete(m) => CliError::Inconclusive(m),
        other => invalid(other),
    }
}

fn run(cli: &Cli) -> Result<Value, CliError> {
    let g = cli.global;
    match &cli.command {
        Command::Validate { file } => {
            let t = read_transition(file)?;
            let (c, d) = t.det_unit();
            Ok(json!({"valid": true, "k": t.k(), "det": {"c": complex_doc(c), "z": d}}))
        }
        Command::SplitType { file } => {
            let t = read_transition(file)?;
            let f = birkhoff_factorize(&t.restrict_to_ell()).map_err(invalid)?;
            let cert = blowup_core::certificate::GaugeCertificate {
                k: t.k(),
                h_u: f.h_u.clone(),
                h_v: f.h_v.clone(),
                order: blowup_core::certificate::CongruenceOrder::Exact,
            };
            Ok(json!({
                "split": f.split.to_string(),
                "j1": f.split.j1,
                "j2": f.split.j2,
                "certificate": CertificateDoc::from_certificate(&cert),
            }))
        }
        Command::Canonical { file } => {
            let t = read_transition(file)?;
            let r = full_reduce(&t, g.umax).map_err(invalid)?;
            let s = r.form.split();
            Ok(json!({
                "k": r.form.k(),
                "j1": s.j1,
                "j2": s.j2,
                "p": PolyDoc::from_poly(&r.form.p()),
                "window": window_json(s.j1, s.j2, r.form.k()),
                "coordinates": vector_json(&r.form.window_vector()),
                "certificate": CertificateDoc::from_certificate(&r.certificate),
            }))
        }
        Command::ParamSpace { j1, j2, k } => {
            if j1 < j2 || *k == 0 {
                return Err(CliError::Invalid("expected j1 >= j2 and k >= 1".into()));
            }
            let w = monomial_window(*j1, *j2, *k);
            Ok(json!({"j1": j1, "j2": j2, "k": k, "dimension": w.len(), "window": window_json(*j1, *j2, *k)}))
        }
        Command::Iso { a, b } => {
            let (ta, tb) = (read_transition(a)?, read_transition(b)?);
            match are_isomorphic(&ta, &tb, bounds(g)).map_err(invalid)? {
                IsoVerdict::Isomorphic(c) => {
                    Ok(json!({"verdict": "isomorphic", "certificate": CertificateDoc::from_certificate(&c)}))
                }
                IsoVerdict::Distinct { certified } => Ok(json!({"verdict": "distinct", "certified": certified})),
                IsoVerdict::Inconclusive => {
                    Err(CliError::Inconclusive("no isomorphism found within the z-degree bound".into()))
                }
            }
        }
        Command::OrbitRank { file } => {
            let t = read_transition(file)?;
            let r = full_reduce(&t, g.umax).map_err(invalid)?;
            let s = r.form.split();
            Ok(json!({
                "j1": s.j1,
                "j2": s.j2,
                "k": r.form.k(),
                "coordinates": vector_json(&r.form.window_vector()),
                "window_dimension": monomial_window(s.j1, s.j2, r.form.k()).len(),
                "orbit_rank": orbit_rank_at(&r.form),
            }))
        }
        Command::ModuliJ2 { p10, p11, p21, family } => {
            let fam = load_family(family.as_deref())?;
            let w = [parse_complex_arg(p10)?, parse_complex_arg(p11)?, parse_complex_arg(p21)?];
            let b = IsoBounds { umax: g.umax, zbound: g.zbound, ..IsoBounds::direct() };
            let x = classify_j2(&fam, w.clone(), b).map_err(moduli_error)?;
            let mut out = moduli_point_json(&x);
            out["input"] = vector_json(&w);
            Ok(out)
        }
        Command::Moduli { action: ModuliAction::Discover { j, samples, out } } => {
            if *j != 2 {
                return Err(CliError::Invalid(format!("discovery is implemented for j = 2 only, got {j}")));
            }
            let cfg = DiscoveryConfig {
                samples: *samples,
                seed: g.seed,
                bounds: IsoBounds { umax: g.umax, zbound: g.zbound, ..IsoBounds::direct() },
            };
            let report = discover_j2(&cfg).map_err(moduli_error)?;
            let fam = ReferenceFamilyDoc::from_family(&report.family);
            if let Some(path) = out {
                fs::write(path, to_json(&fam) + "\n").map_err(|e| invalid(format!("{}: {e}", path.display())))?;
            }
            let classes: Vec<Value> = report
                .classes
                .iter()
                .map(|c| {
                    json!({
                        "orbit_rank": c.orbit_rank,
                        "size": c.members.len(),
                        "representative": vector_json(&c.representative),
                    })
                })
                .collect();
            Ok(json!({
                "family": fam,
                "classes": classes,
                "scaled_pairs": report.scaled_pairs,
                "scaled_collisions": report.scaled_collisions,
                "independent_pairs": report.independent_pairs,
                "independent_collisions": report.independent_collisions,
                "oracle_calls": report.oracle_calls,
            }))
        }
        Command::Glue { action: GlueAction::Validate { file } } => {
            let doc: GlueDoc = read_doc(file)?;
            let entries = doc.raw_entries("")?;
            match validate_glue(doc.m, doc.n, entries) {
                Ok(phi) => Ok(json!({"valid": true, "det": complex_doc(phi.det())})),
                Err(GlueError::NotInvertibleOffOrigin { det, witness }) => Err(CliError::Invalid(format!(
                    "determinant {det} is not constant; nonconstant term x^{witness:?} makes it vanish off the origin"
                ))),
                Err(e) => Err(invalid(e)),
            }
        }
        Command::Glue { action: GlueAction::Certify { file } } => {
            let doc: GlueDoc = read_doc(file)?;
            let phi = doc.glue_map("")?;
            let cert = nullhomotopy_certificate(&phi);
            let h0: Vec<Vec<_>> = hartogs_value(&phi).iter().map(|r| r.iter().map(complex_doc).collect()).collect();
            Ok(json!({"hartogs_value": h0, "certificate": NullhomotopyDoc::from_certificate(&cert)}))
        }
        Command::TopoClass { file } => {
            let d = read_doc::<DescriptorDoc>(file)?.descriptor()?;
            Ok(serde_json::to_value(TopoClassDoc::from_class(&topological_class(&d))).expect("serializable"))
        }
        Command::IsPullback { file } => {
            let d = read_doc::<DescriptorDoc>(file)?.descriptor()?;
            Ok(json!({"pullback": is_pullback(&d)}))
        }
    }
}

fn render_text(v: &Value) -> String {
    match v {
        Value::Object(map) => map
            .iter()
            .map(|(k, x)| match x {
                Value::String(s) => format!("{k}: {s}\n"),
                other => format!("{k}: {other}\n"),
            })
            .collect(),
        other => format!("{other}\n"),
    }
}

fn emit(v: &Value, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(v).expect("serializable")),
        Format::Text => print!("{}", render_text(v)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(v) => {
            emit(&v, cli.global.format);
            ExitCode::SUCCESS
        }
        Err(e) => {
            let doc = e.document();
            eprintln!("error: {}", doc["error"]["message"].as_str().unwrap_or_default());
            emit(&doc, cli.global.format);
            ExitCode::from(e.code())
        }
    }
}
