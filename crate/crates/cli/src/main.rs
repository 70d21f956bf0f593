//! `pbf`: batch verification, decomposition and inner-product reports.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use pbf_core::decomposition::{decompose, GeneratorSet, InvariantComponent, PresetRegistry};
use pbf_core::fock::{enumerate_basis, grade_z2z2};
use pbf_core::operators::RelationCatalog;
use pbf_core::orthobasis::{csco_check, orthonormal_basis, InnerProductContext};
use pbf_core::realization::{check_bracket_preservation, realize, validate_spec, SuperAlgebraSpec};
use pbf_core::{BasisVector, FockError, FockParams};

use output::{emit, Table};

#[derive(Parser, Debug)]
#[command(name = "pbf", version, about = "Exact checks on Fock-like paraparticle representations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Representation order.
    #[arg(long)]
    p: u32,
    /// Truncation bound on the bosonic quantum number.
    #[arg(long = "mmax", default_value_t = 12)]
    m_max: u32,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here (atomically) instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args, Debug, Clone)]
struct Source {
    #[arg(long, conflicts_with = "spec")]
    preset: Option<String>,
    /// Superalgebra spec (JSON).
    #[arg(long)]
    spec: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify catalog identities.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Relation names or family prefixes, comma separated.
        #[arg(long, value_delimiter = ',')]
        relations: Vec<String>,
    },
    /// Invariant coordinate subspaces under a preset or a spec's realization.
    Decompose {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        source: Source,
    },
    /// Realize a superalgebra and check that brackets are preserved.
    Realize {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        source: Source,
    },
    /// Gram matrix and orthogonal directions of one cell.
    Gram {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        n: i64,
    },
    /// Commuting observables and their eigenvalues.
    Csco {
        #[command(flatten)]
        common: Common,
    },
    /// List the truncated basis.
    Basis {
        #[command(flatten)]
        common: Common,
    },
}

/// Failure modes mapped to exit codes.
enum Failure {
    Config(String, String),
    Io(String),
}

impl From<FockError> for Failure {
    fn from(e: FockError) -> Self {
        let kind = match &e {
            FockError::InvalidParams(_) => "invalid_params",
            FockError::TruncationOverflow { .. } => "truncation_overflow",
            FockError::TruncationTooSmall { .. } => "truncation_too_small",
            FockError::UnknownElement(_) => "unknown_element",
            FockError::UnknownRelation(_) => "unknown_relation",
            FockError::UnknownPreset(_) => "unknown_preset",
            FockError::SpecInvalid(_) => "spec_invalid",
            FockError::DimensionZero { .. } => "dimension_zero",
            FockError::GramDegenerate { .. } => "gram_degenerate",
            FockError::NoClosedForm(_) => "no_closed_form",
            FockError::Parse(_) => "parse",
        };
        Failure::Config(kind.to_string(), e.to_string())
    }
}

fn config(kind: &str, msg: impl Into<String>) -> Failure {
    Failure::Config(kind.to_string(), msg.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            report_error("usage", &e.to_string());
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Config(kind, msg)) => {
            report_error(&kind, &msg);
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            report_error("io", &msg);
            ExitCode::from(2)
        }
    }
}

fn report_error(kind: &str, msg: &str) {
    eprintln!("{}", json!({ "error": kind, "message": msg.trim_end() }));
}

fn setup(common: &Common) -> Result<FockParams, Failure> {
    if let Some(j) = common.jobs {
        if j == 0 {
            return Err(config("invalid_params", "--jobs must be positive"));
        }
        // Fails only if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j).build_global();
    }
    Ok(FockParams::new(common.p, common.m_max)?)
}

fn load_spec(path: &PathBuf) -> Result<SuperAlgebraSpec, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| config("spec_unreadable", format!("{}: {e}", path.display())))?;
    Ok(SuperAlgebraSpec::from_json(&text)?)
}

/// The generator set for `decompose` and the spec for `realize`.
enum Resolved {
    Preset { name: String, gens: GeneratorSet, spec: Option<SuperAlgebraSpec> },
    Spec { path: PathBuf, spec: SuperAlgebraSpec },
}

fn resolve(source: &Source) -> Result<Resolved, Failure> {
    match (&source.preset, &source.spec) {
        (Some(name), None) => {
            let reg = PresetRegistry::with_defaults();
            let preset = reg.get(name)?;
            Ok(Resolved::Preset {
                name: name.clone(),
                gens: preset.generators(),
                spec: preset.realization_spec(),
            })
        }
        (None, Some(path)) => Ok(Resolved::Spec { path: path.clone(), spec: load_spec(path)? }),
        _ => Err(config("usage", "exactly one of --preset or --spec is required")),
    }
}

fn run(command: Command) -> Result<bool, Failure> {
    match command {
        Command::Verify { common, relations } => {
            let params = setup(&common)?;
            let cat = RelationCatalog::for_order(params.p());
            let reports = cat.verify(&params, &relations)?;
            let pass = reports.iter().all(|r| r.pass);
            let doc = json!({
                "command": "verify",
                "p": params.p(),
                "m_max": params.m_max(),
                "pass": pass,
                "relations": reports,
            });
            let mut t = Table::new(&["relation", "p", "m_max", "pass", "checked", "failures"]);
            for r in &reports {
                t.row([
                    r.relation.clone(),
                    r.p.to_string(),
                    r.m_max.to_string(),
                    r.pass.to_string(),
                    r.checked.to_string(),
                    r.failures.len().to_string(),
                ]);
            }
            emit(&common, &doc, &t)?;
            Ok(pass)
        }
        Command::Decompose { common, source } => {
            let params = setup(&common)?;
            let (label, gens) = match resolve(&source)? {
                Resolved::Preset { name, gens, .. } => (name, gens),
                Resolved::Spec { path, spec } => {
                    validate_spec(&spec)?;
                    let exprs = spec
                        .basis
                        .iter()
                        .map(|b| realize(&spec, &b.name, &params).map(|r| r.operator))
                        .collect::<Result<Vec<_>, _>>()?;
                    let label = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                    (label.clone(), GeneratorSet::new(label, exprs))
                }
            };
            let comps = decompose(&gens, &params)?;
            let doc = DecomposeDoc { preset: &label, p: params.p(), m_max: params.m_max(), components: &comps };
            let mut t = Table::new(&["id", "dimension", "complete", "basis"]);
            for c in &comps {
                t.row([
                    c.id.to_string(),
                    c.dimension.to_string(),
                    c.complete.to_string(),
                    c.basis.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(" "),
                ]);
            }
            emit(&common, &doc, &t)?;
            Ok(true)
        }
        Command::Realize { common, source } => {
            let params = setup(&common)?;
            let spec = match resolve(&source)? {
                Resolved::Preset { spec: Some(spec), .. } => spec,
                Resolved::Preset { name, spec: None, .. } => {
                    return Err(config("no_spec", format!("preset {name:?} has no superalgebra spec")))
                }
                Resolved::Spec { spec, .. } => spec,
            };
            let validation = validate_spec(&spec)?;
            let elements = spec
                .basis
                .iter()
                .map(|b| {
                    realize(&spec, &b.name, &params)
                        .map(|r| json!({ "name": r.name, "parity": r.parity, "operator": r.operator.to_string() }))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let brackets = check_bracket_preservation(&spec, &params)?;
            let doc = json!({
                "command": "realize",
                "p": params.p(),
                "m_max": params.m_max(),
                "pass": brackets.pass,
                "validation": validation,
                "elements": elements,
                "brackets": brackets.pairs,
            });
            let mut t = Table::new(&["pair", "pass", "checked", "failures"]);
            for r in &brackets.pairs {
                t.row([r.relation.clone(), r.pass.to_string(), r.checked.to_string(), r.failures.len().to_string()]);
            }
            emit(&common, &doc, &t)?;
            Ok(brackets.pass)
        }
        Command::Gram { common, m, n } => {
            let params = setup(&common)?;
            let ctx = InnerProductContext::new(params);
            let basis = ctx.cell_basis(m, n)?;
            let ortho = orthonormal_basis(m, n, &ctx)?;
            let doc = json!({
                "command": "gram",
                "p": params.p(),
                "m": m,
                "n": n,
                "basis": basis,
                "gram": ortho.gram,
                "directions": ortho.vectors,
                "orthogonal": ortho.orthogonal,
            });
            let mut t = Table::new(&["row", "col", "re", "im"]);
            for (i, row) in ortho.gram.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    t.row([
                        basis[i].to_string(),
                        basis[j].to_string(),
                        pbf_core::scalar::format_rational(v.re()),
                        pbf_core::scalar::format_rational(v.im()),
                    ]);
                }
            }
            emit(&common, &doc, &t)?;
            Ok(ortho.orthogonal)
        }
        Command::Csco { common } => {
            let params = setup(&common)?;
            let report = csco_check(&InnerProductContext::new(params))?;
            let mut t = Table::new(&["m", "n", "sign", "nb", "nf", "ns", "pass"]);
            let show = |s: &Option<pbf_core::Scalar>| s.as_ref().map(|x| x.to_string()).unwrap_or_else(|| "none".into());
            for e in &report.eigen {
                let sign = if matches!(e.sign, pbf_core::orthobasis::Sign::Plus) { "+" } else { "-" };
                t.row([
                    e.m.to_string(),
                    e.n.to_string(),
                    sign.to_string(),
                    show(&e.nb),
                    show(&e.nf),
                    show(&e.ns),
                    e.pass.to_string(),
                ]);
            }
            emit(&common, &report, &t)?;
            Ok(report.pass)
        }
        Command::Basis { common } => {
            let params = setup(&common)?;
            let basis = enumerate_basis(&params);
            let doc = BasisDoc { p: params.p(), m_max: params.m_max(), count: basis.len(), basis: &basis };
            let mut t = Table::new(&["m", "n", "kind", "grade"]);
            for b in &basis {
                let kind = if b.kind == pbf_core::Kind::Alpha { "alpha" } else { "beta" };
                t.row([b.m.to_string(), b.n.to_string(), kind.to_string(), grade_z2z2(b).to_string()]);
            }
            emit(&common, &doc, &t)?;
            Ok(true)
        }
    }
}

#[derive(Serialize)]
struct DecomposeDoc<'a> {
    preset: &'a str,
    p: u32,
    m_max: u32,
    components: &'a [InvariantComponent],
}

#[derive(Serialize)]
struct BasisDoc<'a> {
    p: u32,
    m_max: u32,
    count: usize,
    basis: &'a [BasisVector],
}
