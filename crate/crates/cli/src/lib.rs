//! Command-line front end. `run` does all the work and writes to the given
//! sinks so that tests can drive it in-process.

pub mod config;

use clap::{Args, Parser, Subcommand};
use config::{ConfigError, RunConfig};
use serde_json::json;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use thiserror::Error;
use torelli::charvar::{relation_identity_defect, relation_k, BoundaryValue, CharvarError, Surface};
use torelli::groebner::{
    locus_components, transversality_certificate, Budget, CertificateOptions, GroebnerError,
};
use torelli::locus::{dependency_poly, try_quadratic_split, RowVariant};
use torelli::poisson::{apply_field, bivector, ham_field_with, BivectorVariant};
use torelli::polyring::{MonomialOrder, Point7, Poly, Var};
use torelli::su2dyn::{
    flow, histogram, liouville_sample_4hs, read_jsonl, sample_points, sample_rep, trace_coords, tv, write_jsonl,
    FlowError, FlowOptions, Hist, SampleError, StreamRow, TwistTable, Walk,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_INFEASIBLE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "torelli", version, about = "Trace-coordinate algebra and twist dynamics on SU(2) character varieties")]
pub struct Cli {
    /// Machine-readable output on every command.
    #[arg(long, global = true)]
    pub json: bool,
    /// Flat key=value file overriding defaults.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run an exact certificate and print a JSON report.
    Verify {
        #[command(subcommand)]
        target: VerifyTarget,
    },
    /// Print derived polynomials.
    Derive {
        #[command(subcommand)]
        target: DeriveTarget,
    },
    /// Sample points on a relative character variety.
    Sample(SampleArgs),
    /// Random walk of twists; one JSONL row per step.
    Walk(WalkArgs),
    /// Integrate a Hamiltonian flow; one JSONL row per step.
    Flow(FlowArgs),
    /// Histogram a point stream and optionally compare with another.
    Hist(HistArgs),
}

#[derive(Debug, Args, Default)]
pub struct SurfaceArg {
    /// 4hs or 2ht.
    #[arg(long)]
    pub surface: Option<Surface>,
}

#[derive(Debug, Subcommand)]
pub enum VerifyTarget {
    /// k = k_p - t4 (k_s - t4) as an exact polynomial identity.
    Relation(SurfaceArg),
    /// The field of p12 is not tangent to the dependency locus.
    Transversality(TransversalityArgs),
}

#[derive(Debug, Args)]
pub struct TransversalityArgs {
    #[command(flatten)]
    pub surface: SurfaceArg,
    #[arg(long)]
    pub order: Option<MonomialOrder>,
    /// Reduction-step budget.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Critical-pair budget.
    #[arg(long)]
    pub pairs: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Skip the numeric witness search.
    #[arg(long)]
    pub no_witness: bool,
}

#[derive(Debug, Subcommand)]
pub enum DeriveTarget {
    /// The dependency polynomial.
    S {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long)]
        row_variant: Option<RowVariant>,
    },
    /// Factors of the dependency polynomial.
    Split {
        #[command(flatten)]
        surface: SurfaceArg,
        /// Only try a quadratic split in this variable.
        #[arg(long)]
        var: Option<String>,
    },
    /// Hamiltonian vector field of a polynomial.
    Hamfield {
        #[command(flatten)]
        surface: SurfaceArg,
        /// Hamiltonian.
        #[arg(long, value_name = "POLY")]
        f: String,
        /// Apply the field to this polynomial (`s` names the dependency polynomial).
        #[arg(long, value_name = "POLY")]
        apply: Option<String>,
        #[arg(long)]
        bivector: Option<BivectorVariant>,
    },
}

#[derive(Debug, Args)]
pub struct Boundary {
    #[command(flatten)]
    pub surface: SurfaceArg,
    /// Boundary traces, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub boundary: Boundary,
    /// Number of points.
    #[arg(long)]
    pub n: Option<usize>,
    /// Draw from the symplectic volume instead of random representations (sphere only).
    #[arg(long)]
    pub liouville: bool,
}

#[derive(Debug, Args)]
pub struct WalkArgs {
    #[command(flatten)]
    pub boundary: Boundary,
    #[arg(long)]
    pub steps: Option<usize>,
    /// Twist names, comma separated; all twists of the surface by default.
    #[arg(long)]
    pub gens: Option<String>,
    /// Seed for the start representation; defaults to --seed.
    #[arg(long)]
    pub start_seed: Option<u64>,
    /// Twist table to load instead of the shipped one.
    #[arg(long, value_name = "PATH")]
    pub twists: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FlowArgs {
    #[command(flatten)]
    pub boundary: Boundary,
    /// Hamiltonian.
    #[arg(long, value_name = "POLY")]
    pub f: String,
    #[arg(long = "T", value_name = "T", allow_hyphen_values = true)]
    pub t_end: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub project: bool,
    #[arg(long)]
    pub bivector: Option<BivectorVariant>,
    /// Start point `t4,t1,t2,t3,t12,t13,t23`; sampled from --c when absent.
    #[arg(long, allow_hyphen_values = true)]
    pub start: Option<String>,
}

#[derive(Debug, Args)]
pub struct HistArgs {
    /// JSONL point stream.
    pub input: PathBuf,
    #[arg(long)]
    pub bins: Option<usize>,
    /// Coordinates, comma separated.
    #[arg(long)]
    pub coords: Option<String>,
    /// Histogram CSV to write.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// JSONL stream or histogram CSV to compare against.
    #[arg(long, value_name = "PATH")]
    pub compare: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Budget(GroebnerError),
    #[error("infeasible boundary data: {0}")]
    Infeasible(String),
    #[error("{0}")]
    Failed(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) | CliError::Io { .. } => EXIT_USAGE,
            CliError::Budget(_) => EXIT_BUDGET,
            CliError::Infeasible(_) => EXIT_INFEASIBLE,
            CliError::Failed(_) => EXIT_FALSE,
        }
    }
}

impl From<SampleError> for CliError {
    fn from(e: SampleError) -> Self {
        CliError::Infeasible(e.to_string())
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Resolved settings: flag, then config file, then default.
struct Ctx<'a> {
    cfg: RunConfig,
    json: bool,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn surface(&self, flag: &SurfaceArg) -> Result<Surface, CliError> {
        flag.surface
            .or(self.cfg.surface)
            .ok_or_else(|| usage("--surface is required (4hs or 2ht)"))
    }

    fn boundary(&self, surface: Surface, flag: &Option<String>) -> Result<BoundaryValue, CliError> {
        let values = match (flag, &self.cfg.c) {
            (Some(text), _) => text
                .split(',')
                .map(|s| s.trim().parse::<f64>().map_err(|e| usage(format!("bad boundary value `{s}`: {e}"))))
                .collect::<Result<Vec<_>, _>>()?,
            (None, Some(c)) => c.clone(),
            (None, None) => return Err(usage("--c is required")),
        };
        BoundaryValue::new(surface, values).map_err(|e| match e {
            CharvarError::BoundaryRange { .. } => CliError::Infeasible(e.to_string()),
            _ => usage(e),
        })
    }

    fn out_path(&self, flag: &Option<PathBuf>) -> Option<PathBuf> {
        flag.clone().or_else(|| self.cfg.out.clone())
    }

    fn print(&mut self, value: &serde_json::Value) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(value).expect("json values serialize");
        writeln!(self.out, "{text}").map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        })
    }

    fn line(&mut self, text: &str) -> Result<(), CliError> {
        writeln!(self.out, "{text}").map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        })
    }

    /// Writes rows to `path`, or to stdout when absent.
    fn emit_rows<I: IntoIterator<Item = StreamRow>>(&mut self, path: Option<PathBuf>, rows: I, what: &str) -> Result<(), CliError> {
        match path {
            Some(p) => {
                let file = fs::File::create(&p).map_err(|source| CliError::Io {
                    path: p.clone(),
                    source,
                })?;
                let n = write_jsonl(io::BufWriter::new(file), rows).map_err(|e| CliError::Io {
                    path: p.clone(),
                    source: io::Error::other(e.to_string()),
                })?;
                if self.json {
                    self.print(&json!({ "command": what, "rows": n, "out": p }))
                } else {
                    self.line(&format!("wrote {n} rows to {}", p.display()))
                }
            }
            None => {
                write_jsonl(&mut *self.out, rows).map_err(|e| CliError::Io {
                    path: "<stdout>".into(),
                    source: io::Error::other(e.to_string()),
                })?;
                Ok(())
            }
        }
    }
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = (|| {
        let cfg = match &cli.config {
            Some(p) => RunConfig::parse(&read(p)?)?,
            None => RunConfig::default(),
        };
        let mut ctx = Ctx {
            cfg,
            json: cli.json,
            out,
        };
        match cli.command {
            Command::Verify { target } => cmd_verify(&mut ctx, target),
            Command::Derive { target } => cmd_derive(&mut ctx, target),
            Command::Sample(a) => cmd_sample(&mut ctx, a),
            Command::Walk(a) => cmd_walk(&mut ctx, a),
            Command::Flow(a) => cmd_flow(&mut ctx, a),
            Command::Hist(a) => cmd_hist(&mut ctx, a),
        }
    })();
    match result {
        Ok(code) => code,
        Err(e) => {
            let code = e.exit_code();
            if cli.json {
                let _ = writeln!(err, "{}", json!({ "error": e.to_string(), "exit_code": code }));
            } else {
                let _ = writeln!(err, "error: {e}");
            }
            code
        }
    }
}

/// Parses `args` (including the program name) and runs them; clap errors
/// print to `err` and map to the usage exit code.
pub fn run_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, out, err),
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_PASS,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn verdict_code(v: bool) -> i32 {
    if v {
        EXIT_PASS
    } else {
        EXIT_FALSE
    }
}

fn cmd_verify(ctx: &mut Ctx, target: VerifyTarget) -> Result<i32, CliError> {
    match target {
        VerifyTarget::Relation(s) => {
            // the identity lives in the shared ring; the surface only labels the report
            let surface = s.surface.or(ctx.cfg.surface).unwrap_or(Surface::TwoHoledTorus);
            let defect = relation_identity_defect();
            let verdict = defect.is_zero();
            ctx.print(&json!({
                "check": "relation",
                "surface": surface,
                "defect": defect,
                "verdict": verdict,
            }))?;
            Ok(verdict_code(verdict))
        }
        VerifyTarget::Transversality(a) => {
            let surface = ctx.surface(&a.surface)?;
            let defaults = Budget::default();
            let opts = CertificateOptions {
                order: a.order.or(ctx.cfg.order).unwrap_or_default(),
                budget: Budget::new(
                    a.budget.or(ctx.cfg.budget).unwrap_or(defaults.max_steps),
                    a.pairs.or(ctx.cfg.pairs).unwrap_or(defaults.max_pairs),
                ),
                seed: a.seed.or(ctx.cfg.seed).unwrap_or(1),
                witness: !a.no_witness,
            };
            let cert = match transversality_certificate(surface, &opts) {
                Ok(c) => c,
                Err(e @ GroebnerError::BudgetExceeded { .. }) => return Err(CliError::Budget(e)),
                Err(e) => return Err(CliError::Failed(e.to_string())),
            };
            let mut report = serde_json::to_value(&cert).expect("certificate serializes");
            report["check"] = json!("transversality");
            ctx.print(&report)?;
            Ok(verdict_code(cert.verdict))
        }
    }
}

fn parse_poly(text: &str) -> Result<Poly, CliError> {
    text.parse().map_err(|e| usage(format!("bad polynomial `{text}`: {e}")))
}

fn cmd_derive(ctx: &mut Ctx, target: DeriveTarget) -> Result<i32, CliError> {
    match target {
        DeriveTarget::S { surface, row_variant } => {
            let surface = ctx.surface(&surface)?;
            let variant = match row_variant {
                Some(v) => v,
                None => match &ctx.cfg.row_variant {
                    Some(t) => t.parse().map_err(usage)?,
                    None => RowVariant::Ks,
                },
            };
            let r = dependency_poly(surface, variant).map_err(|e| CliError::Failed(e.to_string()))?;
            if ctx.json {
                ctx.print(&json!({
                    "surface": surface,
                    "row_variant": variant,
                    "rows": r.row_labels,
                    "normalization": r.normalization.to_string(),
                    "terms": r.s.len(),
                    "degree": r.s.degree(),
                    "s": r.s,
                }))?;
            } else {
                ctx.line(&r.s.to_string())?;
            }
        }
        DeriveTarget::Split { surface, var } => {
            let surface = ctx.surface(&surface)?;
            let factors = match var {
                Some(name) => {
                    let v = Var::from_name(&name).ok_or_else(|| usage(format!("unknown variable `{name}`")))?;
                    let s = dependency_poly(surface, RowVariant::Ks)
                        .map_err(|e| CliError::Failed(e.to_string()))?
                        .s;
                    try_quadratic_split(&s, v).map(|(a, b)| vec![a.primitive(), b.primitive()])
                }
                None => match locus_components(surface) {
                    Ok(f) if f.len() > 1 => Some(f),
                    Ok(_) | Err(GroebnerError::NoSplit) => None,
                    Err(e) => return Err(CliError::Failed(e.to_string())),
                },
            };
            if ctx.json {
                ctx.print(&json!({ "surface": surface, "split": factors.is_some(), "factors": factors.unwrap_or_default() }))?;
            } else {
                match factors {
                    Some(fs) => {
                        for f in &fs {
                            ctx.line(&f.to_string())?;
                        }
                    }
                    None => ctx.line("no split")?,
                }
            }
        }
        DeriveTarget::Hamfield {
            surface,
            f,
            apply,
            bivector: variant,
        } => {
            let surface = ctx.surface(&surface)?;
            let variant = match variant {
                Some(v) => v,
                None => match &ctx.cfg.bivector {
                    Some(t) => t.parse().map_err(usage)?,
                    None => BivectorVariant::Corrected,
                },
            };
            let h = parse_poly(&f)?;
            let field = ham_field_with(bivector(surface, variant), &h);
            let applied = match apply.as_deref() {
                None => None,
                Some("s") => Some(dependency_poly(surface, RowVariant::Ks).map_err(|e| CliError::Failed(e.to_string()))?.s),
                Some(text) => Some(parse_poly(text)?),
            }
            .map(|g| apply_field(&field, &g));
            if ctx.json {
                let comps: serde_json::Map<String, serde_json::Value> =
                    Var::ALL.iter().map(|v| (v.name().to_string(), json!(field.component(*v)))).collect();
                ctx.print(&json!({
                    "surface": surface,
                    "bivector": variant,
                    "f": h,
                    "field": comps,
                    "applied": applied,
                }))?;
            } else {
                match applied {
                    Some(p) => ctx.line(&p.to_string())?,
                    None => write!(ctx.out, "{field}").map_err(|source| CliError::Io {
                        path: "<stdout>".into(),
                        source,
                    })?,
                }
            }
        }
    }
    Ok(EXIT_PASS)
}

fn cmd_sample(ctx: &mut Ctx, a: SampleArgs) -> Result<i32, CliError> {
    let surface = ctx.surface(&a.boundary.surface)?;
    let c = ctx.boundary(surface, &a.boundary.c)?;
    let seed = a.boundary.seed.or(ctx.cfg.seed).unwrap_or(0);
    let n = a.n.or(ctx.cfg.n).unwrap_or(1);
    let points: Vec<Point7> = if a.liouville {
        if surface != Surface::FourHoledSphere {
            return Err(usage("--liouville is only available on 4hs"));
        }
        liouville_sample_4hs(&c, n, seed)?
    } else {
        sample_points(surface, &c, n, seed)?
    };
    let gen = if a.liouville { "liouville" } else { "sample" };
    let rows = points.into_iter().enumerate().map(|(i, x)| StreamRow {
        step: i + 1,
        x,
        gen: gen.to_string(),
    });
    let out = ctx.out_path(&a.boundary.out);
    ctx.emit_rows(out, rows, "sample")?;
    Ok(EXIT_PASS)
}

fn cmd_walk(ctx: &mut Ctx, a: WalkArgs) -> Result<i32, CliError> {
    let surface = ctx.surface(&a.boundary.surface)?;
    let c = ctx.boundary(surface, &a.boundary.c)?;
    let seed = a.boundary.seed.or(ctx.cfg.seed).unwrap_or(0);
    let steps = a.steps.or(ctx.cfg.steps).unwrap_or(1000);
    let loaded;
    let table = match &a.twists {
        Some(p) => {
            loaded = TwistTable::from_json(surface, &read(p)?).map_err(usage)?;
            &loaded
        }
        None => TwistTable::shipped(surface),
    };
    let names: Vec<String> = match (&a.gens, &ctx.cfg.gens) {
        (Some(g), _) => g.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
        (None, Some(g)) => g.clone(),
        (None, None) => Vec::new(),
    };
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let rules = table.select(&refs).map_err(usage)?;
    let r0 = sample_rep(surface, &c, a.start_seed.unwrap_or(seed))?;
    let out = ctx.out_path(&a.boundary.out);
    ctx.emit_rows(out, Walk::new(r0, rules, steps, seed), "walk")?;
    Ok(EXIT_PASS)
}

fn parse_point(text: &str) -> Result<Point7, CliError> {
    let v: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| usage(format!("bad coordinate `{s}`: {e}"))))
        .collect::<Result<_, _>>()?;
    v.try_into().map_err(|_| usage("--start needs seven coordinates"))
}

fn cmd_flow(ctx: &mut Ctx, a: FlowArgs) -> Result<i32, CliError> {
    let surface = ctx.surface(&a.boundary.surface)?;
    let f = parse_poly(&a.f)?;
    let x0 = match &a.start {
        Some(p) => parse_point(p)?,
        None => {
            let c = ctx.boundary(surface, &a.boundary.c)?;
            let seed = a.boundary.seed.or(ctx.cfg.seed).unwrap_or(0);
            trace_coords(&sample_rep(surface, &c, seed)?)
        }
    };
    let defaults = FlowOptions::default();
    let variant = match a.bivector {
        Some(v) => v,
        None => match &ctx.cfg.bivector {
            Some(t) => t.parse().map_err(usage)?,
            None => BivectorVariant::Corrected,
        },
    };
    let opts = FlowOptions {
        t_end: a.t_end.or(ctx.cfg.t_end).unwrap_or(defaults.t_end),
        dt: a.dt.or(ctx.cfg.dt).unwrap_or(defaults.dt),
        project: a.project || ctx.cfg.project.unwrap_or(false),
        variant,
        reject_above: ctx.cfg.reject_tol.unwrap_or(defaults.reject_above),
        project_tol: ctx.cfg.project_tol.unwrap_or(defaults.project_tol),
    };
    let path = match flow(surface, &x0, &f, &opts) {
        Ok(p) => p,
        Err(e @ (FlowError::OffVariety(_) | FlowError::BadStep { .. })) => return Err(usage(e)),
        Err(e) => return Err(CliError::Failed(e.to_string())),
    };
    let gen = format!("H({f})");
    let rows = path.into_iter().enumerate().map(|(i, x)| StreamRow {
        step: i,
        x,
        gen: gen.clone(),
    });
    let out = ctx.out_path(&a.boundary.out);
    ctx.emit_rows(out, rows, "flow")?;
    Ok(EXIT_PASS)
}

fn load_hist(path: &Path, bins: usize, coords: &[Var]) -> Result<Hist, CliError> {
    let text = read(path)?;
    if path.extension().is_some_and(|e| e == "csv") {
        return Hist::from_csv(&text).map_err(|e| usage(format!("{}: {e}", path.display())));
    }
    let rows = read_jsonl(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let points: Vec<Point7> = rows.into_iter().map(|r| r.x).collect();
    histogram(&points, bins, coords).map_err(usage)
}

fn cmd_hist(ctx: &mut Ctx, a: HistArgs) -> Result<i32, CliError> {
    let bins = a.bins.or(ctx.cfg.bins).unwrap_or(20);
    let names: Vec<String> = match (&a.coords, &ctx.cfg.coords) {
        (Some(c), _) => c.split(',').map(|s| s.trim().to_string()).collect(),
        (None, Some(c)) => c.clone(),
        (None, None) => vec!["t12".into(), "t13".into(), "t23".into()],
    };
    let coords: Vec<Var> = names
        .iter()
        .map(|n| Var::from_name(n).ok_or_else(|| usage(format!("unknown coordinate `{n}`"))))
        .collect::<Result<_, _>>()?;
    let h = load_hist(&a.input, bins, &coords)?;
    if let Some(p) = ctx.out_path(&a.out) {
        fs::write(&p, h.to_csv()).map_err(|source| CliError::Io { path: p.clone(), source })?;
    }
    let distance = match &a.compare {
        Some(p) => {
            let other = load_hist(p, h.bins, &h.coords)?;
            Some(tv(&h, &other).map_err(usage)?)
        }
        None => None,
    };
    if ctx.json {
        ctx.print(&json!({
            "input": a.input,
            "bins": h.bins,
            "coords": h.coords,
            "total": h.total,
            "occupied": h.counts.iter().filter(|&&c| c > 0).count(),
            "compare": a.compare,
            "tv": distance,
        }))?;
    } else {
        let mut line = format!("{} points in {} bins", h.total, h.counts.len());
        if let Some(d) = distance {
            line.push_str(&format!("; TV {d:.6}"));
        }
        ctx.line(&line)?;
    }
    Ok(EXIT_PASS)
}

/// The relation `k` rendered for help text and reports.
pub fn relation_text() -> String {
    relation_k().to_string()
}
